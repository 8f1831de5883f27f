use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use mhs_core::arith::prime_power;
use mhs_core::certify::{certify_all, verify_certificate, Certificate, ValueStatus, VerificationReport};
use mhs_core::relations::{distribution_check, window_density};
use mhs_core::report::{emit_report, implied_adjoint_statement, Format};
use mhs_core::scan::{prime_powers_in, scan_conjecture, ScanParams, TwistMode, DEFAULT_MAX_RECORDS, DEFAULT_SAMPLE_CAP};
use mhs_core::{parse_index, render_index, Error, Evaluation, MhsIndex};

const EXIT_USAGE: u8 = 1;
const EXIT_VERIFICATION: u8 = 2;
const EXIT_CONJECTURE: u8 = 3;

#[derive(Parser)]
#[command(name = "mhs", version, about = "Exact cyclotomic multiple harmonic sums and non-vanishing certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact value of one sum.
    Eval {
        #[arg(long)]
        index: String,
        /// Also print a complex approximation with this many digits.
        #[arg(long, value_name = "DIGITS")]
        approx: Option<u32>,
    },
    /// All non-vanishing certificates for one sum, each re-verified.
    Certify {
        #[arg(long)]
        index: String,
        #[arg(long, default_value_t = 100)]
        prime_cap: u64,
    },
    /// Scan prime-power bounds for zeros.
    Scan(ScanArgs),
    /// Distribution relation over M-th roots of unity.
    Distribution {
        #[arg(long)]
        index: String,
        #[arg(long = "M", value_name = "M")]
        m_factor: u64,
        #[arg(long, default_value_t = 100)]
        prime_cap: u64,
    },
    /// Density of p'-adic windows in [1, p'^A].
    Density {
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        depth: u64,
        #[arg(long = "levels-exp", value_name = "A")]
        levels_exp: u32,
    },
}

#[derive(Args)]
struct ScanArgs {
    /// Largest prime p.
    #[arg(long, required_unless_present = "prime_powers")]
    pmax: Option<u64>,
    /// Largest exponent α.
    #[arg(long, required_unless_present = "prime_powers")]
    amax: Option<u32>,
    /// Drop prime powers above this bound.
    #[arg(long)]
    mmax: Option<u64>,
    /// Explicit prime powers, instead of --pmax/--amax.
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["pmax", "amax"])]
    prime_powers: Option<Vec<u64>>,
    #[arg(long)]
    dmax: usize,
    /// Largest weight n_i.
    #[arg(long)]
    nmax: u32,
    #[arg(long, value_delimiter = ',', required = true)]
    levels: Vec<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Cells larger than this are sampled.
    #[arg(long, default_value_t = DEFAULT_SAMPLE_CAP)]
    sample_cap: u64,
    /// Never sample.
    #[arg(long)]
    exhaustive: bool,
    /// Also scan depths d >= m (identically zero).
    #[arg(long)]
    include_empty_domain: bool,
    #[arg(long, default_value_t = 100)]
    prime_cap: u64,
    #[arg(long, default_value_t = DEFAULT_MAX_RECORDS)]
    max_records: u64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value = "json")]
    format: Format,
    /// Exit with status 3 when a level-1 counterexample is found.
    #[arg(long)]
    assert_conjecture: bool,
    /// Record wall-clock time in the report (breaks byte-stability).
    #[arg(long)]
    timing: bool,
}

/// Writes to stdout; a closed pipe (e.g. `| head`) is not an error.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
}

fn print_json<T: Serialize>(value: &T) {
    emit(&format!("{}\n", serde_json::to_string_pretty(value).expect("reports serialize")));
}

fn index_arg(text: &str) -> Result<MhsIndex, Error> {
    parse_index(text)
}

fn eval(index: &str, approx: Option<u32>) -> Result<u8, Error> {
    let index = index_arg(index)?;
    let evaluation = Evaluation::compute(&index);
    let value = evaluation.value();
    let mut text = String::new();
    let _ = writeln!(text, "index: {}", render_index(&index));
    let _ = writeln!(text, "level: {}", index.level());
    let _ = writeln!(text, "value: {value}");
    let _ = writeln!(
        text,
        "coefficients: [{}]",
        value.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")
    );
    let _ = writeln!(text, "zero: {}", value.is_zero());
    if let Some(digits) = approx {
        let _ = writeln!(text, "approx: {} (approximate)", value.complex_embed(digits));
    }
    emit(&text);
    Ok(0)
}

#[derive(Serialize)]
struct CertifiedEntry {
    certificate: Certificate,
    verification: VerificationReport,
}

fn certify(index: &str, prime_cap: u64) -> Result<u8, Error> {
    let index = index_arg(index)?;
    let evaluation = Evaluation::compute(&index);
    let mut entries = Vec::new();
    for certificate in certify_all(&index, prime_cap) {
        let verification = verify_certificate(&certificate, &index)?;
        entries.push(CertifiedEntry {
            certificate,
            verification,
        });
    }
    let unsound = entries
        .iter()
        .any(|e| e.verification.soundness_violation || !e.verification.passed);
    let status = if evaluation.is_zero() {
        ValueStatus::EvaluatedZero
    } else if !entries.is_empty() && !unsound {
        ValueStatus::CertifiedNonzero
    } else {
        ValueStatus::EvaluatedNonzeroUncertified
    };
    let adjoint = prime_power(index.bound())
        .and_then(|(p, a)| implied_adjoint_statement(&evaluation, p, a).ok());
    print_json(&json!({
        "index": index,
        "value": evaluation.value(),
        "value_text": evaluation.value().to_string(),
        "is_zero": evaluation.is_zero(),
        "status": status,
        "certificates": entries,
        "adjoint_statement": adjoint,
    }));
    Ok(if unsound { EXIT_VERIFICATION } else { 0 })
}

fn scan(args: ScanArgs) -> Result<u8, Error> {
    let start = Instant::now();
    let prime_powers = match args.prime_powers {
        Some(list) => list
            .into_iter()
            .filter(|&q| args.mmax.map_or(true, |cap| q <= cap))
            .collect(),
        None => prime_powers_in(
            args.pmax.expect("required by clap"),
            args.amax.expect("required by clap"),
            args.mmax,
        ),
    };
    let mut params = ScanParams::new(prime_powers, args.dmax, args.nmax, args.levels);
    params.seed = args.seed;
    params.sample_cap = args.sample_cap;
    params.twist_mode = if args.exhaustive {
        TwistMode::Exhaustive
    } else {
        TwistMode::Auto
    };
    params.include_empty_domain = args.include_empty_domain;
    params.prime_cap = args.prime_cap;
    params.max_records = args.max_records;

    let mut report = scan_conjecture(&params)?;
    let elapsed = start.elapsed().as_millis() as u64;
    if args.timing {
        report.timing_ms = Some(elapsed);
    }
    emit_report(&report, args.format, &args.out)?;

    let s = &report.summary;
    eprintln!(
        "scanned {} indices in {elapsed} ms: {} nonzero ({} certified), {} zero, {} counterexample candidates{}",
        s.records,
        s.nonzero,
        s.certified_nonzero,
        s.zero,
        s.counterexamples,
        if report.truncated { " [truncated]" } else { "" },
    );
    for c in &report.counterexamples {
        eprintln!("counterexample candidate: {c}");
    }
    for f in &report.internal_failures {
        eprintln!("internal failure: {f}");
    }
    if report.has_soundness_failure() {
        return Ok(EXIT_VERIFICATION);
    }
    if args.assert_conjecture && s.counterexamples_level_one > 0 {
        return Ok(EXIT_CONJECTURE);
    }
    if report.has_positivity_failure() {
        return Ok(EXIT_VERIFICATION);
    }
    Ok(0)
}

fn distribution(index: &str, m_factor: u64, prime_cap: u64) -> Result<u8, Error> {
    let index = index_arg(index)?;
    let report = distribution_check(&index, m_factor, prime_cap)?;
    print_json(&report);
    let unsound = report.implication.is_some() && !report.left_nonzero;
    Ok(if unsound { EXIT_VERIFICATION } else { 0 })
}

fn density(prime: u64, depth: u64, levels_exp: u32) -> Result<u8, Error> {
    let report = window_density(prime, depth, levels_exp)?;
    print_json(&report);
    Ok(if report.consistent { 0 } else { EXIT_VERIFICATION })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Eval { index, approx } => eval(&index, approx),
        Command::Certify { index, prime_cap } => certify(&index, prime_cap),
        Command::Scan(args) => scan(args),
        Command::Distribution {
            index,
            m_factor,
            prime_cap,
        } => distribution(&index, m_factor, prime_cap),
        Command::Density {
            prime,
            depth,
            levels_exp,
        } => density(prime, depth, levels_exp),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

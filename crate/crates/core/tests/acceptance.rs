//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! the test fails at the end if any criterion failed.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

mod common;

use std::fmt::Write as _;
use std::process::Command;
use std::time::Instant;

use mhs_core::relations::{distribution_check, galois_conjugation_check, window_density, MatchedSide};
use mhs_core::{
    certify_all, certify_complex, certify_galois, certify_padic_window, mhs_fast, mhs_naive,
    padic_valuation_rational, verify_certificate, CycNumber, MhsIndex, Weight,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{all_twists, all_weights, direct_sum_level_one, gcd, is_prime_oracle, valuation_oracle};

const PRIME_CAP: u64 = 100;

/// Collects per-criterion outcomes and the global soundness counter.
#[derive(Default)]
struct Ledger {
    lines: Vec<(u32, String)>,
    failed: Vec<u32>,
    /// A certificate attached to an index whose exact value is zero.
    soundness: Vec<String>,
    certified: u64,
}

impl Ledger {
    fn record(&mut self, id: u32, title: &str, problems: &[String], detail: String) {
        let ok = problems.is_empty();
        let line = format!(
            "[{}] criterion {id:>2}: {title} ({detail})",
            if ok { "PASS" } else { "FAIL" }
        );
        println!("{line}");
        for p in problems.iter().take(5) {
            println!("         {p}");
        }
        if !ok {
            self.failed.push(id);
        }
        self.lines.push((id, line));
    }

    /// Certifies `index` and records any certificate that lands on zero.
    fn certify_and_gate(&mut self, index: &MhsIndex, value: &CycNumber) -> usize {
        let certs = certify_all(index, PRIME_CAP);
        if !certs.is_empty() {
            self.certified += 1;
            if value.is_zero() {
                let kinds: Vec<_> = certs.iter().map(|c| c.kind()).collect();
                self.soundness.push(format!("{index} is zero but certified by {kinds:?}"));
            }
        }
        certs.len()
    }
}

fn idx(level: u64, weights: &[u32], twists: &[i64], bound: u64) -> MhsIndex {
    MhsIndex::new(level, weights.to_vec(), twists, bound).expect("valid index")
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Criteria 1 and 8 share a grid; both are checked in one pass.
fn oracle_grid(ledger: &mut Ledger) {
    let start = Instant::now();
    let mut c1 = Vec::new();
    let mut c8 = Vec::new();
    let mut compared = 0u64;
    let check = |ledger: &mut Ledger, index: MhsIndex, c1: &mut Vec<String>, c8: &mut Vec<String>| {
        let fast = mhs_fast(&index);
        let naive = mhs_naive(&index);
        if fast != naive {
            c1.push(format!("{index}: fast {fast} != naive {naive}"));
        }
        let d = index.depth() as u64;
        if index.bound() <= d {
            if !fast.is_zero() {
                c8.push(format!("{index}: empty domain but value {fast}"));
            }
        } else if index.level() == 1 {
            let positive = fast.as_rational().is_some_and(|q| q.is_positive());
            if !positive {
                c8.push(format!("{index}: level-1 value {fast} not positive"));
            }
        }
        ledger.certify_and_gate(&index, &fast);
    };

    for level in [1u64, 2, 3, 4] {
        for d in 1..=3usize {
            let twists = all_twists(level, d + 1);
            for weights in all_weights(d, 3) {
                for tw in &twists {
                    for m in 1..=12u64 {
                        check(ledger, idx(level, &weights, tw, m), &mut c1, &mut c8);
                        compared += 1;
                    }
                }
            }
        }
    }
    // 200 seeded twist tuples per (N, d), each run over every weight vector and bound.
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    for level in [6u64, 7] {
        for d in 1..=3usize {
            for _ in 0..200 {
                let tw: Vec<i64> = (0..=d).map(|_| rng.gen_range(0..level as i64)).collect();
                for weights in all_weights(d, 3) {
                    for m in 1..=12u64 {
                        check(ledger, idx(level, &weights, &tw, m), &mut c1, &mut c8);
                        compared += 1;
                    }
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    if secs > 120.0 {
        c1.push(format!("grid took {secs:.1}s, over the 2 minute budget"));
    }
    ledger.record(
        1,
        "fast evaluator equals naive enumeration",
        &c1,
        format!("{compared} indices, {secs:.1}s"),
    );
    ledger.record(8, "emptiness and level-1 positivity", &c8, format!("{compared} indices"));
}

fn level_one_windows(ledger: &mut Ledger) {
    let mut problems = Vec::new();
    let mut checked = 0u64;

    // Direct-summation anchors.
    let h4_1 = direct_sum_level_one(&[1], 4);
    let h4_2 = direct_sum_level_one(&[2], 4);
    if h4_1 != rat(11, 6) || valuation_oracle(&h4_1, 2) != -1 {
        problems.push(format!("anchor h_4((1)) = {h4_1}"));
    }
    if h4_2 != rat(49, 36) || valuation_oracle(&h4_2, 2) != -2 {
        problems.push(format!("anchor h_4((2)) = {h4_2}"));
    }
    for (w, q) in [(1u32, &h4_1), (2, &h4_2)] {
        let lib = mhs_fast(&idx(1, &[w], &[0, 0], 4));
        if lib.as_rational() != Some(q) {
            problems.push(format!("library h_4(({w})) = {lib}"));
        }
    }

    for d in 1..=2usize {
        for weights in all_weights(d, 3) {
            let total: i64 = weights.iter().map(|&n| n as i64).sum();
            for m in (d as u64 + 1)..=16 {
                // Windows by brute force: primes above d, exponents with p^a d < m <= p^a (d+1).
                let mut windows = Vec::new();
                for p in (d as u64 + 1..=PRIME_CAP).filter(|&p| is_prime_oracle(p)) {
                    let mut q = 1u64;
                    let mut a = 0i64;
                    while q * d as u64 <= 16 * 17 {
                        if q * (d as u64) < m && m <= q * (d as u64 + 1) {
                            windows.push((p, a));
                        }
                        q *= p;
                        a += 1;
                    }
                }
                if windows.is_empty() {
                    continue;
                }
                let index = idx(1, &weights, &vec![0; d + 1], m);
                let value = direct_sum_level_one(&weights, m);
                let lib = mhs_fast(&index);
                if lib.as_rational() != Some(&value) {
                    problems.push(format!("{index}: library {lib} != oracle {value}"));
                }
                if value.is_zero() {
                    problems.push(format!("{index}: window but value is zero"));
                    continue;
                }
                for &(p, a) in &windows {
                    let v = valuation_oracle(&value, p);
                    if v != -a * total {
                        problems.push(format!("{index}: v_{p} = {v}, expected {}", -a * total));
                    }
                    if padic_valuation_rational(&value, p).ok() != Some(v) {
                        problems.push(format!("{index}: library v_{p} disagrees"));
                    }
                    checked += 1;
                }
                // The certifier must grant the same windows.
                let certs = certify_padic_window(m, d, Weight(total as u64), PRIME_CAP);
                let mut granted: Vec<(u64, i64)> = Vec::new();
                for c in &certs {
                    if c.family {
                        granted.push((c.prime, 0));
                        granted.extend(c.family_primes.iter().map(|&p| (p, 0)));
                    } else {
                        granted.push((c.prime, c.exponent as i64));
                    }
                }
                granted.sort_unstable();
                granted.dedup();
                let mut expected = windows.clone();
                expected.sort_unstable();
                if granted != expected {
                    problems.push(format!("{index}: granted {granted:?}, expected {expected:?}"));
                }
                ledger.certify_and_gate(&index, &lib);
            }
        }
    }
    ledger.record(
        2,
        "level-1 window valuations",
        &problems,
        format!("{checked} (index, window) pairs"),
    );
}

fn galois_level_seven(ledger: &mut Ledger) {
    let mut problems = Vec::new();
    let mut granted = 0u64;
    let phi = 6u64;
    for d in 1..=2usize {
        for weights in all_weights(d, 3) {
            for tw in all_twists(7, d + 1) {
                for m in 1..=5u64 {
                    let index = idx(7, &weights, &tw, m);
                    let Some(cert) = certify_galois(&index) else { continue };
                    granted += 1;
                    let value = mhs_fast(&index);
                    if value.is_zero() {
                        problems.push(format!("{index}: galois certificate on zero"));
                        ledger.soundness.push(format!("{index}: galois certificate on zero"));
                    }
                    if let Some(e) = cert.monomial_exponents(m).iter().find(|&&e| e >= phi) {
                        problems.push(format!("{index}: monomial exponent {e} >= phi"));
                    }
                    let wrapped = mhs_core::Certificate::Galois(cert);
                    match verify_certificate(&wrapped, &index) {
                        Ok(r) if r.passed => {}
                        other => problems.push(format!("{index}: verification {other:?}")),
                    }
                    ledger.certify_and_gate(&index, &value);
                }
            }
        }
    }
    if granted == 0 {
        problems.push("no Galois certificate granted on the grid".into());
    }
    ledger.record(3, "Galois certificates at N = 7", &problems, format!("{granted} certified"));
}

fn complex_dominance(ledger: &mut Ledger) {
    let mut problems = Vec::new();
    let mut verified = 0u64;
    for last in 1..=6u32 {
        // |S| = C(3,1) - 1 = 2 and the test is 2 * 1^n < 2^n.
        let expected = 2u64 < 1u64 << last;
        let cert = match certify_complex(4, 1, last) {
            Ok(c) => c,
            Err(e) => {
                problems.push(format!("n_d = {last}: {e}"));
                continue;
            }
        };
        if cert.is_some() != expected {
            problems.push(format!("n_d = {last}: granted {}, expected {expected}", cert.is_some()));
        }
        let Some(cert) = cert else { continue };
        let wrapped = mhs_core::Certificate::Complex(cert);
        for level in 1..=4u64 {
            for tw in all_twists(level, 2) {
                let index = idx(level, &[last], &tw, 4);
                let value = mhs_fast(&index);
                if value.is_zero() {
                    problems.push(format!("{index}: complex certificate on zero"));
                    ledger.soundness.push(format!("{index}: complex certificate on zero"));
                }
                match verify_certificate(&wrapped, &index) {
                    Ok(r) if r.passed => verified += 1,
                    other => problems.push(format!("{index}: verification {other:?}")),
                }
                ledger.certify_and_gate(&index, &value);
            }
        }
    }
    ledger.record(
        4,
        "complex dominance at d = 1, m = 4",
        &problems,
        format!("{verified} twisted instances verified"),
    );
}

fn distribution(ledger: &mut Ledger) {
    let mut problems = Vec::new();
    let mut cases = 0u64;
    for big_m in 1..=3u64 {
        for level in 1..=3u64 {
            for d in 1..=2usize {
                for weights in all_weights(d, 2) {
                    for tw in all_twists(level, d + 1) {
                        for m in 1..=9u64 {
                            let index = idx(level, &weights, &tw, m);
                            let r = match distribution_check(&index, big_m, PRIME_CAP) {
                                Ok(r) => r,
                                Err(e) => {
                                    problems.push(format!("{index}, M={big_m}: {e}"));
                                    continue;
                                }
                            };
                            cases += 1;
                            if !r.residual_scaled.is_zero() {
                                problems.push(format!(
                                    "{index}, M={big_m}: residual {}",
                                    r.residual_scaled
                                ));
                            }
                            if m % big_m != 0 && !r.left.is_zero() {
                                problems.push(format!("{index}, M={big_m}: M does not divide m, L = {}", r.left));
                            }
                            if !r.smaller_certificates.is_empty() && !r.left_nonzero {
                                ledger.soundness.push(format!(
                                    "{index}, M={big_m}: certified smaller index but L = 0"
                                ));
                            }
                        }
                    }
                }
            }
        }
    }

    // The four-term sign sum: over (r1, r2) in {+-1}^2, sum_{k<4} (r2/r1)^k / k.
    let mut oracle = BigRational::zero();
    for r1 in [1i64, -1] {
        for r2 in [1i64, -1] {
            for k in 1..4i64 {
                let sign = if (r2 * r1).pow(k as u32) > 0 { 1 } else { -1 };
                oracle += rat(sign, k);
            }
        }
    }
    let anchor = distribution_check(&idx(1, &[1], &[0, 0], 4), 2, PRIME_CAP).expect("anchor");
    let two = BigRational::from_integer(2.into());
    if oracle != two {
        problems.push(format!("oracle sign sum gave {oracle}"));
    }
    if anchor.left.as_rational() != Some(&oracle) {
        problems.push(format!("anchor L = {}", anchor.left));
    }
    if anchor.matched_side != MatchedSide::Scaled || anchor.residual_unscaled.is_zero() {
        problems.push(format!(
            "anchor should match only the factor-M form, got {:?}",
            anchor.matched_side
        ));
    }
    ledger.record(
        5,
        "distribution relation with factor M",
        &problems,
        format!("{cases} cases; anchor L = {}, unscaled form mismatches", anchor.left),
    );
}

fn equivariance(ledger: &mut Ledger) {
    let mut problems = Vec::new();
    let mut cases = 0u64;
    for level in [3u64, 4, 5, 7] {
        for a in (1..level as i64).filter(|&a| gcd(a as u64, level) == 1) {
            for d in 1..=2usize {
                for weights in all_weights(d, 2) {
                    for tw in all_twists(level, d + 1) {
                        for m in 1..=8u64 {
                            let index = idx(level, &weights, &tw, m);
                            match galois_conjugation_check(&index, a) {
                                Ok(r) if r.equal => cases += 1,
                                Ok(r) => problems.push(format!(
                                    "{index}, a={a}: {} != {}",
                                    r.conjugated, r.twisted
                                )),
                                Err(e) => problems.push(format!("{index}, a={a}: {e}")),
                            }
                        }
                    }
                }
            }
        }
    }
    ledger.record(6, "Galois equivariance", &problems, format!("{cases} cases"));
}

fn density(ledger: &mut Ledger) {
    let mut problems = Vec::new();
    let mut cases = 0u64;
    for p in [2u64, 3, 5, 7] {
        for d in 1..p {
            let mut last_gap: Option<BigRational> = None;
            for big_a in 1..=6u32 {
                let r = match window_density(p, d, big_a) {
                    Ok(r) => r,
                    Err(e) => {
                        problems.push(format!("p={p}, d={d}, A={big_a}: {e}"));
                        continue;
                    }
                };
                cases += 1;
                let total = p.pow(big_a);
                // Brute force, independent of the library.
                let count = (1..=total)
                    .filter(|&k| {
                        let mut q = 1u64;
                        while q * d < k {
                            if k <= q * (d + 1) {
                                return true;
                            }
                            q *= p;
                        }
                        false
                    })
                    .count() as u64;
                let closed = (total - 1) / (p - 1);
                if count != closed || r.count != count {
                    problems.push(format!(
                        "p={p}, d={d}, A={big_a}: count {count}, library {}, closed form {closed}",
                        r.count
                    ));
                }
                let fraction = rat(count as i64, total as i64);
                let gap = rat(1, p as i64 - 1) - &fraction;
                if r.fraction != fraction || r.gap != gap {
                    problems.push(format!("p={p}, d={d}, A={big_a}: fraction {}", r.fraction));
                }
                if let Some(prev) = &last_gap {
                    if gap >= *prev {
                        problems.push(format!("p={p}, d={d}, A={big_a}: gap did not decrease"));
                    }
                }
                last_gap = Some(gap);
            }
        }
    }
    match window_density(2, 1, 3) {
        Ok(r) if r.fraction == rat(7, 8) => {}
        other => problems.push(format!("(2, 1, 3): {other:?}")),
    }
    ledger.record(7, "window density", &problems, format!("{cases} (p, d, A) triples"));
}

fn run_scan(out: &std::path::Path, format: &str) -> (i32, Vec<u8>) {
    let status = Command::new(env!("CARGO_BIN_EXE_mhs"))
        .args([
            "scan",
            "--prime-powers",
            "2,3,4,5,7,8,9",
            "--dmax",
            "8",
            "--nmax",
            "2",
            "--levels",
            "1,2,3,4",
            "--format",
            format,
            "--out",
        ])
        .arg(out)
        .output()
        .expect("spawn mhs")
        .status;
    let bytes = std::fs::read(out).unwrap_or_default();
    (status.code().unwrap_or(-1), bytes)
}

fn conjecture_scan(ledger: &mut Ledger) {
    let start = Instant::now();
    let mut problems = Vec::new();
    let dir = tempfile::tempdir().expect("tempdir");
    let json_a = run_scan(&dir.path().join("a.json"), "json");
    let json_b = run_scan(&dir.path().join("b.json"), "json");
    let csv_a = run_scan(&dir.path().join("a.csv"), "csv");
    let csv_b = run_scan(&dir.path().join("b.csv"), "csv");
    for (name, (code, _)) in [("json", &json_a), ("json rerun", &json_b), ("csv", &csv_a), ("csv rerun", &csv_b)] {
        if *code != 0 {
            problems.push(format!("{name} scan exited with {code}"));
        }
    }
    if json_a.1 != json_b.1 {
        problems.push("JSON output differs between runs".into());
    }
    if csv_a.1 != csv_b.1 {
        problems.push("CSV output differs between runs".into());
    }

    let mut detail = String::new();
    match serde_json::from_slice::<serde_json::Value>(&json_a.1) {
        Ok(report) => {
            let schema: serde_json::Value =
                serde_json::from_str(include_str!("../schemas/scan_report.schema.json")).unwrap();
            let mut errors = Vec::new();
            common::validate(&schema, &report, "$", &mut errors);
            problems.extend(errors.into_iter().take(5).map(|e| format!("schema: {e}")));
            let summary = &report["summary"];
            let records = summary["records"].as_u64().unwrap_or(0);
            let level_one = summary["counterexamples_level_one"].as_u64();
            if level_one != Some(0) {
                problems.push(format!("level-1 counterexamples: {level_one:?}"));
            }
            for key in ["soundness_violations", "verification_failures"] {
                match summary[key].as_u64() {
                    Some(0) => {}
                    n => {
                        problems.push(format!("{key}: {n:?}"));
                        ledger.soundness.push(format!("scan reported {key} = {n:?}"));
                    }
                }
            }
            let listed = report["records"].as_array().map_or(0, |r| r.len()) as u64;
            if listed != records || records == 0 {
                problems.push(format!("summary says {records} records, {listed} listed"));
            }
            let _ = write!(
                detail,
                "{records} records, {} zeros at N >= 2, ",
                summary["counterexamples"].as_u64().unwrap_or(0)
            );
        }
        Err(e) => problems.push(format!("JSON does not parse: {e}")),
    }

    let mut reader = csv::Reader::from_reader(csv_a.1.as_slice());
    let header: Vec<String> = reader
        .headers()
        .map(|h| h.iter().map(String::from).collect())
        .unwrap_or_default();
    let want = [
        "N", "m", "d", "n_list", "xi_list", "is_zero", "cert_kinds", "verified", "valuation_checked",
    ];
    if header != want {
        problems.push(format!("CSV header {header:?}"));
    }
    let mut rows = 0u64;
    for row in reader.records() {
        match row {
            Ok(r) if common::csv_row_ok(&r) => rows += 1,
            Ok(r) => {
                problems.push(format!("bad CSV row {r:?}"));
                break;
            }
            Err(e) => {
                problems.push(format!("CSV error {e}"));
                break;
            }
        }
    }
    let _ = write!(detail, "{rows} CSV rows, {:.1}s", start.elapsed().as_secs_f64());
    ledger.record(9, "conjecture scan", &problems, detail);
}

#[test]
fn acceptance() {
    let mut ledger = Ledger::default();
    oracle_grid(&mut ledger);
    level_one_windows(&mut ledger);
    galois_level_seven(&mut ledger);
    complex_dominance(&mut ledger);
    distribution(&mut ledger);
    equivariance(&mut ledger);
    density(&mut ledger);
    conjecture_scan(&mut ledger);

    let soundness = std::mem::take(&mut ledger.soundness);
    let certified = ledger.certified;
    ledger.record(
        10,
        "no certificate on a zero value",
        &soundness,
        format!("{certified} certified indices across all criteria"),
    );

    // Keep the lines in criterion order for the final summary.
    ledger.lines.sort_by_key(|(id, _)| *id);
    println!("\nsummary:");
    for (_, line) in &ledger.lines {
        println!("  {line}");
    }
    assert!(ledger.failed.is_empty(), "failed criteria: {:?}", ledger.failed);
}

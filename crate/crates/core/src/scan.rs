//! Scanner for zeros of `h_{p^α}` at prime-power bounds.
//!
//! The parameter space is split into cells `(N, m, d)`. A cell holds every
//! combination of weights `1..=n_max` and twist exponents mod `N`; it is
//! enumerated exhaustively when small enough and otherwise sampled with a
//! seeded ChaCha stream derived from `(seed, N, m, d)`, so results do not
//! depend on scheduling.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{is_prime, prime_power};
use crate::certify::{certify_all, verify_against, ValueStatus};
use crate::error::{Error, Result};
use crate::harmonic::{mhs_fast, MhsIndex};
use crate::index_text::render_index;

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_SAMPLE_CAP: u64 = 10_000;
pub const DEFAULT_MAX_RECORDS: u64 = 2_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TwistMode {
    /// Exhaustive when a cell has at most `sample_cap` members, sampled otherwise.
    Auto,
    Exhaustive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanParams {
    pub prime_powers: Vec<u64>,
    pub d_max: usize,
    pub n_max: u32,
    pub levels: Vec<u64>,
    pub twist_mode: TwistMode,
    pub sample_cap: u64,
    pub seed: u64,
    /// Also scan depths `d >= m`, whose values are identically zero.
    pub include_empty_domain: bool,
    pub prime_cap: u64,
    pub max_records: u64,
}

impl ScanParams {
    pub fn new(prime_powers: Vec<u64>, d_max: usize, n_max: u32, levels: Vec<u64>) -> Self {
        Self {
            prime_powers,
            d_max,
            n_max,
            levels,
            twist_mode: TwistMode::Auto,
            sample_cap: DEFAULT_SAMPLE_CAP,
            seed: 0,
            include_empty_domain: false,
            prime_cap: 100,
            max_records: DEFAULT_MAX_RECORDS,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        if self.prime_powers.is_empty() {
            return bad("no prime powers to scan".into());
        }
        if let Some(q) = self.prime_powers.iter().find(|&&q| prime_power(q).is_none()) {
            return bad(format!("{q} is not a prime power"));
        }
        if self.levels.is_empty() || self.levels.contains(&0) {
            return bad("levels must be positive".into());
        }
        if self.d_max == 0 || self.n_max == 0 || self.sample_cap == 0 || self.max_records == 0 {
            return bad("all caps must be at least 1".into());
        }
        Ok(())
    }
}

/// Prime powers `p^α <= m_max` with `p <= p_max`, `α <= α_max`, ascending.
pub fn prime_powers_in(p_max: u64, alpha_max: u32, m_max: Option<u64>) -> Vec<u64> {
    let mut out = Vec::new();
    for p in (2..=p_max).filter(|&p| is_prime(p)) {
        let mut q = 1u64;
        for _ in 0..alpha_max {
            match q.checked_mul(p) {
                Some(next) if m_max.map_or(true, |cap| next <= cap) => {
                    q = next;
                    out.push(q);
                }
                _ => break,
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanRecord {
    #[serde(flatten)]
    pub index: MhsIndex,
    pub p: u64,
    pub alpha: u32,
    pub is_zero: bool,
    pub status: ValueStatus,
    pub certificates: Vec<&'static str>,
    /// Every attached certificate re-verified (vacuously true without one).
    pub verified: bool,
    pub valuation_checked: bool,
    /// `m = p^α > d` and the value is exactly zero.
    pub counterexample: bool,
    /// Non-vanishing of the adjoint series follows from this record.
    pub adjoint_nonvanishing: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ScanSummary {
    pub records: u64,
    pub zero: u64,
    pub nonzero: u64,
    pub certified_nonzero: u64,
    pub uncertified_nonzero: u64,
    pub counterexamples: u64,
    pub counterexamples_level_one: u64,
    pub galois: u64,
    pub padic_window: u64,
    pub complex: u64,
    pub valuation_checked: u64,
    pub adjoint_statements: u64,
    pub verification_failures: u64,
    pub soundness_violations: u64,
    pub positivity_violations: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanReport {
    pub schema_version: u32,
    pub tool: &'static str,
    pub tool_version: &'static str,
    pub params: ScanParams,
    pub truncated: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truncation_note: Option<String>,
    pub summary: ScanSummary,
    pub counterexamples: Vec<String>,
    pub internal_failures: Vec<String>,
    pub records: Vec<ScanRecord>,
    /// Wall-clock time; omitted by default to keep output byte-stable.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

impl ScanReport {
    pub fn empty(params: ScanParams) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            tool: "mhs",
            tool_version: env!("CARGO_PKG_VERSION"),
            params,
            truncated: false,
            truncation_note: None,
            summary: ScanSummary::default(),
            counterexamples: Vec::new(),
            internal_failures: Vec::new(),
            records: Vec::new(),
            timing_ms: None,
        }
    }

    /// A certificate failed its own checks or attached to a zero value.
    pub fn has_soundness_failure(&self) -> bool {
        self.summary.soundness_violations > 0 || self.summary.verification_failures > 0
    }

    pub fn has_positivity_failure(&self) -> bool {
        self.summary.positivity_violations > 0
    }
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

fn cell_seed(seed: u64, level: u64, bound: u64, depth: usize) -> u64 {
    [level, bound, depth as u64]
        .iter()
        .fold(splitmix(seed), |acc, &v| splitmix(acc ^ v))
}

struct Cell {
    level: u64,
    bound: u64,
    p: u64,
    alpha: u32,
    depth: usize,
}

impl Cell {
    fn size(&self, n_max: u32) -> Option<u128> {
        (n_max as u128)
            .checked_pow(self.depth as u32)?
            .checked_mul((self.level as u128).checked_pow(self.depth as u32 + 1)?)
    }

    fn decode(&self, mut code: u128, n_max: u32) -> MhsIndex {
        let mut weights = Vec::with_capacity(self.depth);
        for _ in 0..self.depth {
            weights.push((code % n_max as u128) as u32 + 1);
            code /= n_max as u128;
        }
        let mut twists = Vec::with_capacity(self.depth + 1);
        for _ in 0..=self.depth {
            twists.push((code % self.level as u128) as i64);
            code /= self.level as u128;
        }
        MhsIndex::new(self.level, weights, &twists, self.bound).expect("cell members are valid")
    }

    fn members(&self, params: &ScanParams) -> Vec<MhsIndex> {
        let size = self.size(params.n_max);
        let exhaustive = params.twist_mode == TwistMode::Exhaustive
            || size.is_some_and(|s| s <= params.sample_cap as u128);
        let codes: Vec<u128> = if exhaustive {
            (0..size.expect("exhaustive cells are enumerable")).collect()
        } else {
            let size = size.unwrap_or(u128::MAX);
            let mut rng = ChaCha8Rng::seed_from_u64(cell_seed(
                params.seed,
                self.level,
                self.bound,
                self.depth,
            ));
            let mut picked = BTreeSet::new();
            while (picked.len() as u64) < params.sample_cap {
                picked.insert(rng.gen_range(0..size));
            }
            picked.into_iter().collect()
        };
        codes.into_iter().map(|c| self.decode(c, params.n_max)).collect()
    }
}

fn plan(params: &ScanParams) -> Vec<Cell> {
    let mut cells = Vec::new();
    let mut powers = params.prime_powers.clone();
    powers.sort_unstable();
    powers.dedup();
    let mut levels = params.levels.clone();
    levels.sort_unstable();
    levels.dedup();
    for &level in &levels {
        for &bound in &powers {
            let (p, alpha) = prime_power(bound).expect("validated");
            let top = if params.include_empty_domain {
                params.d_max
            } else {
                params.d_max.min(bound as usize - 1)
            };
            for depth in 1..=top {
                cells.push(Cell {
                    level,
                    bound,
                    p,
                    alpha,
                    depth,
                });
            }
        }
    }
    cells
}

/// Evaluates, certifies and verifies a single index.
pub fn scan_index(index: &MhsIndex, p: u64, alpha: u32, prime_cap: u64) -> ScanRecord {
    let value = mhs_fast(index);
    let is_zero = value.is_zero();
    let mut failures = Vec::new();
    let mut kinds: Vec<&'static str> = Vec::new();
    let mut verified = true;
    let mut valuation_checked = false;
    for cert in certify_all(index, prime_cap) {
        match verify_against(&cert, index, &value) {
            Ok(report) => {
                valuation_checked |= report.valuation_checked();
                if !report.passed {
                    verified = false;
                    let what = if report.soundness_violation {
                        "soundness violation"
                    } else {
                        "verification failed"
                    };
                    failures.push(format!("{what}: {} certificate", cert.kind()));
                }
            }
            Err(e) => {
                verified = false;
                failures.push(format!("verification error: {e}"));
            }
        }
        if !kinds.contains(&cert.kind()) {
            kinds.push(cert.kind());
        }
    }
    let nontrivial = index.bound() > index.depth() as u64;
    if index.level() == 1 && nontrivial {
        let positive = value
            .as_rational()
            .is_some_and(|q| q > &num_rational::BigRational::from_integer(0.into()));
        if !positive {
            failures.push("positivity violation: level-1 value is not strictly positive".into());
        }
    }
    let status = if is_zero {
        ValueStatus::EvaluatedZero
    } else if !kinds.is_empty() && verified {
        ValueStatus::CertifiedNonzero
    } else {
        ValueStatus::EvaluatedNonzeroUncertified
    };
    ScanRecord {
        index: index.clone(),
        p,
        alpha,
        is_zero,
        status,
        certificates: kinds,
        verified,
        valuation_checked,
        counterexample: is_zero && nontrivial,
        adjoint_nonvanishing: !is_zero,
        failures,
    }
}

/// Runs the scan described by `params`.
pub fn scan_conjecture(params: &ScanParams) -> Result<ScanReport> {
    params.validate()?;
    let mut report = ScanReport::empty(params.clone());

    let mut work: Vec<(MhsIndex, u64, u32)> = Vec::new();
    for cell in plan(params) {
        let remaining = params.max_records.saturating_sub(work.len() as u64);
        if remaining == 0 {
            report.truncated = true;
            break;
        }
        let members = cell.members(params);
        if members.len() as u64 > remaining {
            report.truncated = true;
        }
        work.extend(
            members
                .into_iter()
                .take(remaining as usize)
                .map(|i| (i, cell.p, cell.alpha)),
        );
    }
    if report.truncated {
        report.truncation_note = Some(format!(
            "record cap of {} reached; remaining cells were not scanned",
            params.max_records
        ));
    }

    let mut records: Vec<ScanRecord> = work
        .par_iter()
        .map(|(index, p, alpha)| scan_index(index, *p, *alpha, params.prime_cap))
        .collect();
    records.sort_by(|a, b| a.index.cmp(&b.index));

    let s = &mut report.summary;
    for r in &records {
        s.records += 1;
        if r.is_zero {
            s.zero += 1;
        } else {
            s.nonzero += 1;
            s.adjoint_statements += 1;
        }
        match r.status {
            ValueStatus::CertifiedNonzero => s.certified_nonzero += 1,
            ValueStatus::EvaluatedNonzeroUncertified => s.uncertified_nonzero += 1,
            ValueStatus::EvaluatedZero => {}
        }
        for kind in &r.certificates {
            match *kind {
                "galois" => s.galois += 1,
                "padic_window" => s.padic_window += 1,
                _ => s.complex += 1,
            }
        }
        s.valuation_checked += r.valuation_checked as u64;
        if r.counterexample {
            s.counterexamples += 1;
            if r.index.level() == 1 {
                s.counterexamples_level_one += 1;
            }
            report.counterexamples.push(render_index(&r.index));
        }
        if r.is_zero && !r.certificates.is_empty() {
            s.soundness_violations += 1;
        }
        for f in &r.failures {
            if f.starts_with("positivity") {
                s.positivity_violations += 1;
            } else if f.starts_with("soundness") {
                s.soundness_violations += 1;
            } else {
                s.verification_failures += 1;
            }
            report
                .internal_failures
                .push(format!("{}: {f}", render_index(&r.index)));
        }
    }
    report.records = records;
    Ok(report)
}

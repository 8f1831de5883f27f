//! Non-vanishing certificates for cyclotomic multiple harmonic sums.
//!
//! Each certificate carries enough data to be re-checked without repeating
//! the search:
//!
//! * [`GaloisCertificate`]: all consecutive twist ratios are powers `ξ^{l_i}`
//!   of one primitive root with `Σ l_i·m < φ(N)`, so every monomial of the sum
//!   is a distinct-or-equal element of the basis `1, ξ, …, ξ^{φ(N)-1}` with a
//!   positive coefficient.
//! * [`PAdicWindowCertificate`]: `p'^a·d < m <= p'^a·(d+1)` for a prime
//!   `p' > d`; the tuple `(p'^a, 2p'^a, …, d·p'^a)` is the unique term of
//!   minimal `p'`-adic valuation.
//! * [`ComplexDominanceCertificate`]: the term at `(1, …, d)` dominates the
//!   absolute sum of the remaining `C(m-1, d) - 1` terms.

use num_bigint::{BigInt, BigUint};
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{gcd, is_prime, mod_inverse, prime_power, primes_in, totient};
use crate::cyclotomic::CycNumber;
use crate::error::{Error, Result};
use crate::harmonic::{mhs_fast, MhsIndex, Weight};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GaloisCertificate {
    /// `u` with `ξ = ζ_N^u` primitive.
    pub primitive_exponent: u64,
    /// `l_i` with `ξ^{l_i} = ξ_{i+1}/ξ_i`.
    pub exponents: Vec<u64>,
    /// `Σ l_i · m`.
    pub budget: u64,
    /// `φ(N)`.
    pub totient: u64,
}

impl GaloisCertificate {
    /// Exponents `Σ l_i·m_i` (in base `ξ`, unreduced) of every monomial in
    /// the sum with bound `m`.
    pub fn monomial_exponents(&self, bound: u64) -> Vec<u64> {
        let d = self.exponents.len();
        let mut out = Vec::new();
        if bound <= d as u64 {
            return out;
        }
        let mut tuple: Vec<u64> = (1..=d as u64).collect();
        'outer: loop {
            out.push(tuple.iter().zip(&self.exponents).map(|(m, l)| m * l).sum());
            let mut i = d;
            while i > 0 {
                i -= 1;
                if tuple[i] < bound - (d - i) as u64 {
                    tuple[i] += 1;
                    for j in i + 1..d {
                        tuple[j] = tuple[j - 1] + 1;
                    }
                    continue 'outer;
                }
            }
            return out;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PAdicWindowCertificate {
    /// `p'`, a prime larger than the depth.
    pub prime: u64,
    /// `a`.
    pub exponent: u32,
    /// `-a · Σ n_i`.
    pub claimed_valuation: i64,
    /// Set when `a = 0` (`m = d + 1`), where every prime `p' > d` qualifies.
    pub family: bool,
    /// For a family certificate, the qualifying primes up to the search cap.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub family_primes: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComplexDominanceCertificate {
    /// `|S_{m,d}| = C(m-1, d) - 1`.
    #[serde(serialize_with = "crate::serde_util::biguint_as_string")]
    pub dominated_count: BigUint,
    /// `|S_{m,d}| · d^{n_d}`.
    #[serde(serialize_with = "crate::serde_util::biguint_as_string")]
    pub lhs: BigUint,
    /// `(d+1)^{n_d}`.
    #[serde(serialize_with = "crate::serde_util::biguint_as_string")]
    pub rhs: BigUint,
    /// `n_d`.
    pub last_weight: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    Galois(GaloisCertificate),
    PadicWindow(PAdicWindowCertificate),
    Complex(ComplexDominanceCertificate),
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::Galois(_) => "galois",
            Certificate::PadicWindow(_) => "padic_window",
            Certificate::Complex(_) => "complex",
        }
    }
}

/// How a value was classified. A missing certificate never means zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ValueStatus {
    CertifiedNonzero,
    EvaluatedNonzeroUncertified,
    EvaluatedZero,
}

impl ValueStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            ValueStatus::CertifiedNonzero => "certified_nonzero",
            ValueStatus::EvaluatedNonzeroUncertified => "evaluated_nonzero_uncertified",
            ValueStatus::EvaluatedZero => "evaluated_zero",
        }
    }
}

/// Searches every primitive root `ζ_N^u` for a Galois certificate.
pub fn certify_galois(index: &MhsIndex) -> Option<GaloisCertificate> {
    let n = index.level();
    let m = index.bound();
    if index.is_trivially_zero() {
        return None;
    }
    let phi = totient(n);
    let ratios = index.ratio_exponents();
    for u in (0..n).filter(|&u| gcd(u, n) == 1) {
        let inv = mod_inverse(u, n).expect("u is a unit");
        let exponents: Vec<u64> = ratios
            .iter()
            .map(|&r| ((r as u128 * inv as u128) % n as u128) as u64)
            .collect();
        let Some(budget) = exponents
            .iter()
            .try_fold(0u64, |acc, &l| acc.checked_add(l.checked_mul(m)?))
        else {
            continue;
        };
        if budget < phi {
            return Some(GaloisCertificate {
                primitive_exponent: u,
                exponents,
                budget,
                totient: phi,
            });
        }
    }
    None
}

/// All windows `(p', a)` with `p' > d` prime and `p'^a·d < m <= p'^a·(d+1)`.
///
/// When `m = d + 1` the window with `a = 0` holds for every prime `p' > d`;
/// it is returned once, flagged as a family, listing the primes up to
/// `prime_cap`.
pub fn certify_padic_window(
    bound: u64,
    depth: usize,
    weight: Weight,
    prime_cap: u64,
) -> Vec<PAdicWindowCertificate> {
    let d = depth as u64;
    let mut out = Vec::new();
    if depth == 0 || bound <= d {
        return out;
    }
    for q in 2..=bound {
        let Some((p, a)) = prime_power(q) else {
            continue;
        };
        if p > d && q * d < bound && bound <= q * (d + 1) {
            out.push(PAdicWindowCertificate {
                prime: p,
                exponent: a,
                claimed_valuation: -(a as i64) * weight.0 as i64,
                family: false,
                family_primes: Vec::new(),
            });
        }
    }
    out.sort_by_key(|c| (c.prime, c.exponent));
    if bound == d + 1 {
        let first = (d + 1..).find(|&p| is_prime(p)).expect("primes are unbounded");
        out.insert(
            0,
            PAdicWindowCertificate {
                prime: first,
                exponent: 0,
                claimed_valuation: 0,
                family: true,
                family_primes: primes_in(d + 1, prime_cap),
            },
        );
    }
    out
}

fn dominated_count(bound: u64, depth: usize) -> BigUint {
    binomial(BigUint::from(bound - 1), BigUint::from(depth)) - BigUint::one()
}

/// Exact form of the complex-norm criterion: `|S|·d^{n_d} < (d+1)^{n_d}`.
pub fn certify_complex(
    bound: u64,
    depth: usize,
    last_weight: u32,
) -> Result<Option<ComplexDominanceCertificate>> {
    if bound <= depth as u64 || depth == 0 {
        return Err(Error::IdenticallyZero { m: bound, d: depth });
    }
    let count = dominated_count(bound, depth);
    let lhs = &count * num_traits::pow(BigUint::from(depth), last_weight as usize);
    let rhs = num_traits::pow(BigUint::from(depth + 1), last_weight as usize);
    Ok((lhs < rhs).then_some(ComplexDominanceCertificate {
        dominated_count: count,
        lhs,
        rhs,
        last_weight,
    }))
}

/// Every certificate the three criteria produce for `index`.
pub fn certify_all(index: &MhsIndex, prime_cap: u64) -> Vec<Certificate> {
    let mut out = Vec::new();
    if index.is_trivially_zero() {
        return out;
    }
    if let Some(c) = certify_galois(index) {
        out.push(Certificate::Galois(c));
    }
    out.extend(
        certify_padic_window(index.bound(), index.depth(), index.weight(), prime_cap)
            .into_iter()
            .map(Certificate::PadicWindow),
    );
    let last = *index.weights().last().expect("depth >= 1");
    if let Ok(Some(c)) = certify_complex(index.bound(), index.depth(), last) {
        out.push(Certificate::Complex(c));
    }
    out
}

/// `v_p(q)` for a nonzero rational.
pub fn padic_valuation_rational(q: &BigRational, p: u64) -> Result<i64> {
    if q.is_zero() {
        return Err(Error::ZeroValuation);
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let p = BigInt::from(p);
    let count = |x: &BigInt| {
        let mut x = x.clone();
        let mut v = 0i64;
        while (&x % &p).is_zero() {
            x /= &p;
            v += 1;
        }
        v
    };
    Ok(count(q.numer()) - count(q.denom()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValuationCheck {
    pub prime: u64,
    pub expected: i64,
    pub actual: i64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub kind: &'static str,
    pub side_conditions: Vec<Check>,
    pub side_conditions_ok: bool,
    pub value_nonzero: bool,
    /// Only computed at level 1, where the value is rational.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub valuations: Vec<ValuationCheck>,
    pub passed: bool,
    /// The side conditions hold but the conclusion does not.
    pub soundness_violation: bool,
}

impl VerificationReport {
    pub fn valuation_checked(&self) -> bool {
        !self.valuations.is_empty()
    }
}

/// Re-checks `cert` against `index` and evaluates the sum exactly.
pub fn verify_certificate(cert: &Certificate, index: &MhsIndex) -> Result<VerificationReport> {
    verify_against(cert, index, &mhs_fast(index))
}

/// As [`verify_certificate`], with the exact value supplied by the caller.
pub fn verify_against(
    cert: &Certificate,
    index: &MhsIndex,
    value: &CycNumber,
) -> Result<VerificationReport> {
    if value.level() != index.level() {
        return Err(Error::LevelMismatch {
            left: value.level(),
            right: index.level(),
        });
    }
    let d = index.depth() as u64;
    let m = index.bound();
    let mut checks = Vec::new();
    let mut check = |name: &str, passed: bool| {
        checks.push(Check {
            name: name.to_string(),
            passed,
        })
    };
    let mut valuation_primes: Vec<(u64, i64)> = Vec::new();

    match cert {
        Certificate::Galois(c) => {
            if c.exponents.len() != index.depth() {
                return Err(Error::StructuralMismatch(format!(
                    "galois certificate has {} exponents for depth {d}",
                    c.exponents.len()
                )));
            }
            let n = index.level();
            let phi = totient(n);
            check("0 < d < m", m > d);
            check("xi = zeta^u is primitive", gcd(c.primitive_exponent, n) == 1);
            let ratios_match = index.ratio_exponents().iter().zip(&c.exponents).all(|(&r, &l)| {
                (c.primitive_exponent as u128 * l as u128 % n as u128) as u64 == r
            });
            check("xi^l_i = xi_{i+1}/xi_i", ratios_match);
            let budget = c
                .exponents
                .iter()
                .try_fold(0u64, |acc, &l| acc.checked_add(l.checked_mul(m)?));
            check("budget = sum l_i * m", budget == Some(c.budget));
            check("totient recorded", c.totient == phi);
            check("sum l_i * m < phi(N)", budget.is_some_and(|b| b < phi));
        }
        Certificate::PadicWindow(c) => {
            let weight = index.weight().0 as i64;
            check("p' prime", is_prime(c.prime));
            check("p' > d", c.prime > d);
            check(
                "claimed valuation = -a * sum n_i",
                c.claimed_valuation == -(c.exponent as i64) * weight,
            );
            if c.family {
                check("family window has a = 0", c.exponent == 0);
                check("family window has m = d + 1", m == d + 1);
                check(
                    "family primes are primes > d",
                    c.family_primes.iter().all(|&p| p > d && is_prime(p)),
                );
                valuation_primes.push((c.prime, 0));
                valuation_primes.extend(c.family_primes.iter().map(|&p| (p, 0)));
                valuation_primes.dedup();
            } else {
                let q = c.prime.checked_pow(c.exponent);
                check("a >= 1", c.exponent >= 1);
                let inside = q.is_some_and(|q| {
                    q.checked_mul(d).is_some_and(|lo| lo < m)
                        && q.checked_mul(d + 1).map_or(true, |hi| m <= hi)
                });
                check("p'^a d < m <= p'^a (d+1)", inside);
                valuation_primes.push((c.prime, c.claimed_valuation));
            }
        }
        Certificate::Complex(c) => {
            let last = *index.weights().last().expect("depth >= 1");
            if c.last_weight != last {
                return Err(Error::StructuralMismatch(format!(
                    "complex certificate is for n_d = {}, index has n_d = {last}",
                    c.last_weight
                )));
            }
            check("0 < d < m", m > d);
            if m > d {
                let count = dominated_count(m, index.depth());
                check("|S| = C(m-1, d) - 1", c.dominated_count == count);
                let lhs = &count * num_traits::pow(BigUint::from(d), last as usize);
                let rhs = num_traits::pow(BigUint::from(d + 1), last as usize);
                check("lhs = |S| * d^n_d", c.lhs == lhs);
                check("rhs = (d+1)^n_d", c.rhs == rhs);
                check("|S| * d^n_d < (d+1)^n_d", lhs < rhs);
            }
        }
    }

    let side_conditions_ok = checks.iter().all(|c| c.passed);
    let value_nonzero = !value.is_zero();
    let mut valuations = Vec::new();
    if index.level() == 1 && value_nonzero {
        let q = value.as_rational().expect("level 1 values are rational");
        for (p, expected) in valuation_primes {
            if !is_prime(p) {
                continue;
            }
            let actual = padic_valuation_rational(q, p)?;
            valuations.push(ValuationCheck {
                prime: p,
                expected,
                actual,
                passed: actual == expected,
            });
        }
    }
    let valuations_ok = valuations.iter().all(|v| v.passed);
    Ok(VerificationReport {
        kind: cert.kind(),
        side_conditions: checks,
        side_conditions_ok,
        value_nonzero,
        valuations,
        passed: side_conditions_ok && value_nonzero && valuations_ok,
        soundness_violation: side_conditions_ok && !(value_nonzero && valuations_ok),
    })
}

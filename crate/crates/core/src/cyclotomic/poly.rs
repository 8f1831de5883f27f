//! Cyclotomic polynomials over the integers, computed by exact division of
//! `x^N - 1` by the cyclotomic polynomials of the proper divisors of `N`.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::{divisors, totient};

/// The `N`-th cyclotomic polynomial, coefficients in ascending degree order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycPoly {
    level: u64,
    #[serde(serialize_with = "crate::serde_util::bigints_as_strings")]
    coeffs: Vec<BigInt>,
}

impl CycPoly {
    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Degree, which is `φ(N)`.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn max_abs_coeff(&self) -> BigInt {
        self.coeffs
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }
}

/// Returns `Φ_N`. Results are memoised process-wide.
pub fn cyclotomic_polynomial(level: u64) -> CycPoly {
    (*cached(level)).clone()
}

static CACHE: OnceLock<RwLock<HashMap<u64, Arc<CycPoly>>>> = OnceLock::new();

pub(crate) fn cached(level: u64) -> Arc<CycPoly> {
    assert!(level >= 1, "cyclotomic level must be positive");
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(hit) = cache.read().expect("cyclotomic cache poisoned").get(&level) {
        return Arc::clone(hit);
    }
    let poly = Arc::new(compute(level));
    cache
        .write()
        .expect("cyclotomic cache poisoned")
        .entry(level)
        .or_insert(poly)
        .clone()
}

fn compute(level: u64) -> CycPoly {
    let n = level as usize;
    let mut num = vec![BigInt::zero(); n + 1];
    num[0] = -BigInt::one();
    num[n] = BigInt::one();
    for d in divisors(level) {
        if d == level {
            continue;
        }
        let (q, r) = div_rem_monic(&num, cached(d).coeffs());
        debug_assert!(r.iter().all(Zero::is_zero));
        num = q;
    }
    debug_assert_eq!(num.len() as u64 - 1, totient(level));
    CycPoly { level, coeffs: num }
}

/// Division of integer polynomials by a monic divisor.
pub(crate) fn div_rem_monic(num: &[BigInt], den: &[BigInt]) -> (Vec<BigInt>, Vec<BigInt>) {
    let dd = den.len() - 1;
    assert!(den[dd].is_one(), "divisor must be monic");
    let mut rem = num.to_vec();
    if rem.len() <= dd {
        return (vec![BigInt::zero()], rem);
    }
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    for k in (dd..rem.len()).rev() {
        let c = std::mem::take(&mut rem[k]);
        if c.is_zero() {
            continue;
        }
        for j in 0..dd {
            if !den[j].is_zero() {
                rem[k - dd + j] -= &c * &den[j];
            }
        }
        quot[k - dd] = c;
    }
    rem.truncate(dd.max(1));
    (quot, rem)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mul_int_poly(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_levels() {
        assert_eq!(cyclotomic_polynomial(1).coeffs(), ints(&[-1, 1]).as_slice());
        assert_eq!(cyclotomic_polynomial(2).coeffs(), ints(&[1, 1]).as_slice());
        assert_eq!(cyclotomic_polynomial(3).coeffs(), ints(&[1, 1, 1]).as_slice());
        assert_eq!(cyclotomic_polynomial(4).coeffs(), ints(&[1, 0, 1]).as_slice());
        assert_eq!(cyclotomic_polynomial(6).coeffs(), ints(&[1, -1, 1]).as_slice());
        assert_eq!(
            cyclotomic_polynomial(12).coeffs(),
            ints(&[1, 0, -1, 0, 1]).as_slice()
        );
    }

    #[test]
    fn level_105_has_a_two() {
        let phi = cyclotomic_polynomial(105);
        assert_eq!(phi.degree(), 48);
        assert_eq!(phi.max_abs_coeff(), BigInt::from(2));
        // 105 is the first level with a coefficient outside {-1, 0, 1}
        for n in 1..105 {
            assert!(cyclotomic_polynomial(n).max_abs_coeff() <= BigInt::one(), "n = {n}");
        }
    }

    #[test]
    fn product_over_divisors_is_x_n_minus_one() {
        for n in 1..=30u64 {
            let mut prod = ints(&[1]);
            for d in divisors(n) {
                prod = mul_int_poly(&prod, cyclotomic_polynomial(d).coeffs());
            }
            let mut expect = vec![BigInt::zero(); n as usize + 1];
            expect[0] = -BigInt::one();
            expect[n as usize] = BigInt::one();
            assert_eq!(prod, expect, "n = {n}");

            let (_, r) = div_rem_monic(&expect, cyclotomic_polynomial(n).coeffs());
            assert!(r.iter().all(Zero::is_zero), "n = {n}");
            assert_eq!(cyclotomic_polynomial(n).degree() as u64, totient(n));
        }
    }
}

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::embed::{self, ComplexApprox};
use super::poly::{cached, CycPoly};
use crate::arith::{gcd, reduce_mod, totient};
use crate::error::{Error, Result};

/// An element of `Q(ζ_N)` in the power basis `1, ζ, …, ζ^{φ(N)-1}`.
///
/// Coefficients are always fully reduced modulo `Φ_N`, so two values at the
/// same level are equal exactly when their coordinates are.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CycNumber {
    level: u64,
    #[serde(serialize_with = "crate::serde_util::rationals_as_strings")]
    coeffs: Vec<BigRational>,
}

impl CycNumber {
    pub fn zero(level: u64) -> Self {
        let phi = totient(level) as usize;
        Self {
            level,
            coeffs: vec![BigRational::zero(); phi],
        }
    }

    pub fn one(level: u64) -> Self {
        Self::from_rational(level, BigRational::one())
    }

    pub fn from_rational(level: u64, q: BigRational) -> Self {
        let mut x = Self::zero(level);
        x.coeffs[0] = q;
        x
    }

    pub fn from_integer(level: u64, k: i64) -> Self {
        Self::from_rational(level, BigRational::from_integer(BigInt::from(k)))
    }

    /// `ζ_N^k`.
    pub fn root_power(level: u64, k: i64) -> Self {
        let e = reduce_mod(k, level) as usize;
        let mut poly = vec![BigRational::zero(); e + 1];
        poly[e] = BigRational::one();
        Self::from_poly(level, poly)
    }

    /// Reduces an arbitrary polynomial in `ζ_N` (ascending coefficients).
    pub fn from_poly(level: u64, poly: Vec<BigRational>) -> Self {
        let phi = cached(level);
        Self {
            level,
            coeffs: reduce(poly, &phi),
        }
    }

    /// Element of the group ring `Q[Z/N]`: `weights[e]` is the coefficient of
    /// `ζ_N^e`. Same as `from_poly` with `len <= N`, named for intent.
    pub fn from_group_ring(level: u64, weights: Vec<BigRational>) -> Self {
        debug_assert!(weights.len() as u64 <= level);
        Self::from_poly(level, weights)
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The rational value, when the number lies in `Q`.
    pub fn as_rational(&self) -> Option<&BigRational> {
        self.coeffs[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| &self.coeffs[0])
    }

    /// Re-reduces the stored coordinates; the identity on canonical values.
    pub fn reduced(&self) -> Self {
        Self::from_poly(self.level, self.coeffs.clone())
    }

    fn check_level(&self, other: &Self) -> Result<()> {
        if self.level != other.level {
            return Err(Error::LevelMismatch {
                left: self.level,
                right: other.level,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_level(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self {
            level: self.level,
            coeffs,
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            level: self.level,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        Self {
            level: self.level,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_level(other)?;
        let n = self.coeffs.len();
        let mut prod = vec![BigRational::zero(); 2 * n - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        Ok(Self::from_poly(self.level, prod))
    }

    pub fn pow(&self, mut k: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.level);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.try_mul(&base).expect("same level");
            }
            base = base.try_mul(&base).expect("same level");
            k >>= 1;
        }
        acc
    }

    /// Applies `σ_a : ζ ↦ ζ^a`.
    pub fn galois_apply(&self, a: i64) -> Result<Self> {
        let n = self.level;
        if gcd(reduce_mod(a, n), n) != 1 {
            return Err(Error::NotCoprime { a, level: n });
        }
        let mut image = vec![BigRational::zero(); n as usize];
        for (l, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let e = reduce_mod(a * l as i64, n) as usize;
                image[e] += c;
            }
        }
        Ok(Self::from_group_ring(n, image))
    }

    /// Image under `ζ_N ↦ ζ_{N'}^{N'/N}`.
    pub fn level_lift(&self, target: u64) -> Result<Self> {
        if target == 0 || target % self.level != 0 {
            return Err(Error::NotDivisible {
                from: self.level,
                to: target,
            });
        }
        let step = (target / self.level) as usize;
        let mut poly = vec![BigRational::zero(); step * (self.coeffs.len() - 1) + 1];
        for (l, c) in self.coeffs.iter().enumerate() {
            poly[l * step] = c.clone();
        }
        Ok(Self::from_poly(target, poly))
    }

    /// Approximate value at `exp(2πi/N)`; diagnostics only.
    pub fn complex_embed(&self, digits: u32) -> ComplexApprox {
        embed::evaluate(self, digits)
    }
}

/// Remainder of `poly` modulo the monic `Φ_N`, padded to length `φ(N)`.
fn reduce(mut poly: Vec<BigRational>, phi: &CycPoly) -> Vec<BigRational> {
    let deg = phi.degree();
    let modulus: Vec<BigRational> = phi
        .coeffs()
        .iter()
        .map(|c| BigRational::from_integer(c.clone()))
        .collect();
    for k in (deg..poly.len()).rev() {
        let c = std::mem::take(&mut poly[k]);
        if c.is_zero() {
            continue;
        }
        for j in 0..deg {
            if !modulus[j].is_zero() {
                poly[k - deg + j] -= &c * &modulus[j];
            }
        }
    }
    poly.resize(deg, BigRational::zero());
    poly
}

impl fmt::Display for CycNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (l, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            let mag = c.abs();
            if first {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { '-' } else { '+' })?;
            }
            first = false;
            match l {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if l == 1 {
                        write!(f, "z")?;
                    } else {
                        write!(f, "z^{l}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use super::CycNumber;
use crate::arith::{gcd, lcm, reduce_mod};
use crate::error::{Error, Result};

/// `ζ_N^k`, kept as an exponent; no embedding is involved.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct RootOfUnity {
    level: u64,
    exponent: u64,
}

impl RootOfUnity {
    pub fn new(level: u64, k: i64) -> Self {
        assert!(level >= 1, "root of unity level must be positive");
        Self {
            level,
            exponent: reduce_mod(k, level),
        }
    }

    pub fn one(level: u64) -> Self {
        Self::new(level, 0)
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// The same root written at level `target`, which must be a multiple of
    /// the current level.
    pub fn lift(&self, target: u64) -> Result<Self> {
        if target == 0 || target % self.level != 0 {
            return Err(Error::NotDivisible {
                from: self.level,
                to: target,
            });
        }
        Ok(Self {
            level: target,
            exponent: self.exponent * (target / self.level),
        })
    }

    pub fn pow(&self, k: i64) -> Self {
        let e = (self.exponent as i128 * k as i128).rem_euclid(self.level as i128);
        Self {
            level: self.level,
            exponent: e as u64,
        }
    }

    pub fn inverse(&self) -> Self {
        self.pow(-1)
    }

    /// Product, written at the lcm of both levels.
    pub fn mul(&self, other: &Self) -> Self {
        let level = lcm(self.level, other.level);
        let a = self.lift(level).expect("lcm is a multiple");
        let b = other.lift(level).expect("lcm is a multiple");
        Self {
            level,
            exponent: (a.exponent + b.exponent) % level,
        }
    }

    /// Multiplicative order.
    pub fn order(&self) -> u64 {
        self.level / gcd(self.exponent, self.level)
    }

    pub fn to_cyc(&self) -> CycNumber {
        CycNumber::root_power(self.level, self.exponent as i64)
    }

    /// `(exponent, level)` as a fraction in lowest terms.
    fn reduced(&self) -> (u64, u64) {
        let g = gcd(self.exponent, self.level);
        (self.exponent / g, self.level / g)
    }
}

impl PartialEq for RootOfUnity {
    fn eq(&self, other: &Self) -> bool {
        self.reduced() == other.reduced()
    }
}

impl Eq for RootOfUnity {}

impl Hash for RootOfUnity {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.reduced().hash(state);
    }
}

//! Cyclotomic multiple harmonic sums.
//!
//! `mhs_naive` enumerates every tuple `0 < m_1 < … < m_d < m` and is kept as
//! the reference; `mhs_fast` runs the prefix-sum recurrence in the group ring
//! `Q[Z/N]` and reduces modulo `Φ_N` once at the end.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{checked_pow, is_prime, reduce_mod};
use crate::cyclotomic::{ComplexApprox, CycNumber, RootOfUnity};
use crate::error::{Error, Result};

/// Total weight `Σ n_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Weight(pub u64);

/// Full argument of a cyclotomic multiple harmonic sum: weights
/// `(n_1, …, n_d)`, twists `(ξ_1, …, ξ_{d+1})` at a common level `N`, and the
/// upper bound `m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MhsIndex {
    level: u64,
    weights: Vec<u32>,
    twists: Vec<RootOfUnity>,
    bound: u64,
}

impl MhsIndex {
    /// Builds an index from twist exponents of `ζ_N`, reducing them mod `N`.
    pub fn new(level: u64, weights: Vec<u32>, twist_exponents: &[i64], bound: u64) -> Result<Self> {
        if level == 0 {
            return Err(Error::InvalidIndex("level N must be positive".into()));
        }
        let twists = twist_exponents
            .iter()
            .map(|&k| RootOfUnity::new(level, k))
            .collect();
        Self::from_twists(level, weights, twists, bound)
    }

    pub fn from_twists(
        level: u64,
        weights: Vec<u32>,
        twists: Vec<RootOfUnity>,
        bound: u64,
    ) -> Result<Self> {
        if level == 0 {
            return Err(Error::InvalidIndex("level N must be positive".into()));
        }
        if weights.is_empty() {
            return Err(Error::InvalidIndex("depth must be at least 1".into()));
        }
        if let Some(pos) = weights.iter().position(|&n| n == 0) {
            return Err(Error::InvalidIndex(format!("weight n_{} is zero", pos + 1)));
        }
        if twists.len() != weights.len() + 1 {
            return Err(Error::InvalidIndex(format!(
                "{} weights require {} twists, got {}",
                weights.len(),
                weights.len() + 1,
                twists.len()
            )));
        }
        if let Some(t) = twists.iter().find(|t| t.level() != level) {
            return Err(Error::InvalidIndex(format!(
                "twist at level {} in an index at level {level}",
                t.level()
            )));
        }
        if bound == 0 {
            return Err(Error::InvalidIndex("bound m must be positive".into()));
        }
        Ok(Self {
            level,
            weights,
            twists,
            bound,
        })
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn depth(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn twists(&self) -> &[RootOfUnity] {
        &self.twists
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn weight(&self) -> Weight {
        Weight(self.weights.iter().map(|&n| n as u64).sum())
    }

    pub fn twist_exponents(&self) -> Vec<u64> {
        self.twists.iter().map(RootOfUnity::exponent).collect()
    }

    /// Exponents of the consecutive ratios `ξ_{i+1}/ξ_i`, as differences mod `N`.
    pub fn ratio_exponents(&self) -> Vec<u64> {
        self.twists
            .windows(2)
            .map(|w| reduce_mod(w[1].exponent() as i64 - w[0].exponent() as i64, self.level))
            .collect()
    }

    /// True when the summation domain is empty.
    pub fn is_trivially_zero(&self) -> bool {
        self.bound <= self.depth() as u64
    }

    pub fn with_bound(&self, bound: u64) -> Result<Self> {
        Self::from_twists(self.level, self.weights.clone(), self.twists.clone(), bound)
    }

    /// Same weights and bound, every twist exponent multiplied by `a`.
    pub fn twists_powered(&self, a: i64) -> Self {
        Self {
            twists: self.twists.iter().map(|t| t.pow(a)).collect(),
            ..self.clone()
        }
    }

    /// The same index with all twists re-expressed at a multiple of the level.
    pub fn lifted(&self, level: u64) -> Result<Self> {
        let twists = self
            .twists
            .iter()
            .map(|t| t.lift(level))
            .collect::<Result<Vec<_>>>()?;
        Self::from_twists(level, self.weights.clone(), twists, self.bound)
    }

    /// Canonical ordering key `(N, m, d, weights, twists)`.
    pub fn key(&self) -> (u64, u64, usize, Vec<u32>, Vec<u64>) {
        (
            self.level,
            self.bound,
            self.depth(),
            self.weights.clone(),
            self.twist_exponents(),
        )
    }
}

impl Ord for MhsIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for MhsIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::fmt::Display for MhsIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&crate::index_text::render_index(self))
    }
}

impl Serialize for MhsIndex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            level: u64,
            bound: u64,
            depth: usize,
            weights: &'a [u32],
            twists: Vec<u64>,
            text: String,
        }
        Repr {
            level: self.level,
            bound: self.bound,
            depth: self.depth(),
            weights: &self.weights,
            twists: self.twist_exponents(),
            text: crate::index_text::render_index(self),
        }
        .serialize(s)
    }
}

fn inv_power(k: u64, n: u32) -> BigRational {
    BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(k), n as usize))
}

/// Reference evaluator: enumerates every tuple.
pub fn mhs_naive(index: &MhsIndex) -> CycNumber {
    let n = index.level;
    let d = index.depth();
    if index.is_trivially_zero() {
        return CycNumber::zero(n);
    }
    let ratios = index.ratio_exponents();
    let last = index.twists[d].exponent();
    let m = index.bound;

    // coefficient of ζ^e, before reduction
    let mut buckets = vec![BigRational::zero(); n as usize];
    let mut tuple: Vec<u64> = (1..=d as u64).collect();
    loop {
        let mut e: u128 = 0;
        let mut den = BigInt::one();
        for (i, &mi) in tuple.iter().enumerate() {
            e += ratios[i] as u128 * mi as u128;
            den *= num_traits::pow(BigInt::from(mi), index.weights[i] as usize);
        }
        let e = (e + (n as u128 - last as u128) * m as u128) % n as u128;
        buckets[e as usize] += BigRational::new(BigInt::one(), den);

        // next strictly increasing tuple with entries below m
        let mut i = d;
        loop {
            if i == 0 {
                let mut total = CycNumber::zero(n);
                for (e, c) in buckets.iter().enumerate() {
                    if !c.is_zero() {
                        let term = CycNumber::root_power(n, e as i64).scale(c);
                        total = total.try_add(&term).expect("same level");
                    }
                }
                return total;
            }
            i -= 1;
            if tuple[i] < m - (d - i) as u64 {
                tuple[i] += 1;
                for j in i + 1..d {
                    tuple[j] = tuple[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn rotate_add(acc: &mut [BigRational], src: &[BigRational], shift: usize, factor: &BigRational) {
    let n = acc.len();
    for (e, c) in src.iter().enumerate() {
        if !c.is_zero() {
            acc[(e + shift) % n] += c * factor;
        }
    }
}

/// Prefix-sum evaluator using `O(m·d)` group-ring operations.
///
/// `S_0(t) = 1`, `S_j(t) = S_j(t-1) + S_{j-1}(t-1) · r_j^{t-1} / (t-1)^{n_j}`,
/// result `S_d(m) · ξ_{d+1}^{-m}`.
pub fn mhs_fast(index: &MhsIndex) -> CycNumber {
    if index.is_trivially_zero() {
        return CycNumber::zero(index.level);
    }
    fast_scaled_int(index).unwrap_or_else(|| fast_rational(index))
}

/// Same recurrence on integers scaled by `Q = Π_{k<m} k^{max n_i}`.
///
/// Every partial sum `S_j(k)` only involves `m_i < k`, so `Q·S_j(k)` is an
/// integer divisible by `k^{max n_i}` and each step divides exactly.
/// Returns `None` on `i128` overflow.
fn fast_scaled_int(index: &MhsIndex) -> Option<CycNumber> {
    let n = index.level as usize;
    let d = index.depth();
    let top = *index.weights.iter().max()?;
    let mut scale: i128 = 1;
    for k in 1..index.bound {
        scale = scale.checked_mul((k as i128).checked_pow(top)?)?;
    }
    let ratios = index.ratio_exponents();
    let mut partial = vec![vec![0i128; n]; d + 1];
    partial[0][0] = scale;
    for k in 1..index.bound {
        for j in (1..=d.min(k as usize)).rev() {
            let shift = ((ratios[j - 1] as u128 * k as u128) % n as u128) as usize;
            let div = (k as i128).checked_pow(index.weights[j - 1])?;
            let (lower, upper) = partial.split_at_mut(j);
            for (e, &v) in lower[j - 1].iter().enumerate() {
                if v != 0 {
                    debug_assert_eq!(v % div, 0);
                    let slot = &mut upper[0][(e + shift) % n];
                    *slot = slot.checked_add(v / div)?;
                }
            }
        }
    }
    let last = index.twists[d].exponent() as u128;
    let shift = ((n as u128 - last) * index.bound as u128 % n as u128) as usize;
    let denom = BigInt::from(scale);
    let mut out = vec![BigRational::zero(); n];
    for (e, &v) in partial[d].iter().enumerate() {
        if v != 0 {
            out[(e + shift) % n] = BigRational::new(BigInt::from(v), denom.clone());
        }
    }
    Some(CycNumber::from_group_ring(index.level, out))
}

fn fast_rational(index: &MhsIndex) -> CycNumber {
    let n = index.level as usize;
    let d = index.depth();
    let ratios = index.ratio_exponents();
    let mut partial: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); n]; d + 1];
    partial[0][0] = BigRational::one();
    for k in 1..index.bound {
        // S_{j-1}(k) is zero for j - 1 > k - 1, so j <= k
        for j in (1..=d.min(k as usize)).rev() {
            let shift = ((ratios[j - 1] as u128 * k as u128) % n as u128) as usize;
            let factor = inv_power(k, index.weights[j - 1]);
            let (lower, upper) = partial.split_at_mut(j);
            rotate_add(&mut upper[0], &lower[j - 1], shift, &factor);
        }
    }
    let last = index.twists[d].exponent() as u128;
    let shift = ((n as u128 - last) * index.bound as u128 % n as u128) as usize;
    let mut out = vec![BigRational::zero(); n];
    rotate_add(&mut out, &partial[d], shift, &BigRational::one());
    CycNumber::from_group_ring(index.level, out)
}

/// `(p^α)^{Σ n_i} · h_{p^α}(index)`.
pub fn mhs_scaled(index: &MhsIndex, p: u64, alpha: u32) -> Result<CycNumber> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let q = checked_pow(p, alpha).filter(|&q| q == index.bound);
    let Some(q) = q else {
        return Err(Error::BoundMismatch {
            m: index.bound,
            p,
            alpha,
        });
    };
    let factor = num_traits::pow(BigInt::from(q), index.weight().0 as usize);
    Ok(mhs_fast(index).scale(&BigRational::from_integer(factor)))
}

/// An exact value together with the index it was computed from.
///
/// Only constructible by evaluation, so holding one is evidence of the value.
#[derive(Clone, Debug)]
pub struct Evaluation {
    index: MhsIndex,
    value: CycNumber,
}

impl Evaluation {
    pub fn compute(index: &MhsIndex) -> Self {
        Self {
            index: index.clone(),
            value: mhs_fast(index),
        }
    }

    pub fn index(&self) -> &MhsIndex {
        &self.index
    }

    pub fn value(&self) -> &CycNumber {
        &self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }
}

/// Partial sum of a complex cyclotomic multiple zeta value.
#[derive(Clone, Debug, Serialize)]
pub struct MzvTruncation {
    pub value: CycNumber,
    pub approx: ComplexApprox,
    pub convergence_guaranteed: bool,
}

/// `Σ_{0<m_1<…<m_d<m} Π (ξ_{i+1}/ξ_i)^{m_i} / m_i^{n_i}` with `ξ_{d+1} = 1`,
/// the truncation at `m` of `ζ((n_i)_d; (ξ_i)_d)`.
pub fn complex_mzv_truncation(
    weights: &[u32],
    twists: &[RootOfUnity],
    bound: u64,
    digits: u32,
) -> Result<MzvTruncation> {
    let level = twists
        .first()
        .map(RootOfUnity::level)
        .ok_or_else(|| Error::InvalidIndex("at least one twist is required".into()))?;
    let mut all = twists.to_vec();
    all.push(RootOfUnity::one(level));
    let index = MhsIndex::from_twists(level, weights.to_vec(), all, bound)?;
    let value = mhs_fast(&index);
    let last_weight = *weights.last().expect("depth >= 1");
    let last_twist = twists.last().expect("depth >= 1");
    Ok(MzvTruncation {
        approx: value.complex_embed(digits),
        convergence_guaranteed: last_weight >= 2 || last_twist.exponent() != 0,
        value,
    })
}

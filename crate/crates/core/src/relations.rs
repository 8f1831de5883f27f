//! Structural relations between multiple harmonic sums: the distribution
//! relation over `M`-th roots of unity, Galois conjugation of twists, and the
//! density of `p'`-adic windows among the integers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{checked_pow, gcd, is_prime, lcm, reduce_mod};
use crate::certify::{certify_all, verify_certificate};
use crate::cyclotomic::{CycNumber, RootOfUnity};
use crate::error::{Error, Result};
use crate::harmonic::{mhs_fast, MhsIndex};

/// Which right-hand side the twisted sum agrees with.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MatchedSide {
    /// `h_{m/M}` without a factor.
    Unscaled,
    /// `M · h_{m/M}`.
    Scaled,
    BothZero,
    Neither,
}

#[derive(Clone, Debug, Serialize)]
pub struct DistributionReport {
    #[serde(rename = "M")]
    pub m_factor: u64,
    pub index: MhsIndex,
    /// `lcm(N, M)`, where every value below lives.
    pub level: u64,
    pub divides: bool,
    /// `M^{Σ(n_i-1)} Σ_ρ h_m((n_i); (ρ_i ξ_i))`.
    pub left: CycNumber,
    /// `h_{m/M}((n_i); (ξ_i^M))`, or 0 when `M ∤ m`.
    pub unscaled_right: CycNumber,
    /// `M · h_{m/M}((n_i); (ξ_i^M))`, or 0 when `M ∤ m`.
    pub scaled_right: CycNumber,
    pub residual_unscaled: CycNumber,
    pub residual_scaled: CycNumber,
    pub matched_side: MatchedSide,
    /// The index `((n_i); (ξ_i^M))` at bound `m/M`, when `M | m`.
    pub smaller_index: Option<MhsIndex>,
    /// Certificate kinds that verified at the smaller index.
    pub smaller_certificates: Vec<&'static str>,
    pub left_nonzero: bool,
    /// Non-vanishing deduced from a certificate at the smaller index.
    pub implication: Option<String>,
}

/// Evaluates both sides of the distribution relation for `index` and `M`.
///
/// `prime_cap` bounds the family window certificate at the smaller index.
pub fn distribution_check(index: &MhsIndex, m_factor: u64, prime_cap: u64) -> Result<DistributionReport> {
    if m_factor == 0 {
        return Err(Error::InvalidArgument("M must be positive".into()));
    }
    let n = index.level();
    let level = lcm(n, m_factor);
    let base = index.lifted(level)?;
    let d = index.depth();
    let step = level / m_factor;

    let mut sum = CycNumber::zero(level);
    let tuples = checked_pow(m_factor, d as u32 + 1)
        .ok_or_else(|| Error::InvalidArgument("M^(d+1) overflows".into()))?;
    for t in 0..tuples {
        let mut rest = t;
        let twists: Vec<RootOfUnity> = base
            .twists()
            .iter()
            .map(|xi| {
                let j = rest % m_factor;
                rest /= m_factor;
                RootOfUnity::new(level, (xi.exponent() + j * step) as i64)
            })
            .collect();
        let twisted = MhsIndex::from_twists(level, index.weights().to_vec(), twists, index.bound())?;
        sum = sum.try_add(&mhs_fast(&twisted))?;
    }
    let excess: u64 = index.weights().iter().map(|&w| w as u64 - 1).sum();
    let prefactor = num_traits::pow(BigInt::from(m_factor), excess as usize);
    let left = sum.scale(&BigRational::from_integer(prefactor));

    let divides = index.bound() % m_factor == 0;
    let smaller_index = if divides {
        let powered = index.twists_powered(m_factor as i64);
        Some(powered.with_bound(index.bound() / m_factor)?)
    } else {
        None
    };
    let unscaled_right = match &smaller_index {
        Some(small) => mhs_fast(small).level_lift(level)?,
        None => CycNumber::zero(level),
    };
    let scaled_right =
        unscaled_right.scale(&BigRational::from_integer(BigInt::from(m_factor)));
    let residual_unscaled = left.try_sub(&unscaled_right)?;
    let residual_scaled = left.try_sub(&scaled_right)?;
    let matched_side = match (residual_unscaled.is_zero(), residual_scaled.is_zero()) {
        (true, true) => MatchedSide::BothZero,
        (true, false) => MatchedSide::Unscaled,
        (false, true) => MatchedSide::Scaled,
        (false, false) => MatchedSide::Neither,
    };

    let mut smaller_certificates = Vec::new();
    if let Some(small) = &smaller_index {
        for cert in certify_all(small, prime_cap) {
            if verify_certificate(&cert, small)?.passed && !smaller_certificates.contains(&cert.kind()) {
                smaller_certificates.push(cert.kind());
            }
        }
    }
    let left_nonzero = !left.is_zero();
    let implication = (!smaller_certificates.is_empty()).then(|| {
        format!(
            "h_{}({}) is certified nonzero ({}), so M*h_{{m/M}} != 0, the twisted sum is nonzero, \
             and at least one h_{}((n_i); (rho_i xi_i)) with rho_i^{} = 1 is nonzero",
            index.bound() / m_factor,
            smaller_index.as_ref().map(crate::index_text::render_index).unwrap_or_default(),
            smaller_certificates.join(", "),
            index.bound(),
            m_factor,
        )
    });

    Ok(DistributionReport {
        m_factor,
        index: index.clone(),
        level,
        divides,
        left,
        unscaled_right,
        scaled_right,
        residual_unscaled,
        residual_scaled,
        matched_side,
        smaller_index,
        smaller_certificates,
        left_nonzero,
        implication,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ConjugationReport {
    pub a: i64,
    pub index: MhsIndex,
    /// `σ_a(h_m(index))`.
    pub conjugated: CycNumber,
    /// `h_m` of the index with every twist raised to the power `a`.
    pub twisted: CycNumber,
    pub equal: bool,
}

/// Compares `σ_a(h_m((n_i); (ξ_i)))` with `h_m((n_i); (ξ_i^a))`.
pub fn galois_conjugation_check(index: &MhsIndex, a: i64) -> Result<ConjugationReport> {
    let n = index.level();
    if gcd(reduce_mod(a, n), n) != 1 {
        return Err(Error::NotCoprime { a, level: n });
    }
    let conjugated = mhs_fast(index).galois_apply(a)?;
    let twisted = mhs_fast(&index.twists_powered(a));
    Ok(ConjugationReport {
        a,
        index: index.clone(),
        equal: conjugated == twisted,
        conjugated,
        twisted,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DensityReport {
    pub prime: u64,
    pub depth: u64,
    #[serde(rename = "A")]
    pub levels_exp: u32,
    /// Integers in `[1, p'^A]` lying in some window, by enumeration.
    pub count: u64,
    /// `(p'^A - 1) / (p' - 1)`.
    pub closed_form: u64,
    pub consistent: bool,
    #[serde(serialize_with = "rational_string")]
    pub fraction: BigRational,
    #[serde(serialize_with = "rational_string")]
    pub limit: BigRational,
    /// `limit - fraction`.
    #[serde(serialize_with = "rational_string")]
    pub gap: BigRational,
}

fn rational_string<S: serde::Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

fn in_some_window(k: u64, prime: u64, depth: u64) -> bool {
    let mut scale = 1u64;
    while scale.saturating_mul(depth) < k {
        if k <= scale.saturating_mul(depth + 1) {
            return true;
        }
        scale = scale.saturating_mul(prime);
    }
    false
}

/// Share of `[1, p'^A]` covered by the windows `(p'^a d, p'^a (d+1)]`.
pub fn window_density(prime: u64, depth: u64, levels_exp: u32) -> Result<DensityReport> {
    if !is_prime(prime) {
        return Err(Error::NotPrime(prime));
    }
    if depth == 0 || prime <= depth {
        return Err(Error::InvalidArgument(format!(
            "need a prime larger than the depth, got p' = {prime}, d = {depth}"
        )));
    }
    if levels_exp == 0 {
        return Err(Error::InvalidArgument("A must be positive".into()));
    }
    let total = checked_pow(prime, levels_exp)
        .filter(|&t| t <= 1 << 32)
        .ok_or_else(|| Error::InvalidArgument("p'^A is too large to enumerate".into()))?;
    let count = (1..=total).filter(|&k| in_some_window(k, prime, depth)).count() as u64;
    let closed_form = (total - 1) / (prime - 1);
    let fraction = BigRational::new(count.into(), total.into());
    let limit = BigRational::new(BigInt::one(), (prime - 1).into());
    let gap = &limit - &fraction;
    debug_assert!(gap >= BigRational::zero());
    Ok(DensityReport {
        prime,
        depth,
        levels_exp,
        count,
        closed_form,
        consistent: count == closed_form,
        fraction,
        limit,
        gap,
    })
}

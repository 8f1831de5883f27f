//! Exact arithmetic in cyclotomic fields `Q(ζ_N)`.

mod embed;
mod number;
mod poly;
mod root;

pub use embed::ComplexApprox;
pub use number::CycNumber;
pub use poly::{cyclotomic_polynomial, CycPoly};
pub use root::RootOfUnity;

/// `ζ_N^k` in the power basis.
pub fn root_power(level: u64, k: i64) -> CycNumber {
    CycNumber::root_power(level, k)
}

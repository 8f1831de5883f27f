//! Exact evaluation of cyclotomic multiple harmonic sums
//!
//! ```text
//! h_m((n_i)_d; (ξ_i)_{d+1}) = Σ_{0<m_1<…<m_d<m} Π (ξ_{i+1}/ξ_i)^{m_i} · ξ_{d+1}^{-m} / Π m_i^{n_i}
//! ```
//!
//! in `Q(ζ_N)`, together with three independently checkable non-vanishing
//! certificates, the distribution and Galois relations they satisfy, and a
//! scanner looking for zeros at prime-power bounds.

pub mod arith;
pub mod certify;
pub mod cyclotomic;
pub mod error;
pub mod harmonic;
pub mod index_text;
pub mod relations;
pub mod report;
pub mod scan;
mod serde_util;

pub use cyclotomic::{cyclotomic_polynomial, root_power, ComplexApprox, CycNumber, CycPoly, RootOfUnity};
pub use error::{Error, Result};
pub use harmonic::{complex_mzv_truncation, mhs_fast, mhs_naive, mhs_scaled, Evaluation, MhsIndex, MzvTruncation, Weight};
pub use certify::{
    certify_all, certify_complex, certify_galois, certify_padic_window, padic_valuation_rational,
    verify_certificate, Certificate, ComplexDominanceCertificate, GaloisCertificate,
    PAdicWindowCertificate, ValueStatus, VerificationReport,
};
pub use index_text::{parse_index, render_index};

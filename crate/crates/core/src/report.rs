//! Report emission and the adjoint non-vanishing statements derived from
//! verified values at prime-power bounds.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::arith::{checked_pow, is_prime};
use crate::cyclotomic::CycNumber;
use crate::error::{Error, Result};
use crate::harmonic::Evaluation;
use crate::scan::ScanReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(Error::InvalidArgument(format!("unknown format `{other}`"))),
        }
    }
}

pub const CSV_HEADER: [&str; 9] = [
    "N",
    "m",
    "d",
    "n_list",
    "xi_list",
    "is_zero",
    "cert_kinds",
    "verified",
    "valuation_checked",
];

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join("|")
}

/// Writes `report` to `out`. Output depends only on the report contents.
pub fn write_report<W: Write>(report: &ScanReport, format: Format, out: W) -> Result<()> {
    match format {
        Format::Json => {
            let mut out = out;
            serde_json::to_writer(&mut out, report).map_err(|e| Error::Serialize(e.to_string()))?;
            out.write_all(b"\n").map_err(|e| Error::Serialize(e.to_string()))?;
            out.flush().map_err(|e| Error::Serialize(e.to_string()))
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            let csv_err = |e: csv::Error| Error::Serialize(e.to_string());
            w.write_record(CSV_HEADER).map_err(csv_err)?;
            for r in &report.records {
                let i = &r.index;
                w.write_record([
                    i.level().to_string(),
                    i.bound().to_string(),
                    i.depth().to_string(),
                    join(i.weights()),
                    join(&i.twist_exponents()),
                    r.is_zero.to_string(),
                    join(&r.certificates),
                    r.verified.to_string(),
                    r.valuation_checked.to_string(),
                ])
                .map_err(csv_err)?;
            }
            w.flush().map_err(|e| Error::Serialize(e.to_string()))
        }
    }
}

/// Writes `report` to the file at `destination`.
pub fn emit_report(report: &ScanReport, format: Format, destination: &Path) -> Result<()> {
    let io_err = |source| Error::Io {
        path: destination.to_path_buf(),
        source,
    };
    let file = File::create(destination).map_err(io_err)?;
    write_report(report, format, BufWriter::new(file)).map_err(|e| match e {
        Error::Serialize(msg) => Error::Io {
            path: destination.to_path_buf(),
            source: std::io::Error::other(msg),
        },
        other => other,
    })
}

/// A non-vanishing statement for the adjoint series at `(p, α)`, backed by
/// an exact nonzero evaluation of `h_{p^α}`.
#[derive(Clone, Debug, Serialize)]
pub struct AdjointStatement {
    pub p: u64,
    pub alpha: u32,
    pub level: u64,
    pub weights: Vec<u32>,
    /// All `d+1` twist exponents used on the harmonic-sum side.
    pub twists: Vec<u64>,
    /// `(p^α)^{Σ n_i} · h_{p^α}`.
    pub scaled_value: CycNumber,
    pub statement: String,
}

pub fn implied_adjoint_statement(
    evaluation: &Evaluation,
    p: u64,
    alpha: u32,
) -> Result<AdjointStatement> {
    let index = evaluation.index();
    if !is_prime(p) {
        return Err(Error::Refused(format!("{p} is not prime")));
    }
    if checked_pow(p, alpha) != Some(index.bound()) {
        return Err(Error::Refused(format!(
            "bound m = {} is not {p}^{alpha}",
            index.bound()
        )));
    }
    if evaluation.is_zero() {
        return Err(Error::Refused(format!(
            "h_{} is zero for this index; nothing follows",
            index.bound()
        )));
    }
    let factor = num_traits::pow(BigInt::from(index.bound()), index.weight().0 as usize);
    let scaled_value = evaluation.value().scale(&BigRational::from_integer(factor));
    let weights = index.weights().to_vec();
    let twists = index.twist_exponents();
    let list = |v: &[String]| v.join(",");
    let n_text = list(&weights.iter().map(u32::to_string).collect::<Vec<_>>());
    let xi_text = list(
        &twists[..index.depth()]
            .iter()
            .map(|e| format!("ζ_{}^{e}", index.level()))
            .collect::<Vec<_>>(),
    );
    let statement = format!(
        "Σ_l ζ^Ad_{{{p},{alpha}}}(({n_text});({xi_text}); l) = {}^{} · h_{}(...) ≠ 0, \
         hence ζ^Ad_{{{p},{alpha}}}(({n_text});({xi_text})) ≠ 0 and some l-component is nonzero",
        index.bound(),
        index.weight().0,
        index.bound(),
    );
    Ok(AdjointStatement {
        p,
        alpha,
        level: index.level(),
        weights,
        twists,
        scaled_value,
        statement,
    })
}

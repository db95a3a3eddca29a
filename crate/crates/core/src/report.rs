//! CSV and JSON report schemas. Every number is written as a decimal string
//! at the requested digit count, or as `p/q` where an exact value exists and
//! exact output was asked for.

use std::io::Write;

use rug::{Complex, Float, Rational};
use serde::Serialize;

use crate::beta::BetaParam;
use crate::betamatrix::BetaMatrix;
use crate::error::Result;
use crate::limitcase::{AsymptoticFit, PowerTrace};
use crate::numerics::{format_complex, format_float};
use crate::poly::Poly;
use crate::rootfind::RootSet;
use crate::spectra::{ClusterReport, OutlierRecord, WeylReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(crate::error::Error::InvalidParameter(format!("unknown format `{other}`"))),
        }
    }
}

pub fn write_csv<W: Write, T: Serialize>(out: W, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<W: Write, T: Serialize + ?Sized>(mut out: W, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, value)?;
    out.write_all(b"\n")?;
    Ok(())
}

fn rational_string(x: &Rational, digits: usize, exact: bool) -> String {
    if exact {
        x.to_string()
    } else {
        format_float(&Float::with_val(crate::numerics::digits_to_bits(digits as u32) + 32, x), digits)
    }
}

fn complex_string(z: &Complex, digits: usize) -> String {
    format_complex(z, digits)
}

fn float_string(x: &Float, digits: usize) -> String {
    format_float(x, digits)
}

/// Dense `B_n`, one matrix row per CSV line and no header.
pub fn write_matrix_csv<W: Write>(out: W, matrix: &BetaMatrix, digits: usize, exact: bool) -> Result<()> {
    let rows = matrix_strings(matrix, digits, exact)?;
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    for row in rows {
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

fn matrix_strings(matrix: &BetaMatrix, digits: usize, exact: bool) -> Result<Vec<Vec<String>>> {
    if matrix.beta().is_real() {
        let dense = matrix.dense_exact()?;
        Ok(dense
            .iter_rows()
            .map(|row| row.iter().map(|x| rational_string(x, digits, exact)).collect())
            .collect())
    } else {
        let dense = matrix.dense(crate::numerics::digits_to_bits(digits as u32) + 32);
        Ok(dense
            .iter_rows()
            .map(|row| row.iter().map(|z| complex_string(z, digits)).collect())
            .collect())
    }
}

#[derive(Serialize)]
pub struct MatrixJson {
    pub beta: String,
    pub n: usize,
    pub rows: Vec<Vec<String>>,
}

pub fn matrix_json(matrix: &BetaMatrix, digits: usize, exact: bool) -> Result<MatrixJson> {
    Ok(MatrixJson {
        beta: matrix.beta().to_string(),
        n: matrix.order(),
        rows: matrix_strings(matrix, digits, exact)?,
    })
}

#[derive(Serialize)]
pub struct PolyJson {
    pub degree: usize,
    /// Low → high.
    pub coeffs: Vec<String>,
    pub beta: String,
    pub exact: bool,
}

pub fn poly_json_exact(poly: &Poly<Rational>, beta: &BetaParam, digits: usize, exact_strings: bool) -> PolyJson {
    PolyJson {
        degree: poly.degree(),
        coeffs: poly.coeffs().iter().map(|c| rational_string(c, digits, exact_strings)).collect(),
        beta: beta.to_string(),
        exact: true,
    }
}

pub fn poly_json(poly: &Poly<Complex>, beta: &BetaParam, digits: usize) -> PolyJson {
    PolyJson {
        degree: poly.degree(),
        coeffs: poly.coeffs().iter().map(|c| complex_string(c, digits)).collect(),
        beta: beta.to_string(),
        exact: false,
    }
}

#[derive(Serialize)]
pub struct CoeffRow {
    pub k: usize,
    pub coeff: String,
}

#[derive(Serialize)]
pub struct RootEntry {
    pub re: String,
    pub im: String,
    pub residual: String,
}

#[derive(Serialize)]
pub struct RootJson {
    pub beta: String,
    pub n: usize,
    pub precision_bits: u32,
    pub roots: Vec<RootEntry>,
}

/// Roots in the order held by `RootSet`: by argument, then modulus.
pub fn root_entries(roots: &RootSet, digits: usize) -> Vec<RootEntry> {
    roots
        .roots
        .iter()
        .zip(&roots.residuals)
        .map(|(z, r)| RootEntry {
            re: float_string(z.real(), digits),
            im: float_string(z.imag(), digits),
            residual: float_string(r, 6),
        })
        .collect()
}

pub fn root_json(roots: &RootSet, beta: &BetaParam, digits: usize) -> RootJson {
    RootJson {
        beta: beta.to_string(),
        n: roots.len(),
        precision_bits: roots.precision_used,
        roots: root_entries(roots, digits),
    }
}

/// Plot-ready eigenvalue scatter.
#[derive(Serialize)]
pub struct ScatterRow {
    pub re: String,
    pub im: String,
}

pub fn scatter_rows(roots: &RootSet, digits: usize) -> Vec<ScatterRow> {
    roots
        .roots
        .iter()
        .map(|z| ScatterRow {
            re: float_string(z.real(), digits),
            im: float_string(z.imag(), digits),
        })
        .collect()
}

#[derive(Serialize)]
pub struct ClusterRow {
    pub n: usize,
    pub beta: String,
    pub epsilon: f64,
    pub outside_count: usize,
}

impl From<&ClusterReport> for ClusterRow {
    fn from(r: &ClusterReport) -> Self {
        ClusterRow {
            n: r.n,
            beta: r.beta.clone(),
            epsilon: r.epsilon,
            outside_count: r.outside_count,
        }
    }
}

#[derive(Serialize)]
pub struct ClusterJson {
    pub n: usize,
    pub beta: String,
    pub epsilon: f64,
    pub inside_count: usize,
    pub outside_count: usize,
    pub outside_points: Vec<ScatterRow>,
}

pub fn cluster_json(r: &ClusterReport, digits: usize) -> ClusterJson {
    ClusterJson {
        n: r.n,
        beta: r.beta.clone(),
        epsilon: r.epsilon,
        inside_count: r.inside_count,
        outside_count: r.outside_count,
        outside_points: r
            .outside_points
            .iter()
            .map(|z| ScatterRow {
                re: float_string(z.real(), digits),
                im: float_string(z.imag(), digits),
            })
            .collect(),
    }
}

#[derive(Serialize)]
pub struct OutlierRow {
    pub n: usize,
    pub large: String,
    pub small: String,
    pub err_large: String,
    pub err_small: String,
}

#[derive(Serialize)]
pub struct OutlierJson {
    pub n: usize,
    pub large: Option<String>,
    pub small: Option<String>,
    pub err_large: Option<String>,
    pub err_small: Option<String>,
    pub refined_digits: u32,
    pub diagnostic: Option<String>,
}

fn opt(x: &Option<Float>, digits: usize) -> Option<String> {
    x.as_ref().map(|v| float_string(v, digits))
}

pub fn outlier_row(r: &OutlierRecord, digits: usize) -> OutlierRow {
    OutlierRow {
        n: r.n,
        large: opt(&r.large, digits).unwrap_or_default(),
        small: opt(&r.small, digits).unwrap_or_default(),
        err_large: opt(&r.err_large, 12).unwrap_or_default(),
        err_small: opt(&r.err_small, 12).unwrap_or_default(),
    }
}

pub fn outlier_json(r: &OutlierRecord, digits: usize) -> OutlierJson {
    OutlierJson {
        n: r.n,
        large: opt(&r.large, digits),
        small: opt(&r.small, digits),
        err_large: opt(&r.err_large, 12),
        err_small: opt(&r.err_small, 12),
        refined_digits: r.refined_digits,
        diagnostic: r.diagnostic.clone(),
    }
}

#[derive(Serialize)]
pub struct WeylRow {
    pub n: usize,
    #[serde(rename = "F_id")]
    pub f_id: String,
    pub empirical: f64,
    pub reference: f64,
    pub gap: f64,
}

impl From<&WeylReport> for WeylRow {
    fn from(r: &WeylReport) -> Self {
        WeylRow {
            n: r.n,
            f_id: r.test_function.clone(),
            empirical: r.empirical_mean,
            reference: r.reference_integral,
            gap: r.gap,
        }
    }
}

#[derive(Serialize)]
pub struct SingularRow {
    pub index: usize,
    pub sigma: String,
}

pub fn singular_rows(values: &[Float], digits: usize) -> Vec<SingularRow> {
    values
        .iter()
        .enumerate()
        .map(|(i, s)| SingularRow {
            index: i + 1,
            sigma: float_string(s, digits),
        })
        .collect()
}

#[derive(Serialize)]
pub struct Table2Row {
    pub n: usize,
    pub c0_est: String,
    pub c1_est: String,
}

pub fn table2_row(fit: &AsymptoticFit, digits: usize) -> Table2Row {
    Table2Row {
        n: fit.n,
        c0_est: float_string(&fit.c0_est, digits),
        c1_est: float_string(&fit.c1_est, digits),
    }
}

#[derive(Serialize)]
pub struct FitJson {
    pub n: usize,
    pub lambda_m: String,
    pub c0_est: String,
    pub c1_est: String,
    pub iterations: usize,
}

pub fn fit_json(fit: &AsymptoticFit, digits: usize) -> FitJson {
    FitJson {
        n: fit.n,
        lambda_m: float_string(&fit.lambda_m, digits),
        c0_est: float_string(&fit.c0_est, digits),
        c1_est: float_string(&fit.c1_est, digits),
        iterations: fit.iterations,
    }
}

#[derive(Serialize)]
pub struct PowerTraceJson {
    pub n: usize,
    pub first_components: Vec<String>,
    pub ratios: Vec<String>,
    pub iterates: Vec<Vec<String>>,
}

pub fn power_trace_json(trace: &PowerTrace) -> PowerTraceJson {
    PowerTraceJson {
        n: trace.n,
        first_components: trace.first_components.iter().map(|x| x.to_string()).collect(),
        ratios: trace.ratios.iter().map(|x| x.to_string()).collect(),
        iterates: trace
            .iterates
            .iter()
            .map(|v| v.iter().map(|x| x.to_string()).collect())
            .collect(),
    }
}

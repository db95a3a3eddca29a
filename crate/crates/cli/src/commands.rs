use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use betamat::charpoly::{charpoly, charpoly_exact};
use betamat::limitcase::{lambda_max_beta1, power_method_trace};
use betamat::numerics::format_float;
use betamat::report::{
    cluster_json, fit_json, matrix_json, outlier_json, outlier_row, poly_json, poly_json_exact, power_trace_json,
    root_entries, root_json, scatter_rows, singular_rows, table2_row, write_csv, write_json, write_matrix_csv,
    ClusterRow, CoeffRow, PolyJson, WeylRow,
};
use betamat::rootfind::RootSet;
use betamat::spectra::{
    cluster_count, find_outliers, find_outliers_with, reals_c64, roots_c64, singular_values, spectrum, weyl_sum, OutlierOptions,
};
use betamat::{BetaClass, BetaMatrix, BetaParam, Error, Result, TestFunction, WeylKind};
use rayon::prelude::*;
use rug::{Float, Integer};
use serde::Serialize;

use crate::{Command, Common, OutFormat, Target};

const FIGURE_ORDERS: [usize; 4] = [50, 100, 200, 400];
const TABLE1_ORDERS: [usize; 3] = [10, 50, 100];
/// Coefficients of `(v_k)_1` as polynomials in n, highest degree first.
const TABLE1_FIRST_COMPONENTS: [&[i64]; 5] =
    [&[1, -1], &[1, -1, -1], &[1, -1, -2, 0], &[1, -1, -3, 0, 1], &[1, -1, -4, 0, 3, 1]];

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Matrix(c) => matrix(&c),
        Command::Charpoly(c) => charpoly_cmd(&c),
        Command::Eigs(c) => eigs(&c),
        Command::Cluster { common, eps } => cluster(&common, eps),
        Command::Outliers { common, eps } => outliers(&common, eps),
        Command::Singvals(c) => singvals(&c),
        Command::Weyl { common, function, kind } => weyl(&common, function.as_deref(), &kind),
        Command::Beta1 { common, trace } => beta1(&common, trace),
        Command::Reproduce { target, out, format } => reproduce(target, &out, format),
    }
}

impl Common {
    fn beta(&self) -> Result<BetaParam> {
        let text = self.beta.as_deref().ok_or_else(|| Error::InvalidParameter("--beta is required".into()))?;
        BetaParam::parse(text)
    }

    fn digits(&self) -> usize {
        self.digits as usize
    }

    fn orders(&self) -> Result<&[usize]> {
        if self.n.is_empty() {
            return Err(Error::InvalidParameter("--n needs at least one order".into()));
        }
        Ok(&self.n)
    }
}

fn open(path: Option<&Path>) -> Result<Box<dyn Write>> {
    match path {
        None => Ok(Box::new(BufWriter::new(io::stdout().lock()))),
        Some(p) => {
            if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(parent)?;
            }
            Ok(Box::new(BufWriter::new(File::create(p)?)))
        }
    }
}

fn extension(format: OutFormat) -> &'static str {
    match format {
        OutFormat::Csv => "csv",
        OutFormat::Json => "json",
    }
}

/// Runs `compute` for every order in parallel, keeping input order so the
/// first failing order decides the error.
fn per_order<T: Send>(orders: &[usize], compute: impl Fn(usize) -> Result<T> + Sync) -> Result<Vec<T>> {
    let results: Vec<Result<T>> = orders.par_iter().map(|&n| compute(n)).collect();
    results.into_iter().collect()
}

/// One output per order: a single order goes to `--out` (or stdout), several
/// go to `<out>/<stem>_n<n>.<ext>`.
fn emit_each<T>(
    c: &Common,
    stem: &str,
    items: &[(usize, T)],
    write: impl Fn(&mut dyn Write, &T) -> Result<()>,
) -> Result<()> {
    if let [(_, item)] = items {
        let mut out = open(c.out.as_deref())?;
        write(&mut out, item)?;
        out.flush()?;
        return Ok(());
    }
    let dir = c
        .out
        .as_deref()
        .ok_or_else(|| Error::InvalidParameter("several orders need --out DIR".into()))?;
    fs::create_dir_all(dir)?;
    for (n, item) in items {
        let path = dir.join(format!("{stem}_n{n}.{}", extension(c.format)));
        let mut out = open(Some(&path))?;
        write(&mut out, item)?;
        out.flush()?;
    }
    Ok(())
}

fn emit_rows<R: Serialize>(c: &Common, rows: &[R]) -> Result<()> {
    let mut out = open(c.out.as_deref())?;
    match c.format {
        OutFormat::Csv => write_csv(&mut out, rows)?,
        OutFormat::Json => write_json(&mut out, rows)?,
    }
    out.flush()?;
    Ok(())
}

fn matrix(c: &Common) -> Result<()> {
    let beta = c.beta()?;
    let items = per_order(c.orders()?, |n| Ok((n, BetaMatrix::new(beta.clone(), n)?)))?;
    emit_each(c, "matrix", &items, |out, m| match c.format {
        OutFormat::Csv => write_matrix_csv(out, m, c.digits(), c.exact),
        OutFormat::Json => write_json(out, &matrix_json(m, c.digits(), c.exact)?),
    })
}

fn charpoly_cmd(c: &Common) -> Result<()> {
    let beta = c.beta()?;
    if c.exact && !beta.is_real() {
        return Err(Error::InvalidParameter("--exact needs a real beta".into()));
    }
    let items = per_order(c.orders()?, |n| {
        let json: PolyJson = if beta.is_real() {
            poly_json_exact(&charpoly_exact(&beta, n)?, &beta, c.digits(), c.exact)
        } else {
            poly_json(&charpoly(&beta, n, c.prec)?, &beta, c.digits())
        };
        Ok((n, json))
    })?;
    emit_each(c, "charpoly", &items, |out, p| match c.format {
        OutFormat::Csv => {
            let rows: Vec<CoeffRow> = p
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, coeff)| CoeffRow { k, coeff: coeff.clone() })
                .collect();
            write_csv(out, &rows)
        }
        OutFormat::Json => write_json(out, p),
    })
}

fn eigs(c: &Common) -> Result<()> {
    let beta = c.beta()?;
    let items = per_order(c.orders()?, |n| Ok((n, spectrum(&beta, n, c.digits)?)))?;
    emit_each(c, "eigs", &items, |out, set| match c.format {
        OutFormat::Csv => write_csv(out, &root_entries(set, c.digits())),
        OutFormat::Json => write_json(out, &root_json(set, &beta, c.digits())),
    })
}

fn cluster(c: &Common, eps: f64) -> Result<()> {
    let beta = c.beta()?;
    beta.require("cluster counting", &[BetaClass::RealGt1])?;
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidParameter(format!("--eps must be positive, got {eps}")));
    }
    let reports = per_order(c.orders()?, |n| cluster_count(&spectrum(&beta, n, c.digits)?, &beta, eps))?;
    match c.format {
        OutFormat::Csv => emit_rows(c, &reports.iter().map(ClusterRow::from).collect::<Vec<_>>()),
        OutFormat::Json => emit_rows(c, &reports.iter().map(|r| cluster_json(r, c.digits())).collect::<Vec<_>>()),
    }
}

fn outliers(c: &Common, eps: f64) -> Result<()> {
    let beta = c.beta()?;
    let options = OutlierOptions {
        epsilon: eps,
        ..OutlierOptions::default()
    };
    let records = per_order(c.orders()?, |n| find_outliers_with(&beta, n, c.digits, &options))?;
    match c.format {
        OutFormat::Csv => emit_rows(c, &records.iter().map(|r| outlier_row(r, c.digits())).collect::<Vec<_>>()),
        OutFormat::Json => emit_rows(c, &records.iter().map(|r| outlier_json(r, c.digits())).collect::<Vec<_>>()),
    }
}

#[derive(Serialize)]
struct SingularJson {
    beta: String,
    n: usize,
    precision_bits: u32,
    singular_values: Vec<String>,
}

fn singvals(c: &Common) -> Result<()> {
    let beta = c.beta()?;
    let items = per_order(c.orders()?, |n| Ok((n, singular_values(&beta, n, c.prec)?)))?;
    emit_each(c, "singvals", &items, |out, values| match c.format {
        OutFormat::Csv => write_csv(out, &singular_rows(values, c.digits())),
        OutFormat::Json => write_json(
            out,
            &SingularJson {
                beta: beta.to_string(),
                n: values.len(),
                precision_bits: c.prec,
                singular_values: values.iter().map(|s| format_float(s, c.digits())).collect(),
            },
        ),
    })
}

fn weyl(c: &Common, function: Option<&str>, kind: &str) -> Result<()> {
    let beta = c.beta()?;
    let kind: WeylKind = kind.parse()?;
    let functions = match function {
        Some(id) => vec![id.parse::<TestFunction>()?],
        None => TestFunction::builtin(),
    };
    let per_n = per_order(c.orders()?, |n| {
        let values = match kind {
            WeylKind::Eigen => roots_c64(&spectrum(&beta, n, c.digits)?),
            WeylKind::Singular => reals_c64(&singular_values(&beta, n, c.prec)?),
        };
        functions.iter().map(|f| weyl_sum(&values, f, kind)).collect::<Result<Vec<_>>>()
    })?;
    let reports: Vec<_> = per_n.into_iter().flatten().collect();
    match c.format {
        OutFormat::Csv => emit_rows(c, &reports.iter().map(WeylRow::from).collect::<Vec<_>>()),
        OutFormat::Json => emit_rows(c, &reports),
    }
}

#[derive(Serialize)]
struct TraceRow {
    n: usize,
    k: usize,
    first_component: String,
    ratio: String,
}

fn beta1(c: &Common, trace: Option<usize>) -> Result<()> {
    let beta = BetaParam::parse(c.beta.as_deref().unwrap_or("1"))?;
    beta.require("beta1", &[BetaClass::RealEq1])?;
    let orders = c.orders()?;
    if let Some(k) = trace {
        let traces = per_order(orders, |n| power_method_trace(n, k))?;
        return match c.format {
            OutFormat::Json => emit_rows(c, &traces.iter().map(power_trace_json).collect::<Vec<_>>()),
            OutFormat::Csv => {
                let rows: Vec<TraceRow> = traces
                    .iter()
                    .flat_map(|t| {
                        t.first_components.iter().enumerate().map(move |(k, v)| TraceRow {
                            n: t.n,
                            k,
                            first_component: v.to_string(),
                            ratio: t.ratios.get(k).map(|r| r.to_string()).unwrap_or_default(),
                        })
                    })
                    .collect();
                emit_rows(c, &rows)
            }
        };
    }
    let fits = per_order(orders, |n| lambda_max_beta1(n, c.digits.max(30)))?;
    match c.format {
        OutFormat::Csv => emit_rows(c, &fits.iter().map(|f| table2_row(f, c.digits())).collect::<Vec<_>>()),
        OutFormat::Json => emit_rows(c, &fits.iter().map(|f| fit_json(f, c.digits())).collect::<Vec<_>>()),
    }
}

fn write_table<R: Serialize + ?Sized>(path: PathBuf, format: OutFormat, rows: &R, csv_rows: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    let mut out = open(Some(&path))?;
    match format {
        OutFormat::Csv => csv_rows(&mut out)?,
        OutFormat::Json => write_json(&mut out, rows)?,
    }
    out.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct DigitsRow {
    n: usize,
    #[serde(rename = "lambda_M")]
    lambda_m: String,
}

#[derive(Serialize)]
struct Table1Row {
    n: usize,
    k: usize,
    v_k_1: String,
    expected: String,
    matches: bool,
    r_k: String,
}

fn poly_in_n(n: usize, coeffs: &[i64]) -> Integer {
    coeffs.iter().fold(Integer::new(), |acc, c| acc * n as u64 + *c)
}

fn reproduce(target: Target, dir: &Path, format: OutFormat) -> Result<()> {
    fs::create_dir_all(dir)?;
    let ext = extension(format);
    match target {
        Target::Fig1 | Target::Fig2 | Target::Fig3 => {
            let (stem, beta) = match target {
                Target::Fig1 => ("fig1", "5"),
                Target::Fig2 => ("fig2", "3"),
                _ => ("fig3", "4/3"),
            };
            let beta = BetaParam::parse(beta)?;
            let sets: Vec<RootSet> = per_order(&FIGURE_ORDERS, |n| spectrum(&beta, n, 20))?;
            for (n, set) in FIGURE_ORDERS.iter().zip(&sets) {
                let path = dir.join(format!("{stem}_n{n}.{ext}"));
                write_table(path, format, &root_json(set, &beta, 17), |out| write_csv(out, &scatter_rows(set, 17)))?;
            }
            Ok(())
        }
        Target::OutlierDigits => {
            let beta = BetaParam::parse("4/3")?;
            let records = per_order(&FIGURE_ORDERS, |n| find_outliers(&beta, n, 50))?;
            let rows = records
                .iter()
                .map(|r| {
                    let large = r.large.as_ref().ok_or_else(|| {
                        Error::Inconsistency(format!("no outlier near 3 at n = {}", r.n))
                    })?;
                    Ok(DigitsRow {
                        n: r.n,
                        lambda_m: format_float(large, 51),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            write_table(dir.join(format!("outlier_digits.{ext}")), format, &rows, |out| write_csv(out, &rows))
        }
        Target::Table1 => {
            let traces = per_order(&TABLE1_ORDERS, |n| power_method_trace(n, TABLE1_FIRST_COMPONENTS.len() + 1))?;
            let mut rows = Vec::new();
            for t in &traces {
                for (i, coeffs) in TABLE1_FIRST_COMPONENTS.iter().enumerate() {
                    let k = i + 1;
                    let expected = poly_in_n(t.n, coeffs);
                    let r_k = Float::with_val(128, &t.ratios[k]);
                    rows.push(Table1Row {
                        n: t.n,
                        k,
                        v_k_1: t.first_components[k].to_string(),
                        expected: expected.to_string(),
                        matches: t.first_components[k] == expected,
                        r_k: format_float(&r_k, 20),
                    });
                }
            }
            write_table(dir.join(format!("table1.{ext}")), format, &rows, |out| write_csv(out, &rows))?;
            if rows.iter().all(|r| r.matches) {
                Ok(())
            } else {
                Err(Error::Inconsistency("power iterates disagree with the tabulated polynomials".into()))
            }
        }
        Target::Table2 => {
            let fits = per_order(&FIGURE_ORDERS, |n| lambda_max_beta1(n, 30))?;
            let rows: Vec<_> = fits.iter().map(|f| table2_row(f, 11)).collect();
            write_table(dir.join(format!("table2.{ext}")), format, &rows, |out| write_csv(out, &rows))
        }
    }
}

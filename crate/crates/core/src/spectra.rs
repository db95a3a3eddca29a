//! Analytics on spectra of `B_n`: clustering around the unit circle, the
//! two real outliers for `β ∈ (1, 2)`, singular values, Weyl sums and the
//! quasi-normality and conditioning metrics.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rug::{Complex, Float, Rational};
use serde::Serialize;

use crate::beta::{BetaClass, BetaParam};
use crate::betamatrix::{BetaMatrix, DenseMatrix};
use crate::charpoly::ClosedForm;
use crate::error::{Error, Result};
use crate::linalg::hermitian_eigenvalues;
use crate::numerics::{abs, bits_to_digits, digits_to_bits, to_c64};
use crate::rootfind::{refine_real_root, solve_all, RootSet};

/// Default annulus half-width for outlier detection.
pub const DEFAULT_EPSILON: f64 = 0.05;

/// Eigenvalues of `B_n`, as roots of the closed-form characteristic polynomial.
pub fn spectrum(beta: &BetaParam, n: usize, target_digits: u32) -> Result<RootSet> {
    solve_all(&ClosedForm::new(beta, n)?, target_digits)
}

#[derive(Clone, Debug)]
pub struct ClusterReport {
    pub beta: String,
    pub n: usize,
    pub epsilon: f64,
    pub inside_count: usize,
    pub outside_count: usize,
    pub outside_points: Vec<Complex>,
}

fn outside_annulus(z: &Complex, epsilon: f64) -> bool {
    let dist = Float::with_val(z.prec().0, abs(z) - 1u32).abs();
    dist > epsilon
}

/// Partitions `roots` by the annulus test `||z| − 1| ≤ ε`.
pub fn cluster_count(roots: &RootSet, beta: &BetaParam, epsilon: f64) -> Result<ClusterReport> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidParameter(format!("epsilon must be positive, got {epsilon}")));
    }
    let outside_points: Vec<Complex> = roots.roots.iter().filter(|z| outside_annulus(z, epsilon)).cloned().collect();
    Ok(ClusterReport {
        beta: beta.to_string(),
        n: roots.len(),
        epsilon,
        inside_count: roots.len() - outside_points.len(),
        outside_count: outside_points.len(),
        outside_points,
    })
}

#[derive(Clone, Debug)]
pub struct OutlierRecord {
    pub n: usize,
    /// Root near `β − 1`.
    pub small: Option<Float>,
    /// Root near `1/(β − 1)`.
    pub large: Option<Float>,
    /// `|small − (β − 1)|`.
    pub err_small: Option<Float>,
    /// `|large − 1/(β − 1)|`.
    pub err_large: Option<Float>,
    /// Digits used in the final Newton refinement.
    pub refined_digits: u32,
    /// Why the outliers are absent, when they are.
    pub diagnostic: Option<String>,
}

#[derive(Clone, Debug)]
pub struct OutlierOptions {
    pub epsilon: f64,
    /// Digits for the initial simultaneous solve that locates candidates.
    pub locate_digits: u32,
    /// Upper limit for the automatic digit increase that resolves the
    /// distance to the limits.
    pub max_digits: u32,
}

impl Default for OutlierOptions {
    fn default() -> Self {
        OutlierOptions {
            epsilon: DEFAULT_EPSILON,
            locate_digits: 24,
            max_digits: 4096,
        }
    }
}

/// The two real positive outliers of `p_n` for `β ∈ (1, 2)`.
pub fn find_outliers(beta: &BetaParam, n: usize, target_digits: u32) -> Result<OutlierRecord> {
    find_outliers_with(beta, n, target_digits, &OutlierOptions::default())
}

/// Locates the annulus outliers with a moderate-precision solve, then
/// sharpens each by Newton on the exact polynomial. The refinement digits
/// grow past `target_digits` when needed so that the distance to each limit
/// is resolved to at least ten significant digits.
pub fn find_outliers_with(
    beta: &BetaParam,
    n: usize,
    target_digits: u32,
    options: &OutlierOptions,
) -> Result<OutlierRecord> {
    beta.require("outlier tracking", &[BetaClass::RealGt1])?;
    if *beta.re() >= 2 {
        return Err(Error::InvalidParameter(format!(
            "outlier tracking needs beta in (1, 2), got {beta}"
        )));
    }
    if n < 2 {
        return Err(Error::InvalidOrder {
            n,
            reason: "outlier tracking needs n >= 2",
        });
    }
    let form = ClosedForm::new(beta, n)?;
    let roots = solve_all(&form, options.locate_digits)?;
    let report = cluster_count(&roots, beta, options.epsilon)?;
    let mut record = OutlierRecord {
        n,
        small: None,
        large: None,
        err_small: None,
        err_large: None,
        refined_digits: target_digits,
        diagnostic: None,
    };
    if report.outside_count > 2 {
        return Err(Error::Inconsistency(format!(
            "{} eigenvalues outside the annulus at n = {n}, at most two expected",
            report.outside_count
        )));
    }
    let imag_tol = crate::numerics::ten_pow_neg(options.locate_digits / 2, 64);
    let real_positive: Vec<Float> = report
        .outside_points
        .iter()
        .filter(|z| Float::with_val(64, z.imag().abs_ref()) < imag_tol && z.real().is_sign_positive())
        .map(|z| z.real().clone())
        .collect();
    if real_positive.len() != 2 {
        record.diagnostic = Some(format!(
            "{} annulus outliers, {} real positive; n too small for separation",
            report.outside_count,
            real_positive.len()
        ));
        return Ok(record);
    }
    let (lo, hi) = if real_positive[0] < real_positive[1] {
        (&real_positive[0], &real_positive[1])
    } else {
        (&real_positive[1], &real_positive[0])
    };
    let poly = form.exact().expect("real beta has an exact polynomial");
    let b = beta.re();
    let small_limit = Rational::from(b - 1u32);
    let large_limit = Rational::from(small_limit.recip_ref());

    let mut digits = target_digits.max(options.locate_digits);
    loop {
        let small = refine_real_root(poly, lo, digits)?;
        let large = refine_real_root(poly, hi, digits)?;
        for (x, seed) in [(&small, lo), (&large, hi)] {
            let moved = Float::with_val(64, x - seed).abs();
            if moved > 1e-6 * seed.to_f64().abs().max(1.0) {
                return Err(Error::Inconsistency(format!(
                    "Newton moved an outlier seed {} to a different root",
                    seed.to_f64()
                )));
            }
        }
        let bits = digits_to_bits(digits) + 32;
        let err_small = Float::with_val(bits, &small - &small_limit).abs();
        let err_large = Float::with_val(bits, &large - &large_limit).abs();
        let floor = crate::numerics::ten_pow_neg(digits.saturating_sub(10), bits);
        let resolved = err_small > floor && err_large > floor;
        if resolved || digits >= options.max_digits {
            if !resolved {
                record.diagnostic = Some(format!("distance to a limit is below 1e-{digits}"));
            }
            record.small = Some(small);
            record.large = Some(large);
            record.err_small = Some(err_small);
            record.err_large = Some(err_large);
            record.refined_digits = digits;
            return Ok(record);
        }
        digits = (digits * 2).min(options.max_digits);
    }
}

fn conj_dot(x: &[Complex], y: &[Complex], bits: u32) -> Complex {
    let mut acc = Complex::with_val(bits, 0);
    for (a, b) in x.iter().zip(y) {
        acc += Complex::with_val(bits, a.conj_ref()) * b;
    }
    acc
}

fn norm(x: &[Complex], bits: u32) -> Float {
    let mut acc = Float::with_val(bits, 0);
    for a in x {
        acc += Float::with_val(bits, a.norm_ref());
    }
    acc.sqrt()
}

/// Singular values of `B_n`, nonincreasing.
///
/// With `u = v − e_1` and `a = Tᵀu`,
/// `B*B − I = −e_n e_nᵀ + a eᵀ + e a* + |u|² e eᵀ`, which has rank at most
/// three. The Hermitian eigenproblem is compressed onto an orthonormal basis
/// of `span{e_n, e, a}` and solved there; every other singular value is 1.
pub fn singular_values(beta: &BetaParam, n: usize, bits: u32) -> Result<Vec<Float>> {
    crate::numerics::Precision::new(bits)?;
    let matrix = BetaMatrix::new(beta.clone(), n)?;
    let work = bits + 64;
    let u = matrix.correction(work);
    let mut a: Vec<Complex> = u[1..].to_vec();
    a.push(Complex::with_val(work, 0));
    let u_sq = Float::with_val(work, norm(&u, work).square_ref());
    let ones = vec![Complex::with_val(work, 1); n];
    let mut e_last = vec![Complex::with_val(work, 0); n];
    e_last[n - 1] = Complex::with_val(work, 1);

    let drop_below = Float::with_val(work, Float::i_exp(1, -(bits as i32 / 2)));
    let mut basis: Vec<Vec<Complex>> = Vec::new();
    for candidate in [&e_last, &ones, &a] {
        let original = norm(candidate, work);
        if original.is_zero() {
            continue;
        }
        let mut x = candidate.clone();
        for _ in 0..2 {
            for q in &basis {
                let c = conj_dot(q, &x, work);
                for (xi, qi) in x.iter_mut().zip(q) {
                    *xi -= Complex::with_val(work, &c * qi);
                }
            }
        }
        let len = norm(&x, work);
        if len <= Float::with_val(work, &original * &drop_below) {
            continue;
        }
        for xi in &mut x {
            *xi /= &len;
        }
        basis.push(x);
    }

    let apply_h = |x: &[Complex]| -> Vec<Complex> {
        let sum_x = x.iter().fold(Complex::with_val(work, 0), |acc, xi| acc + xi);
        let a_dot_x = conj_dot(&a, x, work);
        let e_coeff = Complex::with_val(work, &sum_x * &u_sq) + &a_dot_x;
        let mut out: Vec<Complex> = a.iter().map(|ai| Complex::with_val(work, ai * &sum_x) + &e_coeff).collect();
        out[n - 1] -= &x[n - 1];
        out
    };
    let images: Vec<Vec<Complex>> = basis.iter().map(|q| apply_h(q)).collect();
    let k = basis.len();
    let compressed = DenseMatrix::from_fn(k, k, |i, j| conj_dot(&basis[i], &images[j], work));
    let mu = hermitian_eigenvalues(&compressed, work)?;

    let mut sigma: Vec<Float> = mu
        .into_iter()
        .map(|m| {
            let s = Float::with_val(work, m + 1u32);
            let s = if s.is_sign_negative() { Float::with_val(work, 0) } else { s };
            Float::with_val(bits, s.sqrt_ref())
        })
        .collect();
    sigma.extend((0..n - k).map(|_| Float::with_val(bits, 1)));
    sigma.sort_by(|x, y| y.total_cmp(x));
    Ok(sigma)
}

/// Singular values from a dense Jacobi eigensolve of `B_n* B_n`; `O(n³)`
/// per sweep, meant as a cross-check at small orders.
pub fn dense_singular_values(beta: &BetaParam, n: usize, bits: u32) -> Result<Vec<Float>> {
    crate::numerics::Precision::new(bits)?;
    let work = bits + 32;
    let b = BetaMatrix::new(beta.clone(), n)?.dense(work);
    let gram = DenseMatrix::from_fn(n, n, |i, j| {
        let mut acc = Complex::with_val(work, 0);
        for k in 0..n {
            acc += Complex::with_val(work, b[(k, i)].conj_ref()) * &b[(k, j)];
        }
        acc
    });
    let mut sigma: Vec<Float> = hermitian_eigenvalues(&gram, work)?
        .into_iter()
        .map(|m| {
            let m = if m.is_sign_negative() { Float::with_val(work, 0) } else { m };
            Float::with_val(bits, m.sqrt_ref())
        })
        .collect();
    sigma.sort_by(|x, y| y.total_cmp(x));
    Ok(sigma)
}

/// Built-in continuous, compactly supported (or bounded) test functions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TestFunction {
    /// `F ≡ 1`.
    Constant,
    /// `max(0, 1 − ||z| − 1| / 0.5)`.
    RadialBump,
    /// Indicator of the arc `|arg z − center| ≤ half_width`, with linear
    /// edges of width `ramp`, times the radial bump.
    AngularWindow { center: f64, half_width: f64, ramp: f64 },
    /// `Re z` on `|z| ≤ 2`, fading linearly to 0 at `|z| = 3`.
    ReMoment,
    /// `Im z` with the same window.
    ImMoment,
}

impl TestFunction {
    pub const IDS: [&'static str; 5] = ["constant", "radial_bump", "angular_window", "re_moment", "im_moment"];

    pub fn builtin() -> Vec<TestFunction> {
        Self::IDS.iter().map(|id| id.parse().expect("built-in id")).collect()
    }

    pub fn id(&self) -> &'static str {
        match self {
            TestFunction::Constant => "constant",
            TestFunction::RadialBump => "radial_bump",
            TestFunction::AngularWindow { .. } => "angular_window",
            TestFunction::ReMoment => "re_moment",
            TestFunction::ImMoment => "im_moment",
        }
    }

    pub fn eval(&self, z: Complex64) -> f64 {
        let r = z.norm();
        let bump = (1.0 - (r - 1.0).abs() / 0.5).max(0.0);
        let window = (3.0 - r).clamp(0.0, 1.0);
        match *self {
            TestFunction::Constant => 1.0,
            TestFunction::RadialBump => bump,
            TestFunction::AngularWindow { center, half_width, ramp } => {
                let d = (z.arg() - center + PI).rem_euclid(2.0 * PI) - PI;
                let edge = ((half_width + ramp / 2.0 - d.abs()) / ramp).clamp(0.0, 1.0);
                edge * bump
            }
            TestFunction::ReMoment => z.re * window,
            TestFunction::ImMoment => z.im * window,
        }
    }
}

impl FromStr for TestFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "constant" => TestFunction::Constant,
            "radial_bump" => TestFunction::RadialBump,
            "angular_window" => TestFunction::AngularWindow {
                center: 0.0,
                half_width: PI / 4.0,
                ramp: 0.2,
            },
            "re_moment" => TestFunction::ReMoment,
            "im_moment" => TestFunction::ImMoment,
            other => return Err(Error::UnknownTestFunction(other.to_string())),
        })
    }
}

impl fmt::Display for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WeylKind {
    Eigen,
    Singular,
}

impl FromStr for WeylKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "eigen" => Ok(WeylKind::Eigen),
            "singular" => Ok(WeylKind::Singular),
            other => Err(Error::InvalidParameter(format!("unknown Weyl kind `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WeylReport {
    pub test_function: String,
    pub kind: WeylKind,
    pub n: usize,
    pub empirical_mean: f64,
    pub reference_integral: f64,
    pub gap: f64,
}

/// Trapezoid nodes on `[−π, π)` for the eigenvalue reference integral.
pub const QUADRATURE_NODES: usize = 4096;

/// `(1/2π) ∫ F(e^{iθ}) dθ` by the periodic trapezoid rule.
pub fn circle_mean(f: &TestFunction) -> f64 {
    let m = QUADRATURE_NODES as f64;
    (0..QUADRATURE_NODES)
        .map(|k| f.eval(Complex64::from_polar(1.0, -PI + 2.0 * PI * k as f64 / m)))
        .sum::<f64>()
        / m
}

/// Empirical mean of `F` over `values` against the symbol's reference:
/// the circle mean for eigenvalues, `F(1)` for singular values.
pub fn weyl_sum(values: &[Complex64], f: &TestFunction, kind: WeylKind) -> Result<WeylReport> {
    if values.is_empty() {
        return Err(Error::InvalidParameter("Weyl sum over an empty set".into()));
    }
    let empirical_mean = values.iter().map(|&z| f.eval(z)).sum::<f64>() / values.len() as f64;
    let reference_integral = match kind {
        WeylKind::Eigen => circle_mean(f),
        WeylKind::Singular => f.eval(Complex64::new(1.0, 0.0)),
    };
    Ok(WeylReport {
        test_function: f.id().to_string(),
        kind,
        n: values.len(),
        empirical_mean,
        reference_integral,
        gap: (empirical_mean - reference_integral).abs(),
    })
}

pub fn roots_c64(roots: &RootSet) -> Vec<Complex64> {
    roots.roots.iter().map(to_c64).collect()
}

pub fn reals_c64(values: &[Float]) -> Vec<Complex64> {
    values.iter().map(|x| Complex64::new(x.to_f64(), 0.0)).collect()
}

/// `(1/n) Σ |σ_i − |λ_i||` with both lists sorted nonincreasing.
pub fn quasi_normality_gap_from(eigenvalues: &RootSet, singular: &[Float]) -> Result<f64> {
    if eigenvalues.len() != singular.len() {
        return Err(Error::InvalidParameter("eigenvalue and singular value counts differ".into()));
    }
    let mut moduli = eigenvalues.moduli();
    moduli.sort_by(|x, y| y.total_cmp(x));
    let total: f64 = moduli
        .iter()
        .zip(singular)
        .map(|(m, s)| Float::with_val(m.prec(), s - m).abs().to_f64())
        .sum();
    Ok(total / singular.len() as f64)
}

pub fn quasi_normality_gap(beta: &BetaParam, n: usize, bits: u32) -> Result<f64> {
    if !beta.modulus_at_least_one() {
        return Err(Error::InvalidParameter(format!(
            "quasi-normality gap needs |beta| >= 1, got {beta}"
        )));
    }
    let digits = bits_to_digits(bits).saturating_sub(10).clamp(15, 30);
    let eig = spectrum(beta, n, digits)?;
    let sigma = singular_values(beta, n, bits)?;
    quasi_normality_gap_from(&eig, &sigma)
}

#[derive(Clone, Debug)]
pub struct ConditionCheck {
    pub kappa: Float,
    pub bound: Float,
    pub satisfied: bool,
}

/// Relative slack allowed below the conditioning bound.
pub const CONDITION_TOLERANCE: f64 = 0.02;

/// Spectral condition number against `max{β − 1, 1/(β − 1)}²`.
pub fn condition_bound_check(beta: &BetaParam, n: usize, bits: u32) -> Result<ConditionCheck> {
    beta.require("conditioning bound", &[BetaClass::RealGt1])?;
    let sigma = singular_values(beta, n, bits)?;
    let (max, min) = (&sigma[0], &sigma[sigma.len() - 1]);
    if min.is_zero() {
        return Err(Error::Singular(format!("B_{n} has a zero singular value")));
    }
    let kappa = Float::with_val(bits, max / min);
    let gap = Rational::from(beta.re() - 1u32);
    let base = if gap >= 1 { gap } else { Rational::from(gap.recip_ref()) };
    let bound = Float::with_val(bits, Rational::from(base.square_ref()));
    let satisfied = kappa >= Float::with_val(bits, &bound * (1.0 - CONDITION_TOLERANCE));
    Ok(ConditionCheck { kappa, bound, satisfied })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootfind::matching_distance;

    fn beta(s: &str) -> BetaParam {
        BetaParam::parse(s).unwrap()
    }

    #[test]
    fn order_one_cluster() {
        let b = beta("5");
        let roots = spectrum(&b, 1, 20).unwrap();
        let report = cluster_count(&roots, &b, 0.1).unwrap();
        assert_eq!(report.outside_count, 1);
        assert_eq!(cluster_count(&roots, &b, 0.25).unwrap().outside_count, 0);
        assert!(cluster_count(&roots, &b, 0.0).is_err());
    }

    #[test]
    fn cluster_counts_conjugation_invariant() {
        let b = beta("3/2");
        let roots = spectrum(&b, 40, 20).unwrap();
        let mut conj = roots.clone();
        for z in &mut conj.roots {
            *z = Complex::with_val(z.prec(), z.conj_ref());
        }
        for eps in [0.02, 0.05, 0.1] {
            let a = cluster_count(&roots, &b, eps).unwrap();
            assert_eq!(a.outside_count, cluster_count(&conj, &b, eps).unwrap().outside_count);
            assert_eq!(a.inside_count + a.outside_count, 40);
        }
    }

    #[test]
    fn outliers_at_small_order() {
        let b = beta("4/3");
        let rec = find_outliers(&b, 50, 40).unwrap();
        let small = rec.small.unwrap();
        assert!(Float::with_val(64, &small - Rational::from((1, 3))).abs() < 1e-4);
        let large = rec.large.unwrap();
        assert!(Float::with_val(64, &large - 3u32).abs() < 1e-5);
        assert!(rec.err_small.unwrap() > 0);
    }

    #[test]
    fn outliers_absent_when_too_small() {
        let rec = find_outliers(&beta("3/2"), 2, 20).unwrap();
        assert!(rec.large.is_none());
        assert!(rec.diagnostic.is_some());
        assert!(find_outliers(&beta("3"), 20, 20).is_err());
        assert!(find_outliers(&beta("1"), 20, 20).is_err());
    }

    #[test]
    fn singular_values_of_order_one() {
        let s = singular_values(&beta("2"), 1, 128).unwrap();
        assert_eq!(s.len(), 1);
        assert!(Float::with_val(128, &s[0] - 0.5).abs() < 1e-35);
    }

    #[test]
    fn compressed_matches_dense() {
        for (b, n) in [("4/3", 12), ("3", 9), ("1", 7), ("2-i", 6), ("-5/2", 10)] {
            let fast = singular_values(&beta(b), n, 160).unwrap();
            let slow = dense_singular_values(&beta(b), n, 160).unwrap();
            for (x, y) in fast.iter().zip(&slow) {
                // compare squares: the zero singular value at β = 1 is a square root
                let d = Float::with_val(160, x.square_ref()) - Float::with_val(160, y.square_ref());
                assert!(d.abs() < 1e-40, "beta={b} n={n}");
            }
        }
    }

    #[test]
    fn three_free_singular_values() {
        // Interlacing fixes σ_2..σ_{n-2}; the other three move.
        for b in ["4/3", "3"] {
            let s = singular_values(&beta(b), 60, 128).unwrap();
            let off = s.iter().filter(|x| Float::with_val(128, *x - 1u32).abs() > 1e-8).count();
            assert_eq!(off, 3, "beta={b}");
        }
    }

    #[test]
    fn singular_values_bracket_the_outliers() {
        let b = beta("4/3");
        let s = singular_values(&b, 50, 128).unwrap();
        let m = spectrum(&b, 50, 20).unwrap().moduli();
        let lmax = m.iter().max_by(|x, y| x.total_cmp(y)).unwrap();
        let lmin = m.iter().min_by(|x, y| x.total_cmp(y)).unwrap();
        assert!(s[0] >= *lmax);
        assert!(s[49] <= *lmin);
    }

    #[test]
    fn weyl_constant_and_trace() {
        let b = beta("3");
        let n = 30;
        let roots = spectrum(&b, n, 20).unwrap();
        let vals = roots_c64(&roots);
        let c = weyl_sum(&vals, &TestFunction::Constant, WeylKind::Eigen).unwrap();
        assert!(c.gap < 1e-12);
        let re = weyl_sum(&vals, &TestFunction::ReMoment, WeylKind::Eigen).unwrap();
        let trace = BetaMatrix::new(b, n).unwrap().trace_exact().unwrap().to_f64() / n as f64;
        assert!((re.empirical_mean - trace).abs() < 1e-12);
        assert!(re.reference_integral.abs() < 1e-12);
        assert!(weyl_sum(&[], &TestFunction::Constant, WeylKind::Eigen).is_err());
        assert!("nope".parse::<TestFunction>().is_err());
    }

    #[test]
    fn circle_means() {
        assert!((circle_mean(&TestFunction::RadialBump) - 1.0).abs() < 1e-12);
        let arc = TestFunction::AngularWindow {
            center: 0.0,
            half_width: PI / 4.0,
            ramp: 0.2,
        };
        // A symmetric linear edge integrates to the sharp arc length.
        assert!((circle_mean(&arc) - 0.25).abs() < 1e-6);
        assert!(circle_mean(&TestFunction::ImMoment).abs() < 1e-12);
    }

    #[test]
    fn radial_bump_gap_shrinks() {
        let b = beta("3");
        let gaps: Vec<f64> = [25, 50, 100]
            .iter()
            .map(|&n| {
                let r = spectrum(&b, n, 20).unwrap();
                weyl_sum(&roots_c64(&r), &TestFunction::RadialBump, WeylKind::Eigen).unwrap().gap
            })
            .collect();
        assert!(gaps[0] > gaps[1] && gaps[1] > gaps[2], "{gaps:?}");
    }

    #[test]
    fn quasi_normality_of_order_one() {
        let g = quasi_normality_gap(&beta("3"), 1, 128).unwrap();
        assert!(g < 1e-30);
        assert!(quasi_normality_gap(&beta("1/2"), 5, 128).is_err());
    }

    #[test]
    fn conditioning() {
        let c = condition_bound_check(&beta("2"), 30, 128).unwrap();
        assert_eq!(c.bound, 1);
        assert!(c.satisfied);
        let c = condition_bound_check(&beta("3"), 100, 128).unwrap();
        assert_eq!(c.bound, 4);
        assert!(c.satisfied);
    }

    #[test]
    fn eigenvalues_match_dense_f64() {
        let b = beta("3");
        let n = 20;
        let roots = spectrum(&b, n, 20).unwrap();
        let d = BetaMatrix::new(b, n).unwrap().dense_c64();
        let m = nalgebra::DMatrix::from_fn(n, n, |i, j| d[(i, j)].re);
        let eig: Vec<Complex> = m
            .complex_eigenvalues()
            .iter()
            .map(|z| Complex::with_val(64, (z.re, z.im)))
            .collect();
        assert!(matching_distance(&roots.roots, &eig) < 1e-8);
    }
}

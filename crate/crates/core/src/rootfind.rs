//! Simultaneous root finding (Ehrlich–Aberth) at MPFR precision.
//!
//! The solver walks a precision ladder: each rung is warm-started from the
//! previous rung's roots, and the solve is accepted once two successive
//! rungs agree on every root to the requested number of digits.

use std::cmp::Ordering;

use rayon::prelude::*;
use num_complex::Complex64;
use rug::{Assign, Complex, Float, Rational};

use crate::error::{Error, Result};
use crate::numerics::{abs, cmp_arg_then_modulus, digits_to_bits, ten_pow_neg, to_c64};
use crate::poly::Poly;

/// Anything that can hand out polynomial coefficients (low → high) at a
/// requested precision.
pub trait CoefficientSource {
    fn degree(&self) -> usize;
    fn coefficients(&self, bits: u32) -> Vec<Complex>;
}

impl CoefficientSource for Poly<Rational> {
    fn degree(&self) -> usize {
        Poly::degree(self)
    }

    fn coefficients(&self, bits: u32) -> Vec<Complex> {
        self.to_complex(bits).into_coeffs()
    }
}

impl CoefficientSource for Poly<Complex> {
    fn degree(&self) -> usize {
        Poly::degree(self)
    }

    fn coefficients(&self, bits: u32) -> Vec<Complex> {
        self.coeffs().iter().map(|c| Complex::with_val(bits, c)).collect()
    }
}

/// All roots of a polynomial with their backward errors.
#[derive(Clone, Debug)]
pub struct RootSet {
    /// Sorted by principal argument, ties by modulus.
    pub roots: Vec<Complex>,
    /// `|p(z)| / Σ |c_k| |z|^k` for each root, at `precision_used`.
    pub residuals: Vec<Float>,
    pub precision_used: u32,
    /// Aberth sweeps summed over all precision levels.
    pub iterations: usize,
}

impl RootSet {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn max_residual(&self) -> Float {
        let mut max = Float::with_val(self.precision_used, 0);
        for r in &self.residuals {
            if *r > max {
                max.clone_from(r);
            }
        }
        max
    }

    pub fn sum(&self) -> Complex {
        let mut acc = Complex::with_val(self.precision_used, 0);
        for z in &self.roots {
            acc += z;
        }
        acc
    }

    pub fn product(&self) -> Complex {
        let mut acc = Complex::with_val(self.precision_used, 1);
        for z in &self.roots {
            acc *= z;
        }
        acc
    }

    pub fn moduli(&self) -> Vec<Float> {
        self.roots.iter().map(abs).collect()
    }
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub target_digits: u32,
    /// Precision levels tried in order.
    pub ladder: Vec<u32>,
    pub max_sweeps: usize,
}

impl SolveOptions {
    pub fn new(target_digits: u32) -> Self {
        SolveOptions {
            target_digits,
            ladder: vec![256, 512, 1024, 2048],
            max_sweeps: 500,
        }
    }
}

/// Roots of `poly` to `target_digits` significant digits.
pub fn solve_all<S: CoefficientSource + ?Sized>(poly: &S, target_digits: u32) -> Result<RootSet> {
    solve_all_with(poly, &SolveOptions::new(target_digits))
}

pub fn solve_all_with<S: CoefficientSource + ?Sized>(poly: &S, options: &SolveOptions) -> Result<RootSet> {
    let degree = poly.degree();
    if degree == 0 {
        return Err(Error::InvalidParameter("cannot solve a polynomial of degree 0".into()));
    }
    if options.target_digits == 0 {
        return Err(Error::InvalidParameter("target digits must be positive".into()));
    }
    let Some(&first) = options.ladder.first() else {
        return Err(Error::InvalidParameter("empty precision ladder".into()));
    };
    if first < crate::numerics::MIN_PRECISION {
        return Err(Error::Precision(first));
    }
    let needed_bits = digits_to_bits(options.target_digits) + 16;

    if degree == 1 {
        let bits = options
            .ladder
            .iter()
            .copied()
            .find(|&b| b >= needed_bits)
            .unwrap_or(*options.ladder.last().unwrap());
        let c = poly.coefficients(bits);
        let root = -Complex::with_val(bits, &c[0] / &c[1]);
        return Ok(finish(&c, vec![root], bits, 0));
    }

    let mut roots: Option<Vec<Complex>> = None;
    let mut previous: Option<Vec<Complex>> = None;
    let mut sweeps_total = 0;
    let mut best: Option<(Vec<Complex>, u32)> = None;
    let tolerance = ten_pow_neg(options.target_digits, options.ladder.last().copied().unwrap_or(first));

    for &bits in &options.ladder {
        let coeffs = poly.coefficients(bits);
        let start = match roots.take() {
            Some(prev) => prev.iter().map(|z| Complex::with_val(bits, z)).collect(),
            None => {
                let circle = initial_guesses(&coeffs, bits);
                match double_prestage(&coeffs, &circle, options.max_sweeps) {
                    Some((warm, sweeps)) => {
                        sweeps_total += sweeps;
                        warm.iter().map(|z| Complex::with_val(bits, (z.re, z.im))).collect()
                    }
                    None => circle,
                }
            }
        };
        let (z, sweeps, converged) = aberth(&coeffs, start, bits, options.max_sweeps);
        sweeps_total += sweeps;
        best = Some((z.clone(), bits));
        if converged && bits >= needed_bits {
            if let Some(prev) = &previous {
                if agree(prev, &z, &tolerance) {
                    let set = finish(&coeffs, z, bits, sweeps_total);
                    if set.residuals.iter().all(|r| *r <= tolerance) {
                        return Ok(set);
                    }
                    roots = Some(set.roots.clone());
                    previous = Some(set.roots);
                    continue;
                }
            }
        }
        previous = converged.then(|| z.clone());
        roots = Some(z);
    }

    let (z, bits) = best.expect("ladder is nonempty");
    let coeffs = poly.coefficients(bits);
    Err(Error::Convergence {
        sweeps: sweeps_total,
        bits,
        best: Box::new(finish(&coeffs, z, bits, sweeps_total)),
    })
}

/// `degree` points on the circle of radius `1 + max|c_k|/|c_d|`, rotated by
/// `√2 − 1` radians.
fn initial_guesses(coeffs: &[Complex], bits: u32) -> Vec<Complex> {
    let d = coeffs.len() - 1;
    let lead = abs(&coeffs[d]);
    let mut max = Float::with_val(bits, 0);
    for c in &coeffs[..d] {
        let a = abs(c);
        if a > max {
            max = a;
        }
    }
    let radius = Float::with_val(bits, &max / &lead) + 1u32;
    let offset = Float::with_val(bits, Float::with_val(bits, 2u32).sqrt() - 1u32);
    let tau = Float::with_val(bits, rug::float::Constant::Pi) * 2u32;
    (0..d)
        .map(|k| {
            let angle = Float::with_val(bits, &tau * k as u32) / d as u32 + &offset;
            let (s, c) = angle.sin_cos(Float::new(bits));
            Complex::with_val(bits, (Float::with_val(bits, &c * &radius), Float::with_val(bits, &s * &radius)))
        })
        .collect()
}

/// Jacobi-style Aberth sweeps: every correction in a sweep is computed from
/// the same iterate, so the result does not depend on thread scheduling.
/// Roots are frozen once their relative correction drops below `2^-(P-32)`.
fn aberth(coeffs: &[Complex], mut z: Vec<Complex>, bits: u32, max_sweeps: usize) -> (Vec<Complex>, usize, bool) {
    let d = z.len();
    let eps = Float::with_val(bits, Float::i_exp(1, -(bits as i32 - 32)));
    let mut active = vec![true; d];
    for sweep in 1..=max_sweeps {
        let updates: Vec<Option<(Complex, bool)>> = (0..d)
            .into_par_iter()
            .map(|i| {
                if !active[i] {
                    return None;
                }
                let zi = &z[i];
                let (p, dp) = horner(coeffs, zi);
                if p.is_zero() {
                    return Some((zi.clone(), true));
                }
                let newton = if dp.is_zero() {
                    p
                } else {
                    Complex::with_val(bits, &p / &dp)
                };
                let mut repel = Complex::with_val(bits, 0);
                let mut diff = Complex::new(bits);
                for (j, zj) in z.iter().enumerate() {
                    if j != i {
                        diff.assign(zi - zj);
                        if !diff.is_zero() {
                            diff.recip_mut();
                            repel += &diff;
                        }
                    }
                }
                let denom = Complex::with_val(bits, 1) - Complex::with_val(bits, &newton * &repel);
                let w = if denom.is_zero() {
                    newton
                } else {
                    Complex::with_val(bits, &newton / &denom)
                };
                let done = abs(&w) <= Float::with_val(bits, &eps * &abs(zi));
                Some((Complex::with_val(bits, zi - &w), done))
            })
            .collect();
        for (i, update) in updates.into_iter().enumerate() {
            if let Some((next, done)) = update {
                z[i] = next;
                if done {
                    active[i] = false;
                }
            }
        }
        if active.iter().all(|a| !a) {
            return (z, sweep, true);
        }
    }
    (z, max_sweeps, false)
}

/// The same Aberth iteration in double precision, started from the same
/// circle. Its only job is to bring the MPFR ladder a good warm start; any
/// non-finite value or a stall returns `None` and the ladder starts cold.
fn double_prestage(coeffs: &[Complex], circle: &[Complex], max_sweeps: usize) -> Option<(Vec<Complex64>, usize)> {
    let bits = coeffs[0].prec().0;
    let mut scale = Float::with_val(bits, 0);
    for c in coeffs {
        let a = abs(c);
        if a > scale {
            scale = a;
        }
    }
    let c: Vec<Complex64> = coeffs
        .iter()
        .map(|x| to_c64(&Complex::with_val(bits, x / &scale)))
        .collect();
    let mut z: Vec<Complex64> = circle.iter().map(to_c64).collect();
    if z.iter().chain(&c).any(|v| !v.is_finite()) {
        return None;
    }
    let d = z.len();
    let mut active = vec![true; d];
    for sweep in 1..=max_sweeps {
        let mut moved = false;
        let next: Vec<(Complex64, bool)> = (0..d)
            .map(|i| {
                if !active[i] {
                    return (z[i], true);
                }
                let zi = z[i];
                let newton = newton_ratio_c64(&c, zi);
                let repel: Complex64 = z
                    .iter()
                    .enumerate()
                    .filter(|&(j, zj)| j != i && *zj != zi)
                    .map(|(_, zj)| (zi - zj).inv())
                    .sum();
                let w = newton / (Complex64::new(1.0, 0.0) - newton * repel);
                let w = if w.is_finite() { w } else { newton };
                (zi - w, w.norm() <= 4.0 * f64::EPSILON * zi.norm())
            })
            .collect();
        for (i, (zi, done)) in next.into_iter().enumerate() {
            if active[i] {
                moved = true;
                z[i] = zi;
                active[i] = !done;
            }
        }
        if z.iter().any(|v| !v.is_finite()) {
            return None;
        }
        if !moved || active.iter().all(|a| !a) {
            return Some((z, sweep));
        }
    }
    // Unfrozen roots are still usable starting points; the MPFR rung will
    // polish or reject them.
    Some((z, max_sweeps))
}

/// `p(z) / p'(z)` in double precision, through the reversed polynomial
/// when `|z| > 1` so that large powers never form.
fn newton_ratio_c64(c: &[Complex64], z: Complex64) -> Complex64 {
    let d = (c.len() - 1) as f64;
    if z.norm() <= 1.0 {
        let (mut p, mut dp) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        for ck in c.iter().rev() {
            dp = dp * z + p;
            p = p * z + ck;
        }
        p / dp
    } else {
        let w = z.inv();
        let (mut r, mut dr) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        for ck in c.iter() {
            dr = dr * w + r;
            r = r * w + ck;
        }
        z / (Complex64::new(d, 0.0) - w * dr / r)
    }
}

fn horner(coeffs: &[Complex], z: &Complex) -> (Complex, Complex) {
    let bits = z.prec().0;
    let mut p = Complex::with_val(bits, 0);
    let mut dp = Complex::with_val(bits, 0);
    for c in coeffs.iter().rev() {
        dp *= z;
        dp += &p;
        p *= z;
        p += c;
    }
    (p, dp)
}

fn agree(previous: &[Complex], current: &[Complex], tolerance: &Float) -> bool {
    previous.iter().zip(current).all(|(a, b)| {
        let bits = b.prec().0;
        let diff = abs(&Complex::with_val(bits, a - b));
        diff <= Float::with_val(bits, tolerance * &abs(b))
    })
}

fn finish(coeffs: &[Complex], mut roots: Vec<Complex>, bits: u32, iterations: usize) -> RootSet {
    roots.sort_by(cmp_arg_then_modulus);
    let poly = Poly::new(coeffs.to_vec());
    let residuals = roots.par_iter().map(|z| backward_error(&poly, z)).collect();
    RootSet {
        roots,
        residuals,
        precision_used: bits,
        iterations,
    }
}

/// `|p(z)| / Σ |c_k| |z|^k`.
pub fn backward_error(poly: &Poly<Complex>, z: &Complex) -> Float {
    let value = abs(&poly.eval(z));
    let scale = poly.abs_eval(z);
    if scale.is_zero() {
        value
    } else {
        value / scale
    }
}

/// Newton iteration on a real polynomial from `seed`, doubling precision
/// until `|p(x)| ≤ 10^-target_digits` and the last step is below the
/// working precision.
pub fn refine_real_root(poly: &Poly<Rational>, seed: &Float, target_digits: u32) -> Result<Float> {
    if Poly::degree(poly) == 0 {
        return Err(Error::Refinement("polynomial has no roots".into()));
    }
    if Poly::degree(poly) == 1 {
        let bits = (digits_to_bits(target_digits) + 32).max(seed.prec());
        let root = -poly.coeff(0) / poly.coeff(1);
        return Ok(Float::with_val(bits, &root));
    }
    const MAX_BITS: u32 = 1 << 20;
    const MAX_STEPS: usize = 200;
    let floor_bits = digits_to_bits(target_digits) + 32;
    let mut bits = seed.prec().clamp(128, floor_bits.max(128));
    let mut x = Float::with_val(bits, seed);
    loop {
        let (coeffs, tolerance) = (poly.to_complex(bits), ten_pow_neg(target_digits, bits));
        let step_floor = Float::with_val(bits, Float::i_exp(1, -(bits as i32 - 8)));
        let mut converged = false;
        let mut last_step: Option<Float> = None;
        for _ in 0..MAX_STEPS {
            let (p, dp) = real_horner(coeffs.coeffs(), &x);
            if p.is_zero() {
                // exact at this precision only; the outer loop decides
                converged = true;
                break;
            }
            if dp.is_zero() {
                return Err(Error::Refinement(format!("derivative vanished at {bits} bits")));
            }
            let step = Float::with_val(bits, &p / &dp);
            if !step.is_finite() {
                return Err(Error::Refinement("non-finite Newton step".into()));
            }
            x -= &step;
            let size = Float::with_val(bits, step.abs_ref());
            if size <= Float::with_val(bits, &step_floor * &Float::with_val(bits, x.abs_ref())) {
                converged = true;
                break;
            }
            if let Some(prev) = &last_step {
                // Quadratic convergence should shrink steps quickly; a step
                // that keeps growing means the seed is outside the basin.
                if size > Float::with_val(bits, prev * 4u32) && size > 1u32 {
                    return Err(Error::Refinement("Newton iteration diverged".into()));
                }
            }
            last_step = Some(size);
        }
        if !converged {
            return Err(Error::Refinement(format!("no convergence after {MAX_STEPS} steps at {bits} bits")));
        }
        let (p, _) = real_horner(coeffs.coeffs(), &x);
        if bits >= floor_bits && Float::with_val(bits, p.abs_ref()) <= tolerance {
            return Ok(x);
        }
        if bits >= MAX_BITS {
            return Err(Error::Refinement(format!("residual above 1e-{target_digits} at {bits} bits")));
        }
        bits *= 2;
        x = Float::with_val(bits, &x);
    }
}

fn real_horner(coeffs: &[Complex], x: &Float) -> (Float, Float) {
    let bits = x.prec();
    let mut p = Float::with_val(bits, 0);
    let mut dp = Float::with_val(bits, 0);
    for c in coeffs.iter().rev() {
        dp *= x;
        dp += &p;
        p *= x;
        p += c.real();
    }
    (p, dp)
}

/// Pairs each root of `a` with a distinct root of `b` greedily by distance
/// and returns the largest paired distance.
pub fn matching_distance(a: &[Complex], b: &[Complex]) -> f64 {
    assert_eq!(a.len(), b.len(), "root sets differ in size");
    let mut used = vec![false; b.len()];
    let mut worst = 0.0f64;
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(a.len() * b.len());
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            let d = abs(&Complex::with_val(x.prec().0.max(y.prec().0), x - y)).to_f64();
            pairs.push((d, i, j));
        }
    }
    pairs.sort_by(|p, q| p.0.partial_cmp(&q.0).unwrap_or(Ordering::Equal));
    let mut done = vec![false; a.len()];
    for (d, i, j) in pairs {
        if !done[i] && !used[j] {
            done[i] = true;
            used[j] = true;
            worst = worst.max(d);
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beta::BetaParam;
    use crate::betamatrix::BetaMatrix;
    use crate::charpoly::{charpoly_exact, reverse_poly, ClosedForm};
    use crate::numerics::format_complex;

    fn beta(s: &str) -> BetaParam {
        BetaParam::parse(s).unwrap()
    }

    #[test]
    fn degree_one_is_closed_form() {
        let p = charpoly_exact(&beta("2"), 1).unwrap();
        let set = solve_all(&p, 30).unwrap();
        assert_eq!(set.roots.len(), 1);
        assert_eq!(set.roots[0], Complex::with_val(64, (-0.5, 0)));
        assert!(set.residuals[0].is_zero());
    }

    #[test]
    fn degree_zero_is_rejected() {
        let p = Poly::constant(Rational::from(3));
        assert!(solve_all(&p, 10).is_err());
    }

    #[test]
    fn matches_dense_eigensolver() {
        for (b, n) in [("2", 3), ("3", 12), ("-1/2+2i", 7)] {
            let bp = beta(b);
            let set = solve_all(&ClosedForm::new(&bp, n).unwrap(), 20).unwrap();
            let dense = BetaMatrix::new(bp, n).unwrap().dense_c64();
            let m = nalgebra::DMatrix::from_fn(n, n, |i, j| {
                let z = dense[(i, j)];
                nalgebra::Complex::new(z.re, z.im)
            });
            let eig = m.eigenvalues().expect("complex Schur converges");
            let theirs: Vec<Complex> = eig.iter().map(|z| Complex::with_val(64, (z.re, z.im))).collect();
            assert!(matching_distance(&set.roots, &theirs) < 1e-8, "beta={b} n={n}");
        }
    }

    #[test]
    fn deterministic_digit_strings() {
        let p = ClosedForm::new(&beta("4/3"), 40).unwrap();
        let a = solve_all(&p, 30).unwrap();
        let b = solve_all(&p, 30).unwrap();
        let fmt = |s: &RootSet| s.roots.iter().map(|z| format_complex(z, 30)).collect::<Vec<_>>();
        assert_eq!(fmt(&a), fmt(&b));
        assert_eq!(a.iterations, b.iterations);
    }

    #[test]
    fn reverse_gives_reciprocals() {
        let p = charpoly_exact(&beta("4/3"), 30).unwrap();
        let digits = 30;
        let roots = solve_all(&p, digits).unwrap();
        let rev = solve_all(&reverse_poly(&p).unwrap(), digits).unwrap();
        let recips: Vec<Complex> = roots.roots.iter().map(|z| Complex::with_val(z.prec(), z.recip_ref())).collect();
        assert!(matching_distance(&recips, &rev.roots) < 1e-28);
        // the smallest-modulus root of p maps to the largest of the reverse
        let min = roots.moduli().into_iter().min_by(|a, b| a.partial_cmp(b).unwrap()).unwrap();
        let max = rev.moduli().into_iter().max_by(|a, b| a.partial_cmp(b).unwrap()).unwrap();
        assert!((Float::with_val(256, min * &max) - 1u32).abs() < 1e-28);
    }

    #[test]
    fn trace_and_determinant_identities() {
        for (b, n) in [("3", 60), ("4/3", 45), ("5", 8)] {
            let bp = beta(b);
            let digits = 40;
            let set = solve_all(&ClosedForm::new(&bp, n).unwrap(), digits).unwrap();
            let trace = BetaMatrix::new(bp.clone(), n).unwrap().trace_exact().unwrap();
            let sum = Complex::with_val(set.precision_used, set.sum() - &trace);
            assert!(abs(&sum) < 1e-36);
            let p0 = charpoly_exact(&bp, n).unwrap().coeff(0);
            let sign = if n % 2 == 0 { 1 } else { -1 };
            let det = Rational::from(&p0 * sign);
            let prod = Complex::with_val(set.precision_used, set.product() - &det);
            assert!(abs(&prod) < 1e-36);
        }
    }

    #[test]
    fn conjugate_closed_for_real_input() {
        let set = solve_all(&ClosedForm::new(&beta("3/2"), 25).unwrap(), 25).unwrap();
        let conj: Vec<Complex> = set.roots.iter().map(|z| Complex::with_val(z.prec(), z.conj_ref())).collect();
        assert!(matching_distance(&set.roots, &conj) < 1e-24);
        assert!(set.max_residual() < 1e-25);
    }

    #[test]
    fn convergence_failure_carries_best_iterate() {
        let mut options = SolveOptions::new(20);
        options.max_sweeps = 1;
        let err = solve_all_with(&ClosedForm::new(&beta("3"), 30).unwrap(), &options).unwrap_err();
        match err {
            Error::Convergence { best, .. } => assert_eq!(best.roots.len(), 30),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn newton_refines_the_large_root() {
        let p = charpoly_exact(&beta("4/3"), 50).unwrap();
        let x = refine_real_root(&p, &Float::with_val(64, 3), 60).unwrap();
        let want = Float::with_val(
            400,
            Float::parse("2.99999796124162120902813536126303334491749260835507").unwrap(),
        );
        let err = Float::with_val(400, &x - &want).abs();
        assert!(err < 1e-49, "{}", crate::numerics::format_float(&x, 55));
    }

    #[test]
    fn newton_escalates_past_a_vanishing_residual() {
        // |small − 1/3| ≈ 3^-200 at n = 200; a 512-bit answer cannot see it
        let p = charpoly_exact(&beta("4/3"), 200).unwrap();
        let seed = Float::with_val(512, Float::parse("0.3333333333333").unwrap());
        let x = refine_real_root(&p, &seed, 120).unwrap();
        let third = Rational::from((1, 3));
        let err = Float::with_val(x.prec(), &x - &third).abs();
        assert!(err > 1e-97 && err < 1e-94, "{}", err.to_f64());
    }

    #[test]
    fn newton_on_a_line_is_exact() {
        let p = Poly::linear(Rational::from((1, 2)), Rational::from(1));
        let x = refine_real_root(&p, &Float::with_val(64, 100), 40).unwrap();
        assert_eq!(x, -0.5);
    }

    #[test]
    fn newton_reports_bad_seeds() {
        // t^2 + 1 has no real root
        let p = Poly::new(vec![Rational::from(1), Rational::new(), Rational::from(1)]);
        assert!(matches!(refine_real_root(&p, &Float::with_val(64, 0), 20), Err(Error::Refinement(_))));
    }
}

//! Characteristic polynomial of `B_n` in closed form, its `q_n − r_n` split,
//! the two limit functions, and an exact determinant oracle.
//!
//! The closed form is
//!
//! ```text
//! p_n(t) = Σ_{j=0}^{n} t^j − Σ_{i=1}^{n} Σ_{j=0}^{n−i} t^{i+j−1} β^{−i}
//! ```
//!
//! Collecting powers of `t`, the coefficient of `t^m` for `m < n` is
//! `1 − Σ_{i=1}^{m+1} β^{−i}`, so all coefficients follow from one prefix sum.

use rug::{Complex, Rational};

use crate::beta::{BetaClass, BetaParam};
use crate::betamatrix::DenseMatrix;
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::rootfind::CoefficientSource;

fn check_order(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidOrder {
            n,
            reason: "order must be at least 1",
        });
    }
    Ok(())
}

/// `p_n` with exact rational coefficients (real β).
pub fn charpoly_exact(beta: &BetaParam, n: usize) -> Result<Poly<Rational>> {
    check_order(n)?;
    let powers = beta.inverse_powers_exact(n)?;
    let mut prefix = Rational::new();
    let mut coeffs: Vec<Rational> = powers
        .iter()
        .map(|p| {
            prefix += p;
            Rational::from(1 - &prefix)
        })
        .collect();
    coeffs.push(Rational::from(1));
    Ok(Poly::new(coeffs))
}

/// `p_n` with complex coefficients at `bits` of precision, for any nonzero β.
pub fn charpoly(beta: &BetaParam, n: usize, bits: u32) -> Result<Poly<Complex>> {
    check_order(n)?;
    if beta.is_real() {
        return Ok(charpoly_exact(beta, n)?.to_complex(bits));
    }
    let guard = bits + 32;
    let mut prefix = Complex::with_val(guard, 0);
    let mut coeffs: Vec<Complex> = beta
        .inverse_powers(n, guard)
        .iter()
        .map(|p| {
            prefix += p;
            let mut c = Complex::with_val(bits, 1);
            c -= &prefix;
            c
        })
        .collect();
    coeffs.push(Complex::with_val(bits, 1));
    Ok(Poly::new(coeffs))
}

/// Lazily evaluated `p_n`: coefficients are produced at whatever precision
/// the root finder asks for, rounding from exact values when β is real.
#[derive(Clone, Debug)]
pub struct ClosedForm {
    beta: BetaParam,
    n: usize,
    exact: Option<Poly<Rational>>,
}

impl ClosedForm {
    pub fn new(beta: &BetaParam, n: usize) -> Result<Self> {
        check_order(n)?;
        let exact = if beta.is_real() {
            Some(charpoly_exact(beta, n)?)
        } else {
            None
        };
        Ok(ClosedForm {
            beta: beta.clone(),
            n,
            exact,
        })
    }

    pub fn beta(&self) -> &BetaParam {
        &self.beta
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn exact(&self) -> Option<&Poly<Rational>> {
        self.exact.as_ref()
    }
}

impl CoefficientSource for ClosedForm {
    fn degree(&self) -> usize {
        self.n
    }

    fn coefficients(&self, bits: u32) -> Vec<Complex> {
        match &self.exact {
            Some(p) => p.to_complex(bits).into_coeffs(),
            None => charpoly(&self.beta, self.n, bits)
                .expect("order validated at construction")
                .into_coeffs(),
        }
    }
}

/// `q_n(t) = Σ_{j=0}^{n} t^j` and `r_n(t) = Σ_{i=1}^{n} Σ_{j=0}^{n−i} t^{i+j−1} β^{−i}`,
/// with `r_n` accumulated term by term from the double sum.
pub fn split_qr(beta: &BetaParam, n: usize) -> Result<(Poly<Rational>, Poly<Rational>)> {
    check_order(n)?;
    let powers = beta.inverse_powers_exact(n)?;
    let q = Poly::new(vec![Rational::from(1); n + 1]);
    let mut r = vec![Rational::new(); n];
    for i in 1..=n {
        for j in 0..=n - i {
            r[i + j - 1] += &powers[i - 1];
        }
    }
    Ok((q, Poly::new(r)))
}

/// `t^n p(1/t)`; fails when 0 is a root.
pub fn reverse_poly<C: crate::poly::Coefficient>(poly: &Poly<C>) -> Result<Poly<C>> {
    poly.reverse()
}

/// Largest order accepted by [`det_oracle`].
pub const ORACLE_MAX_ORDER: usize = 12;

/// Exact determinant of a matrix whose entries are polynomials of degree
/// at most one in `t`.
///
/// Expands over minors row by row: `partial[S]` holds the signed sum over
/// all ways of assigning the first `|S|` rows to the column set `S`. That
/// is `2^n` states, hence the size limit.
pub fn det_oracle(matrix: &DenseMatrix<Poly<Rational>>) -> Result<Poly<Rational>> {
    if !matrix.is_square() {
        return Err(Error::InvalidParameter("determinant of a non-square matrix".into()));
    }
    let n = matrix.rows();
    if n > ORACLE_MAX_ORDER {
        return Err(Error::SizeLimit {
            n,
            limit: ORACLE_MAX_ORDER,
        });
    }
    if matrix.iter_rows().flatten().any(|e| e.degree() > 1) {
        return Err(Error::InvalidParameter("oracle entries must have degree <= 1".into()));
    }
    let mut partial: Vec<Option<Poly<Rational>>> = vec![None; 1 << n];
    partial[0] = Some(Poly::constant(Rational::from(1)));
    for mask in 0usize..(1 << n) {
        let Some(acc) = partial[mask].take() else {
            continue;
        };
        let row = mask.count_ones() as usize;
        if row == n {
            partial[mask] = Some(acc);
            continue;
        }
        for col in 0..n {
            if mask & (1 << col) != 0 || matrix[(row, col)].is_zero() {
                continue;
            }
            // Columns already used that exceed `col` each add one inversion.
            let inversions = (mask >> (col + 1)).count_ones();
            let mut term = &acc * &matrix[(row, col)];
            if inversions % 2 == 1 {
                term = -&term;
            }
            let slot = &mut partial[mask | (1 << col)];
            *slot = Some(match slot.take() {
                Some(prev) => &prev + &term,
                None => term,
            });
        }
    }
    Ok(partial[(1 << n) - 1].take().unwrap_or_else(|| Poly::new(Vec::new())))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LimitKind {
    /// `p(t) = (β − 1 − t) / ((1 − t)(β − t))`, the limit of `p_n` inside the unit disk.
    P,
    /// `p̃(t) = (β − 1 − t) / ((1 − t)(β − 1))`, the limit of `t^n p_n(1/t)`.
    PTilde,
}

/// One of the two uniform limits of the characteristic polynomials on
/// compact subsets of the open unit disk. Both vanish only at `β − 1`.
#[derive(Clone, Debug)]
pub struct LimitFunction {
    kind: LimitKind,
    beta: Rational,
}

impl LimitFunction {
    pub fn new(kind: LimitKind, beta: &BetaParam) -> Result<Self> {
        beta.require("limit functions", &[BetaClass::RealGt1])?;
        Ok(LimitFunction {
            kind,
            beta: beta.re().clone(),
        })
    }

    pub fn kind(&self) -> LimitKind {
        self.kind
    }

    fn check_domain(&self, t: &Complex) -> Result<()> {
        let is_pole = |x: &Rational| t.imag().is_zero() && *t.real() == *x;
        if is_pole(&Rational::from(1)) || (self.kind == LimitKind::P && is_pole(&self.beta)) {
            return Err(Error::Pole(crate::numerics::format_complex(t, 20)));
        }
        if crate::numerics::abs(t) >= 1 {
            return Err(Error::OutsideDisk(crate::numerics::format_complex(t, 20)));
        }
        Ok(())
    }

    /// Evaluates at `t` (|t| < 1) at the precision of `t`.
    pub fn eval(&self, t: &Complex) -> Result<Complex> {
        self.check_domain(t)?;
        let bits = t.prec().0;
        let one_minus_t = Complex::with_val(bits, 1 - t);
        let mut num = Complex::with_val(bits, &self.beta - t);
        num -= 1;
        let den = match self.kind {
            LimitKind::P => one_minus_t * Complex::with_val(bits, &self.beta - t),
            LimitKind::PTilde => one_minus_t * Complex::with_val(bits, Rational::from(&self.beta - 1)),
        };
        Ok(num / den)
    }

    /// First derivative, from
    /// `p'(t) = ((β−t)² − (β−t) − (1−t)) / ((1−t)² (β−t)²)` and
    /// `p̃'(t) = ((β−1) − t − (1−t)) / ((1−t)² (β−1))`.
    pub fn derivative(&self, t: &Complex) -> Result<Complex> {
        self.check_domain(t)?;
        let bits = t.prec().0;
        let one_minus_t = Complex::with_val(bits, 1 - t);
        let one_minus_t_sq = Complex::with_val(bits, one_minus_t.square_ref());
        match self.kind {
            LimitKind::P => {
                let beta_minus_t = Complex::with_val(bits, &self.beta - t);
                let beta_minus_t_sq = Complex::with_val(bits, beta_minus_t.square_ref());
                let num = Complex::with_val(bits, &beta_minus_t_sq - &beta_minus_t) - &one_minus_t;
                Ok(num / (one_minus_t_sq * beta_minus_t_sq))
            }
            LimitKind::PTilde => {
                let beta_minus_one = Rational::from(&self.beta - 1);
                let mut num = Complex::with_val(bits, &beta_minus_one - t);
                num -= &one_minus_t;
                Ok(num / (one_minus_t_sq * Complex::with_val(bits, &beta_minus_one)))
            }
        }
    }
}

/// Convenience wrapper matching [`LimitFunction::eval`].
pub fn eval_limit(f: &LimitFunction, t: &Complex) -> Result<Complex> {
    f.eval(t)
}

/// Convenience wrapper matching [`LimitFunction::derivative`].
pub fn limit_derivative(f: &LimitFunction, t: &Complex) -> Result<Complex> {
    f.derivative(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::ops::Pow;
    use crate::betamatrix::{build_aux_matrix, build_shifted, BetaMatrix};

    fn beta(s: &str) -> BetaParam {
        BetaParam::parse(s).unwrap()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    fn close(a: &Complex, b: &Complex, tol: f64) -> bool {
        let d = Complex::with_val(a.prec(), a - b);
        crate::numerics::abs(&d) < tol
    }

    #[test]
    fn order_one_is_linear() {
        let p = charpoly_exact(&beta("7/2"), 1).unwrap();
        assert_eq!(p, Poly::linear(q(5, 7), q(1, 1)));
        assert!(charpoly_exact(&beta("2"), 0).is_err());
    }

    #[test]
    fn constant_term_and_monic() {
        for b in ["4/3", "3/2", "2", "3", "5", "-7/3", "1/9"] {
            let bp = beta(b);
            let inv = Rational::from(bp.re().recip_ref());
            for n in [1, 2, 5, 17, 64] {
                let p = charpoly_exact(&bp, n).unwrap();
                assert_eq!(p.degree(), n);
                assert_eq!(p.coeff(n), 1);
                assert_eq!(p.coeff(0), Rational::from(1 - &inv));
            }
        }
    }

    #[test]
    fn two_by_two_by_hand() {
        // det [[t + 1/2, 1/2], [-5/4, t - 1/4]] = t^2 + t/4 + 1/2
        let p = charpoly_exact(&beta("2"), 2).unwrap();
        assert_eq!(p, Poly::new(vec![q(1, 2), q(1, 4), q(1, 1)]));
        let oracle = det_oracle(&build_shifted(&beta("2"), 2).unwrap()).unwrap();
        assert_eq!(oracle, p);
    }

    #[test]
    fn matches_determinant_oracle() {
        for b in ["4/3", "3/2", "2", "3", "5"] {
            let bp = beta(b);
            for n in 1..=8 {
                let oracle = det_oracle(&build_shifted(&bp, n).unwrap()).unwrap();
                assert_eq!(charpoly_exact(&bp, n).unwrap(), oracle, "beta={b} n={n}");
            }
        }
    }

    #[test]
    fn aux_determinant() {
        for n in 1..=10 {
            let det = det_oracle(&build_aux_matrix(n).unwrap()).unwrap();
            let sign = if n % 2 == 0 { 1 } else { -1 };
            assert_eq!(det, Poly::new(vec![q(sign, 1); n + 1]), "n={n}");
        }
    }

    #[test]
    fn oracle_limits() {
        let big = DenseMatrix::from_fn(13, 13, |_, _| Poly::constant(q(1, 1)));
        assert!(matches!(det_oracle(&big), Err(Error::SizeLimit { n: 13, limit: 12 })));
        let quad = DenseMatrix::from_fn(1, 1, |_, _| Poly::new(vec![q(0, 1), q(0, 1), q(1, 1)]));
        assert!(det_oracle(&quad).is_err());
    }

    #[test]
    fn split_by_enumeration() {
        let (q1, r1) = split_qr(&beta("5"), 1).unwrap();
        assert_eq!(q1, Poly::linear(q(1, 1), q(1, 1)));
        assert_eq!(r1, Poly::constant(q(1, 5)));
        let (_, r2) = split_qr(&beta("2"), 2).unwrap();
        assert_eq!(r2, Poly::linear(q(1, 2), q(3, 4)));
        for b in ["4/3", "3", "-5/2"] {
            for n in [1, 3, 9, 40] {
                let (qn, rn) = split_qr(&beta(b), n).unwrap();
                assert_eq!(qn.eval(&q(1, 1)), Rational::from(n as u32 + 1));
                assert_eq!(&qn - &rn, charpoly_exact(&beta(b), n).unwrap());
            }
        }
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn complex_beta_matches_dense_determinant() {
        // p_n(t) = det(tI - B_n): compare at a complex t by elimination at high precision
        let bp = beta("1/2+3/4i");
        let n = 6;
        let p = charpoly(&bp, n, 256).unwrap();
        let t = Complex::with_val(256, (0.3, -1.1));
        let b = BetaMatrix::new(bp, n).unwrap().dense(256);
        let mut a: Vec<Vec<Complex>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let mut x = Complex::with_val(256, -&b[(i, j)]);
                        if i == j {
                            x += &t;
                        }
                        x
                    })
                    .collect()
            })
            .collect();
        let mut det = Complex::with_val(256, 1);
        for k in 0..n {
            let pivot = a[k][k].clone();
            det *= &pivot;
            for i in k + 1..n {
                let f = Complex::with_val(256, &a[i][k] / &pivot);
                for j in k..n {
                    let d = Complex::with_val(256, &f * &a[k][j]);
                    a[i][j] -= d;
                }
            }
        }
        assert!(close(&p.eval(&t), &det, 1e-60));
    }

    #[test]
    fn reverse_is_reciprocal() {
        let p = charpoly_exact(&beta("3"), 4).unwrap();
        let rev = reverse_poly(&p).unwrap();
        let t = q(2, 5);
        let lhs = rev.eval(&t);
        let rhs = t.clone().pow(4) * p.eval(&Rational::from(t.recip_ref()));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn limit_values() {
        for b in ["4/3", "3/2", "7/4"] {
            let bp = beta(b);
            let bv = bp.re().clone();
            let p = LimitFunction::new(LimitKind::P, &bp).unwrap();
            let pt = LimitFunction::new(LimitKind::PTilde, &bp).unwrap();
            let zero = Complex::with_val(200, 0);
            let at0 = Complex::with_val(200, (&bv - Rational::from(1)) / bv.clone());
            assert!(close(&p.eval(&zero).unwrap(), &at0, 1e-55));
            let z = Complex::with_val(200, Rational::from(&bv - 1));
            assert!(p.eval(&z).unwrap().is_zero());
            assert!(pt.eval(&z).unwrap().is_zero());
        }
    }

    #[test]
    fn derivatives_at_the_zero() {
        // At z = β − 1: p'(z) = 1/(β − 2), p̃'(z) = −1/((2 − β)(β − 1)).
        for b in ["4/3", "3/2", "7/4"] {
            let bp = beta(b);
            let bv = bp.re().clone();
            let z = Complex::with_val(256, Rational::from(&bv - 1));
            let dp = limit_derivative(&LimitFunction::new(LimitKind::P, &bp).unwrap(), &z).unwrap();
            let dpt = limit_derivative(&LimitFunction::new(LimitKind::PTilde, &bp).unwrap(), &z).unwrap();
            let two_minus = Rational::from(2 - &bv);
            let want_p = Complex::with_val(256, -Rational::from(two_minus.recip_ref()));
            let want_pt = Complex::with_val(
                256,
                -Rational::from((two_minus * Rational::from(&bv - 1)).recip_ref()),
            );
            assert!(close(&dp, &want_p, 1e-60));
            assert!(close(&dpt, &want_pt, 1e-60));
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let bp = beta("4/3");
        let h = Complex::with_val(300, (1e-30, 0));
        for kind in [LimitKind::P, LimitKind::PTilde] {
            let f = LimitFunction::new(kind, &bp).unwrap();
            for t in [(0.2, 0.1), (-0.5, 0.3), (0.0, -0.6)] {
                let t = Complex::with_val(300, t);
                let plus = f.eval(&Complex::with_val(300, &t + &h)).unwrap();
                let minus = f.eval(&Complex::with_val(300, &t - &h)).unwrap();
                let fd = (plus - minus) / Complex::with_val(300, &h * 2u32);
                assert!(close(&f.derivative(&t).unwrap(), &fd, 1e-50));
            }
        }
    }

    #[test]
    fn limit_domain_errors() {
        let p = LimitFunction::new(LimitKind::P, &beta("3/2")).unwrap();
        assert!(matches!(p.eval(&Complex::with_val(64, 1)), Err(Error::Pole(_))));
        assert!(matches!(p.eval(&Complex::with_val(64, (0.0, 1.5))), Err(Error::OutsideDisk(_))));
        assert!(LimitFunction::new(LimitKind::P, &beta("1")).is_err());
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(48))]

        #[test]
        fn closed_form_is_the_determinant(p in -40i64..40, q in 1i64..20, n in 1usize..7) {
            proptest::prop_assume!(p != 0);
            let b = BetaParam::real(Rational::from((p, q))).unwrap();
            let oracle = det_oracle(&build_shifted(&b, n).unwrap()).unwrap();
            proptest::prop_assert_eq!(oracle, charpoly_exact(&b, n).unwrap());
        }

        #[test]
        fn monic_with_trace_coefficient(p in 2i64..50, q in 1i64..5, n in 2usize..30) {
            let b = BetaParam::real(Rational::from((p, q))).unwrap();
            let c = charpoly_exact(&b, n).unwrap();
            proptest::prop_assert_eq!(c.coeff(n), Rational::from(1));
            let trace = BetaMatrix::new(b, n).unwrap().trace_exact().unwrap();
            proptest::prop_assert_eq!(c.coeff(n - 1), -trace);
        }
    }
}

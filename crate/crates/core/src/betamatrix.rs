//! The β-matrix `B_n = T_n(e^{iθ}) + (v − e_1) eᵀ`, its shifted form
//! `tI − B_n`, the auxiliary matrix `M_n` and the β = 1 block `X_{n−1}`.
//!
//! Indices are 0-based in code. Entry `(s, t)` of `B_n` is
//! `[s − t = 1] + v_s − [s = 0]` with `v_s = β^{−(s+1)}`.

use std::ops::Index;

use num_complex::Complex64;
use rug::{Complex, Integer, Rational};

use crate::beta::BetaParam;
use crate::error::{Error, Result};
use crate::poly::Poly;

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T> DenseMatrix<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        DenseMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[T]> {
        self.data.chunks(self.cols.max(1))
    }

    pub fn map<U>(&self, mut f: impl FnMut(&T) -> U) -> DenseMatrix<U> {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(&mut f).collect(),
        }
    }

    pub fn into_vec(self) -> Vec<T> {
        self.data
    }
}

impl<T> Index<(usize, usize)> for DenseMatrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

/// `B_n` kept in structured form: only `(β, n)` are stored.
#[derive(Clone, Debug, PartialEq)]
pub struct BetaMatrix {
    n: usize,
    beta: BetaParam,
}

pub fn build_beta_matrix(beta: &BetaParam, n: usize) -> Result<BetaMatrix> {
    BetaMatrix::new(beta.clone(), n)
}

impl BetaMatrix {
    pub fn new(beta: BetaParam, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidOrder {
                n,
                reason: "order must be at least 1",
            });
        }
        Ok(BetaMatrix { n, beta })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn beta(&self) -> &BetaParam {
        &self.beta
    }

    /// Correction vector `u = v − e_1`, exactly.
    pub fn correction_exact(&self) -> Result<Vec<Rational>> {
        let mut u = self.beta.inverse_powers_exact(self.n)?;
        u[0] -= 1;
        Ok(u)
    }

    /// Correction vector `u = v − e_1` at `bits` of precision.
    pub fn correction(&self, bits: u32) -> Vec<Complex> {
        let mut u = self.beta.inverse_powers(self.n, bits);
        u[0] -= 1;
        u
    }

    pub fn dense_exact(&self) -> Result<DenseMatrix<Rational>> {
        let u = self.correction_exact()?;
        Ok(DenseMatrix::from_fn(self.n, self.n, |s, t| {
            let mut x = u[s].clone();
            if s == t + 1 {
                x += 1;
            }
            x
        }))
    }

    pub fn dense(&self, bits: u32) -> DenseMatrix<Complex> {
        let u = self.correction(bits);
        DenseMatrix::from_fn(self.n, self.n, |s, t| {
            let mut x = u[s].clone();
            if s == t + 1 {
                x += 1;
            }
            x
        })
    }

    /// Double-precision materialisation, for cross-checks against
    /// standard dense eigensolvers.
    pub fn dense_c64(&self) -> DenseMatrix<Complex64> {
        self.dense(64).map(crate::numerics::to_c64)
    }

    /// `B_n x` in O(n) using the shift + rank-one structure.
    pub fn apply(&self, x: &[Complex]) -> Result<Vec<Complex>> {
        self.check_len(x.len())?;
        let bits = x.iter().map(|z| z.prec().0).max().unwrap_or(64);
        let mut sum = Complex::with_val(bits, 0);
        for z in x {
            sum += z;
        }
        let u = self.correction(bits);
        Ok(u
            .iter()
            .enumerate()
            .map(|(s, us)| {
                let mut y = Complex::with_val(bits, us * &sum);
                if s > 0 {
                    y += &x[s - 1];
                }
                y
            })
            .collect())
    }

    /// `B_n x` exactly, for real β.
    pub fn apply_exact(&self, x: &[Rational]) -> Result<Vec<Rational>> {
        self.check_len(x.len())?;
        let sum: Rational = x.iter().sum();
        let u = self.correction_exact()?;
        Ok(u
            .into_iter()
            .enumerate()
            .map(|(s, us)| {
                let mut y = us * &sum;
                if s > 0 {
                    y += &x[s - 1];
                }
                y
            })
            .collect())
    }

    /// `trace(B_n) = Σ β^{−i} − 1`, exactly.
    pub fn trace_exact(&self) -> Result<Rational> {
        let sum: Rational = self.beta.inverse_powers_exact(self.n)?.iter().sum();
        Ok(sum - 1)
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.n {
            return Err(Error::InvalidParameter(format!(
                "vector of length {len} applied to a matrix of order {}",
                self.n
            )));
        }
        Ok(())
    }
}

/// The lower shift `T_n(e^{iθ})`: ones on the first subdiagonal.
pub fn shift_toeplitz(n: usize) -> DenseMatrix<Rational> {
    DenseMatrix::from_fn(n, n, |s, t| Rational::from(u32::from(s == t + 1)))
}

/// `M_n = −I_n + t (T_n(e^{−iθ}) − e_n eᵀ)` with symbolic `t`: −1 on the
/// diagonal, `t` on the superdiagonal, last row `(−t, …, −t, −1−t)`.
pub fn build_aux_matrix(n: usize) -> Result<DenseMatrix<Poly<Rational>>> {
    if n == 0 {
        return Err(Error::InvalidOrder {
            n,
            reason: "order must be at least 1",
        });
    }
    let one = || Rational::from(1);
    let zero = Rational::new;
    Ok(DenseMatrix::from_fn(n, n, |s, t| {
        let c0 = if s == t { -one() } else { zero() };
        let mut c1 = if t == s + 1 { one() } else { zero() };
        if s == n - 1 {
            c1 -= 1;
        }
        Poly::linear(c0, c1)
    }))
}

/// `M_n` evaluated at a rational `t`.
pub fn build_aux_matrix_at(t: &Rational, n: usize) -> Result<DenseMatrix<Rational>> {
    Ok(build_aux_matrix(n)?.map(|e| e.eval(t)))
}

/// `M_n` evaluated at a complex `t`.
pub fn build_aux_matrix_complex(t: &Complex, n: usize) -> Result<DenseMatrix<Complex>> {
    Ok(build_aux_matrix(n)?.map(|e| e.eval_complex(t)))
}

/// `tI − B_n` with symbolic `t`, for real β.
pub fn build_shifted(beta: &BetaParam, n: usize) -> Result<DenseMatrix<Poly<Rational>>> {
    let b = BetaMatrix::new(beta.clone(), n)?.dense_exact()?;
    Ok(DenseMatrix::from_fn(n, n, |s, t| {
        let c1 = Rational::from(u32::from(s == t));
        Poly::linear(-b[(s, t)].clone(), c1)
    }))
}

/// `tI − B_n` at a rational `t`.
pub fn build_shifted_at(beta: &BetaParam, n: usize, t: &Rational) -> Result<DenseMatrix<Rational>> {
    Ok(build_shifted(beta, n)?.map(|e| e.eval(t)))
}

/// `X_{n−1} = T_{n−1} + eeᵀ`: all ones except twos on the subdiagonal.
pub fn build_x_block(n: usize) -> Result<DenseMatrix<Integer>> {
    if n < 2 {
        return Err(Error::InvalidOrder {
            n,
            reason: "the beta = 1 block needs n >= 2",
        });
    }
    let m = n - 1;
    Ok(DenseMatrix::from_fn(m, m, |s, t| Integer::from(if s == t + 1 { 2 } else { 1 })))
}

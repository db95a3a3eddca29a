//! Exact rational elimination and a multiprecision Jacobi eigensolver.

#![allow(clippy::needless_range_loop)]

use rug::{Complex, Float, Integer, Rational};

use crate::betamatrix::DenseMatrix;
use crate::error::{Error, Result};

/// Exact determinant by fraction-free (Bareiss) elimination.
///
/// Each row is first scaled to integers by the lcm of its denominators, so
/// every intermediate quotient is an exact integer division.
pub fn determinant(m: &DenseMatrix<Rational>) -> Result<Rational> {
    require_square(m)?;
    let n = m.rows();
    if n == 0 {
        return Ok(Rational::from(1));
    }
    let mut scale = Integer::from(1);
    let mut a: Vec<Vec<Integer>> = m
        .iter_rows()
        .map(|row| {
            let l = row
                .iter()
                .fold(Integer::from(1), |acc, x| acc.lcm(x.denom()));
            let ints = row
                .iter()
                .map(|x| x.numer() * Integer::from(&l / x.denom()))
                .collect();
            scale *= &l;
            ints
        })
        .collect();

    let mut negate = false;
    let mut prev = Integer::from(1);
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| a[i][k] != 0) else {
            return Ok(Rational::new());
        };
        if p != k {
            a.swap(p, k);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = Integer::from(&a[i][j] * &a[k][k]) - Integer::from(&a[i][k] * &a[k][j]);
                a[i][j] = v.div_exact(&prev);
            }
        }
        prev = a[k][k].clone();
    }
    let mut det = Rational::from((a[n - 1][n - 1].clone(), scale));
    if negate {
        det = -det;
    }
    Ok(det)
}

/// Exact rank by Gaussian elimination over the rationals.
pub fn rank_exact(m: &DenseMatrix<Rational>) -> usize {
    let mut a: Vec<Vec<Rational>> = m.iter_rows().map(<[Rational]>::to_vec).collect();
    let (rows, cols) = (m.rows(), m.cols());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(p, rank);
        let pivot = a[rank][c].clone();
        for i in rank + 1..rows {
            if a[i][c] == 0 {
                continue;
            }
            let f = Rational::from(&a[i][c] / &pivot);
            for j in c..cols {
                let d = Rational::from(&f * &a[rank][j]);
                a[i][j] -= d;
            }
        }
        rank += 1;
    }
    rank
}

/// Solves `m x = b` exactly. Fails with [`Error::Singular`] for a singular `m`.
pub fn solve_exact(m: &DenseMatrix<Rational>, b: &[Rational]) -> Result<Vec<Rational>> {
    require_square(m)?;
    let n = m.rows();
    if b.len() != n {
        return Err(Error::InvalidParameter(format!(
            "right-hand side has length {}, expected {n}",
            b.len()
        )));
    }
    let mut a: Vec<Vec<Rational>> = m
        .iter_rows()
        .zip(b)
        .map(|(row, bi)| row.iter().cloned().chain(std::iter::once(bi.clone())).collect())
        .collect();
    for k in 0..n {
        let p = (k..n)
            .find(|&i| a[i][k] != 0)
            .ok_or_else(|| Error::Singular(format!("no pivot in column {k}")))?;
        a.swap(p, k);
        let pivot = a[k][k].clone();
        for v in a[k].iter_mut().skip(k) {
            *v /= &pivot;
        }
        for i in 0..n {
            if i == k || a[i][k] == 0 {
                continue;
            }
            let f = a[i][k].clone();
            for j in k..=n {
                let d = Rational::from(&f * &a[k][j]);
                a[i][j] -= d;
            }
        }
    }
    Ok(a.into_iter().map(|row| row[n].clone()).collect())
}

const JACOBI_MAX_SWEEPS: usize = 100;

/// Eigenvalues of a real symmetric matrix by cyclic two-sided Jacobi
/// rotations at `bits` of precision, sorted nonincreasing.
pub fn symmetric_eigenvalues(m: &DenseMatrix<Float>, bits: u32) -> Result<Vec<Float>> {
    require_square(m)?;
    let n = m.rows();
    let mut a: Vec<Vec<Float>> = m
        .iter_rows()
        .map(|row| row.iter().map(|x| Float::with_val(bits, x)).collect())
        .collect();

    let tol = Float::with_val(bits, Float::i_exp(1, -(bits as i32 - 8)));
    let frob = {
        let mut s = Float::with_val(bits, 0);
        for row in &a {
            for x in row {
                s += Float::with_val(bits, x.square_ref());
            }
        }
        s.sqrt()
    };
    let threshold = Float::with_val(bits, &tol * &frob);

    let mut converged = n < 2;
    for _ in 0..JACOBI_MAX_SWEEPS {
        if converged {
            break;
        }
        let mut off = Float::with_val(bits, 0);
        for p in 0..n {
            for q in p + 1..n {
                off += Float::with_val(bits, a[p][q].square_ref());
            }
        }
        if off.sqrt() <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].is_zero() {
                    continue;
                }
                rotate(&mut a, p, q, bits);
            }
        }
    }
    if !converged {
        return Err(Error::Jacobi(JACOBI_MAX_SWEEPS));
    }
    let mut eig: Vec<Float> = (0..n).map(|i| a[i][i].clone()).collect();
    eig.sort_by(|x, y| y.total_cmp(x));
    Ok(eig)
}

fn rotate(a: &mut [Vec<Float>], p: usize, q: usize, bits: u32) {
    let n = a.len();
    // theta = (a_qq - a_pp) / (2 a_pq); t = sign(theta) / (|theta| + sqrt(theta^2 + 1))
    let mut theta = Float::with_val(bits, &a[q][q] - &a[p][p]);
    theta /= Float::with_val(bits, &a[p][q] * 2u32);
    let mut root = Float::with_val(bits, theta.square_ref());
    root += 1u32;
    root.sqrt_mut();
    let mut t = Float::with_val(bits, theta.abs_ref());
    t += &root;
    t.recip_mut();
    if theta.is_sign_negative() {
        t = -t;
    }
    let mut c = Float::with_val(bits, t.square_ref());
    c += 1u32;
    c.sqrt_mut();
    c.recip_mut();
    let s = Float::with_val(bits, &t * &c);

    let apq = a[p][q].clone();
    let delta = Float::with_val(bits, &t * &apq);
    a[p][p] -= &delta;
    a[q][q] += &delta;
    a[p][q] = Float::with_val(bits, 0);
    a[q][p] = Float::with_val(bits, 0);
    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = a[k][p].clone();
        let akq = a[k][q].clone();
        let new_kp = Float::with_val(bits, &c * &akp) - Float::with_val(bits, &s * &akq);
        let new_kq = Float::with_val(bits, &s * &akp) + Float::with_val(bits, &c * &akq);
        a[p][k] = new_kp.clone();
        a[k][p] = new_kp;
        a[q][k] = new_kq.clone();
        a[k][q] = new_kq;
    }
}

/// Eigenvalues of a complex Hermitian matrix, sorted nonincreasing.
///
/// A genuinely complex `H = A + iB` is handled through the real symmetric
/// embedding `[[A, −B], [B, A]]`, whose spectrum is that of `H` with every
/// eigenvalue doubled.
pub fn hermitian_eigenvalues(m: &DenseMatrix<Complex>, bits: u32) -> Result<Vec<Float>> {
    require_square(m)?;
    let n = m.rows();
    let is_real = m.iter_rows().all(|row| row.iter().all(|z| z.imag().is_zero()));
    if is_real {
        let real = m.map(|z| Float::with_val(bits, z.real()));
        return symmetric_eigenvalues(&real, bits);
    }
    let embedded = DenseMatrix::from_fn(2 * n, 2 * n, |i, j| {
        let z = &m[(i % n, j % n)];
        match (i < n, j < n) {
            (true, true) | (false, false) => Float::with_val(bits, z.real()),
            (true, false) => Float::with_val(bits, -z.imag()),
            (false, true) => Float::with_val(bits, z.imag()),
        }
    });
    let doubled = symmetric_eigenvalues(&embedded, bits)?;
    Ok(doubled.into_iter().step_by(2).collect())
}

fn require_square<T>(m: &DenseMatrix<T>) -> Result<()> {
    if !m.is_square() {
        return Err(Error::InvalidParameter(format!(
            "expected a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

//! The degenerate case β = 1.
//!
//! Here the first row of `B_n` vanishes and the trailing block is
//! `X_{n−1} = T_{n−1} + eeᵀ`, a positive matrix. Zero is a simple
//! eigenvalue, and the dominant eigenvalue `λ_M` of `X_{n−1}` behaves like
//! `n − 1/n + O(1/n²)`.

use rug::{Float, Integer, Rational};

use crate::beta::BetaParam;
use crate::betamatrix::build_x_block;
use crate::error::{Error, Result};
use crate::linalg::solve_exact;
use crate::numerics::digits_to_bits;

fn check_order(n: usize, min: usize) -> Result<()> {
    if n < min {
        return Err(Error::InvalidOrder {
            n,
            reason: if min == 2 { "needs n >= 2" } else { "needs n >= 3" },
        });
    }
    Ok(())
}

/// `w = (1, s)` with `X_{n−1} s = −(e + e_1)`, so that `B_n w = 0`.
pub fn kernel_vector(n: usize) -> Result<Vec<Rational>> {
    let x = build_x_block(n)?.map(|v| Rational::from(v));
    let mut rhs = vec![Rational::from(-1); n - 1];
    rhs[0] -= 1u32;
    let s = solve_exact(&x, &rhs).map_err(|e| match e {
        Error::Singular(msg) => Error::Inconsistency(format!("X_{} is singular: {msg}", n - 1)),
        other => other,
    })?;
    Ok(std::iter::once(Rational::from(1)).chain(s).collect())
}

/// `(X v)_1 = Σ v` and `(X v)_s = Σ v + v_{s−1}` for `s ≥ 2`.
fn apply_x_exact(v: &[Integer]) -> Vec<Integer> {
    let total: Integer = v.iter().sum();
    let mut out = Vec::with_capacity(v.len());
    out.push(total.clone());
    out.extend(v[..v.len() - 1].iter().map(|prev| Integer::from(&total + prev)));
    out
}

fn apply_x_float(v: &[Float], bits: u32) -> Vec<Float> {
    let mut total = Float::with_val(bits, 0);
    for x in v {
        total += x;
    }
    let mut out = Vec::with_capacity(v.len());
    out.push(total.clone());
    out.extend(v[..v.len() - 1].iter().map(|prev| Float::with_val(bits, &total + prev)));
    out
}

/// Exact power iterates `v_0 = e`, `v_{k+1} = X_{n−1} v_k`.
#[derive(Clone, Debug)]
pub struct PowerTrace {
    pub n: usize,
    /// `v_0 … v_K`.
    pub iterates: Vec<Vec<Integer>>,
    /// `(v_k)_1` for `k = 0 … K`.
    pub first_components: Vec<Integer>,
    /// `r_k = (v_{k+1})_1 / (v_k)_1` for `k = 0 … K−1`.
    pub ratios: Vec<Rational>,
}

pub fn power_method_trace(n: usize, iterations: usize) -> Result<PowerTrace> {
    check_order(n, 3)?;
    if iterations == 0 {
        return Err(Error::InvalidParameter("at least one power iteration is required".into()));
    }
    let mut iterates = vec![vec![Integer::from(1); n - 1]];
    for _ in 0..iterations {
        let next = apply_x_exact(iterates.last().unwrap());
        iterates.push(next);
    }
    let first_components: Vec<Integer> = iterates.iter().map(|v| v[0].clone()).collect();
    let ratios = first_components
        .windows(2)
        .map(|w| Rational::from((w[1].clone(), w[0].clone())))
        .collect();
    Ok(PowerTrace {
        n,
        iterates,
        first_components,
        ratios,
    })
}

#[derive(Clone, Debug)]
pub struct AsymptoticFit {
    pub n: usize,
    pub lambda_m: Float,
    /// `λ_M − n`.
    pub c0_est: Float,
    /// `n (λ_M − n)`.
    pub c1_est: Float,
    pub iterations: usize,
    /// Iterations carried out in exact integers before switching to floats.
    pub exact_iterations: usize,
}

#[derive(Clone, Debug)]
pub struct PowerOptions {
    /// Switch from integers to normalised floats once `(v_k)_1` has this many bits.
    pub cap_bits: u32,
    pub max_iterations: usize,
}

impl Default for PowerOptions {
    fn default() -> Self {
        PowerOptions {
            cap_bits: 1_000_000,
            max_iterations: 100_000,
        }
    }
}

/// Dominant eigenvalue of `X_{n−1}`, stopping once successive ratios of
/// first components differ by less than `10^-target_digits`.
pub fn lambda_max_beta1(n: usize, target_digits: u32) -> Result<AsymptoticFit> {
    lambda_max_beta1_with(n, target_digits, &PowerOptions::default())
}

pub fn lambda_max_beta1_with(n: usize, target_digits: u32, options: &PowerOptions) -> Result<AsymptoticFit> {
    check_order(n, 2)?;
    let bits = digits_to_bits(target_digits) + 64;
    let tol = Rational::from((1, Integer::from(Integer::u_pow_u(10, target_digits))));
    let tol_float = Float::with_val(bits, &tol);

    let mut v = vec![Integer::from(1); n - 1];
    let mut prev: Option<Rational> = None;
    let mut iterations = 0;
    let mut lambda: Option<Float> = None;
    while iterations < options.max_iterations {
        let next = apply_x_exact(&v);
        iterations += 1;
        let ratio = Rational::from((next[0].clone(), v[0].clone()));
        v = next;
        if let Some(p) = &prev {
            if Rational::from(&ratio - p).abs() < tol {
                lambda = Some(Float::with_val(bits, &ratio));
                break;
            }
        }
        prev = Some(ratio);
        if v[0].significant_bits() > options.cap_bits {
            break;
        }
    }
    let exact_iterations = iterations;

    if lambda.is_none() {
        let lead = Float::with_val(bits, &v[0]);
        let mut w: Vec<Float> = v.iter().map(|x| Float::with_val(bits, x) / &lead).collect();
        let mut prev = prev.map(|p| Float::with_val(bits, &p));
        while iterations < options.max_iterations {
            let next = apply_x_float(&w, bits);
            iterations += 1;
            let ratio = next[0].clone();
            w = next.into_iter().map(|x| x / &ratio).collect();
            if let Some(p) = &prev {
                if Float::with_val(bits, &ratio - p).abs() < tol_float {
                    lambda = Some(ratio);
                    break;
                }
            }
            prev = Some(ratio);
        }
    }
    let lambda_m = lambda.ok_or(Error::PowerMethod(options.max_iterations))?;
    let c0_est = Float::with_val(bits, &lambda_m - n as u64);
    let c1_est = Float::with_val(bits, &c0_est * n as u64);
    Ok(AsymptoticFit {
        n,
        lambda_m,
        c0_est,
        c1_est,
        iterations,
        exact_iterations,
    })
}

/// `λ_M < n`, a Gerschgorin row-sum bound.
pub fn gerschgorin_check(n: usize) -> Result<bool> {
    check_order(n, 3)?;
    Ok(lambda_max_beta1(n, 20)?.lambda_m < n as u64)
}

/// Richardson estimate of `c_2` from fits at doubling orders, using
/// `n² (λ_M − n + 1/n) = c_2 + c_3/n + …`. No reference value exists; the
/// estimate is reported, not asserted.
pub fn c2_estimate(fits: &[AsymptoticFit]) -> Option<f64> {
    let scaled: Vec<(usize, f64)> = fits
        .iter()
        .map(|f| {
            let n = f.n as f64;
            let rest = Float::with_val(f.lambda_m.prec(), &f.c0_est + Rational::from((1, f.n as u64)));
            (f.n, n * n * rest.to_f64())
        })
        .collect();
    scaled
        .windows(2)
        .filter(|w| w[1].0 == 2 * w[0].0)
        .map(|w| 2.0 * w[1].1 - w[0].1)
        .next_back()
}

/// β = 1 as a parameter, for callers that go through the general API.
pub fn beta_one() -> BetaParam {
    BetaParam::real(Rational::from(1)).expect("one is nonzero")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::betamatrix::BetaMatrix;
    use crate::linalg::rank_exact;

    fn poly(n: i64, coeffs: &[i64]) -> Integer {
        coeffs.iter().fold(Integer::new(), |acc, c| acc * n + c)
    }

    #[test]
    fn kernel_small_cases() {
        let w = kernel_vector(2).unwrap();
        assert_eq!(w, vec![Rational::from(1), Rational::from(-2)]);
        let w = kernel_vector(3).unwrap();
        assert_eq!(w, vec![Rational::from(1), Rational::from(1), Rational::from(-3)]);
        assert!(kernel_vector(1).is_err());
    }

    #[test]
    fn kernel_is_annihilated() {
        for n in 2..=10 {
            let w = kernel_vector(n).unwrap();
            let bw = BetaMatrix::new(beta_one(), n).unwrap().apply_exact(&w).unwrap();
            assert!(bw.iter().all(|x| *x == 0), "n={n}");
        }
    }

    #[test]
    fn rank_drops_by_one() {
        for n in [2, 5, 9] {
            let b = BetaMatrix::new(beta_one(), n).unwrap().dense_exact().unwrap();
            assert_eq!(rank_exact(&b), n - 1);
        }
    }

    #[test]
    fn first_components_follow_the_table() {
        for n in [10i64, 50, 100] {
            let t = power_method_trace(n as usize, 6).unwrap();
            let v = &t.first_components;
            assert_eq!(v[1], poly(n, &[1, -1]));
            assert_eq!(v[2], poly(n, &[1, -1, -1]));
            assert_eq!(v[3], poly(n, &[1, -1, -2, 0]));
            assert_eq!(v[4], poly(n, &[1, -1, -3, 0, 1]));
            assert_eq!(v[5], poly(n, &[1, -1, -4, 0, 3, 1]));
            let nq = Rational::from(n);
            let r = |num: Integer, den: Integer| &nq - Rational::from((num, den));
            assert_eq!(t.ratios[1], r(Integer::from(1), Integer::from(n - 1)));
            assert_eq!(t.ratios[2], r(Integer::from(n), v[2].clone()));
            assert_eq!(t.ratios[3], r(Integer::from(n - 1), Integer::from(n * (n - 2))));
            // The tabulated closed forms for r_4 and r_5 do not match the
            // iterates; these are the forms the iterates satisfy.
            assert_eq!(t.ratios[4], r(poly(n, &[1, 0, -2, -1]), v[4].clone()));
            assert_eq!(t.ratios[5], r(poly(n, &[1, 0, -3, -2, 0]), v[5].clone()));
        }
    }

    #[test]
    fn trace_is_positive_and_increasing() {
        let t = power_method_trace(12, 20).unwrap();
        assert!(t.iterates.iter().flatten().all(|x| *x > 0));
        // r_0 < r_1 > r_2 always; later ratios oscillate around λ_M because
        // subdominant eigenvalues of X come in complex pairs, so only the
        // shrinking distance to λ_M is checked.
        assert!(t.ratios[0] < t.ratios[1] && t.ratios[1] > t.ratios[2]);
        let lambda = lambda_max_beta1(12, 40).unwrap().lambda_m;
        let dist = |r: &Rational| Float::with_val(200, r - &lambda).abs();
        assert!(dist(&t.ratios[19]) < Float::with_val(200, dist(&t.ratios[1]) * 1e-9));
        assert!(power_method_trace(2, 3).is_err());
        assert!(power_method_trace(5, 0).is_err());
    }

    #[test]
    fn small_blocks() {
        assert_eq!(lambda_max_beta1(2, 20).unwrap().lambda_m, 1);
        let fit = lambda_max_beta1(3, 30).unwrap();
        let want = Float::with_val(200, Float::with_val(200, 2).sqrt() + 1u32);
        assert!(Float::with_val(200, &fit.lambda_m - &want).abs() < 1e-29);
        assert!(gerschgorin_check(3).unwrap());
    }

    #[test]
    fn float_fallback_agrees() {
        let exact = lambda_max_beta1(30, 40).unwrap();
        let options = PowerOptions {
            cap_bits: 64,
            ..PowerOptions::default()
        };
        let float = lambda_max_beta1_with(30, 40, &options).unwrap();
        assert!(float.exact_iterations < float.iterations);
        assert!(Float::with_val(200, &exact.lambda_m - &float.lambda_m).abs() < 1e-38);
    }

    #[test]
    fn iteration_cap_is_reported() {
        let options = PowerOptions {
            max_iterations: 2,
            ..PowerOptions::default()
        };
        assert!(matches!(lambda_max_beta1_with(40, 30, &options), Err(Error::PowerMethod(2))));
    }

    #[test]
    fn asymptotics_at_fifty() {
        let fit = lambda_max_beta1(50, 30).unwrap();
        assert!((fit.c0_est.to_f64() + 0.0204166702).abs() < 1e-9);
        assert!((fit.c1_est.to_f64() + 1.0208335106).abs() < 1e-9);
        assert!(fit.lambda_m < 50);
    }

    #[test]
    fn c2_is_finite() {
        let fits: Vec<_> = [25, 50, 100].iter().map(|&n| lambda_max_beta1(n, 30).unwrap()).collect();
        assert!(c2_estimate(&fits).unwrap().is_finite());
        assert!(c2_estimate(&fits[..1]).is_none());
    }
}

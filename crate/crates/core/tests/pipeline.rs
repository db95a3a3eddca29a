use betamat::charpoly::{charpoly_exact, det_oracle};
use betamat::betamatrix::build_shifted;
use betamat::limitcase::{kernel_vector, lambda_max_beta1};
use betamat::report::{root_json, write_csv, write_json, ClusterRow};
use betamat::rootfind::solve_all;
use betamat::spectra::{cluster_count, find_outliers, singular_values, spectrum};
use betamat::{BetaMatrix, BetaParam, ClosedForm, Error};
use rug::{Complex, Float};

fn beta(s: &str) -> BetaParam {
    BetaParam::parse(s).unwrap()
}

#[test]
fn closed_form_roots_are_eigenvalues() {
    let b = beta("5/2");
    let n = 9;
    let p = charpoly_exact(&b, n).unwrap();
    assert_eq!(p, det_oracle(&build_shifted(&b, n).unwrap()).unwrap());
    let set = solve_all(&ClosedForm::new(&b, n).unwrap(), 30).unwrap();
    let trace = BetaMatrix::new(b, n).unwrap().trace_exact().unwrap();
    let diff = Complex::with_val(set.precision_used, set.sum() - &trace);
    assert!(Float::with_val(64, diff.abs().real()) < 1e-25);
}

#[test]
fn outliers_approach_their_limits() {
    let b = beta("4/3");
    let a = find_outliers(&b, 40, 30).unwrap();
    let c = find_outliers(&b, 80, 30).unwrap();
    assert!(c.err_large.unwrap() < a.err_large.unwrap());
    assert!(c.err_small.unwrap() < a.err_small.unwrap());
}

#[test]
fn cluster_rows_serialize() {
    let b = beta("3");
    let set = spectrum(&b, 60, 20).unwrap();
    let report = cluster_count(&set, &b, 0.05).unwrap();
    let mut buf = Vec::new();
    write_csv(&mut buf, &[ClusterRow::from(&report)]).unwrap();
    assert_eq!(String::from_utf8(buf).unwrap(), "n,beta,epsilon,outside_count\n60,3,0.05,0\n");
    let mut json = Vec::new();
    write_json(&mut json, &root_json(&set, &b, 10)).unwrap();
    let v: serde_json::Value = serde_json::from_slice(&json).unwrap();
    assert_eq!(v["roots"].as_array().unwrap().len(), 60);
}

#[test]
fn beta_one_is_singular_with_known_kernel() {
    let one = beta("1");
    let n = 12;
    let w = kernel_vector(n).unwrap();
    assert!(BetaMatrix::new(one.clone(), n).unwrap().apply_exact(&w).unwrap().iter().all(|x| *x == 0));
    let sigma = singular_values(&one, n, 200).unwrap();
    assert!(sigma.last().unwrap().clone().abs() < 1e-25);
    assert!(lambda_max_beta1(n, 30).unwrap().lambda_m < n as u32);
}

#[test]
fn inputs_are_validated() {
    assert!(matches!(BetaParam::parse("0"), Err(e) if e.is_usage()));
    assert!(matches!(find_outliers(&beta("3"), 20, 20), Err(Error::InvalidParameter(_))));
    assert!(BetaMatrix::new(beta("2"), 0).is_err());
}

//! β-matrices `B_n = T_n(e^{iθ}) + (v − e_1)eᵀ` with `v_j = β^{−j}`: exact
//! construction, closed-form characteristic polynomials, high-precision
//! spectra and the analytics built on them.

pub mod beta;
pub mod betamatrix;
pub mod charpoly;
pub mod error;
pub mod limitcase;
pub mod linalg;
pub mod numerics;
pub mod poly;
pub mod report;
pub mod rootfind;
pub mod spectra;

pub use beta::{BetaClass, BetaParam};
pub use betamatrix::{build_beta_matrix, BetaMatrix, DenseMatrix};
pub use charpoly::{ClosedForm, LimitFunction, LimitKind};
pub use error::{Error, Result};
pub use limitcase::{AsymptoticFit, PowerTrace};
pub use numerics::{ExactRational, PrecComplex, PrecReal, Precision};
pub use poly::{ExactPoly, Poly, PrecPoly};
pub use rootfind::{CoefficientSource, RootSet, SolveOptions};
pub use spectra::{ClusterReport, OutlierRecord, TestFunction, WeylKind, WeylReport};

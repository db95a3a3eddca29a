use crate::beta::BetaClass;
use crate::rootfind::RootSet;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("precision of {0} bits is below the minimum of {min} bits", min = crate::numerics::MIN_PRECISION)]
    Precision(u32),

    #[error("invalid matrix order {n}: {reason}")]
    InvalidOrder { n: usize, reason: &'static str },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("cannot parse `{input}`: {reason}")]
    Parse { input: String, reason: String },

    #[error("{feature} does not accept beta = {beta} (class {class})")]
    UnsupportedBeta {
        feature: &'static str,
        beta: String,
        class: BetaClass,
    },

    #[error("determinant oracle is limited to order {limit}, got {n}")]
    SizeLimit { n: usize, limit: usize },

    #[error("polynomial has a zero constant term, so 0 is a root")]
    ZeroRoot,

    #[error("limit function has a pole at t = {0}")]
    Pole(String),

    #[error("t = {0} lies outside the open unit disk")]
    OutsideDisk(String),

    #[error("root finder did not converge within {sweeps} sweeps at {bits} bits")]
    Convergence {
        sweeps: usize,
        bits: u32,
        best: Box<RootSet>,
    },

    #[error("Newton refinement failed: {0}")]
    Refinement(String),

    #[error("internal inconsistency: {0}")]
    Inconsistency(String),

    #[error("Jacobi eigensolver did not converge after {0} sweeps")]
    Jacobi(usize),

    #[error("power method did not converge within {0} iterations")]
    PowerMethod(usize),

    #[error("singular matrix: {0}")]
    Singular(String),

    #[error("unknown test function `{0}`")]
    UnknownTestFunction(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Precision(_) => "precision",
            Error::InvalidOrder { .. } => "invalid_order",
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::Parse { .. } => "parse",
            Error::UnsupportedBeta { .. } => "unsupported_beta",
            Error::SizeLimit { .. } => "size_limit",
            Error::ZeroRoot => "zero_root",
            Error::Pole(_) => "pole",
            Error::OutsideDisk(_) => "outside_disk",
            Error::Convergence { .. } => "convergence",
            Error::Refinement(_) => "refinement",
            Error::Inconsistency(_) => "inconsistency",
            Error::Jacobi(_) => "jacobi",
            Error::PowerMethod(_) => "power_method",
            Error::Singular(_) => "singular",
            Error::UnknownTestFunction(_) => "unknown_test_function",
            Error::Io(_) => "io",
            Error::Csv(_) => "csv",
            Error::Json(_) => "json",
        }
    }

    /// True for errors caused by the caller's inputs rather than by a
    /// computation going wrong.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::Precision(_)
                | Error::InvalidOrder { .. }
                | Error::InvalidParameter(_)
                | Error::Parse { .. }
                | Error::UnsupportedBeta { .. }
                | Error::SizeLimit { .. }
                | Error::UnknownTestFunction(_)
                | Error::OutsideDisk(_)
                | Error::Pole(_)
        )
    }
}

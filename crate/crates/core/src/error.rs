use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("precision infeasible: {0}")]
    PrecisionInfeasible(String),

    #[error("pole at s = {0}")]
    Pole(String),

    #[error("truncation insufficient: {0}")]
    TruncationInsufficient(String),

    #[error("S_{0} has dimension zero")]
    DimensionZero(u32),

    #[error("eigenvalue cluster unresolved at working precision: {0}")]
    NonSemisimpleNumerics(String),

    #[error("root iteration did not converge after {iterations} iterations (degree {degree})")]
    NonConvergence { degree: usize, iterations: usize },

    #[error("root cluster unresolved: {0}")]
    ClusterUnresolved(String),

    #[error("real roots do not form a quadruple {{±a, ±1/a}}: {0}")]
    MalformedRealSet(String),

    #[error("branch ambiguity in eta multiplier: {0}")]
    BranchAmbiguity(String),

    #[error("polynomial fit residual exceeded: {0}")]
    FitResidualExceeded(String),

    #[error("coefficient bound |a_n| <= 2 n^k violated at n = {0}")]
    CoefficientBound(usize),

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("covariance ({cxx}, {cxy}, {cyy}) is not positive semidefinite")]
    NotPositiveSemidefinite { cxx: f64, cxy: f64, cyy: f64 },

    /// The four-directional moment system has no nonnegative solution.
    #[error(
        "covariance ({cxx}, {cxy}, {cyy}) is infeasible for four-directional box splines: \
         requires |cxy| <= min(cxx, cyy)"
    )]
    InfeasibleCovariance { cxx: f64, cxy: f64, cyy: f64 },

    #[error("covariance ({cxx}, {cxy}, {cyy}) is singular")]
    SingularCovariance { cxx: f64, cxy: f64, cyy: f64 },

    /// With a single direction the sum is supported on a line and its
    /// covariance is rank one.
    #[error("n = {n} gives a rank-one covariance, not an isotropic one")]
    DegenerateCovariance { n: usize },

    #[error("unsupported argument: {0}")]
    Unsupported(String),

    #[error("unsupported directions: the fast filter only handles angles 0, pi/4, pi/2, 3pi/4 (got {0:?})")]
    UnsupportedDirection(Vec<f64>),

    #[error("extent {given} does not cover the kernel support; need at least {required}")]
    ExtentTooSmall { given: f64, required: f64 },

    #[error("grid geometry mismatch: {0}")]
    GeometryMismatch(String),

    #[error("dimension mismatch: expected {expected:?}, found {found:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },

    #[error("failed to allocate storage for {0} samples")]
    Allocation(usize),

    #[error("PGM parse error at byte {offset}: {message}")]
    Pgm { offset: usize, message: String },

    #[error("CSV parse error at line {line}: {message}")]
    Csv { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

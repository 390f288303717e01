use thiserror::Error;

/// Errors raised by the exact and numeric routines of this crate.
///
/// Every variant describes a violated mathematical precondition; I/O and
/// configuration problems belong to the callers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("invalid Gaussian rational literal {0:?}")]
    Parse(String),

    #[error("degenerate window: {0}")]
    DegenerateWindow(String),

    #[error("point ({x}, {y}) lies outside the window")]
    OutOfWindow { x: i64, y: i64 },

    #[error("window must be anchored at the origin, found ({x_min}, {y_min})")]
    NotAnchored { x_min: i64, y_min: i64 },

    #[error("value count {found} does not match window size {expected}")]
    ShapeMismatch { expected: usize, found: usize },

    #[error("compatibility condition fails at (m, n) = ({m}, {n})")]
    Incompatible { m: usize, n: usize },

    #[error("zeta table holds degree {available}, but degree {required} is needed")]
    TableTooSmall { required: usize, available: usize },

    #[error("series known only up to degree {available}, but degree {required} is needed")]
    TruncatedSeries { required: usize, available: usize },

    #[error(
        "neither factor has finite support and expandability of the product is not certified; \
         supply an explicit truncation degree"
    )]
    NeedsTruncation,

    #[error("denominator vanishes at x = {0}")]
    DenominatorRoot(u64),

    #[error("pole {0} lies in the nonnegative integers")]
    PoleOnLattice(String),

    #[error("x I - A is singular at x = {0}")]
    SingularResolvent(i64),

    #[error("matrix dimensions disagree: {0}")]
    Dimension(String),

    #[error("growth estimate undefined: {0}")]
    GrowthUndefined(String),

    #[error("operator norm {norm} is not below {bound}")]
    NormTooLarge { norm: f64, bound: f64 },

    #[error("singular matrix in {0}")]
    SingularMatrix(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

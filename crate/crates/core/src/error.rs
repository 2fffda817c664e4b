use thiserror::Error;

/// Everything that can go wrong in this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on an argument was violated.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The averaging window is too narrow for the sampling grid.
    #[error("range {range} spans only {cells:.2} grid cells (at least 8 required)")]
    RangeTooSmallForGrid { range: f64, cells: f64 },

    /// A series did not reach the requested tail tolerance within the index cap.
    #[error("series did not converge: tail bound {bound:e} still above tolerance {tol:e} at k_max = {k_max}")]
    NonConvergence { k_max: usize, bound: f64, tol: f64 },

    /// A disk point lies outside the region where the function may be evaluated.
    #[error("radius {0} is outside the open unit disk")]
    RadiusOutOfRange(f64),

    /// The complex kernel needs the evaluation radius strictly inside the source radius.
    #[error("radius ordering violated: need rho ({rho}) < rho1 ({rho1}) <= 1")]
    RadiusOrdering { rho: f64, rho1: f64 },

    /// The averaging segment leaves the open unit disk.
    #[error("segment leaves the open unit disk (endpoint modulus {0})")]
    SegmentEscapesDisk(f64),

    /// The term-wise differentiated series is not absolutely convergent at this order.
    #[error("derivative of order {derivative} needs construction order >= {}, got {order}", derivative + 2)]
    InsufficientOrder { order: u32, derivative: u32 },

    /// Nested oracle averaging is capped because its cost grows geometrically.
    #[error("oracle depth {0} exceeds the supported maximum of 6")]
    DepthExceeded(usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

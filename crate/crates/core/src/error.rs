use thiserror::Error;

/// Errors raised by the numerical kernels.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("trace is not 1 (got {0})")]
    InvalidTrace(f64),

    #[error("not a state: eigenvalue {0:.3e} below tolerance")]
    NotPositive(f64),

    #[error("non-finite matrix entry")]
    NonFinite,

    #[error("eigendecomposition did not converge after {sweeps} sweeps (off-diagonal norm {residual:.3e})")]
    NoConvergence { sweeps: usize, residual: f64 },

    #[error("Kraus operators are not complete (deviation {0:.3e})")]
    KrausIncomplete(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("derivative has a component of size {0:.3e} outside the support of the state")]
    SupportMismatch(f64),

    #[error("closed form requires a mixed state (det rho = {0:.3e})")]
    PureState(f64),

    #[error("finite-difference stencil failed after {0} step reductions")]
    StencilFailure(usize),

    #[error("internal consistency check failed: residual {0:.3e}")]
    Consistency(f64),

    #[error("trace drift {0:.3e} exceeds tolerance; reduce the step size")]
    TraceDrift(f64),

    #[error("hierarchy truncation did not converge up to depth {depth} (change {change:.3e})")]
    Truncation { depth: usize, change: f64 },

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

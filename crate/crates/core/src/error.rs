use thiserror::Error;

/// Errors produced by construction and propagation routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("fractional order must lie strictly in (0, 1), got {0}")]
    InvalidOrder(f64),

    #[error("gamma function domain error: z = {0} is not positive")]
    GammaDomain(f64),

    #[error("kernel index must be >= 1, got {0}")]
    InvalidKernelIndex(usize),

    #[error("invalid parameter {name}: {value} (must be > 0)")]
    NonPositiveParameter { name: &'static str, value: f64 },

    #[error("adjacency matrix is not square: {rows} x {cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("graph needs at least 2 agents, got {0}")]
    TooFewAgents(usize),

    #[error("self edge at node {0} (diagonal entries must be zero)")]
    SelfEdge(usize),

    #[error("negative or non-finite weight {value} at ({row}, {col})")]
    BadWeight { row: usize, col: usize, value: f64 },

    #[error("control history is empty (at least u_0 is required past t_0)")]
    EmptyHistory,

    #[error("control history holds {found} entries but step {step} requires {expected}")]
    HistoryLengthMismatch {
        step: usize,
        expected: usize,
        found: usize,
    },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("time {t} outside covered range [{t_min}, {t_max}]")]
    TimeOutOfRange { t: f64, t_min: f64, t_max: f64 },

    #[error("horizon must be >= 1")]
    EmptyHorizon,
}

pub type Result<T> = std::result::Result<T, Error>;

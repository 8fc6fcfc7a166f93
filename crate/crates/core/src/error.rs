use thiserror::Error;

/// Errors raised by the library. Edge and neuron indices in messages are
/// 1-based to match user-facing configuration files.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("edge {edge}: endpoint {index} is outside 1..={n}")]
    IndexOutOfRange { edge: usize, index: usize, n: usize },

    #[error("edge {edge}: duplicate of edge {first} ({post}, {pre})")]
    DuplicateEdge {
        edge: usize,
        first: usize,
        post: usize,
        pre: usize,
    },

    #[error("edge {edge}: coupling coefficient is zero")]
    ZeroCoefficient { edge: usize },

    #[error("dimension mismatch for {what}: expected {expected}, got {got}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("diagonal block {block} is not square ({rows}x{cols})")]
    NonSquareDiagonalBlock {
        block: &'static str,
        rows: usize,
        cols: usize,
    },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("matrix is not Metzler: entry ({row}, {col}) = {value}")]
    NotMetzler { row: usize, col: usize, value: f64 },

    #[error("matrix is reducible; a positive delta is required")]
    ReducibleWithZeroDelta,

    #[error("power iteration did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("weight {index} is not strictly positive ({value})")]
    NonPositiveWeight { index: usize, value: f64 },

    #[error("unsupported norm exponent {0}; expected 1 or infinity")]
    UnsupportedExponent(f64),

    #[error("step size {dt} violates the stability guard dt <= {limit}")]
    UnstableStep { dt: f64, limit: f64 },

    #[error("state became non-finite at t = {t}")]
    NonFiniteState { t: f64 },

    #[error("trajectories are not on the same time grid")]
    GridMismatch,

    #[error("rate window [{start}, {end}] holds fewer than two usable samples")]
    DegenerateWindow { start: f64, end: f64 },

    #[error("interaction matrix H is not symmetric")]
    NonSymmetricH,

    #[error("trajectory too short: need t_end >= {needed}, have {have}")]
    TrajectoryTooShort { needed: f64, have: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

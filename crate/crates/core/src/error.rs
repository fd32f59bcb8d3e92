use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid shape (d={modes}, N={particles}): {reason}")]
    Shape {
        modes: usize,
        particles: usize,
        reason: String,
    },
    #[error("invalid mode list: {0}")]
    Mode(String),
    #[error("tensor is not antisymmetric (max deviation {0:e})")]
    Antisymmetry(f64),
    #[error("norm check failed: expected {expected}, found {found}")]
    Norm { expected: f64, found: f64 },
    #[error("matrix is not unitary (max deviation {0:e})")]
    Unitarity(f64),
    #[error("subsystem size M={m} outside [1, {max}]")]
    Range { m: usize, max: usize },
    #[error("degenerate shape (N={particles}, d={modes}): {reason}")]
    DegenerateShape {
        modes: usize,
        particles: usize,
        reason: String,
    },
    #[error("purity {purity} violates the bound {bound} for M={m}")]
    BoundViolation { m: usize, purity: f64, bound: f64 },
    #[error("slot block must be a nonempty subset of 1..={particles}: {reason}")]
    Block { particles: usize, reason: String },
    #[error("states have different shapes")]
    ShapeMismatch,
    #[error("random direction is parallel to the base state")]
    DegenerateDirection,
    #[error("two-copy space dimension {dim} exceeds the limit {limit}")]
    DimensionTooLarge { dim: usize, limit: usize },
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

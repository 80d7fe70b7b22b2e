use thiserror::Error;

/// Library-wide error type.
///
/// `HypothesisViolated` carries the deleted vertex set accumulated before the
/// contradiction surfaced, so callers can inspect what the pruning removed.
#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: u32, n: usize },

    #[error("operation requires a nonempty vertex set")]
    EmptySet,

    #[error("graph is not connected")]
    NotConnected,

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("generation failed: {0}")]
    GenerationFailed(String),

    #[error("enumeration requires {required} subset checks, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u64 },

    #[error("expansion hypothesis violated after removing {} vertices", removed.len())]
    HypothesisViolated { removed: Vec<u32> },

    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),

    #[error("pattern too large: size {size} exceeds admissible bound {max}")]
    PatternTooLarge { size: usize, max: usize },

    #[error("embedding failed: {0}")]
    EmbeddingFailed(String),

    #[error("randomized construction failed after {attempts} attempts")]
    RandomnessFailure { attempts: u32 },

    #[error("instance too large for exact search: {0}")]
    TooLarge(String),
}

pub type Result<T> = std::result::Result<T, Error>;

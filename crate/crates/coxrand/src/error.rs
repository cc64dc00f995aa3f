//! Error type shared across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, CoxError>;

/// Everything that can go wrong between a schedule file and a finished
/// experiment.
#[derive(Debug, Error)]
pub enum CoxError {
    /// The finite label probabilities sum past 1 at the evaluated n.
    #[error("schedule overflow at n = {n}: finite label probabilities sum to {total}")]
    ScheduleOverflow { n: usize, total: f64 },

    /// A finite edge label below 2, or a malformed label string.
    #[error("invalid edge label {0:?}: finite labels must be integers >= 2")]
    InvalidLabel(String),

    /// Dense pair storage refuses graphs past the configured cap.
    #[error("graph on {n} vertices exceeds the dense storage cap of {cap}")]
    GraphTooLarge { n: usize, cap: usize },

    #[error("vertex {v} out of range for a graph on {n} vertices")]
    VertexOutOfRange { v: usize, n: usize },

    #[error("subset of vertices must be nonempty")]
    EmptySubset,

    #[error("invalid rank for catalog type {0}")]
    InvalidRank(String),

    /// The nerve enumeration passed the face cap; a truncated complex
    /// has no usable homology, so this is an error, not a warning.
    #[error("face budget of {budget} exceeded while enumerating the nerve")]
    FaceBudgetExceeded { budget: usize },

    #[error("clique budget of {budget} exceeded")]
    CliqueBudgetExceeded { budget: usize },

    #[error("search budget of {budget} exceeded while enumerating subsets")]
    SearchBudgetExceeded { budget: usize },

    #[error("pattern on {k} vertices exceeds the supported maximum of {max}")]
    PatternTooLarge { k: usize, max: usize },

    #[error("asymptotics indeterminate: {0}")]
    IndeterminateAsymptotics(String),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("unknown pattern {name:?}; known names: {known}")]
    UnknownPattern { name: String, known: String },

    #[error("unknown preset {name:?}; known names: {known}")]
    UnknownPreset { name: String, known: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Caps on the combinatorial searches. All limits count enumerated
/// objects, not time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(default)]
pub struct Budgets {
    /// Maximum number of nerve faces enumerated.
    pub faces: usize,
    /// Maximum number of maximal cliques visited by the FC-type test.
    pub cliques: usize,
    /// Maximum number of connected subsets visited by the
    /// minimal-infinite-subset search.
    pub search: usize,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets { faces: 2_000_000, cliques: 1_000_000, search: 10_000_000 }
    }
}

use thiserror::Error;

/// Errors raised anywhere in the construction pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension must be at least 1")]
    ZeroDimension,

    #[error("point set is empty")]
    Empty,

    #[error("points are affinely dependent")]
    AffinelyDependent,

    /// A predicate returned ZERO/ON while building the triangulation. The
    /// payload holds the offending point identifiers (ranks inside the
    /// triangulation, input line numbers once mapped by the complex builder).
    #[error("degenerate input (general position violated) at points {points:?}")]
    Degenerate { points: Vec<usize> },

    #[error("duplicate point: line {second} repeats line {first}")]
    DuplicatePoint { first: usize, second: usize },

    #[error("no witness sphere exists for simplex {simplex:?}")]
    Infeasible { simplex: Vec<u32> },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: expected {expected} columns, found {found}")]
    ColumnCount {
        line: usize,
        expected: usize,
        found: usize,
    },

    #[error("line {line}: {found} columns with dimension {dim} implies a function value column is present")]
    GammaColumnPresent {
        line: usize,
        dim: usize,
        found: usize,
    },

    #[error("non-finite value on line {line}")]
    NonFinite { line: usize },

    #[error("{0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

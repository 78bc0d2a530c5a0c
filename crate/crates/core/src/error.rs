use thiserror::Error;

pub type Result<T> = std::result::Result<T, LfdaError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LfdaError {
    /// A Cholesky pivot was not positive. Callers may retry with a ridge.
    #[error("matrix is not positive definite (pivot {pivot} at index {index})")]
    NotPositiveDefinite { index: usize, pivot: f64 },

    #[error("symmetric eigensolver did not converge after {iterations} iterations")]
    ConvergenceFailure { iterations: usize },

    #[error("r = {r} exceeds the available dimension {max}")]
    BadRank { r: usize, max: usize },

    #[error("non-finite value at row {row}, column {col}")]
    NonFiniteInput { row: usize, col: usize },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("neighbour count k = {k} must lie in 1..={max}")]
    BadK { k: usize, max: usize },

    #[error("kernel bandwidth must be positive and finite, got {0}")]
    BadSigma(f64),

    #[error("beta must lie in [0, 1], got {0}")]
    BadBeta(f64),

    #[error("discard fraction must lie in [0, 1], got {0}")]
    BadFraction(f64),

    #[error("sample {index} has a missing label")]
    MissingLabel { index: usize },

    #[error("class '{class}' has {count} labeled samples, at least {min} required")]
    TooFewLabeledPerClass {
        class: String,
        count: usize,
        min: usize,
    },

    #[error("no labeled samples")]
    NoLabeledSamples,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimMismatch { expected: usize, got: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("model not transformable: kernel model was fit without training data")]
    KernelModelNotTransformable,
}

impl LfdaError {
    /// True for failures of the numerical routines rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            LfdaError::NotPositiveDefinite { .. } | LfdaError::ConvergenceFailure { .. }
        )
    }
}

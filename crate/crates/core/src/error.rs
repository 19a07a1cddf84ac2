//! Error type shared by all modules.

use thiserror::Error;

/// Errors reported by the library.
///
/// Verdicts are never encoded as errors: a tensor being in the null cone is
/// an ordinary result. Errors mean the question could not be answered as
/// posed (bad arguments, unparseable input, exhausted resources, or an
/// uncertified outcome that the caller must not mistake for a verdict).
#[derive(Debug, Error)]
pub enum Error {
    /// Normalized marginals divide by the squared norm, so the zero tensor
    /// has none.
    #[error("zero tensor has no normalized marginal")]
    ZeroTensor,

    /// An axis argument outside `1..=d`.
    #[error("axis {axis} out of range for a tensor with {order} acted axes")]
    AxisOutOfRange { axis: usize, order: usize },

    /// Shapes of two objects do not line up.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A marginal whose smallest eigenvalue is at or below the relative
    /// threshold `1e-12 * trace`, so inverse square roots are untrustworthy.
    #[error("marginal numerically singular on axis {axis}: min eigenvalue {lambda_min:.3e} <= {threshold:.3e}")]
    NumericallySingular {
        axis: usize,
        lambda_min: f64,
        threshold: f64,
    },

    /// A parameter violates a documented precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The computation ran to its budget without reaching a certified
    /// verdict. Distinct from an `IterationBudgetExhausted` verdict, which is
    /// only issued when the budget itself was certified.
    #[error("inconclusive: {0}")]
    Inconclusive(String),

    /// The instance exceeds a documented size budget.
    #[error("resource budget exceeded: {0}")]
    ResourceBudget(String),

    /// The operation is only meaningful on tensors carrying an exact
    /// (integer-built) entry view.
    #[error("exact entries required: {0}")]
    ExactEntriesRequired(String),

    /// Malformed input file or JSON document.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

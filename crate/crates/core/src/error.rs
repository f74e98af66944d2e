use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, OraError>;

#[derive(Debug, Clone, Error)]
pub enum OraError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The Lanczos recurrence produced a (numerically) zero vector.
    #[error("basis breakdown at degree {degree} (achieved degree {achieved})")]
    BasisBreakdown { degree: usize, achieved: usize },

    #[error("degenerate recurrence: zero subdiagonal entry in column {column}")]
    DegenerateRecurrence { column: usize },

    /// The leading basis coefficient vanishes; a lower degree should be requested.
    #[error("degree-deficient expansion: |c_n| = {leading:e} with ||c|| = {norm:e}")]
    DegreeDeficient { leading: f64, norm: f64 },

    #[error("pole {pole} lies on sample point {index} of the frequency grid")]
    PoleOnGrid { pole: Complex64, index: usize },

    #[error("numerical failure{}: {what}", iteration.map(|i| format!(" in iteration {i}")).unwrap_or_default())]
    NumericalFailure { iteration: Option<usize>, what: String },

    #[error("evaluation at a pole of the model (s = {0})")]
    EvaluationAtPole(Complex64),

    #[error("state matrix is defective or nearly so (eigenvector condition {0:e}); use the state-space form directly")]
    Defective(f64),

    #[error("all iterations failed: {}", log.iter().map(|(i, e)| format!("[{i}] {e}")).collect::<Vec<_>>().join("; "))]
    AllIterationsFailed { log: Vec<(usize, String)> },
}

impl OraError {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        OraError::InvalidArgument(msg.into())
    }

    pub(crate) fn numerical(iteration: Option<usize>, what: impl Into<String>) -> Self {
        OraError::NumericalFailure { iteration, what: what.into() }
    }

    /// Attach an iteration index to a numerical failure that does not have one yet.
    pub(crate) fn in_iteration(self, it: usize) -> Self {
        match self {
            OraError::NumericalFailure { iteration: None, what } => {
                OraError::NumericalFailure { iteration: Some(it), what }
            }
            other => other,
        }
    }
}

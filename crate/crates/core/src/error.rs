use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QError {
    #[error("|q| = {0} is not below 1")]
    InvalidBase(f64),

    #[error("invalid numerical policy: {0}")]
    InvalidPolicy(String),

    #[error("pole: {0}")]
    Pole(String),

    #[error("series did not converge within {terms} terms")]
    DivergentSeries { terms: usize },

    #[error("infinite product at base {base} needs more than {cap} factors")]
    CapExceeded { base: String, cap: usize },

    #[error("constraint violated: {0}")]
    ConstraintViolation(String),

    #[error("division by near-zero value {0:e}")]
    DivisionByNearZero(f64),

    #[error("quadrature did not converge with {nodes} nodes")]
    NoConvergence { nodes: usize },

    #[error("unknown parameter `{0}`")]
    UnknownParam(String),

    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),

    #[error("no admissible sample for `{id}` after {attempts} attempts")]
    SamplingExhausted { id: String, attempts: usize },

    #[error("outside domain: {0}")]
    Domain(String),

    #[error("invalid specification: {0}")]
    InvalidSpec(String),
}

impl QError {
    /// Pole and domain conditions are properties of the parameter point, not
    /// of the evaluator, and map to a skipped verdict.
    pub fn is_point_condition(&self) -> bool {
        matches!(
            self,
            QError::Pole(_)
                | QError::Domain(_)
                | QError::DivisionByNearZero(_)
                | QError::ConstraintViolation(_)
        )
    }
}

use thiserror::Error;

/// Errors raised by the sieves, estimators and simulators in this crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LabError {
    /// An integer range does not fit the supported 64-bit width.
    #[error("range error: {0}")]
    Range(String),

    /// A parameter violates an operation's precondition.
    #[error("invalid parameter `{name}`: {reason}")]
    Parameter { name: &'static str, reason: String },

    /// A formula was evaluated at a point where it is undefined.
    #[error("singular evaluation: {0}")]
    Singular(String),

    /// Malformed binary or textual input.
    #[error("format error: {0}")]
    Format(String),
}

impl LabError {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        LabError::Parameter {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T, E = LabError> = std::result::Result<T, E>;

use thiserror::Error;

/// Errors raised by the core algorithms.
///
/// Each variant maps to one of three process exit classes: malformed input,
/// failed numerical integrity check, or rejected candidate data.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum JresError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("integrity check failed ({check}): residual {residual:.3e} exceeds {tolerance:.3e}")]
    Integrity {
        check: String,
        residual: f64,
        tolerance: f64,
    },
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("candidate rejected by rule {rule}: {detail}")]
    Rejected { rule: Rule, detail: String },
    #[error("inconsistent data: {0}")]
    Inconsistent(String),
}

/// Admissibility rules for a candidate resonance set, checked in this order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Rule {
    /// Roots listed by non-decreasing modulus, none zero.
    R1,
    /// Closed under complex conjugation.
    R2,
    /// Roots in the closed unit disc are real and simple, and no root sits at
    /// the reciprocal of a bound-state root.
    R3,
    /// Parity of root counts between reciprocal bound-state roots.
    R4,
}

impl std::fmt::Display for Rule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Rule::R1 => "R1",
            Rule::R2 => "R2",
            Rule::R3 => "R3",
            Rule::R4 => "R4",
        };
        f.write_str(s)
    }
}

/// Exit classes used by the command-line front end.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Input,
    Integrity,
    Validation,
}

impl JresError {
    pub fn class(&self) -> ErrorClass {
        match self {
            JresError::InvalidInput(_) | JresError::Domain(_) => ErrorClass::Input,
            JresError::Integrity { .. } | JresError::Numerical(_) => ErrorClass::Integrity,
            JresError::Precondition(_) | JresError::Rejected { .. } | JresError::Inconsistent(_) => {
                ErrorClass::Validation
            }
        }
    }

    pub(crate) fn integrity(check: &str, residual: f64, tolerance: f64) -> Self {
        JresError::Integrity {
            check: check.to_string(),
            residual,
            tolerance,
        }
    }
}

pub type Result<T> = std::result::Result<T, JresError>;

use greymop::Error as CoreError;
use thiserror::Error;

use crate::session::SessionStatus;

#[derive(Debug, Error)]
pub enum PlannerError {
    #[error("parse error at line {line}, column {column} ({path}): {message}")]
    Parse {
        line: usize,
        column: usize,
        path: String,
        message: String,
    },

    #[error("invariant violation at {path}: {message}")]
    InvariantViolation { path: String, message: String },

    #[error("unknown model handle {0}")]
    UnknownHandle(String),

    #[error("unknown session {0}")]
    UnknownSession(String),

    #[error("session {id} is {status} and accepts no further steps")]
    SessionClosed { id: String, status: SessionStatus },

    #[error("model {handle} is a {found} document, expected {expected}")]
    WrongKind {
        handle: String,
        expected: &'static str,
        found: &'static str,
    },

    #[error("degenerate assessment: {message}")]
    DegenerateAssessment { message: String, advisory: String },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error(transparent)]
    Core(CoreError),

    #[error("storage error: {0}")]
    Io(#[from] std::io::Error),

    #[error("corrupt record {path}: {message}")]
    Corrupt { path: String, message: String },
}

pub const DEGENERATE_ADVISORY: &str =
    "the ideal, critical or positioned optimum is not strictly positive; adjust the whitening positions (theta or rho, beta, delta), the risk weight, or the target floor mu0";

impl From<CoreError> for PlannerError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::DegenerateAssessment(message) => PlannerError::DegenerateAssessment {
                message,
                advisory: DEGENERATE_ADVISORY.into(),
            },
            CoreError::Parameter(m) => PlannerError::Parameter(m),
            other => PlannerError::Core(other),
        }
    }
}

impl PlannerError {
    /// Short machine-readable error tag.
    pub fn kind(&self) -> &'static str {
        match self {
            PlannerError::Parse { .. } => "parse_error",
            PlannerError::InvariantViolation { .. } => "invariant_violation",
            PlannerError::UnknownHandle(_) => "unknown_handle",
            PlannerError::UnknownSession(_) => "unknown_session",
            PlannerError::SessionClosed { .. } => "session_closed",
            PlannerError::WrongKind { .. } => "wrong_kind",
            PlannerError::DegenerateAssessment { .. } => "degenerate_assessment",
            PlannerError::Parameter(_) => "parameter_error",
            PlannerError::Core(_) => "model_error",
            PlannerError::Io(_) => "storage_error",
            PlannerError::Corrupt { .. } => "storage_error",
        }
    }

    pub fn advisory(&self) -> Option<&str> {
        match self {
            PlannerError::DegenerateAssessment { advisory, .. } => Some(advisory),
            _ => None,
        }
    }
}

pub type Result<T> = std::result::Result<T, PlannerError>;

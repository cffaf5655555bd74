//! Model ingestion, persistence, interactive pleased-degree sessions and
//! batch reports over the `greymop` toolkit, with a CLI and an HTTP API.

pub mod document;
pub mod error;
pub mod http;
pub mod output;
pub mod report;
pub mod session;
pub mod store;

pub use document::{Document, DocumentKind};
pub use error::{PlannerError, Result};
pub use report::{run_report, Report, ReportRequest};
pub use session::{HistoryEntry, SessionState, SessionStatus, StartRequest, StepRequest};
pub use store::Store;

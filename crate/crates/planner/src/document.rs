//! Model documents: `{"kind": "lpgp" | "gmop" | "portfolio", "model": {...}}`.

use greymop::{GmopModel, GreyLinearProgram, PortfolioSpec};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{PlannerError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DocumentKind {
    Lpgp,
    Gmop,
    Portfolio,
}

impl DocumentKind {
    pub fn name(self) -> &'static str {
        match self {
            DocumentKind::Lpgp => "lpgp",
            DocumentKind::Gmop => "gmop",
            DocumentKind::Portfolio => "portfolio",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Document {
    Lpgp(GreyLinearProgram),
    Gmop(GmopModel),
    Portfolio(PortfolioSpec),
}

#[derive(Deserialize)]
struct KindProbe {
    kind: DocumentKind,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Envelope<T> {
    #[allow(dead_code)]
    kind: DocumentKind,
    model: T,
}

#[derive(Serialize)]
struct EnvelopeRef<'a, T> {
    kind: DocumentKind,
    model: &'a T,
}

fn strip_position(message: String) -> String {
    match message.rfind(" at line ") {
        Some(i) => message[..i].to_string(),
        None => message,
    }
}

fn convert(err: serde_path_to_error::Error<serde_json::Error>) -> PlannerError {
    let path = err.path().to_string();
    let inner = err.into_inner();
    let (line, column) = (inner.line(), inner.column());
    let message = strip_position(inner.to_string());
    if message.starts_with("invalid grey number") {
        PlannerError::InvariantViolation { path, message }
    } else {
        PlannerError::Parse {
            line,
            column,
            path,
            message,
        }
    }
}

/// Deserializes JSON text reporting line, column and field path on failure.
pub fn from_text<T: DeserializeOwned>(text: &str) -> Result<T> {
    let mut de = serde_json::Deserializer::from_str(text);
    let value = serde_path_to_error::deserialize(&mut de).map_err(convert)?;
    de.end().map_err(|e| PlannerError::Parse {
        line: e.line(),
        column: e.column(),
        path: ".".into(),
        message: strip_position(e.to_string()),
    })?;
    Ok(value)
}

fn invariant(e: greymop::Error) -> PlannerError {
    PlannerError::InvariantViolation {
        path: "model".into(),
        message: e.to_string(),
    }
}

impl Document {
    pub fn parse(text: &str) -> Result<Self> {
        let probe: KindProbe = from_text(text)?;
        let doc = match probe.kind {
            DocumentKind::Lpgp => Document::Lpgp(from_text::<Envelope<_>>(text)?.model),
            DocumentKind::Gmop => Document::Gmop(from_text::<Envelope<_>>(text)?.model),
            DocumentKind::Portfolio => Document::Portfolio(from_text::<Envelope<_>>(text)?.model),
        };
        doc.validate()?;
        Ok(doc)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Document::Lpgp(p) => p.validate().map_err(invariant),
            Document::Gmop(m) => m.validate().map_err(invariant),
            Document::Portfolio(s) => s.validate().map_err(invariant),
        }
    }

    pub fn kind(&self) -> DocumentKind {
        match self {
            Document::Lpgp(_) => DocumentKind::Lpgp,
            Document::Gmop(_) => DocumentKind::Gmop,
            Document::Portfolio(_) => DocumentKind::Portfolio,
        }
    }

    /// Stable serialization used for hashing and storage.
    pub fn canonical_json(&self) -> String {
        let kind = self.kind();
        let text = match self {
            Document::Lpgp(model) => serde_json::to_string(&EnvelopeRef { kind, model }),
            Document::Gmop(model) => serde_json::to_string(&EnvelopeRef { kind, model }),
            Document::Portfolio(model) => serde_json::to_string(&EnvelopeRef { kind, model }),
        };
        text.expect("model types serialize infallibly")
    }

    /// Content address: hex SHA-256 of the canonical serialization.
    pub fn handle(&self) -> String {
        hex::encode(Sha256::digest(self.canonical_json().as_bytes()))
    }

    pub fn model_value(&self) -> serde_json::Value {
        let v = match self {
            Document::Lpgp(m) => serde_json::to_value(m),
            Document::Gmop(m) => serde_json::to_value(m),
            Document::Portfolio(m) => serde_json::to_value(m),
        };
        v.expect("model types serialize infallibly")
    }
}

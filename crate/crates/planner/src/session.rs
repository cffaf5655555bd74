//! Interactive pleased-degree sessions.
//!
//! Each step whitens the risk weight, scalarizes (portfolio models), solves
//! the ideal, critical and positioned models and tests the pleased degree
//! against the target `[mu0, 1]`. Sessions persist as append-only JSONL
//! journals and are rebuilt by folding their events.

use std::fmt;
use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::PathBuf;

use greymop::{
    assess_pleased, scalarize, FeeMode, GreyLinearProgram, GreyNumber, PleasedAssessment,
    PortfolioOptions, PortfolioSpec, PositionSpec,
};
use serde::{Deserialize, Serialize};

use crate::document::{from_text, Document};
use crate::error::{PlannerError, Result};
use crate::store::Store;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SessionStatus {
    AwaitingLambda,
    Pleased,
    Abandoned,
}

impl fmt::Display for SessionStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SessionStatus::AwaitingLambda => "awaiting_lambda",
            SessionStatus::Pleased => "pleased",
            SessionStatus::Abandoned => "abandoned",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "model", rename_all = "lowercase")]
pub enum SessionModel {
    Lpgp(GreyLinearProgram),
    Portfolio(PortfolioSpec),
}

fn default_theta() -> f64 {
    0.5
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StartRequest {
    /// Model handle of an `lpgp` or `portfolio` document.
    pub model: String,
    /// `mu0`; the target set is `[mu0, 1]`.
    pub target_floor: f64,
    /// Whitening position of the risk weight.
    #[serde(default = "default_theta")]
    pub theta_lambda: f64,
    #[serde(default)]
    pub positioned: PositionSpec,
    #[serde(default)]
    pub risk_weight: Option<GreyNumber>,
    #[serde(default)]
    pub purchase_cap: bool,
}

/// A step may change the risk weight, the whitening positions, or both.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepRequest {
    #[serde(default)]
    pub risk_weight: Option<GreyNumber>,
    #[serde(default)]
    pub positioned: Option<PositionSpec>,
    #[serde(default)]
    pub theta_lambda: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistoryEntry {
    pub step: usize,
    pub risk_weight: Option<GreyNumber>,
    pub theta_lambda: f64,
    /// Whitened risk weight.
    pub weight: Option<f64>,
    pub positioned: PositionSpec,
    pub assessment: PleasedAssessment,
    /// `x_0..x_n` for portfolios, the full positioned optimum otherwise.
    pub allocation: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
enum JournalEvent {
    Start {
        session_id: String,
        model_handle: String,
        spec: SessionModel,
        target_floor: f64,
        theta_lambda: f64,
        positioned: PositionSpec,
        risk_weight: Option<GreyNumber>,
        purchase_cap: bool,
    },
    Step(HistoryEntry),
    Abandon,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionState {
    pub session_id: String,
    pub model_handle: String,
    pub spec: SessionModel,
    pub target_floor: f64,
    pub theta_lambda: f64,
    /// Positions used by the next step.
    pub positioned: PositionSpec,
    /// Risk weight used by the next step unless replaced.
    pub risk_weight: Option<GreyNumber>,
    pub purchase_cap: bool,
    pub history: Vec<HistoryEntry>,
    pub status: SessionStatus,
}

fn check_unit(name: &str, v: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&v) {
        return Err(PlannerError::Parameter(format!("{name} {v} is outside [0, 1]")));
    }
    Ok(())
}

impl SessionState {
    /// Builds an unjournaled session. `session_id` is supplied by the caller.
    pub fn new(session_id: String, doc: &Document, handle: &str, req: &StartRequest) -> Result<Self> {
        check_unit("target floor", req.target_floor)?;
        check_unit("theta_lambda", req.theta_lambda)?;
        let spec = match doc {
            Document::Lpgp(p) => SessionModel::Lpgp(p.clone()),
            Document::Portfolio(s) => SessionModel::Portfolio(s.clone()),
            Document::Gmop(_) => {
                return Err(PlannerError::WrongKind {
                    handle: handle.to_string(),
                    expected: "lpgp or portfolio",
                    found: "gmop",
                })
            }
        };
        if matches!(spec, SessionModel::Lpgp(_)) && req.risk_weight.is_some() {
            return Err(PlannerError::Parameter(
                "risk weights apply only to portfolio sessions".into(),
            ));
        }
        Ok(Self {
            session_id,
            model_handle: handle.to_string(),
            spec,
            target_floor: req.target_floor,
            theta_lambda: req.theta_lambda,
            positioned: req.positioned.clone(),
            risk_weight: req.risk_weight,
            purchase_cap: req.purchase_cap,
            history: Vec::new(),
            status: SessionStatus::AwaitingLambda,
        })
    }

    fn start_event(&self) -> JournalEvent {
        JournalEvent::Start {
            session_id: self.session_id.clone(),
            model_handle: self.model_handle.clone(),
            spec: self.spec.clone(),
            target_floor: self.target_floor,
            theta_lambda: self.theta_lambda,
            positioned: self.positioned.clone(),
            risk_weight: self.risk_weight,
            purchase_cap: self.purchase_cap,
        }
    }

    /// Runs one assessment and records it. Nothing is recorded on error.
    pub fn apply_step(&mut self, req: &StepRequest) -> Result<&HistoryEntry> {
        if self.status != SessionStatus::AwaitingLambda {
            return Err(PlannerError::SessionClosed {
                id: self.session_id.clone(),
                status: self.status,
            });
        }
        let risk_weight = req.risk_weight.or(self.risk_weight);
        let positioned = req.positioned.clone().unwrap_or_else(|| self.positioned.clone());
        let theta_lambda = req.theta_lambda.unwrap_or(self.theta_lambda);
        check_unit("theta_lambda", theta_lambda)?;

        let (assessment, allocation, weight) = match &self.spec {
            SessionModel::Lpgp(program) => {
                if req.risk_weight.is_some() {
                    return Err(PlannerError::Parameter(
                        "risk weights apply only to portfolio sessions".into(),
                    ));
                }
                let pc = positioned.resolve(program)?;
                let a = assess_pleased(program, &pc, self.target_floor)?;
                let alloc = a.point.clone();
                (a, alloc, None)
            }
            SessionModel::Portfolio(spec) => {
                let rw = risk_weight.ok_or_else(|| {
                    PlannerError::Parameter("a risk weight is required for this step".into())
                })?;
                let options = PortfolioOptions {
                    fee_mode: FeeMode::Proportional,
                    purchase_cap: self.purchase_cap,
                };
                let model = scalarize(spec, rw, theta_lambda, options)?;
                let pc = positioned.resolve(&model.program)?;
                let a = assess_pleased(&model.program, &pc, self.target_floor)?;
                let alloc = a.point[..spec.holdings()].to_vec();
                (a, alloc, Some(model.weight))
            }
        };
        let entry = HistoryEntry {
            step: self.history.len() + 1,
            risk_weight: if matches!(self.spec, SessionModel::Portfolio(_)) {
                risk_weight
            } else {
                None
            },
            theta_lambda,
            weight,
            positioned: positioned.clone(),
            assessment,
            allocation,
        };
        self.risk_weight = entry.risk_weight;
        self.positioned = positioned;
        self.theta_lambda = theta_lambda;
        self.push(entry);
        Ok(self.history.last().expect("entry was just pushed"))
    }

    fn push(&mut self, entry: HistoryEntry) {
        self.status = if entry.assessment.pleased {
            SessionStatus::Pleased
        } else {
            SessionStatus::AwaitingLambda
        };
        self.history.push(entry);
    }

    pub fn abandon(&mut self) -> Result<()> {
        if self.status == SessionStatus::Abandoned {
            return Err(PlannerError::SessionClosed {
                id: self.session_id.clone(),
                status: self.status,
            });
        }
        self.status = SessionStatus::Abandoned;
        Ok(())
    }

    /// Step requests that reproduce this session's history.
    pub fn recorded_steps(&self) -> Vec<StepRequest> {
        self.history
            .iter()
            .map(|e| StepRequest {
                risk_weight: e.risk_weight,
                positioned: Some(e.positioned.clone()),
                theta_lambda: Some(e.theta_lambda),
            })
            .collect()
    }

    fn fold(events: Vec<JournalEvent>, origin: &str) -> Result<Self> {
        let corrupt = |message: &str| PlannerError::Corrupt {
            path: origin.to_string(),
            message: message.to_string(),
        };
        let mut it = events.into_iter();
        let mut state = match it.next() {
            Some(JournalEvent::Start {
                session_id,
                model_handle,
                spec,
                target_floor,
                theta_lambda,
                positioned,
                risk_weight,
                purchase_cap,
            }) => SessionState {
                session_id,
                model_handle,
                spec,
                target_floor,
                theta_lambda,
                positioned,
                risk_weight,
                purchase_cap,
                history: Vec::new(),
                status: SessionStatus::AwaitingLambda,
            },
            _ => return Err(corrupt("journal does not begin with a start event")),
        };
        for event in it {
            match event {
                JournalEvent::Step(entry) => {
                    state.risk_weight = entry.risk_weight;
                    state.positioned = entry.positioned.clone();
                    state.theta_lambda = entry.theta_lambda;
                    state.push(entry);
                }
                JournalEvent::Abandon => state.status = SessionStatus::Abandoned,
                JournalEvent::Start { .. } => return Err(corrupt("repeated start event")),
            }
        }
        Ok(state)
    }
}

fn append(path: &PathBuf, event: &JournalEvent, create: bool) -> Result<()> {
    let mut line = serde_json::to_string(event).expect("journal events serialize");
    line.push('\n');
    let mut f = OpenOptions::new()
        .append(true)
        .create_new(create)
        .open(path)?;
    f.write_all(line.as_bytes())?;
    f.sync_data()?;
    Ok(())
}

/// Session operations over a [`Store`].
impl Store {
    pub fn start_session(&self, req: &StartRequest) -> Result<SessionState> {
        let doc = self.get(&req.model)?;
        let id = uuid::Uuid::new_v4().simple().to_string();
        let state = SessionState::new(id, &doc, &req.model, req)?;
        append(&self.journal_path(&state.session_id)?, &state.start_event(), true)?;
        Ok(state)
    }

    pub fn load_session(&self, id: &str) -> Result<SessionState> {
        let path = self.journal_path(id)?;
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
                return Err(PlannerError::UnknownSession(id.to_string()))
            }
            Err(e) => return Err(e.into()),
        };
        let events = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(from_text::<JournalEvent>)
            .collect::<Result<Vec<_>>>()
            .map_err(|e| PlannerError::Corrupt {
                path: path.display().to_string(),
                message: e.to_string(),
            })?;
        SessionState::fold(events, &path.display().to_string())
    }

    /// Loads, steps and journals a session. Callers serialize steps per
    /// session id.
    pub fn step_session(&self, id: &str, req: &StepRequest) -> Result<SessionState> {
        let mut state = self.load_session(id)?;
        let entry = state.apply_step(req)?.clone();
        append(&self.journal_path(id)?, &JournalEvent::Step(entry), false)?;
        Ok(state)
    }

    pub fn abandon_session(&self, id: &str) -> Result<SessionState> {
        let mut state = self.load_session(id)?;
        state.abandon()?;
        append(&self.journal_path(id)?, &JournalEvent::Abandon, false)?;
        Ok(state)
    }

    /// Re-runs a journaled session's steps in a fresh in-memory session.
    pub fn replay_session(&self, id: &str) -> Result<SessionState> {
        let recorded = self.load_session(id)?;
        let doc = self.get(&recorded.model_handle)?;
        let start = StartRequest {
            model: recorded.model_handle.clone(),
            target_floor: recorded.target_floor,
            theta_lambda: recorded.history.first().map_or(recorded.theta_lambda, |e| e.theta_lambda),
            positioned: recorded
                .history
                .first()
                .map_or_else(|| recorded.positioned.clone(), |e| e.positioned.clone()),
            risk_weight: None,
            purchase_cap: recorded.purchase_cap,
        };
        let mut fresh = SessionState::new(recorded.session_id.clone(), &doc, &recorded.model_handle, &start)?;
        for step in recorded.recorded_steps() {
            fresh.apply_step(&step)?;
        }
        Ok(fresh)
    }
}

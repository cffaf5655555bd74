//! Batch reports over stored models.

use std::time::Instant;

use greymop::{
    algorithm1, algorithm2, compromise_solution, pareto_frontier, sample_admissible,
    solve_positioned, Algorithm1Options, Algorithm2Options, FeeMode, FrontierPoint, LpSolution,
    PortfolioOptions, PositionSpec, WeightingWorkspace,
};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::document::Document;
use crate::error::{PlannerError, Result};
use crate::store::Store;

fn default_theta() -> f64 {
    0.5
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightsParams {
    #[serde(default = "default_theta")]
    pub theta: f64,
    #[serde(default)]
    pub sample_count: Option<usize>,
    #[serde(default)]
    pub supplied_points: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    pub preferences: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Algorithm2Params {
    #[serde(default = "default_theta")]
    pub theta: f64,
    /// Objective weights; when absent they come from entropy weighting of a
    /// sample (optionally the supplied points).
    #[serde(default)]
    pub weights: Option<Vec<f64>>,
    #[serde(default)]
    pub sample_count: Option<usize>,
    #[serde(default)]
    pub supplied_points: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    pub preferences: Option<Vec<f64>>,
    #[serde(default)]
    pub reproduce_paper_rounding: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrontierParams {
    #[serde(default = "default_theta")]
    pub theta: f64,
    pub epsilons: Vec<f64>,
    #[serde(default)]
    pub fee_mode: FeeMode,
    #[serde(default)]
    pub purchase_cap: bool,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveParams {
    /// `{"theta": t}`, `{"uniform": {...}}` or `{"per_entry": {...}}`.
    #[serde(default)]
    pub position: PositionSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum ReportRequest {
    Solve(SolveParams),
    Weights(WeightsParams),
    Algorithm1(Algorithm1Options),
    Algorithm2(Algorithm2Params),
    Frontier(FrontierParams),
}

impl ReportRequest {
    pub fn mode(&self) -> &'static str {
        match self {
            ReportRequest::Solve(_) => "solve",
            ReportRequest::Weights(_) => "weights",
            ReportRequest::Algorithm1(_) => "algorithm1",
            ReportRequest::Algorithm2(_) => "algorithm2",
            ReportRequest::Frontier(_) => "frontier",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub mode: &'static str,
    pub model: String,
    pub inputs: Value,
    pub result: Value,
    pub elapsed_ms: f64,
    /// Frontier table, frontier mode only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub csv: Option<String>,
}

fn wrong_kind(handle: &str, expected: &'static str, doc: &Document) -> PlannerError {
    PlannerError::WrongKind {
        handle: handle.to_string(),
        expected,
        found: doc.kind().name(),
    }
}

fn lp_result(s: &LpSolution) -> Value {
    json!({
        "status": s.status,
        "point": s.point,
        "value": if s.is_optimal() { json!(s.value) } else { Value::Null },
        "tight_constraints": s.tight_constraints,
    })
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

/// Frontier table with columns `e2, Z1, Z2, tradeoff, x_0..x_n`.
pub fn frontier_csv(points: &[FrontierPoint]) -> Result<String> {
    let holdings = points.first().map_or(0, |p| p.allocation.len());
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> = ["e2", "Z1", "Z2", "tradeoff"].iter().map(|s| s.to_string()).collect();
    header.extend((0..holdings).map(|i| format!("x_{i}")));
    let csv_err = |e: csv::Error| PlannerError::Io(std::io::Error::other(e));
    w.write_record(&header).map_err(csv_err)?;
    let fmt = |x: f64| crate::output::round_significant(x).to_string();
    for p in points {
        let mut row = vec![
            fmt(p.epsilon),
            fmt(p.profit),
            fmt(p.risk),
            p.tradeoff.map(fmt).unwrap_or_default(),
        ];
        row.extend(p.allocation.iter().map(|&x| fmt(x)));
        w.write_record(&row).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| PlannerError::Io(std::io::Error::other(e.to_string())))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn weighting(doc_model: &greymop::GmopModel, params: &WeightsParams) -> Result<WeightingWorkspace> {
    let m = doc_model.objective_count();
    let points = sample_admissible(
        doc_model,
        params.theta,
        params.sample_count.unwrap_or(2 * m),
        params.supplied_points.as_deref(),
    )?;
    let mut ws = WeightingWorkspace::compute(doc_model, points)?;
    if let Some(p) = &params.preferences {
        ws = ws.with_preferences(p.clone())?;
    }
    Ok(ws)
}

/// Runs one report mode against a stored model. Pure in the model and the
/// parameters apart from the timing field.
pub fn run_report(store: &Store, handle: &str, request: &ReportRequest) -> Result<Report> {
    let doc = store.get(handle)?;
    let started = Instant::now();
    let mut csv = None;
    let result = match (request, &doc) {
        (ReportRequest::Solve(params), Document::Lpgp(program)) => {
            let pc = params.position.resolve(program)?;
            let s = solve_positioned(program, &pc)?;
            json!({ "positioned": pc, "solution": lp_result(&s) })
        }
        (ReportRequest::Solve(_), d) => return Err(wrong_kind(handle, "lpgp", d)),
        (ReportRequest::Weights(params), Document::Gmop(model)) => to_value(&weighting(model, params)?),
        (ReportRequest::Algorithm1(options), Document::Gmop(model)) => to_value(&algorithm1(model, options)?),
        (ReportRequest::Algorithm2(params), Document::Gmop(model)) => {
            let (weights, workspace) = match &params.weights {
                Some(w) => (w.clone(), None),
                None => {
                    let ws = weighting(
                        model,
                        &WeightsParams {
                            theta: params.theta,
                            sample_count: params.sample_count,
                            supplied_points: params.supplied_points.clone(),
                            preferences: params.preferences.clone(),
                        },
                    )?;
                    (ws.effective_weights().to_vec(), Some(ws))
                }
            };
            let out = algorithm2(
                model,
                params.theta,
                &weights,
                Algorithm2Options {
                    paper_rounding: params.reproduce_paper_rounding,
                },
            )?;
            json!({ "weights": weights, "weighting": workspace, "outcome": out })
        }
        (ReportRequest::Weights(_) | ReportRequest::Algorithm1(_) | ReportRequest::Algorithm2(_), d) => {
            return Err(wrong_kind(handle, "gmop", d))
        }
        (ReportRequest::Frontier(params), Document::Portfolio(spec)) => {
            let options = PortfolioOptions {
                fee_mode: params.fee_mode,
                purchase_cap: params.purchase_cap,
            };
            let points = pareto_frontier(spec, params.theta, &params.epsilons, options)?;
            let compromise = compromise_solution(&points)?;
            csv = Some(frontier_csv(&points)?);
            json!({ "points": points, "compromise": compromise })
        }
        (ReportRequest::Frontier(_), d) => return Err(wrong_kind(handle, "portfolio", d)),
    };
    Ok(Report {
        mode: request.mode(),
        model: handle.to_string(),
        inputs: to_value(request),
        result,
        elapsed_ms: started.elapsed().as_secs_f64() * 1e3,
        csv,
    })
}

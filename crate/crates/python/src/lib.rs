//! Python bindings. Models and results cross the boundary as plain
//! dicts and lists with the same field names as the JSON documents.

use greymop::{
    Algorithm1Options, Algorithm2Options, FeeMode, GmopModel, GreyLinearProgram, LpProblem,
    Orientation, PortfolioOptions, PortfolioSpec, PositionSpec,
};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyAny;
use serde::de::DeserializeOwned;
use serde::Serialize;

fn core_err(e: greymop::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn from_py<T: DeserializeOwned>(obj: &Bound<'_, PyAny>) -> PyResult<T> {
    let json = obj.py().import("json")?;
    let text: String = json.call_method1("dumps", (obj,))?.extract()?;
    serde_json::from_str(&text).map_err(|e| PyValueError::new_err(e.to_string()))
}

fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn position(theta: Option<f64>, spec: Option<&Bound<'_, PyAny>>) -> PyResult<PositionSpec> {
    match (theta, spec) {
        (Some(_), Some(_)) => Err(PyValueError::new_err("give either theta or position, not both")),
        (Some(t), None) => Ok(PositionSpec::Theta(t)),
        (None, Some(s)) => from_py(s),
        (None, None) => Ok(PositionSpec::default()),
    }
}

fn portfolio_options(exact: bool, purchase_cap: bool) -> PortfolioOptions {
    PortfolioOptions {
        fee_mode: if exact { FeeMode::Exact } else { FeeMode::Proportional },
        purchase_cap,
    }
}

/// Closed interval `[lower, upper]`.
#[pyclass(name = "GreyNumber", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyGrey(greymop::GreyNumber);

#[pymethods]
impl PyGrey {
    #[new]
    #[pyo3(signature = (lower, upper=None))]
    fn new(lower: f64, upper: Option<f64>) -> PyResult<Self> {
        greymop::GreyNumber::new(lower, upper.unwrap_or(lower))
            .map(PyGrey)
            .map_err(core_err)
    }

    #[getter]
    fn lower(&self) -> f64 {
        self.0.lower()
    }

    #[getter]
    fn upper(&self) -> f64 {
        self.0.upper()
    }

    fn width(&self) -> f64 {
        self.0.width()
    }

    fn midpoint(&self) -> f64 {
        self.0.midpoint()
    }

    fn whiten(&self, t: f64) -> PyResult<f64> {
        self.0.whiten(t).map_err(core_err)
    }

    fn __repr__(&self) -> String {
        format!("GreyNumber({}, {})", self.0.lower(), self.0.upper())
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

fn unwrap_greys(greys: Vec<PyGrey>) -> Vec<greymop::GreyNumber> {
    greys.into_iter().map(|g| g.0).collect()
}

#[pyfunction]
fn whiten(g: PyGrey, t: f64) -> PyResult<f64> {
    greymop::whiten(&g.0, t).map_err(core_err)
}

#[pyfunction]
fn lin_comb(weights: Vec<f64>, greys: Vec<PyGrey>) -> PyResult<PyGrey> {
    greymop::lin_comb(&weights, &unwrap_greys(greys))
        .map(PyGrey)
        .map_err(core_err)
}

#[pyfunction]
fn grey_distance(r: PyGrey, s: PyGrey) -> f64 {
    greymop::grey_distance(&r.0, &s.0)
}

/// `orientation` is `"benefit"` or `"cost"`.
#[pyfunction]
#[pyo3(signature = (intervals, orientation="benefit"))]
fn normalize_column_set(intervals: Vec<PyGrey>, orientation: &str) -> PyResult<Vec<PyGrey>> {
    let orientation = match orientation {
        "benefit" => Orientation::Benefit,
        "cost" => Orientation::Cost,
        other => return Err(PyValueError::new_err(format!("unknown orientation {other:?}"))),
    };
    greymop::normalize_column_set(&unwrap_greys(intervals), orientation)
        .map(|v| v.into_iter().map(PyGrey).collect())
        .map_err(core_err)
}

#[pyfunction]
fn solve_lp<'py>(py: Python<'py>, problem: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
    let p: LpProblem = from_py(problem)?;
    to_py(py, &greymop::solve_lp(&p).map_err(core_err)?)
}

/// Solves a grey program at a uniform `theta` or at an explicit position
/// (`{"uniform": {...}}` or `{"per_entry": {...}}`).
#[pyfunction]
#[pyo3(signature = (program, theta=None, position=None))]
fn solve_positioned<'py>(
    py: Python<'py>,
    program: &Bound<'py, PyAny>,
    theta: Option<f64>,
    position: Option<&Bound<'py, PyAny>>,
) -> PyResult<Bound<'py, PyAny>> {
    let g: GreyLinearProgram = from_py(program)?;
    g.validate().map_err(core_err)?;
    let pc = self::position(theta, position)?.resolve(&g).map_err(core_err)?;
    to_py(py, &greymop::solve_positioned(&g, &pc).map_err(core_err)?)
}

#[pyfunction]
#[pyo3(signature = (program, mu0, theta=None, position=None))]
fn assess_pleased<'py>(
    py: Python<'py>,
    program: &Bound<'py, PyAny>,
    mu0: f64,
    theta: Option<f64>,
    position: Option<&Bound<'py, PyAny>>,
) -> PyResult<Bound<'py, PyAny>> {
    let g: GreyLinearProgram = from_py(program)?;
    g.validate().map_err(core_err)?;
    let pc = self::position(theta, position)?.resolve(&g).map_err(core_err)?;
    to_py(py, &greymop::assess_pleased(&g, &pc, mu0).map_err(core_err)?)
}

#[pyfunction]
fn pleased_degree(critical: f64, positioned: f64, ideal: f64) -> f64 {
    greymop::pleased_degree(critical, positioned, ideal)
}

/// Entropy weighting workspace for a multi-objective model.
#[pyfunction]
#[pyo3(signature = (model, theta=0.5, sample_count=None, points=None, preferences=None))]
fn entropy_weights<'py>(
    py: Python<'py>,
    model: &Bound<'py, PyAny>,
    theta: f64,
    sample_count: Option<usize>,
    points: Option<Vec<Vec<f64>>>,
    preferences: Option<Vec<f64>>,
) -> PyResult<Bound<'py, PyAny>> {
    let model: GmopModel = from_py(model)?;
    let count = sample_count.unwrap_or(2 * model.objective_count());
    let sample =
        greymop::sample_admissible(&model, theta, count, points.as_deref()).map_err(core_err)?;
    let mut ws = greymop::WeightingWorkspace::compute(&model, sample).map_err(core_err)?;
    if let Some(p) = preferences {
        ws = ws.with_preferences(p).map_err(core_err)?;
    }
    to_py(py, &ws)
}

#[pyfunction]
#[pyo3(signature = (model, theta=0.5, sample_count=None, points=None, preferences=None, weights=None))]
fn algorithm1<'py>(
    py: Python<'py>,
    model: &Bound<'py, PyAny>,
    theta: f64,
    sample_count: Option<usize>,
    points: Option<Vec<Vec<f64>>>,
    preferences: Option<Vec<f64>>,
    weights: Option<Vec<f64>>,
) -> PyResult<Bound<'py, PyAny>> {
    let model: GmopModel = from_py(model)?;
    let options = Algorithm1Options {
        theta,
        sample_count,
        supplied_points: points,
        preferences,
        weights,
    };
    to_py(py, &greymop::algorithm1(&model, &options).map_err(core_err)?)
}

#[pyfunction]
#[pyo3(signature = (model, weights, theta=0.5, paper_rounding=false))]
fn algorithm2<'py>(
    py: Python<'py>,
    model: &Bound<'py, PyAny>,
    weights: Vec<f64>,
    theta: f64,
    paper_rounding: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let model: GmopModel = from_py(model)?;
    let out = greymop::algorithm2(&model, theta, &weights, Algorithm2Options { paper_rounding })
        .map_err(core_err)?;
    to_py(py, &out)
}

#[pyfunction]
#[pyo3(signature = (spec, risk_weight, theta=0.5, exact=false, purchase_cap=false))]
fn solve_weighted<'py>(
    py: Python<'py>,
    spec: &Bound<'py, PyAny>,
    risk_weight: f64,
    theta: f64,
    exact: bool,
    purchase_cap: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let spec: PortfolioSpec = from_py(spec)?;
    let out = greymop::solve_weighted(&spec, risk_weight, theta, portfolio_options(exact, purchase_cap))
        .map_err(core_err)?;
    to_py(py, &out)
}

#[pyfunction]
#[pyo3(signature = (spec, epsilons, theta=0.5, exact=false, purchase_cap=false))]
fn pareto_frontier<'py>(
    py: Python<'py>,
    spec: &Bound<'py, PyAny>,
    epsilons: Vec<f64>,
    theta: f64,
    exact: bool,
    purchase_cap: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let spec: PortfolioSpec = from_py(spec)?;
    let points = greymop::pareto_frontier(&spec, theta, &epsilons, portfolio_options(exact, purchase_cap))
        .map_err(core_err)?;
    to_py(py, &points)
}

/// Frontier point closest to the normalized ideal.
#[pyfunction]
fn compromise<'py>(py: Python<'py>, frontier: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
    let points: Vec<greymop::FrontierPoint> = from_py(frontier)?;
    to_py(py, &greymop::compromise_solution(&points).map_err(core_err)?)
}

#[pymodule]
fn greymop_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGrey>()?;
    m.add_function(wrap_pyfunction!(whiten, m)?)?;
    m.add_function(wrap_pyfunction!(lin_comb, m)?)?;
    m.add_function(wrap_pyfunction!(grey_distance, m)?)?;
    m.add_function(wrap_pyfunction!(normalize_column_set, m)?)?;
    m.add_function(wrap_pyfunction!(solve_lp, m)?)?;
    m.add_function(wrap_pyfunction!(solve_positioned, m)?)?;
    m.add_function(wrap_pyfunction!(assess_pleased, m)?)?;
    m.add_function(wrap_pyfunction!(pleased_degree, m)?)?;
    m.add_function(wrap_pyfunction!(entropy_weights, m)?)?;
    m.add_function(wrap_pyfunction!(algorithm1, m)?)?;
    m.add_function(wrap_pyfunction!(algorithm2, m)?)?;
    m.add_function(wrap_pyfunction!(solve_weighted, m)?)?;
    m.add_function(wrap_pyfunction!(pareto_frontier, m)?)?;
    m.add_function(wrap_pyfunction!(compromise, m)?)?;
    Ok(())
}

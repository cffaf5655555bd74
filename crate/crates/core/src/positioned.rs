//! Linear programs with grey price, consumption and resource data, their
//! positioned whitenings, and the pleased-degree assessment that locates a
//! positioned optimum between the critical and ideal optima.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grey::{whiten, GreyNumber};
use crate::lp::{solve_lp, Constraint, LpProblem, LpSolution, LpStatus, Relation, Sense};

/// Linear program with grey parameters (LPGP).
///
/// `price` has one entry per variable, `consumption` one row per constraint.
/// `objective_constant` is a white offset added to every reported value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GreyLinearProgram {
    pub sense: Sense,
    pub price: Vec<GreyNumber>,
    pub consumption: Vec<Vec<GreyNumber>>,
    pub resources: Vec<GreyNumber>,
    pub relations: Vec<Relation>,
    #[serde(default)]
    pub objective_constant: f64,
}

impl GreyLinearProgram {
    pub fn variable_count(&self) -> usize {
        self.price.len()
    }

    pub fn row_count(&self) -> usize {
        self.consumption.len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.variable_count();
        let m = self.row_count();
        if n == 0 {
            return Err(Error::DimensionMismatch("program has no variables".into()));
        }
        if self.resources.len() != m || self.relations.len() != m {
            return Err(Error::DimensionMismatch(format!(
                "{m} consumption rows but {} resources and {} relations",
                self.resources.len(),
                self.relations.len()
            )));
        }
        if let Some((i, row)) = self
            .consumption
            .iter()
            .enumerate()
            .find(|(_, r)| r.len() != n)
        {
            return Err(Error::DimensionMismatch(format!(
                "consumption row {i} has {} entries, expected {n}",
                row.len()
            )));
        }
        if !self.objective_constant.is_finite() {
            return Err(Error::DimensionMismatch(
                "objective constant is not finite".into(),
            ));
        }
        Ok(())
    }
}

/// Per-entry whitening positions: `rho` for prices, `beta` for resources,
/// `delta` for consumption cells.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PositionedCoefficients {
    pub rho: Vec<f64>,
    pub beta: Vec<f64>,
    pub delta: Vec<Vec<f64>>,
}

impl PositionedCoefficients {
    /// Scalar `(rho, beta, delta)` positioning for a program with `n`
    /// variables and `m` rows.
    pub fn uniform(n: usize, m: usize, rho: f64, beta: f64, delta: f64) -> Self {
        Self {
            rho: vec![rho; n],
            beta: vec![beta; m],
            delta: vec![vec![delta; n]; m],
        }
    }

    pub fn theta(n: usize, m: usize, theta: f64) -> Self {
        Self::uniform(n, m, theta, theta, theta)
    }

    /// LP(1, 1, 0): best prices, largest resources, smallest consumption.
    pub fn ideal(n: usize, m: usize) -> Self {
        Self::uniform(n, m, 1.0, 1.0, 0.0)
    }

    /// LP(0, 0, 1): worst prices, smallest resources, largest consumption.
    pub fn critical(n: usize, m: usize) -> Self {
        Self::uniform(n, m, 0.0, 0.0, 1.0)
    }

    pub fn check_against(&self, g: &GreyLinearProgram) -> Result<()> {
        let n = g.variable_count();
        let m = g.row_count();
        if self.rho.len() != n
            || self.beta.len() != m
            || self.delta.len() != m
            || self.delta.iter().any(|r| r.len() != n)
        {
            return Err(Error::DimensionMismatch(format!(
                "positioned coefficients do not fit a program with {n} variables and {m} rows"
            )));
        }
        let all = self
            .rho
            .iter()
            .chain(&self.beta)
            .chain(self.delta.iter().flatten());
        for &v in all {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::TOutOfRange(v));
            }
        }
        Ok(())
    }
}

/// How a caller chooses whitening positions, independent of program size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PositionSpec {
    Theta(f64),
    Uniform { rho: f64, beta: f64, delta: f64 },
    PerEntry(PositionedCoefficients),
}

impl Default for PositionSpec {
    fn default() -> Self {
        PositionSpec::Theta(0.5)
    }
}

impl PositionSpec {
    pub fn resolve(&self, g: &GreyLinearProgram) -> Result<PositionedCoefficients> {
        let (n, m) = (g.variable_count(), g.row_count());
        let pc = match self {
            PositionSpec::Theta(t) => {
                if !(0.0..=1.0).contains(t) {
                    return Err(Error::ThetaOutOfRange(*t));
                }
                PositionedCoefficients::theta(n, m, *t)
            }
            PositionSpec::Uniform { rho, beta, delta } => {
                PositionedCoefficients::uniform(n, m, *rho, *beta, *delta)
            }
            PositionSpec::PerEntry(pc) => pc.clone(),
        };
        pc.check_against(g)?;
        Ok(pc)
    }
}

/// Replaces every grey entry by its positioned white value.
pub fn whiten_program(g: &GreyLinearProgram, pc: &PositionedCoefficients) -> Result<LpProblem> {
    g.validate()?;
    pc.check_against(g)?;
    let objective = g
        .price
        .iter()
        .zip(&pc.rho)
        .map(|(c, &t)| whiten(c, t))
        .collect::<Result<Vec<_>>>()?;
    let mut constraints = Vec::with_capacity(g.row_count());
    for (i, row) in g.consumption.iter().enumerate() {
        let coefficients = row
            .iter()
            .zip(&pc.delta[i])
            .map(|(a, &t)| whiten(a, t))
            .collect::<Result<Vec<_>>>()?;
        let rhs = whiten(&g.resources[i], pc.beta[i])?;
        constraints.push(Constraint::new(coefficients, g.relations[i], rhs));
    }
    Ok(LpProblem {
        sense: g.sense,
        objective,
        constraints,
    })
}

/// Solves LP(rho, beta, delta). The reported value includes the program's
/// constant offset.
pub fn solve_positioned(g: &GreyLinearProgram, pc: &PositionedCoefficients) -> Result<LpSolution> {
    let lp = whiten_program(g, pc)?;
    let mut solution = solve_lp(&lp)?;
    if solution.is_optimal() {
        solution.value += g.objective_constant;
    }
    Ok(solution)
}

/// Solves the theta-positioned model LP(theta, theta, theta).
pub fn theta_solve(g: &GreyLinearProgram, theta: f64) -> Result<LpSolution> {
    if !(0.0..=1.0).contains(&theta) {
        return Err(Error::ThetaOutOfRange(theta));
    }
    let pc = PositionedCoefficients::theta(g.variable_count(), g.row_count(), theta);
    solve_positioned(g, &pc)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PleasedAssessment {
    pub ideal_value: f64,
    pub critical_value: f64,
    pub positioned_value: f64,
    pub degree: f64,
    pub target_floor: f64,
    pub pleased: bool,
    /// Optimal point of the positioned program.
    pub point: Vec<f64>,
}

/// `0.5 * (1 - critical / positioned) + 0.5 * (positioned / ideal)`.
pub fn pleased_degree(critical: f64, positioned: f64, ideal: f64) -> f64 {
    0.5 * (1.0 - critical / positioned) + 0.5 * (positioned / ideal)
}

fn optimal_value(g: &GreyLinearProgram, pc: &PositionedCoefficients, which: &str) -> Result<LpSolution> {
    let s = solve_positioned(g, pc)?;
    match s.status {
        LpStatus::Optimal if s.value > 0.0 => Ok(s),
        LpStatus::Optimal => Err(Error::DegenerateAssessment(format!(
            "{which} model optimum {} is not strictly positive",
            s.value
        ))),
        status => Err(Error::DegenerateAssessment(format!(
            "{which} model ended with status {status:?}"
        ))),
    }
}

/// Pleased-degree assessment of LP(pc) against the grey target `[mu0, 1]`.
pub fn assess_pleased(
    g: &GreyLinearProgram,
    pc: &PositionedCoefficients,
    mu0: f64,
) -> Result<PleasedAssessment> {
    if !(0.0..=1.0).contains(&mu0) {
        return Err(Error::Parameter(format!("target floor {mu0} is outside [0, 1]")));
    }
    if g.sense != Sense::Maximize {
        return Err(Error::DegenerateAssessment(
            "pleased degree is defined for maximize-sense programs only".into(),
        ));
    }
    pc.check_against(g)?;
    let (n, m) = (g.variable_count(), g.row_count());
    let ideal = optimal_value(g, &PositionedCoefficients::ideal(n, m), "ideal")?;
    let critical = optimal_value(g, &PositionedCoefficients::critical(n, m), "critical")?;
    let positioned = optimal_value(g, pc, "positioned")?;
    let degree = pleased_degree(critical.value, positioned.value, ideal.value);
    Ok(PleasedAssessment {
        ideal_value: ideal.value,
        critical_value: critical.value,
        positioned_value: positioned.value,
        degree,
        target_floor: mu0,
        pleased: degree >= mu0,
        point: positioned.point,
    })
}

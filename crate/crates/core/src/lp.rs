//! Dense two-phase simplex with Bland's anti-cycling rule.
//!
//! All variables are implicitly nonnegative. `>=` and `=` rows get phase-one
//! artificials; the pivot sequence is fully determined by the input, so the
//! same problem always yields the same vertex.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance for feasibility and optimality tests.
pub const TOLERANCE: f64 = 1e-9;

const MAX_PIVOTS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    #[default]
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Relation {
    #[default]
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "=")]
    Eq,
}

impl Relation {
    pub fn flipped(self) -> Self {
        match self {
            Relation::Le => Relation::Ge,
            Relation::Ge => Relation::Le,
            Relation::Eq => Relation::Eq,
        }
    }

    /// Whether `lhs (rel) rhs` holds within `tol`.
    pub fn holds(self, lhs: f64, rhs: f64, tol: f64) -> bool {
        match self {
            Relation::Le => lhs <= rhs + tol,
            Relation::Ge => lhs >= rhs - tol,
            Relation::Eq => (lhs - rhs).abs() <= tol,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    pub coefficients: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

impl Constraint {
    pub fn new(coefficients: Vec<f64>, relation: Relation, rhs: f64) -> Self {
        Self {
            coefficients,
            relation,
            rhs,
        }
    }

    pub fn lhs(&self, point: &[f64]) -> f64 {
        dot(&self.coefficients, point)
    }
}

/// A deterministic linear program over `x >= 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpProblem {
    pub sense: Sense,
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
}

impl LpProblem {
    pub fn new(sense: Sense, objective: Vec<f64>) -> Self {
        Self {
            sense,
            objective,
            constraints: Vec::new(),
        }
    }

    pub fn maximize(objective: Vec<f64>) -> Self {
        Self::new(Sense::Maximize, objective)
    }

    pub fn minimize(objective: Vec<f64>) -> Self {
        Self::new(Sense::Minimize, objective)
    }

    pub fn with_constraint(mut self, coefficients: Vec<f64>, relation: Relation, rhs: f64) -> Self {
        self.constraints
            .push(Constraint::new(coefficients, relation, rhs));
        self
    }

    pub fn variable_count(&self) -> usize {
        self.objective.len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.variable_count();
        if n == 0 {
            return Err(Error::MalformedProblem("no variables".into()));
        }
        if self.objective.iter().any(|c| !c.is_finite()) {
            return Err(Error::MalformedProblem(
                "objective has a non-finite coefficient".into(),
            ));
        }
        for (i, c) in self.constraints.iter().enumerate() {
            if c.coefficients.len() != n {
                return Err(Error::MalformedProblem(format!(
                    "row {i} has {} coefficients, expected {n}",
                    c.coefficients.len()
                )));
            }
            if !c.rhs.is_finite() || c.coefficients.iter().any(|v| !v.is_finite()) {
                return Err(Error::MalformedProblem(format!(
                    "row {i} has a non-finite entry"
                )));
            }
        }
        Ok(())
    }

    /// Whether `point` satisfies every row and the sign constraints within `tol`.
    pub fn is_feasible(&self, point: &[f64], tol: f64) -> bool {
        point.len() == self.variable_count()
            && point.iter().all(|v| *v >= -tol)
            && self
                .constraints
                .iter()
                .all(|c| c.relation.holds(c.lhs(point), c.rhs, tol))
    }

    pub fn objective_value(&self, point: &[f64]) -> f64 {
        dot(&self.objective, point)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
}

/// Solver outcome. `point` and `value` carry meaning only when
/// `status == Optimal`; otherwise the point is empty and the value NaN.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpSolution {
    pub status: LpStatus,
    pub point: Vec<f64>,
    pub value: f64,
    pub tight_constraints: Vec<usize>,
}

impl LpSolution {
    fn without_point(status: LpStatus) -> Self {
        Self {
            status,
            point: Vec::new(),
            value: f64::NAN,
            tight_constraints: Vec::new(),
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Solves `p` to a vertex optimum, or reports infeasibility/unboundedness.
pub fn solve_lp(p: &LpProblem) -> Result<LpSolution> {
    p.validate()?;
    let mut tableau = Tableau::build(p);

    if tableau.artificial_count > 0 {
        let phase_one = tableau.phase_one_costs();
        match tableau.optimize(&phase_one, true) {
            Pivoting::Optimal => {}
            Pivoting::Unbounded => unreachable!("phase one is bounded below by zero"),
            Pivoting::Stalled => return Ok(LpSolution::without_point(LpStatus::IterationLimit)),
        }
        let infeasibility: f64 = tableau
            .basis
            .iter()
            .enumerate()
            .filter(|(_, &b)| tableau.is_artificial(b))
            .map(|(r, _)| tableau.rhs(r))
            .sum();
        if infeasibility > TOLERANCE {
            return Ok(LpSolution::without_point(LpStatus::Infeasible));
        }
        tableau.expel_artificials();
    }

    let costs = tableau.phase_two_costs(p);
    match tableau.optimize(&costs, false) {
        Pivoting::Optimal => {}
        Pivoting::Unbounded => return Ok(LpSolution::without_point(LpStatus::Unbounded)),
        Pivoting::Stalled => return Ok(LpSolution::without_point(LpStatus::IterationLimit)),
    }

    let n = p.variable_count();
    let mut point = vec![0.0; n];
    for (r, &b) in tableau.basis.iter().enumerate() {
        if b < n {
            point[b] = tableau.rhs(r).max(0.0);
        }
    }
    let value = p.objective_value(&point);
    let tight_constraints = p
        .constraints
        .iter()
        .enumerate()
        .filter(|(_, c)| {
            c.relation == Relation::Eq
                || (c.lhs(&point) - c.rhs).abs() <= TOLERANCE * (1.0 + c.rhs.abs())
        })
        .map(|(i, _)| i)
        .collect();
    Ok(LpSolution {
        status: LpStatus::Optimal,
        point,
        value,
        tight_constraints,
    })
}

enum Pivoting {
    Optimal,
    Unbounded,
    Stalled,
}

/// Row-major tableau `[A | b]` in canonical form with respect to `basis`.
struct Tableau {
    rows: Vec<Vec<f64>>,
    basis: Vec<usize>,
    /// Column count excluding the right-hand side.
    width: usize,
    /// Columns at or beyond this index are artificial.
    first_artificial: usize,
    artificial_count: usize,
}

impl Tableau {
    fn build(p: &LpProblem) -> Self {
        let n = p.variable_count();
        let normalized: Vec<(Vec<f64>, Relation, f64)> = p
            .constraints
            .iter()
            .map(|c| {
                if c.rhs < 0.0 {
                    (
                        c.coefficients.iter().map(|v| -v).collect(),
                        c.relation.flipped(),
                        -c.rhs,
                    )
                } else {
                    (c.coefficients.clone(), c.relation, c.rhs)
                }
            })
            .collect();

        let slack_count = normalized
            .iter()
            .filter(|(_, rel, _)| *rel != Relation::Eq)
            .count();
        let artificial_count = normalized
            .iter()
            .filter(|(_, rel, _)| *rel != Relation::Le)
            .count();
        let first_artificial = n + slack_count;
        let width = first_artificial + artificial_count;

        let mut rows = Vec::with_capacity(normalized.len());
        let mut basis = Vec::with_capacity(normalized.len());
        let mut next_slack = n;
        let mut next_artificial = first_artificial;
        for (coefficients, relation, rhs) in normalized {
            let mut row = vec![0.0; width + 1];
            row[..n].copy_from_slice(&coefficients);
            row[width] = rhs;
            match relation {
                Relation::Le => {
                    row[next_slack] = 1.0;
                    basis.push(next_slack);
                    next_slack += 1;
                }
                Relation::Ge => {
                    row[next_slack] = -1.0;
                    next_slack += 1;
                    row[next_artificial] = 1.0;
                    basis.push(next_artificial);
                    next_artificial += 1;
                }
                Relation::Eq => {
                    row[next_artificial] = 1.0;
                    basis.push(next_artificial);
                    next_artificial += 1;
                }
            }
            rows.push(row);
        }
        Self {
            rows,
            basis,
            width,
            first_artificial,
            artificial_count,
        }
    }

    fn is_artificial(&self, col: usize) -> bool {
        col >= self.first_artificial
    }

    fn rhs(&self, row: usize) -> f64 {
        self.rows[row][self.width]
    }

    fn phase_one_costs(&self) -> Vec<f64> {
        (0..self.width)
            .map(|j| if self.is_artificial(j) { -1.0 } else { 0.0 })
            .collect()
    }

    fn phase_two_costs(&self, p: &LpProblem) -> Vec<f64> {
        let sign = match p.sense {
            Sense::Maximize => 1.0,
            Sense::Minimize => -1.0,
        };
        let mut costs = vec![0.0; self.first_artificial];
        for (c, v) in costs.iter_mut().zip(&p.objective) {
            *c = sign * v;
        }
        costs
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let factor = self.rows[row][col];
        for v in self.rows[row].iter_mut() {
            *v /= factor;
        }
        self.rows[row][col] = 1.0;
        let pivot_row = self.rows[row].clone();
        for (r, other) in self.rows.iter_mut().enumerate() {
            if r == row {
                continue;
            }
            let m = other[col];
            if m != 0.0 {
                for (v, pv) in other.iter_mut().zip(&pivot_row) {
                    *v -= m * pv;
                }
                other[col] = 0.0;
            }
        }
        self.basis[row] = col;
    }

    /// Maximizes `costs . x` over the current basis using Bland's rule.
    /// Columns beyond `costs.len()` never enter.
    fn optimize(&mut self, costs: &[f64], allow_artificial: bool) -> Pivoting {
        let limit = if allow_artificial {
            self.width
        } else {
            self.first_artificial
        };
        for _ in 0..MAX_PIVOTS {
            let entering = (0..limit).find(|&j| self.reduced_cost(costs, j) > TOLERANCE);
            let Some(col) = entering else {
                return Pivoting::Optimal;
            };
            let mut leave: Option<(usize, f64)> = None;
            for (r, row) in self.rows.iter().enumerate() {
                let a = row[col];
                if a <= TOLERANCE {
                    continue;
                }
                let ratio = row[self.width] / a;
                leave = match leave {
                    None => Some((r, ratio)),
                    Some((best_r, best)) => {
                        let tie = (ratio - best).abs() <= 1e-12 * (1.0 + best.abs());
                        if (!tie && ratio < best) || (tie && self.basis[r] < self.basis[best_r]) {
                            Some((r, ratio))
                        } else {
                            Some((best_r, best))
                        }
                    }
                };
            }
            match leave {
                None => return Pivoting::Unbounded,
                Some((row, _)) => self.pivot(row, col),
            }
        }
        Pivoting::Stalled
    }

    fn reduced_cost(&self, costs: &[f64], col: usize) -> f64 {
        let basic: f64 = self
            .rows
            .iter()
            .zip(&self.basis)
            .map(|(row, &b)| costs.get(b).copied().unwrap_or(0.0) * row[col])
            .sum();
        costs.get(col).copied().unwrap_or(0.0) - basic
    }

    /// Pivots zero-level artificials out of the basis; rows where that is
    /// impossible are linearly dependent and get dropped.
    fn expel_artificials(&mut self) {
        let mut r = 0;
        while r < self.rows.len() {
            if self.is_artificial(self.basis[r]) {
                let replacement =
                    (0..self.first_artificial).find(|&j| self.rows[r][j].abs() > TOLERANCE);
                match replacement {
                    Some(col) => self.pivot(r, col),
                    None => {
                        self.rows.remove(r);
                        self.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
    }
}

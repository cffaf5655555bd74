//! Grey multi-objective linear programming.
//!
//! Two solution routes share one model type:
//!
//! * the weighting route samples admissible points, measures how strongly
//!   each objective discriminates between them (entropy of interval
//!   deviations), and solves the weighted single-objective grey program at a
//!   theta position;
//! * the max-min route solves every objective alone, builds piecewise-linear
//!   whitening weight functions from the spread of those optima, and
//!   maximizes the smallest satisfaction level with one LP.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grey::{
    grey_distance, lin_comb, normalize_column_set, whiten, GreyIntervalMatrix, GreyNumber,
    Orientation,
};
use crate::lp::{dot, solve_lp, Constraint, LpProblem, LpStatus, Relation, Sense, TOLERANCE};
use crate::positioned::GreyLinearProgram;

/// Seed for the interior points drawn when a region has fewer vertices than
/// requested samples.
pub const SAMPLE_SEED: u64 = 0x6772_6579_5f6d_6f70;

/// Upper bound on vertex-candidate subsets examined before switching to
/// LP-probed vertices.
const MAX_VERTEX_SUBSETS: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GreyObjective {
    pub sense: Sense,
    #[serde(default)]
    pub orientation: Orientation,
    pub coefficients: Vec<GreyNumber>,
}

impl GreyObjective {
    fn sign(&self) -> f64 {
        match self.sense {
            Sense::Maximize => 1.0,
            Sense::Minimize => -1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GreyConstraint {
    pub coefficients: Vec<GreyNumber>,
    pub relation: Relation,
    pub rhs: GreyNumber,
}

/// Linear grey multi-objective program over `x >= 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GmopModel {
    pub variable_count: usize,
    pub objectives: Vec<GreyObjective>,
    pub constraints: Vec<GreyConstraint>,
}

impl GmopModel {
    pub fn validate(&self) -> Result<()> {
        let n = self.variable_count;
        if n == 0 {
            return Err(Error::DimensionMismatch("model has no variables".into()));
        }
        if self.objectives.is_empty() {
            return Err(Error::DimensionMismatch("model has no objectives".into()));
        }
        for (i, o) in self.objectives.iter().enumerate() {
            if o.coefficients.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "objective {i} has {} coefficients, expected {n}",
                    o.coefficients.len()
                )));
            }
        }
        for (j, c) in self.constraints.iter().enumerate() {
            if c.coefficients.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "constraint {j} has {} coefficients, expected {n}",
                    c.coefficients.len()
                )));
            }
        }
        Ok(())
    }

    pub fn objective_count(&self) -> usize {
        self.objectives.len()
    }

    /// Constraint rows with every grey entry whitened at `theta`.
    pub fn whitened_constraints(&self, theta: f64) -> Result<Vec<Constraint>> {
        check_theta(theta)?;
        self.constraints
            .iter()
            .map(|c| {
                Ok(Constraint::new(
                    whiten_all(&c.coefficients, theta)?,
                    c.relation,
                    whiten(&c.rhs, theta)?,
                ))
            })
            .collect()
    }

    /// White coefficients of objective `i` in its declared sense.
    pub fn whitened_objective(&self, i: usize, theta: f64) -> Result<Vec<f64>> {
        check_theta(theta)?;
        whiten_all(&self.objectives[i].coefficients, theta)
    }

    /// Objective `i` at `point`, whitened at `theta`, in its declared sense.
    pub fn evaluate(&self, i: usize, point: &[f64], theta: f64) -> Result<f64> {
        Ok(dot(&self.whitened_objective(i, theta)?, point))
    }

    fn canonical_objective(&self, i: usize, theta: f64) -> Result<Vec<f64>> {
        let sign = self.objectives[i].sign();
        Ok(self
            .whitened_objective(i, theta)?
            .into_iter()
            .map(|c| sign * c)
            .collect())
    }

    fn region(&self, objective: Vec<f64>, theta: f64) -> Result<LpProblem> {
        Ok(LpProblem {
            sense: Sense::Maximize,
            objective,
            constraints: self.whitened_constraints(theta)?,
        })
    }
}

fn check_theta(theta: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&theta) {
        return Err(Error::ThetaOutOfRange(theta));
    }
    Ok(())
}

fn whiten_all(greys: &[GreyNumber], theta: f64) -> Result<Vec<f64>> {
    greys.iter().map(|g| whiten(g, theta)).collect()
}

// ---------------------------------------------------------------------------
// Admissible points
// ---------------------------------------------------------------------------

/// Admissible points for the theta-whitened constraints.
///
/// Supplied points are validated and returned verbatim. Otherwise `count`
/// points are drawn: vertices of the region first (evenly spaced through
/// their lexicographic order), then seeded convex combinations of vertices
/// when the region has too few.
pub fn sample_admissible(
    model: &GmopModel,
    theta: f64,
    count: usize,
    supplied: Option<&[Vec<f64>]>,
) -> Result<Vec<Vec<f64>>> {
    model.validate()?;
    let constraints = model.whitened_constraints(theta)?;
    let n = model.variable_count;
    let region = LpProblem {
        sense: Sense::Maximize,
        objective: vec![0.0; n],
        constraints,
    };

    if let Some(points) = supplied {
        for (index, p) in points.iter().enumerate() {
            if p.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "sample point {index} has {} coordinates, expected {n}",
                    p.len()
                )));
            }
            if !region.is_feasible(p, TOLERANCE) {
                return Err(Error::InfeasibleSample { index });
            }
        }
        return Ok(points.to_vec());
    }

    let m = model.objective_count();
    if count < 2 || count < m || count > 2 * m.max(1) {
        return Err(Error::SampleCount {
            count,
            objectives: m,
        });
    }
    if solve_lp(&region)?.status == LpStatus::Infeasible {
        return Err(Error::EmptyRegion);
    }

    let vertices = region_vertices(&region)?;
    if vertices.is_empty() {
        return Err(Error::EmptyRegion);
    }
    if vertices.len() >= count {
        let last = vertices.len() - 1;
        return Ok((0..count)
            .map(|k| {
                let idx = ((k * last) as f64 / (count - 1) as f64).round() as usize;
                vertices[idx].clone()
            })
            .collect());
    }

    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
    let mut points = vertices.clone();
    while points.len() < count {
        let raw: Vec<f64> = (0..vertices.len()).map(|_| rng.gen::<f64>() + 1e-3).collect();
        let total: f64 = raw.iter().sum();
        let mut p = vec![0.0; n];
        for (v, w) in vertices.iter().zip(&raw) {
            for (pj, vj) in p.iter_mut().zip(v) {
                *pj += w / total * vj;
            }
        }
        points.push(p);
    }
    Ok(points)
}

/// Vertices of `{x >= 0, rows}`, deduplicated and sorted lexicographically.
fn region_vertices(region: &LpProblem) -> Result<Vec<Vec<f64>>> {
    let n = region.variable_count();
    let hyperplanes: Vec<(Vec<f64>, f64)> = region
        .constraints
        .iter()
        .map(|c| (c.coefficients.clone(), c.rhs))
        .chain((0..n).map(|j| {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            (e, 0.0)
        }))
        .collect();

    let mut found = Vec::new();
    if binomial(hyperplanes.len(), n) <= MAX_VERTEX_SUBSETS {
        for subset in Combinations::new(hyperplanes.len(), n) {
            let a: Vec<Vec<f64>> = subset.iter().map(|&k| hyperplanes[k].0.clone()).collect();
            let b: Vec<f64> = subset.iter().map(|&k| hyperplanes[k].1).collect();
            if let Some(x) = solve_square(a, b) {
                if region.is_feasible(&x, 1e-9) {
                    found.push(x.into_iter().map(|v| v.max(0.0)).collect());
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
        for _ in 0..(4 * n + 8) {
            let objective: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let probe = LpProblem {
                objective,
                ..region.clone()
            };
            let s = solve_lp(&probe)?;
            if s.is_optimal() {
                found.push(s.point);
            }
        }
    }
    found.sort_by(|a: &Vec<f64>, b: &Vec<f64>| {
        a.iter()
            .zip(b)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    found.dedup_by(|a, b| a.iter().zip(b.iter()).all(|(x, y)| (x - y).abs() <= 1e-9));
    Ok(found)
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// Lexicographic k-subsets of `0..n`.
struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        Self {
            n,
            current: (k <= n).then(|| (0..k).collect()),
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let k = out.len();
        let mut next = out.clone();
        let mut i = k;
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            if next[i] < self.n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                break;
            }
        }
        Some(out)
    }
}

/// Gaussian elimination with partial pivoting; `None` when singular.
fn solve_square(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() < 1e-10 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f != 0.0 {
                for k in col..n {
                    a[row][k] -= f * a[col][k];
                }
                b[row] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Some(x)
}

// ---------------------------------------------------------------------------
// Entropy weighting
// ---------------------------------------------------------------------------

/// Interval value of every objective at every sample point.
pub fn objective_matrix(model: &GmopModel, points: &[Vec<f64>]) -> Result<GreyIntervalMatrix> {
    model.validate()?;
    let n = model.variable_count;
    if let Some(p) = points.iter().find(|p| p.len() != n) {
        return Err(Error::DimensionMismatch(format!(
            "point has {} coordinates, expected {n}",
            p.len()
        )));
    }
    let rows = model
        .objectives
        .iter()
        .map(|o| {
            points
                .iter()
                .map(|p| lin_comb(p, &o.coefficients))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    GreyIntervalMatrix::from_rows(rows)
}

/// Per-objective deviations, entropies and the resulting weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyBreakdown {
    /// `deviations[i][t]` is the summed distance of sample `t` to all others.
    pub deviations: Vec<Vec<f64>>,
    pub deviation_totals: Vec<f64>,
    pub entropies: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Entropy analysis of a normalized interval matrix (rows are objectives).
pub fn entropy_analysis(normalized: &GreyIntervalMatrix) -> Result<EntropyBreakdown> {
    let l = normalized.cols();
    if l < 2 {
        return Err(Error::SampleCount {
            count: l,
            objectives: normalized.rows(),
        });
    }
    let ln_l = (l as f64).ln();
    let mut deviations = Vec::with_capacity(normalized.rows());
    let mut totals = Vec::with_capacity(normalized.rows());
    let mut entropies = Vec::with_capacity(normalized.rows());
    for (i, row) in normalized.iter_rows().enumerate() {
        let d: Vec<f64> = row
            .iter()
            .map(|r| row.iter().map(|s| grey_distance(r, s)).sum())
            .collect();
        let total: f64 = d.iter().sum();
        if !(total > 0.0) {
            return Err(Error::DegenerateObjective(i));
        }
        let h: f64 = d
            .iter()
            .filter(|&&v| v > 0.0)
            .map(|&v| {
                let share = v / total;
                share * share.ln()
            })
            .sum();
        entropies.push((-h / ln_l).clamp(0.0, 1.0));
        deviations.push(d);
        totals.push(total);
    }
    let spread: Vec<f64> = entropies.iter().map(|e| 1.0 - e).collect();
    let sum: f64 = spread.iter().sum();
    let weights = if sum > 1e-12 {
        spread.iter().map(|s| s / sum).collect()
    } else {
        // No objective discriminates between the samples.
        vec![1.0 / entropies.len() as f64; entropies.len()]
    };
    Ok(EntropyBreakdown {
        deviations,
        deviation_totals: totals,
        entropies,
        weights,
    })
}

/// Entropy weights of a normalized interval matrix.
pub fn entropy_weights(normalized: &GreyIntervalMatrix) -> Result<Vec<f64>> {
    Ok(entropy_analysis(normalized)?.weights)
}

/// Normalizes each objective row by its declared orientation.
pub fn normalize_matrix(model: &GmopModel, f: &GreyIntervalMatrix) -> Result<GreyIntervalMatrix> {
    let rows = f
        .iter_rows()
        .zip(&model.objectives)
        .enumerate()
        .map(|(i, (row, o))| {
            normalize_column_set(row, o.orientation).map_err(|e| match e {
                Error::DegenerateColumn => Error::DegenerateObjective(i),
                other => other,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    GreyIntervalMatrix::from_rows(rows)
}

/// `lambda_i = w_i * mu_i / sum(w_k * mu_k)`.
pub fn modify_weights(weights: &[f64], preferences: &[f64]) -> Result<Vec<f64>> {
    if weights.len() != preferences.len() {
        return Err(Error::LengthMismatch {
            expected: weights.len(),
            found: preferences.len(),
        });
    }
    if let Some(&bad) = preferences.iter().find(|p| !(**p >= 0.0) || !p.is_finite()) {
        return Err(Error::InvalidPreference(bad));
    }
    if preferences.iter().all(|&p| p == 0.0) {
        return Err(Error::AllZeroPreferences);
    }
    let products: Vec<f64> = weights.iter().zip(preferences).map(|(w, p)| w * p).collect();
    let total: f64 = products.iter().sum();
    if !(total > 0.0) {
        return Err(Error::Parameter(
            "preferences vanish on every positively weighted objective".into(),
        ));
    }
    Ok(products.into_iter().map(|v| v / total).collect())
}

/// Everything computed on the way from sample points to weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightingWorkspace {
    pub sample_points: Vec<Vec<f64>>,
    pub objective_matrix: GreyIntervalMatrix,
    pub normalized_matrix: GreyIntervalMatrix,
    pub deviations: Vec<Vec<f64>>,
    pub deviation_totals: Vec<f64>,
    pub entropies: Vec<f64>,
    pub weights: Vec<f64>,
    pub preferences: Option<Vec<f64>>,
    pub modified_weights: Option<Vec<f64>>,
}

impl WeightingWorkspace {
    pub fn compute(model: &GmopModel, points: Vec<Vec<f64>>) -> Result<Self> {
        let f = objective_matrix(model, &points)?;
        let r = normalize_matrix(model, &f)?;
        let e = entropy_analysis(&r)?;
        Ok(Self {
            sample_points: points,
            objective_matrix: f,
            normalized_matrix: r,
            deviations: e.deviations,
            deviation_totals: e.deviation_totals,
            entropies: e.entropies,
            weights: e.weights,
            preferences: None,
            modified_weights: None,
        })
    }

    pub fn with_preferences(mut self, preferences: Vec<f64>) -> Result<Self> {
        self.modified_weights = Some(modify_weights(&self.weights, &preferences)?);
        self.preferences = Some(preferences);
        Ok(self)
    }

    /// Modified weights when preferences were given, entropy weights otherwise.
    pub fn effective_weights(&self) -> &[f64] {
        self.modified_weights.as_deref().unwrap_or(&self.weights)
    }
}

/// Weighted single-objective grey program (canonical maximize sense).
pub fn combine_objectives(model: &GmopModel, weights: &[f64]) -> Result<GreyLinearProgram> {
    model.validate()?;
    let m = model.objective_count();
    if weights.len() != m {
        return Err(Error::WeightDimensionMismatch {
            expected: m,
            found: weights.len(),
        });
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > 1e-9 || weights.iter().any(|w| !(*w >= 0.0)) {
        return Err(Error::Parameter(format!(
            "weights must be nonnegative and sum to 1 (sum is {total})"
        )));
    }
    let signed: Vec<f64> = model
        .objectives
        .iter()
        .zip(weights)
        .map(|(o, w)| o.sign() * w)
        .collect();
    let price = (0..model.variable_count)
        .map(|j| {
            let column: Vec<GreyNumber> =
                model.objectives.iter().map(|o| o.coefficients[j]).collect();
            lin_comb(&signed, &column)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GreyLinearProgram {
        sense: Sense::Maximize,
        price,
        consumption: model
            .constraints
            .iter()
            .map(|c| c.coefficients.clone())
            .collect(),
        resources: model.constraints.iter().map(|c| c.rhs).collect(),
        relations: model.constraints.iter().map(|c| c.relation).collect(),
        objective_constant: 0.0,
    })
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Algorithm1Options {
    pub theta: f64,
    /// Number of sampled points; defaults to twice the objective count.
    pub sample_count: Option<usize>,
    pub supplied_points: Option<Vec<Vec<f64>>>,
    pub preferences: Option<Vec<f64>>,
    /// Fixed objective weights; skips sampling and entropy weighting.
    #[serde(default)]
    pub weights: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Algorithm1Outcome {
    pub point: Vec<f64>,
    /// Each objective at `point`, whitened at theta, in its declared sense.
    pub objective_values: Vec<f64>,
    pub combined_value: f64,
    pub weights: Vec<f64>,
    pub combined: GreyLinearProgram,
    /// Absent for single-objective models and for fixed weights.
    pub workspace: Option<WeightingWorkspace>,
}

/// Entropy-weighted scalarization solved at a theta position.
pub fn algorithm1(model: &GmopModel, options: &Algorithm1Options) -> Result<Algorithm1Outcome> {
    model.validate()?;
    check_theta(options.theta)?;
    let m = model.objective_count();
    let (weights, workspace) = if let Some(w) = &options.weights {
        (w.clone(), None)
    } else if m == 1 {
        (vec![1.0], None)
    } else {
        let count = options.sample_count.unwrap_or(2 * m);
        let points = sample_admissible(
            model,
            options.theta,
            count,
            options.supplied_points.as_deref(),
        )?;
        let mut ws = WeightingWorkspace::compute(model, points)?;
        if let Some(prefs) = &options.preferences {
            ws = ws.with_preferences(prefs.clone())?;
        }
        (ws.effective_weights().to_vec(), Some(ws))
    };
    let combined = combine_objectives(model, &weights)?;
    let solution = crate::positioned::theta_solve(&combined, options.theta)?;
    if !solution.is_optimal() {
        return Err(Error::ProgramStatus(solution.status));
    }
    let objective_values = (0..m)
        .map(|i| model.evaluate(i, &solution.point, options.theta))
        .collect::<Result<Vec<_>>>()?;
    Ok(Algorithm1Outcome {
        point: solution.point,
        objective_values,
        combined_value: solution.value,
        weights,
        combined,
        workspace,
    })
}

// ---------------------------------------------------------------------------
// Max-min route
// ---------------------------------------------------------------------------

/// Individual optima and the induced value ranges, in canonical maximize
/// orientation (minimize-sense objectives appear negated).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaxMinWorkspace {
    pub theta: f64,
    /// `optima[s]` maximizes objective `s` alone.
    pub optima: Vec<Vec<f64>>,
    /// `cross_values[i][s]` is objective `i` at `optima[s]`.
    pub cross_values: Vec<Vec<f64>>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub midpoints: Vec<f64>,
    pub half_widths: Vec<f64>,
}

pub fn individual_optima(model: &GmopModel, theta: f64) -> Result<MaxMinWorkspace> {
    model.validate()?;
    check_theta(theta)?;
    let m = model.objective_count();
    let objectives = (0..m)
        .map(|i| model.canonical_objective(i, theta))
        .collect::<Result<Vec<_>>>()?;
    let mut optima = Vec::with_capacity(m);
    for (i, c) in objectives.iter().enumerate() {
        let s = solve_lp(&model.region(c.clone(), theta)?)?;
        match s.status {
            LpStatus::Optimal => optima.push(s.point),
            LpStatus::Unbounded => return Err(Error::UnboundedObjective(i)),
            LpStatus::Infeasible => return Err(Error::InfeasibleModel),
            other => return Err(Error::ProgramStatus(other)),
        }
    }
    let cross_values: Vec<Vec<f64>> = objectives
        .iter()
        .map(|c| optima.iter().map(|x| dot(c, x)).collect())
        .collect();
    let lower: Vec<f64> = cross_values
        .iter()
        .map(|r| r.iter().copied().fold(f64::INFINITY, f64::min))
        .collect();
    let upper: Vec<f64> = cross_values
        .iter()
        .map(|r| r.iter().copied().fold(f64::NEG_INFINITY, f64::max))
        .collect();
    let midpoints = lower.iter().zip(&upper).map(|(a, b)| 0.5 * (a + b)).collect();
    let half_widths = lower.iter().zip(&upper).map(|(a, b)| 0.5 * (b - a)).collect();
    Ok(MaxMinWorkspace {
        theta,
        optima,
        cross_values,
        lower,
        upper,
        midpoints,
        half_widths,
    })
}

/// Lower and upper cutoffs of the whitening weight ramp.
pub fn ramp_cutoffs(mid: f64, half_width: f64, w_centered: f64) -> (f64, f64) {
    let top = mid + w_centered * half_width;
    let bottom = if w_centered >= 0.0 {
        mid + (2.0 * w_centered - 1.0) * half_width
    } else {
        mid - half_width
    };
    (bottom, top)
}

/// Piecewise-linear membership of `value` in "objective near its optimum".
pub fn whitening_weight(value: f64, mid: f64, half_width: f64, w_centered: f64) -> Result<f64> {
    if !(half_width > 0.0) {
        return Err(Error::ZeroWidth);
    }
    let (bottom, top) = ramp_cutoffs(mid, half_width, w_centered);
    Ok(if value >= top {
        1.0
    } else if value < bottom {
        0.0
    } else {
        (1.0 - (top - value) / (top - bottom)).clamp(0.0, 1.0)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Algorithm2Options {
    /// Round the satisfaction-column coefficients to two significant figures
    /// (ties to even), matching hand-computed tables.
    #[serde(default)]
    pub paper_rounding: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaxMinRow {
    pub objective: usize,
    /// `w_i - 1/m`.
    pub centered_weight: f64,
    /// Coefficient of the satisfaction level in this row.
    pub satisfaction_coefficient: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Algorithm2Outcome {
    pub point: Vec<f64>,
    pub satisfaction: f64,
    /// Each objective at `point`, whitened at theta, in its declared sense.
    pub objective_values: Vec<f64>,
    pub centered_weights: Vec<f64>,
    /// Objectives with nonnegative centered weight.
    pub nonnegative_set: Vec<usize>,
    /// Objectives with negative centered weight.
    pub negative_set: Vec<usize>,
    /// Objectives whose individual optima span no range; they cannot steer
    /// the solution and are left out of the max-min program.
    pub dropped: Vec<usize>,
    pub rows: Vec<MaxMinRow>,
    pub workspace: MaxMinWorkspace,
}

/// Max-min satisfaction solve at a theta position with objective weights `w`.
///
/// Among points reaching the optimal satisfaction level, the one with the
/// least total surplus over the membership rows is returned, so each
/// objective sits as close to its satisfaction threshold as the optimum
/// allows.
pub fn algorithm2(
    model: &GmopModel,
    theta: f64,
    weights: &[f64],
    options: Algorithm2Options,
) -> Result<Algorithm2Outcome> {
    model.validate()?;
    let m = model.objective_count();
    if weights.len() != m {
        return Err(Error::WeightDimensionMismatch {
            expected: m,
            found: weights.len(),
        });
    }
    let ws = individual_optima(model, theta)?;
    let n = model.variable_count;
    let centered: Vec<f64> = weights.iter().map(|w| w - 1.0 / m as f64).collect();
    let nonnegative_set: Vec<usize> = (0..m).filter(|&i| centered[i] >= 0.0).collect();
    let negative_set: Vec<usize> = (0..m).filter(|&i| centered[i] < 0.0).collect();
    let dropped: Vec<usize> = (0..m)
        .filter(|&i| ws.half_widths[i] <= 1e-12 * (1.0 + ws.midpoints[i].abs()))
        .collect();

    let values_at = |x: &[f64]| -> Result<Vec<f64>> {
        (0..m).map(|i| model.evaluate(i, x, theta)).collect()
    };

    if dropped.len() == m {
        let point = ws.optima[0].clone();
        return Ok(Algorithm2Outcome {
            objective_values: values_at(&point)?,
            point,
            satisfaction: 1.0,
            centered_weights: centered,
            nonnegative_set,
            negative_set,
            dropped,
            rows: Vec::new(),
            workspace: ws,
        });
    }

    let mut rows = Vec::new();
    let mut problem = LpProblem::maximize({
        let mut c = vec![0.0; n + 1];
        c[n] = 1.0;
        c
    });
    for i in (0..m).filter(|i| !dropped.contains(i)) {
        let (mu, v, wc) = (ws.midpoints[i], ws.half_widths[i], centered[i]);
        let (mut coefficient, rhs) = if wc >= 0.0 {
            ((1.0 - wc) * v, mu + (2.0 * wc - 1.0) * v)
        } else {
            ((1.0 + wc) * v, mu - v)
        };
        if options.paper_rounding {
            coefficient = round_significant(coefficient, 2);
        }
        let mut row = model.canonical_objective(i, theta)?;
        row.push(-coefficient);
        problem = problem.with_constraint(row, Relation::Ge, rhs);
        rows.push(MaxMinRow {
            objective: i,
            centered_weight: wc,
            satisfaction_coefficient: coefficient,
            rhs,
        });
    }
    let membership_rows = rows.len();
    for c in model.whitened_constraints(theta)? {
        let mut coefficients = c.coefficients;
        coefficients.push(0.0);
        problem = problem.with_constraint(coefficients, c.relation, c.rhs);
    }
    let mut cap = vec![0.0; n + 1];
    cap[n] = 1.0;
    problem = problem.with_constraint(cap, Relation::Le, 1.0);

    let first = solve_lp(&problem)?;
    match first.status {
        LpStatus::Optimal => {}
        LpStatus::Infeasible => return Err(Error::InfeasibleMaxMin),
        other => return Err(Error::MaxMinStatus(other)),
    }
    let satisfaction = first.point[n];

    // Second stage: hold the satisfaction level, minimize membership surplus.
    let mut surplus = vec![0.0; n + 1];
    for row in &problem.constraints[..membership_rows] {
        for (s, a) in surplus.iter_mut().zip(&row.coefficients) {
            *s += a;
        }
    }
    let mut fixed = vec![0.0; n + 1];
    fixed[n] = 1.0;
    let second = LpProblem {
        sense: Sense::Minimize,
        objective: surplus,
        constraints: problem.constraints.clone(),
    }
    .with_constraint(fixed, Relation::Eq, satisfaction);
    let refined = solve_lp(&second)?;
    let mut point = if refined.is_optimal() && problem.is_feasible(&refined.point, 1e-9) {
        refined.point
    } else {
        first.point
    };
    point.truncate(n);

    Ok(Algorithm2Outcome {
        objective_values: values_at(&point)?,
        point,
        satisfaction,
        centered_weights: centered,
        nonnegative_set,
        negative_set,
        dropped,
        rows,
        workspace: ws,
    })
}

/// Rounds to `digits` significant figures, ties to even. Binary noise below
/// twelve significant digits is discarded first so decimal ties are seen as
/// ties.
pub fn round_significant(value: f64, digits: i32) -> f64 {
    if value == 0.0 || !value.is_finite() {
        return value;
    }
    let cleaned: f64 = format!("{value:.11e}").parse().unwrap_or(value);
    let exponent = cleaned.abs().log10().floor() as i32;
    let scale = 10f64.powi(digits - 1 - exponent);
    let scaled = cleaned * scale;
    let floor = scaled.floor();
    let frac = scaled - floor;
    let rounded = if (frac - 0.5).abs() < 1e-9 {
        if floor.rem_euclid(2.0) == 0.0 {
            floor
        } else {
            floor + 1.0
        }
    } else {
        scaled.round()
    };
    rounded / scale
}

//! Assets-investment planning with grey rates.
//!
//! Holding 0 is the bank deposit (riskless, no transaction cost); holdings
//! `1..=n` are the assets. Allocations are fractions of the total funds `M`.
//! Risk is the largest single-holding loss `max_i q_i x_i M`, linearized
//! through an auxiliary risk level `x_{n+1} >= q_i x_i`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gmop::GreyConstraint;
use crate::grey::{whiten, GreyNumber};
use crate::lp::{dot, solve_lp, LpProblem, Relation, Sense};
use crate::positioned::{solve_positioned, GreyLinearProgram, PositionedCoefficients};

/// Largest asset count accepted by regime enumeration.
pub const MAX_EXACT_ASSETS: usize = 12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Asset {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub profit_rate: GreyNumber,
    pub risk_rate: GreyNumber,
    pub transaction_rate: GreyNumber,
    /// Fee base floor in money units.
    pub purchase_floor: GreyNumber,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PortfolioSpec {
    pub total_funds: f64,
    pub bank_rate: GreyNumber,
    pub assets: Vec<Asset>,
}

impl PortfolioSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.total_funds > 0.0) || !self.total_funds.is_finite() {
            return Err(Error::InvalidPortfolio(format!(
                "total funds must be positive, got {}",
                self.total_funds
            )));
        }
        if self.bank_rate.lower() <= -1.0 {
            return Err(Error::InvalidPortfolio(
                "bank rate must stay above -1".into(),
            ));
        }
        for (k, a) in self.assets.iter().enumerate() {
            let i = k + 1;
            if a.profit_rate.lower() <= -1.0 {
                return Err(Error::InvalidPortfolio(format!(
                    "asset {i}: profit rate must stay above -1"
                )));
            }
            for (what, g) in [
                ("risk rate", a.risk_rate),
                ("transaction rate", a.transaction_rate),
                ("purchase floor", a.purchase_floor),
            ] {
                if g.lower() < 0.0 {
                    return Err(Error::InvalidPortfolio(format!(
                        "asset {i}: {what} must be nonnegative"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Number of holdings including the bank deposit.
    pub fn holdings(&self) -> usize {
        self.assets.len() + 1
    }

    pub fn profit_rate(&self, i: usize) -> GreyNumber {
        if i == 0 {
            self.bank_rate
        } else {
            self.assets[i - 1].profit_rate
        }
    }

    pub fn risk_rate(&self, i: usize) -> GreyNumber {
        if i == 0 {
            GreyNumber::white(0.0)
        } else {
            self.assets[i - 1].risk_rate
        }
    }

    pub fn transaction_rate(&self, i: usize) -> GreyNumber {
        if i == 0 {
            GreyNumber::white(0.0)
        } else {
            self.assets[i - 1].transaction_rate
        }
    }

    pub fn purchase_floor(&self, i: usize) -> GreyNumber {
        if i == 0 {
            GreyNumber::white(0.0)
        } else {
            self.assets[i - 1].purchase_floor
        }
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.holdings() {
            return Err(Error::IndexOutOfRange {
                index: i,
                count: self.holdings(),
            });
        }
        Ok(())
    }
}

/// Fixed-charge transaction cost of holding `i` at fraction `x`:
/// `p * max(M x, u)` when `x > 0`, zero otherwise.
pub fn transaction_cost(spec: &PortfolioSpec, i: usize, x: f64, theta: f64) -> Result<f64> {
    spec.check_index(i)?;
    if !(x >= 0.0) {
        return Err(Error::Parameter(format!("holding fraction {x} is negative")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let rate = whiten(&spec.transaction_rate(i), theta)?;
    let floor = whiten(&spec.purchase_floor(i), theta)?;
    Ok(rate * (spec.total_funds * x).max(floor))
}

/// Profit and risk objectives before scalarization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BiObjectiveModel {
    pub total_funds: f64,
    /// `(r_i + 1) M` per holding; profit is `sum(c_i x_i) + profit_constant`.
    pub profit: Vec<GreyNumber>,
    pub profit_constant: f64,
    /// `q_i M` per holding; risk is the largest `c_i x_i` (minimax).
    pub risk: Vec<GreyNumber>,
    /// `sum((1 + p_i) x_i) = 1` (proportional-fee budget).
    pub budget: GreyConstraint,
}

impl BiObjectiveModel {
    pub fn profit_at(&self, x: &[f64], theta: f64) -> Result<f64> {
        let c = self
            .profit
            .iter()
            .map(|g| whiten(g, theta))
            .collect::<Result<Vec<_>>>()?;
        Ok(dot(&c, x) + self.profit_constant)
    }

    pub fn risk_at(&self, x: &[f64], theta: f64) -> Result<f64> {
        self.risk
            .iter()
            .zip(x)
            .map(|(g, xi)| Ok(whiten(g, theta)? * xi))
            .try_fold(0.0f64, |acc, v: Result<f64>| Ok(acc.max(v?)))
    }
}

pub fn build_biobjective(spec: &PortfolioSpec) -> Result<BiObjectiveModel> {
    spec.validate()?;
    let m = spec.total_funds;
    let h = spec.holdings();
    Ok(BiObjectiveModel {
        total_funds: m,
        profit: (0..h)
            .map(|i| spec.profit_rate(i).shift(1.0).scale(m))
            .collect(),
        profit_constant: -m,
        risk: (0..h).map(|i| spec.risk_rate(i).scale(m)).collect(),
        budget: GreyConstraint {
            coefficients: (0..h).map(|i| spec.transaction_rate(i).shift(1.0)).collect(),
            relation: Relation::Eq,
            rhs: GreyNumber::white(1.0),
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeeMode {
    /// Fees proportional to the amount bought: `A_i = p_i M x_i`.
    #[default]
    Proportional,
    /// Fixed-charge fees `p_i max(M x_i, u_i)` solved by regime enumeration.
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PortfolioOptions {
    #[serde(default)]
    pub fee_mode: FeeMode,
    /// Also cap each purchase at the whitened purchase bound: `M x_i <= u_i`.
    #[serde(default)]
    pub purchase_cap: bool,
}

/// Single-objective grey program for a risk weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalarizedModel {
    pub risk_weight: GreyNumber,
    pub theta_lambda: f64,
    /// `risk_weight` whitened at `theta_lambda`.
    pub weight: f64,
    /// Variables `x_0..x_n` then the risk level `x_{n+1}`. Row 0 is the
    /// budget, rows `1..=n+1` the risk rows for holdings `0..=n`, followed by
    /// purchase caps when requested.
    pub program: GreyLinearProgram,
}

/// Weighted profit/risk program:
/// maximize `(1 - w)(sum((r_i + 1) x_i) - 1) - w x_{n+1}`.
pub fn scalarize(
    spec: &PortfolioSpec,
    risk_weight: GreyNumber,
    theta_lambda: f64,
    options: PortfolioOptions,
) -> Result<ScalarizedModel> {
    spec.validate()?;
    if !risk_weight.is_within(&GreyNumber::new(0.0, 1.0)?) {
        return Err(Error::RiskWeightOutOfRange(risk_weight));
    }
    if !(0.0..=1.0).contains(&theta_lambda) {
        return Err(Error::ThetaOutOfRange(theta_lambda));
    }
    let w = whiten(&risk_weight, theta_lambda)?;
    let h = spec.holdings();
    let width = h + 1;

    let mut price: Vec<GreyNumber> = (0..h)
        .map(|i| spec.profit_rate(i).shift(1.0).scale(1.0 - w))
        .collect();
    price.push(GreyNumber::white(-w));

    let zero = GreyNumber::white(0.0);
    let mut consumption = Vec::new();
    let mut resources = Vec::new();
    let mut relations = Vec::new();

    let mut budget: Vec<GreyNumber> = (0..h).map(|i| spec.transaction_rate(i).shift(1.0)).collect();
    budget.push(zero);
    consumption.push(budget);
    resources.push(GreyNumber::white(1.0));
    relations.push(Relation::Eq);

    for i in 0..h {
        let mut row = vec![zero; width];
        row[i] = spec.risk_rate(i);
        row[h] = GreyNumber::white(-1.0);
        consumption.push(row);
        resources.push(zero);
        relations.push(Relation::Le);
    }
    if options.purchase_cap {
        for i in 1..h {
            let mut row = vec![zero; width];
            row[i] = GreyNumber::white(1.0);
            consumption.push(row);
            resources.push(spec.purchase_floor(i).scale(1.0 / spec.total_funds));
            relations.push(Relation::Le);
        }
    }

    Ok(ScalarizedModel {
        risk_weight,
        theta_lambda,
        weight: w,
        program: GreyLinearProgram {
            sense: Sense::Maximize,
            price,
            consumption,
            resources,
            relations,
            objective_constant: -(1.0 - w),
        },
    })
}

/// An optimal allocation and its money-valued objectives.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PortfolioSolution {
    /// Fractions `x_0..x_n` of the total funds.
    pub allocation: Vec<f64>,
    /// Auxiliary risk level `x_{n+1}` as found by the solver.
    pub risk_level: f64,
    /// Transaction costs per holding, money.
    pub fees: Vec<f64>,
    /// Net profit `Z1`, money.
    pub profit: f64,
    /// Largest single-holding loss `Z2`, money.
    pub risk: f64,
    /// Optimal value of the solved program.
    pub objective: f64,
}

/// Whitened holding data.
#[derive(Debug, Clone)]
struct WhiteRates {
    funds: f64,
    profit: Vec<f64>,
    risk: Vec<f64>,
    fee: Vec<f64>,
    floor: Vec<f64>,
}

impl WhiteRates {
    fn at_theta(spec: &PortfolioSpec, theta: f64) -> Result<Self> {
        let h = spec.holdings();
        let map = |f: &dyn Fn(usize) -> GreyNumber| -> Result<Vec<f64>> {
            (0..h).map(|i| whiten(&f(i), theta)).collect()
        };
        Ok(Self {
            funds: spec.total_funds,
            profit: map(&|i| spec.profit_rate(i))?,
            risk: map(&|i| spec.risk_rate(i))?,
            fee: map(&|i| spec.transaction_rate(i))?,
            floor: map(&|i| spec.purchase_floor(i))?,
        })
    }

    /// Rates matching a positioned whitening of the scalarized program.
    fn positioned(spec: &PortfolioSpec, pc: &PositionedCoefficients) -> Result<Self> {
        let h = spec.holdings();
        let mut out = Self {
            funds: spec.total_funds,
            profit: Vec::with_capacity(h),
            risk: Vec::with_capacity(h),
            fee: Vec::with_capacity(h),
            floor: Vec::with_capacity(h),
        };
        for i in 0..h {
            out.profit.push(whiten(&spec.profit_rate(i), pc.rho[i])?);
            out.fee.push(whiten(&spec.transaction_rate(i), pc.delta[0][i])?);
            out.risk.push(whiten(&spec.risk_rate(i), pc.delta[1 + i][i])?);
            out.floor.push(whiten(&spec.purchase_floor(i), pc.beta[0])?);
        }
        Ok(out)
    }

    fn holdings(&self) -> usize {
        self.profit.len()
    }

    fn net_profit(&self, x: &[f64]) -> f64 {
        self.funds
            * (self
                .profit
                .iter()
                .zip(x)
                .map(|(r, xi)| (r + 1.0) * xi)
                .sum::<f64>()
                - 1.0)
    }

    fn risk(&self, x: &[f64]) -> f64 {
        self.funds
            * self
                .risk
                .iter()
                .zip(x)
                .map(|(q, xi)| q * xi)
                .fold(0.0, f64::max)
    }

    fn fixed_charge(&self, i: usize, x: f64) -> f64 {
        if x > 0.0 {
            self.fee[i] * (self.funds * x).max(self.floor[i])
        } else {
            0.0
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Goal {
    Weighted(f64),
    RiskCap(f64),
}

/// LP over `x_0..x_n`, the risk level, and (exact mode) one fee variable per
/// active asset. `active[i]` for `i >= 1` enables asset `i`.
fn holding_lp(rates: &WhiteRates, goal: Goal, active: Option<&[bool]>, cap: bool) -> LpProblem {
    let h = rates.holdings();
    let fee_assets: Vec<usize> = match active {
        Some(mask) => (1..h).filter(|&i| mask[i]).collect(),
        None => Vec::new(),
    };
    let width = h + 1 + fee_assets.len();
    let level = h;

    let mut objective = vec![0.0; width];
    match goal {
        Goal::Weighted(w) => {
            for i in 0..h {
                objective[i] = (1.0 - w) * (rates.profit[i] + 1.0);
            }
            objective[level] = -w;
        }
        Goal::RiskCap(_) => {
            for i in 0..h {
                objective[i] = rates.profit[i] + 1.0;
            }
        }
    }
    let mut lp = LpProblem::maximize(objective);

    let mut budget = vec![0.0; width];
    match active {
        None => {
            for i in 0..h {
                budget[i] = 1.0 + rates.fee[i];
            }
        }
        Some(_) => {
            budget[..h].iter_mut().for_each(|b| *b = 1.0);
            for k in 0..fee_assets.len() {
                budget[h + 1 + k] = 1.0;
            }
        }
    }
    lp = lp.with_constraint(budget, Relation::Eq, 1.0);

    for i in 0..h {
        let mut row = vec![0.0; width];
        row[i] = rates.risk[i];
        row[level] = -1.0;
        lp = lp.with_constraint(row, Relation::Le, 0.0);
    }
    if let Goal::RiskCap(e) = goal {
        let mut row = vec![0.0; width];
        row[level] = 1.0;
        lp = lp.with_constraint(row, Relation::Le, e / rates.funds);
    }
    if cap {
        for i in 1..h {
            let mut row = vec![0.0; width];
            row[i] = 1.0;
            lp = lp.with_constraint(row, Relation::Le, rates.floor[i] / rates.funds);
        }
    }
    if let Some(mask) = active {
        for i in (1..h).filter(|&i| !mask[i]) {
            let mut row = vec![0.0; width];
            row[i] = 1.0;
            lp = lp.with_constraint(row, Relation::Le, 0.0);
        }
        for (k, &i) in fee_assets.iter().enumerate() {
            let fee_col = h + 1 + k;
            // fee >= p x  and  fee >= p u / M
            let mut row = vec![0.0; width];
            row[fee_col] = 1.0;
            row[i] = -rates.fee[i];
            lp = lp.with_constraint(row, Relation::Ge, 0.0);
            let mut row = vec![0.0; width];
            row[fee_col] = 1.0;
            lp = lp.with_constraint(row, Relation::Ge, rates.fee[i] * rates.floor[i] / rates.funds);
        }
    }
    lp
}

fn goal_value(rates: &WhiteRates, goal: Goal, x: &[f64], level: f64) -> f64 {
    match goal {
        Goal::Weighted(w) => (1.0 - w) * (rates.net_profit(x) / rates.funds) - w * level,
        Goal::RiskCap(_) => rates.net_profit(x),
    }
}

fn finish(rates: &WhiteRates, x: Vec<f64>, level: f64, objective: f64, exact: bool) -> PortfolioSolution {
    let fees = x
        .iter()
        .enumerate()
        .map(|(i, &xi)| {
            if exact {
                rates.fixed_charge(i, xi)
            } else {
                rates.fee[i] * rates.funds * xi
            }
        })
        .collect();
    PortfolioSolution {
        profit: rates.net_profit(&x),
        risk: rates.risk(&x),
        fees,
        risk_level: level,
        objective,
        allocation: x,
    }
}

/// Optimum over every active-asset subset, or `None` when all are infeasible.
fn solve_exact(rates: &WhiteRates, goal: Goal, cap: bool) -> Result<Option<PortfolioSolution>> {
    let n = rates.holdings() - 1;
    if n > MAX_EXACT_ASSETS {
        return Err(Error::Parameter(format!(
            "exact fee mode supports at most {MAX_EXACT_ASSETS} assets, got {n}"
        )));
    }
    let h = n + 1;
    let mut best: Option<(f64, Vec<f64>, f64)> = None;
    for bits in 0u32..(1u32 << n) {
        let mask: Vec<bool> = (0..h).map(|i| i == 0 || bits & (1 << (i - 1)) != 0).collect();
        let s = solve_lp(&holding_lp(rates, goal, Some(&mask), cap))?;
        if !s.is_optimal() {
            continue;
        }
        let x = s.point[..h].to_vec();
        let level = s.point[h];
        let value = goal_value(rates, goal, &x, level);
        if best.as_ref().is_none_or(|(v, _, _)| value > *v + 1e-12) {
            best = Some((value, x, level));
        }
    }
    Ok(best.map(|(v, x, level)| finish(rates, x, level, v, true)))
}

fn solve_goal(rates: &WhiteRates, goal: Goal, options: PortfolioOptions) -> Result<Option<PortfolioSolution>> {
    match options.fee_mode {
        FeeMode::Exact => solve_exact(rates, goal, options.purchase_cap),
        FeeMode::Proportional => {
            let s = solve_lp(&holding_lp(rates, goal, None, options.purchase_cap))?;
            if !s.is_optimal() {
                return Ok(None);
            }
            let h = rates.holdings();
            let x = s.point[..h].to_vec();
            let level = s.point[h];
            let value = goal_value(rates, goal, &x, level);
            Ok(Some(finish(rates, x, level, value, false)))
        }
    }
}

/// Solves the scalarized program at a positioned whitening (proportional fees).
pub fn solve_scalarized(
    spec: &PortfolioSpec,
    model: &ScalarizedModel,
    pc: &PositionedCoefficients,
) -> Result<PortfolioSolution> {
    let s = solve_positioned(&model.program, pc)?;
    if !s.is_optimal() {
        return Err(Error::ProgramStatus(s.status));
    }
    let rates = WhiteRates::positioned(spec, pc)?;
    let h = spec.holdings();
    let x = s.point[..h].to_vec();
    Ok(finish(&rates, x, s.point[h], s.value, false))
}

/// Weighted profit/risk optimum with every grey rate whitened at `theta`.
pub fn solve_weighted(
    spec: &PortfolioSpec,
    weight: f64,
    theta: f64,
    options: PortfolioOptions,
) -> Result<PortfolioSolution> {
    spec.validate()?;
    if !(0.0..=1.0).contains(&weight) {
        return Err(Error::RiskWeightOutOfRange(GreyNumber::white(weight)));
    }
    if !(0.0..=1.0).contains(&theta) {
        return Err(Error::ThetaOutOfRange(theta));
    }
    let rates = WhiteRates::at_theta(spec, theta)?;
    solve_goal(&rates, Goal::Weighted(weight), options)?.ok_or(Error::InfeasibleModel)
}

/// Makes `allocation` affordable under fixed-charge fees by drawing the fee
/// shortfall from the bank deposit; `None` when the deposit cannot cover it.
pub fn repair_for_fixed_charges(spec: &PortfolioSpec, theta: f64, allocation: &[f64]) -> Result<Option<Vec<f64>>> {
    let rates = WhiteRates::at_theta(spec, theta)?;
    if allocation.len() != rates.holdings() {
        return Err(Error::LengthMismatch {
            expected: rates.holdings(),
            found: allocation.len(),
        });
    }
    let spent: f64 = allocation.iter().sum::<f64>()
        + allocation
            .iter()
            .enumerate()
            .map(|(i, &x)| rates.fixed_charge(i, x) / rates.funds)
            .sum::<f64>();
    let mut out = allocation.to_vec();
    out[0] -= spent - 1.0;
    if out[0] < -1e-12 {
        return Ok(None);
    }
    out[0] = out[0].max(0.0);
    Ok(Some(out))
}

/// `(1 - w) Z1 / M - w Z2 / M` of an allocation at `theta`.
pub fn weighted_objective(spec: &PortfolioSpec, weight: f64, theta: f64, allocation: &[f64]) -> Result<f64> {
    let rates = WhiteRates::at_theta(spec, theta)?;
    let level = rates.risk(allocation) / rates.funds;
    Ok(goal_value(&rates, Goal::Weighted(weight), allocation, level))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrontierPoint {
    pub epsilon: f64,
    /// Net profit `Z1`, money.
    pub profit: f64,
    /// Risk `Z2`, money.
    pub risk: f64,
    pub allocation: Vec<f64>,
    /// Profit given up per unit of risk removed, against the previous point.
    pub tradeoff: Option<f64>,
}

/// Epsilon-constraint sweep: maximize profit subject to risk `<= e2` for each
/// `e2`, keeping nondominated points in ascending risk.
pub fn pareto_frontier(
    spec: &PortfolioSpec,
    theta: f64,
    epsilons: &[f64],
    options: PortfolioOptions,
) -> Result<Vec<FrontierPoint>> {
    spec.validate()?;
    if !(0.0..=1.0).contains(&theta) {
        return Err(Error::ThetaOutOfRange(theta));
    }
    if epsilons.is_empty() {
        return Err(Error::Parameter("epsilon list is empty".into()));
    }
    if epsilons.iter().any(|e| !(*e >= 0.0) || !e.is_finite()) {
        return Err(Error::Parameter("epsilons must be finite and nonnegative".into()));
    }
    if epsilons.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Parameter("epsilons must be sorted ascending".into()));
    }
    let rates = WhiteRates::at_theta(spec, theta)?;
    let mut candidates = Vec::new();
    for &e in epsilons {
        if let Some(s) = solve_goal(&rates, Goal::RiskCap(e), options)? {
            candidates.push(FrontierPoint {
                epsilon: e,
                profit: s.profit,
                risk: s.risk,
                allocation: s.allocation,
                tradeoff: None,
            });
        }
    }
    if candidates.is_empty() {
        return Err(Error::EmptyFrontier);
    }

    let tol = 1e-9 * spec.total_funds.max(1.0);
    let dominated = |p: &FrontierPoint, q: &FrontierPoint| {
        q.profit >= p.profit - tol
            && q.risk <= p.risk + tol
            && (q.profit > p.profit + tol || q.risk < p.risk - tol)
    };
    let mut kept: Vec<FrontierPoint> = Vec::new();
    for p in &candidates {
        if candidates.iter().any(|q| dominated(p, q)) {
            continue;
        }
        let duplicate = kept
            .iter()
            .any(|k| (k.profit - p.profit).abs() <= tol && (k.risk - p.risk).abs() <= tol);
        if !duplicate {
            kept.push(p.clone());
        }
    }
    kept.sort_by(|a, b| a.risk.total_cmp(&b.risk));
    for k in 1..kept.len() {
        let d_risk = kept[k].risk - kept[k - 1].risk;
        if d_risk > 0.0 {
            kept[k].tradeoff = Some((kept[k].profit - kept[k - 1].profit) / d_risk);
        }
    }
    Ok(kept)
}

/// Frontier point nearest the ideal point (best profit, least risk) after
/// min-max normalizing both coordinates; ties go to the lower-risk point.
pub fn compromise_solution(frontier: &[FrontierPoint]) -> Result<FrontierPoint> {
    if frontier.is_empty() {
        return Err(Error::EmptyFrontier);
    }
    let (mut p_lo, mut p_hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut r_lo, mut r_hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for p in frontier {
        p_lo = p_lo.min(p.profit);
        p_hi = p_hi.max(p.profit);
        r_lo = r_lo.min(p.risk);
        r_hi = r_hi.max(p.risk);
    }
    let norm = |v: f64, lo: f64, hi: f64| if hi > lo { (v - lo) / (hi - lo) } else { 0.0 };
    let distance = |p: &FrontierPoint| {
        let profit_gap = 1.0 - norm(p.profit, p_lo, p_hi);
        let risk_gap = norm(p.risk, r_lo, r_hi);
        if p_hi > p_lo {
            (profit_gap * profit_gap + risk_gap * risk_gap).sqrt()
        } else {
            risk_gap
        }
    };
    let mut best = &frontier[0];
    let mut best_d = distance(best);
    for p in &frontier[1..] {
        let d = distance(p);
        if d < best_d - 1e-12 || ((d - best_d).abs() <= 1e-12 && p.risk < best.risk) {
            best = p;
            best_d = d;
        }
    }
    Ok(best.clone())
}

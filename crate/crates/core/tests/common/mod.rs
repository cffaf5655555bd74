//! Brute-force oracles and random instance generators shared by the
//! integration and acceptance tests. Nothing here calls the simplex code.
#![allow(dead_code, clippy::needless_range_loop)]

use greymop::{GreyNumber, LpProblem, Relation, Sense};
use rand::Rng;

const SINGULAR: f64 = 1e-10;
pub const FEAS_TOL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Optimal { value: f64, point: Vec<f64> },
    Infeasible,
    Unbounded,
}

/// Gaussian elimination with partial pivoting; `None` if singular.
pub fn solve_square(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < SINGULAR {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in 0..n {
            if r != col {
                let f = a[r][col] / a[col][col];
                if f != 0.0 {
                    for c in col..n {
                        a[r][c] -= f * a[col][c];
                    }
                    b[r] -= f * b[col];
                }
            }
        }
    }
    Some((0..n).map(|i| b[i] / a[i][i]).collect())
}

fn subsets(n: usize, k: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, f);
            cur.pop();
        }
    }
    rec(0, n, k, &mut Vec::with_capacity(k), f);
}

/// Rows `a x (rel) b` together with `x >= 0`, as `(a, rel, b)` triples.
fn all_rows(p: &LpProblem) -> Vec<(Vec<f64>, Relation, f64)> {
    let n = p.variable_count();
    let mut rows: Vec<_> = p
        .constraints
        .iter()
        .map(|c| (c.coefficients.clone(), c.relation, c.rhs))
        .collect();
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        rows.push((e, Relation::Ge, 0.0));
    }
    rows
}

fn satisfies(rows: &[(Vec<f64>, Relation, f64)], x: &[f64], tol: f64) -> bool {
    rows.iter().all(|(a, rel, b)| {
        let lhs: f64 = a.iter().zip(x).map(|(p, q)| p * q).sum();
        let scaled = tol * (1.0 + b.abs());
        match rel {
            Relation::Le => lhs <= b + scaled,
            Relation::Ge => lhs >= b - scaled,
            Relation::Eq => (lhs - b).abs() <= scaled,
        }
    })
}

/// Every basic feasible point: `n` linearly independent rows held tight.
/// Equality rows are always tight, so they are forced into every basis.
pub fn basic_feasible_points(p: &LpProblem) -> Vec<Vec<f64>> {
    let n = p.variable_count();
    let rows = all_rows(p);
    let forced: Vec<usize> = (0..rows.len()).filter(|&i| rows[i].1 == Relation::Eq).collect();
    let free: Vec<usize> = (0..rows.len()).filter(|&i| rows[i].1 != Relation::Eq).collect();
    let mut out = Vec::new();
    if forced.len() > n {
        // Over-determined equalities: try every n-subset of them plus nothing.
        subsets(rows.len(), n, &mut |s| {
            let a = s.iter().map(|&i| rows[i].0.clone()).collect();
            let b = s.iter().map(|&i| rows[i].2).collect();
            if let Some(x) = solve_square(a, b) {
                if satisfies(&rows, &x, FEAS_TOL) {
                    out.push(x);
                }
            }
        });
        return out;
    }
    let k = n - forced.len();
    subsets(free.len(), k, &mut |s| {
        let chosen: Vec<usize> = forced.iter().copied().chain(s.iter().map(|&i| free[i])).collect();
        let a = chosen.iter().map(|&i| rows[i].0.clone()).collect();
        let b = chosen.iter().map(|&i| rows[i].2).collect();
        if let Some(x) = solve_square(a, b) {
            if satisfies(&rows, &x, FEAS_TOL) {
                out.push(x);
            }
        }
    });
    out
}

/// Largest `c . d` over the recession cone normalized by `sum(d) = 1`.
fn best_ray(p: &LpProblem, c: &[f64]) -> f64 {
    let n = p.variable_count();
    let cone = LpProblem {
        sense: Sense::Maximize,
        objective: c.to_vec(),
        constraints: p
            .constraints
            .iter()
            .map(|k| greymop::Constraint::new(k.coefficients.clone(), k.relation, 0.0))
            .collect(),
    }
    .with_constraint(vec![1.0; n], Relation::Eq, 1.0);
    basic_feasible_points(&cone)
        .iter()
        .map(|d| c.iter().zip(d).map(|(a, b)| a * b).sum::<f64>())
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Exhaustive LP verdict. The region lies in the nonnegative orthant, so it
/// is pointed: nonempty implies a vertex exists, and unboundedness is a
/// recession direction with positive objective gain.
pub fn brute_force(p: &LpProblem) -> Verdict {
    let c: Vec<f64> = match p.sense {
        Sense::Maximize => p.objective.clone(),
        Sense::Minimize => p.objective.iter().map(|v| -v).collect(),
    };
    let vertices = basic_feasible_points(p);
    if vertices.is_empty() {
        return Verdict::Infeasible;
    }
    if best_ray(p, &c) > 1e-9 {
        return Verdict::Unbounded;
    }
    let (best, point) = vertices
        .into_iter()
        .map(|x| (c.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>(), x))
        .max_by(|a, b| a.0.total_cmp(&b.0))
        .unwrap();
    let value = match p.sense {
        Sense::Maximize => best,
        Sense::Minimize => -best,
    };
    Verdict::Optimal { value, point }
}

pub fn rand_coef<R: Rng>(rng: &mut R, integer: bool) -> f64 {
    if integer {
        rng.gen_range(-10i32..=10) as f64
    } else {
        rng.gen_range(-10.0..=10.0)
    }
}

/// Random LP with up to 4 variables and 5 rows, coefficients in [-10, 10].
/// When `plant` is set, a random nonnegative point is made feasible by
/// choosing right-hand sides around it.
pub fn random_lp<R: Rng>(rng: &mut R, plant: bool) -> LpProblem {
    let n = rng.gen_range(1..=4);
    let m = rng.gen_range(1..=5);
    let integer = rng.gen_bool(0.5);
    let sense = if rng.gen_bool(0.5) { Sense::Maximize } else { Sense::Minimize };
    let objective = (0..n).map(|_| rand_coef(rng, integer)).collect();
    let anchor: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..=3.0f64).round()).collect();
    let mut p = LpProblem::new(sense, objective);
    for _ in 0..m {
        let a: Vec<f64> = (0..n).map(|_| rand_coef(rng, integer)).collect();
        let rel = match rng.gen_range(0..10) {
            0..=4 => Relation::Le,
            5..=8 => Relation::Ge,
            _ => Relation::Eq,
        };
        let rhs = if plant {
            let lhs: f64 = a.iter().zip(&anchor).map(|(x, y)| x * y).sum();
            let slack = rng.gen_range(0.0..=5.0f64).round();
            match rel {
                Relation::Le => lhs + slack,
                Relation::Ge => lhs - slack,
                Relation::Eq => lhs,
            }
        } else {
            rand_coef(rng, integer)
        };
        let rhs = rhs.clamp(-10.0, 10.0);
        p = p.with_constraint(a, rel, rhs);
    }
    p
}

pub fn grey<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> GreyNumber {
    let a = rng.gen_range(lo..=hi);
    let b = rng.gen_range(lo..=hi);
    GreyNumber::new(a.min(b), a.max(b)).unwrap()
}

/// Nonnegative maximize-sense grey program with `<=` rows. Every column has
/// a row whose lower consumption is at least 0.5, so all whitenings are
/// bounded, and `x = 0` keeps every whitening feasible.
pub fn random_lpgp<R: Rng>(rng: &mut R) -> greymop::GreyLinearProgram {
    let n = rng.gen_range(1..=4);
    let m = rng.gen_range(1..=4);
    let mut consumption: Vec<Vec<GreyNumber>> =
        (0..m).map(|_| (0..n).map(|_| grey(rng, 0.0, 5.0)).collect()).collect();
    for j in 0..n {
        let r = rng.gen_range(0..m);
        let lo = rng.gen_range(0.5..=3.0);
        consumption[r][j] = GreyNumber::new(lo, lo + rng.gen_range(0.0..=2.0)).unwrap();
    }
    greymop::GreyLinearProgram {
        sense: Sense::Maximize,
        price: (0..n).map(|_| grey(rng, 0.1, 6.0)).collect(),
        consumption,
        resources: (0..m).map(|_| grey(rng, 1.0, 20.0)).collect(),
        relations: vec![Relation::Le; m],
        objective_constant: 0.0,
    }
}

pub fn random_portfolio<R: Rng>(rng: &mut R, max_assets: usize) -> greymop::PortfolioSpec {
    let n = rng.gen_range(1..=max_assets);
    let funds = rng.gen_range(1_000.0..=1_000_000.0f64).round();
    greymop::PortfolioSpec {
        total_funds: funds,
        bank_rate: grey(rng, 0.0, 0.04),
        assets: (0..n)
            .map(|_| greymop::Asset {
                name: None,
                profit_rate: grey(rng, -0.05, 0.3),
                risk_rate: grey(rng, 0.0, 0.3),
                transaction_rate: grey(rng, 0.0, 0.03),
                purchase_floor: grey(rng, 0.0, funds * 0.2),
            })
            .collect(),
    }
}

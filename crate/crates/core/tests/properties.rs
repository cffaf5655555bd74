mod common;

use common::{random_lpgp, random_portfolio};
use greymop::{
    pareto_frontier, pleased_degree, solve_positioned, solve_weighted, theta_solve, FeeMode,
    PortfolioOptions, PositionedCoefficients,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn theta_values_sit_between_critical_and_ideal_models() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let g = random_lpgp(&mut rng);
        let (n, m) = (g.variable_count(), g.row_count());
        let hi = solve_positioned(&g, &PositionedCoefficients::ideal(n, m)).unwrap().value;
        let lo = solve_positioned(&g, &PositionedCoefficients::critical(n, m)).unwrap().value;
        for t in [0.0, 0.5, 1.0] {
            let z = theta_solve(&g, t).unwrap().value;
            assert!(lo - 1e-9 <= z && z <= hi + 1e-9);
            if lo > 0.0 {
                let mu = pleased_degree(lo, z, hi);
                assert!((-1e-12..=1.0 + 1e-12).contains(&mu));
            }
        }
    }
}

#[test]
fn portfolio_budget_and_risk_level() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let spec = random_portfolio(&mut rng, 4);
        let s = solve_weighted(&spec, 0.4, 0.5, PortfolioOptions::default()).unwrap();
        let spent: f64 = s.allocation.iter().sum::<f64>() + s.fees.iter().sum::<f64>() / spec.total_funds;
        assert!((spent - 1.0).abs() < 1e-9);
        assert!((s.risk_level * spec.total_funds - s.risk).abs() < 1e-6 * (1.0 + s.risk));
    }
}

#[test]
fn exact_frontier_is_monotone() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let spec = random_portfolio(&mut rng, 3);
    let top = spec.total_funds * 0.3;
    let eps: Vec<f64> = (0..=6).map(|k| top * k as f64 / 6.0).collect();
    let opts = PortfolioOptions { fee_mode: FeeMode::Exact, purchase_cap: false };
    let f = pareto_frontier(&spec, 0.5, &eps, opts).unwrap();
    for w in f.windows(2) {
        assert!(w[1].profit >= w[0].profit && w[1].risk > w[0].risk);
    }
}

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod error;
pub mod gmop;
pub mod grey;
pub mod lp;
pub mod portfolio;
pub mod positioned;

pub use error::{Error, Result};
pub use gmop::{
    algorithm1, algorithm2, combine_objectives, entropy_weights, individual_optima,
    modify_weights, objective_matrix, sample_admissible, whitening_weight, Algorithm1Options,
    Algorithm1Outcome, Algorithm2Options, Algorithm2Outcome, GmopModel, GreyConstraint,
    GreyObjective, MaxMinWorkspace, WeightingWorkspace,
};
pub use grey::{
    grey_distance, lin_comb, normalize_column_set, whiten, GreyIntervalMatrix, GreyNumber,
    Orientation,
};
pub use lp::{solve_lp, Constraint, LpProblem, LpSolution, LpStatus, Relation, Sense};
pub use portfolio::{
    build_biobjective, compromise_solution, pareto_frontier, repair_for_fixed_charges, scalarize,
    solve_scalarized, solve_weighted, transaction_cost, weighted_objective, Asset,
    BiObjectiveModel, FeeMode, FrontierPoint, PortfolioOptions, PortfolioSolution, PortfolioSpec,
    ScalarizedModel,
};
pub use positioned::{
    assess_pleased, pleased_degree, solve_positioned, theta_solve, whiten_program,
    GreyLinearProgram, PleasedAssessment, PositionSpec, PositionedCoefficients,
};

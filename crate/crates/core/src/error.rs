use thiserror::Error;

/// Errors raised by the grey programming toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid grey number: lower bound {lower} exceeds upper bound {upper}")]
    InvalidGrey { lower: f64, upper: f64 },

    #[error("whitening position {0} is outside [0, 1]")]
    TOutOfRange(f64),

    #[error("theta {0} is outside [0, 1]")]
    ThetaOutOfRange(f64),

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("malformed problem: {0}")]
    MalformedProblem(String),

    #[error("degenerate column: every interval collapses to the same point")]
    DegenerateColumn,

    #[error("degenerate assessment: {0}")]
    DegenerateAssessment(String),

    #[error("objective {0} has zero total deviation across the sample points")]
    DegenerateObjective(usize),

    #[error("preference coefficients are all zero")]
    AllZeroPreferences,

    #[error("invalid preference coefficient {0}")]
    InvalidPreference(f64),

    #[error("weight vector has {found} entries, model has {expected} objectives")]
    WeightDimensionMismatch { expected: usize, found: usize },

    #[error("sample point {index} violates the whitened constraints")]
    InfeasibleSample { index: usize },

    #[error("sample count {count} is invalid for {objectives} objectives")]
    SampleCount { count: usize, objectives: usize },

    #[error("the whitened feasible region is empty")]
    EmptyRegion,

    #[error("objective {0} is unbounded on the whitened feasible region")]
    UnboundedObjective(usize),

    #[error("the whitened model is infeasible")]
    InfeasibleModel,

    #[error("whitening weight function needs a positive half-width")]
    ZeroWidth,

    #[error("max-min program is infeasible even at zero satisfaction")]
    InfeasibleMaxMin,

    #[error("max-min program ended with status {0:?}")]
    MaxMinStatus(crate::lp::LpStatus),

    #[error("positioned program ended with status {0:?}")]
    ProgramStatus(crate::lp::LpStatus),

    #[error("risk weight {0} is not contained in [0, 1]")]
    RiskWeightOutOfRange(crate::grey::GreyNumber),

    #[error("asset index {index} out of range (portfolio has {count} holdings)")]
    IndexOutOfRange { index: usize, count: usize },

    #[error("invalid portfolio: {0}")]
    InvalidPortfolio(String),

    #[error("frontier is empty")]
    EmptyFrontier,

    #[error("invalid parameter: {0}")]
    Parameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;

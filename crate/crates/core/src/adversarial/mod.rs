//! Worst-case analysis: closed-form approximation ratios, a numeric minimizer
//! over them, and generators for the adversarial instances that pin down the
//! known upper and lower bounds.

mod constructions;
mod objectives;
mod replay;
mod search;
mod sweep;
mod truncation;

use thiserror::Error;

use crate::algorithms::AlgorithmError;
use crate::metrics::MetricsError;
use crate::model::CoreError;

pub use constructions::{
    case1_instance, case2_instance, fair_share_violation_instance, lower_bound_instances,
    multi_agent_bounds, multi_agent_instance, two_round_instance, MultiAgentBounds,
};
pub use objectives::{
    alpha_guarded_case1, alpha_guarded_case2, alpha_poly_two_round, alpha_proportional,
    case1_critical_lambda, case2_closed_form, AlphaObjective, Case2ClosedForm, Case2Subcase,
    ObjectiveKind,
};
pub use replay::{replay_lower_bound, LowerBoundCase, LowerBoundVerdict, LOWER_BOUND_RATIO};
pub use search::{minimize_alpha, SearchResult, DOMAIN_MARGIN};
pub use sweep::{
    worst_case_sweep, worst_case_sweep_with, SweepOptions, SweepRow, TableRow, WORST_CASE_TABLE,
};
pub use truncation::truncation_adversary;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AdversarialError {
    #[error("outside the domain: {0}")]
    DomainError(String),
    #[error("closed form yields infeasible values v1={v1}, v2={v2}")]
    InfeasibleClosedForm { v1: f64, v2: f64 },
    #[error("no feasible point in the search domain")]
    EmptyDomain,
    #[error("the fair-share counterexample needs p > 2, got {0}")]
    PNotAboveTwo(f64),
    #[error("{0} is not a perfect square of at least 4")]
    NotPerfectSquare(usize),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error(transparent)]
    Algorithm(#[from] AlgorithmError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
}

fn domain_error(msg: impl Into<String>) -> AdversarialError {
    AdversarialError::DomainError(msg.into())
}

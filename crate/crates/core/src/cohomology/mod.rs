//! Cocycles, coboundaries, cohomology decisions, Mackey groups and twists.

mod cocycle;
mod mackey;
mod solver;
mod twist;

pub use cocycle::{
    coboundary, validate_group_cocycle, validate_groupoid_cocycle, Coboundary, Cocycle, CocycleJson, GroupCocycle,
    GroupoidCocycle,
};
pub use mackey::{mackey_group, mackey_group_with_order, MackeyGroup};
pub use solver::{
    are_cohomologous, decide_cohomologous, solve_mod, CohomologyAnswer, CohomologyCarrier, CohomologySummary,
};
pub use twist::{twist_groupoid, twist_groupoid_with_order, Twist};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CohomologyError {
    #[error("cocycle is not normalized at {0}")]
    NotNormalized(usize),
    #[error("cocycle identity fails at ({0},{1},{2})")]
    CocycleIdentityFails(usize, usize, usize),
    #[error("cochain is not 1 at unit {0}")]
    NotNormalizedAtIdentity(usize),
    #[error("operation needs exact (root of unity) values or a configured search order")]
    NotExact,
    #[error("cocycles live on different carriers")]
    MismatchedCarriers,
    #[error("malformed input: {0}")]
    Malformed(String),
}

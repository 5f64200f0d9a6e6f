//! Outcomes, utilities, state spaces, filtrations and acts.
//!
//! Outcomes are real numbers ordered numerically. An [`Act`] pays
//! `payoffs[t][ω]` at dates `t ≤ T` and the state-dependent constant
//! `tail[ω]` forever after, so its discounted utility has a closed form.

mod act;
mod states;
mod utility;

use alloc::string::String;

pub use act::{
    drop_at, insert_at, util_act, validate_act, Act, Date, DeterministicStream, DiscountFactor,
    MeasurabilityIssue, ValidationReport,
};
pub use states::{Filtration, Partition, StateSet, StateSpace, MAX_STATES};
pub use utility::{Interval, Tabulated, UtilityFunction};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StreamError {
    #[error("state count {0} outside 1..=16")]
    StateCount(usize),
    #[error("duplicate state label {0:?}")]
    DuplicateLabel(String),
    #[error("cells do not partition the state space")]
    InvalidPartition,
    #[error("filtration has no partitions")]
    EmptyFiltration,
    #[error("the period-0 partition must be trivial")]
    NontrivialInitialInformation,
    #[error("partition at date {0} does not refine its predecessor")]
    NotRefining(usize),
    #[error("act has no periods")]
    EmptyAct,
    #[error("expected {expected} states, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("act horizon {act} differs from filtration horizon {filtration}")]
    HorizonMismatch { act: usize, filtration: usize },
    #[error("outcomes must be finite")]
    NonFinite,
    #[error("outcome {0} outside the utility's domain")]
    Domain(f64),
    #[error("invalid utility: {0}")]
    InvalidUtility(&'static str),
    #[error("discount factor {0} outside (0, 1)")]
    Discount(f64),
    #[error("date {date} out of range for horizon {horizon}")]
    DateOutOfRange { date: usize, horizon: usize },
    #[error("payoff at {date:?} is not constant on cell {cell:?}")]
    Measurability { date: Date, cell: StateSet },
}

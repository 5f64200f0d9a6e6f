//! Axiom instances, their checks against a preference model, and randomized
//! search for counterexamples.
//!
//! Tolerance policy: a gap `|Δ| ≤ eps` is indifference when it appears in a
//! hypothesis and weak preference when it appears in a conclusion. A
//! violation needs a conclusion that fails by more than `10·eps`, so rounding
//! noise never produces one.

mod check;
mod sample;
mod search;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::Serialize;

use crate::streams::{Act, DeterministicStream, Filtration};

pub use check::{check_instance, check_monotonicity_pair, side_conditions};
pub use sample::{sample_instance, SampleError, SamplerConfig};
pub use search::{
    calibrate_hedging, example_one_instance, falsify, nesting_check, sensitivity_witness,
    FalsifyOutcome, NestingError, NestingReport, Violation,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum AxiomId {
    /// Monotonicity: state-wise dominance of paths implies preference.
    M,
    /// Time separability on deterministic streams.
    TS,
    /// Strong stationarity: insert any adapted payoff after a common prefix.
    SS,
    /// Comonotonic stationarity: the inserted payoff is comonotonic with both tails.
    CS,
    /// Pessimistic stationarity: comonotonic with the right tail suffices for one direction.
    PS,
    /// Intertemporal hedging.
    IH,
    /// Stationarity for constant insertions at date 0.
    KochS,
    /// Stationarity on deterministic streams.
    KStat,
    /// Sensitivity of period 0.
    P2,
    /// Period-wise monotonicity of deterministic streams.
    P5,
}

impl AxiomId {
    pub const ALL: [AxiomId; 10] = [
        AxiomId::M,
        AxiomId::TS,
        AxiomId::SS,
        AxiomId::CS,
        AxiomId::PS,
        AxiomId::IH,
        AxiomId::KochS,
        AxiomId::KStat,
        AxiomId::P2,
        AxiomId::P5,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AxiomId::M => "M",
            AxiomId::TS => "TS",
            AxiomId::SS => "SS",
            AxiomId::CS => "CS",
            AxiomId::PS => "PS",
            AxiomId::IH => "IH",
            AxiomId::KochS => "KochS",
            AxiomId::KStat => "KStat",
            AxiomId::P2 => "P2",
            AxiomId::P5 => "P5",
        }
    }

    /// Axioms whose instances insert a payoff into two acts.
    pub fn is_stationarity(self) -> bool {
        matches!(
            self,
            AxiomId::SS | AxiomId::CS | AxiomId::PS | AxiomId::KochS | AxiomId::KStat
        )
    }
}

impl fmt::Display for AxiomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("unknown axiom {0:?}")]
pub struct UnknownAxiom(pub String);

impl FromStr for AxiomId {
    type Err = UnknownAxiom;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AxiomId::ALL
            .into_iter()
            .find(|a| a.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| UnknownAxiom(s.into()))
    }
}

/// The acts and payoffs an axiom quantifies over.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum Payload {
    /// Compare `(prefix, left)` with `(prefix, right)`, then again with
    /// `inserted` placed at date `t` in both. `left` and `right` hold the
    /// continuations from date `t` on, so their row 0 is paid at date `t`.
    Shift {
        t: usize,
        prefix: Vec<Vec<f64>>,
        inserted: Vec<f64>,
        left: Act,
        right: Act,
    },
    /// `A = (d, h, h, c)`, `B = (d, g, g, c)`, `C = (d, g, h, c)` with `h`, `g`
    /// at dates `t` and `t + 1` and `c` the deterministic continuation.
    Hedging {
        t: usize,
        prefix: Vec<f64>,
        g: Vec<f64>,
        h: Vec<f64>,
        continuation: DeterministicStream,
    },
    /// `(x, y, d)` vs `(x2, y2, d)` and `(x, y, d2)` vs `(x2, y2, d2)`.
    Separability {
        x: f64,
        y: f64,
        x2: f64,
        y2: f64,
        d: DeterministicStream,
        d2: DeterministicStream,
    },
    Dominance {
        left: Act,
        right: Act,
    },
    /// Search `grid` for `x, y` with `(x, d) ≻ (y, d)`.
    Sensitivity {
        grid: Vec<f64>,
        d: DeterministicStream,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AxiomInstance {
    pub axiom: AxiomId,
    /// Information structure for the acts before any insertion.
    pub filtration: Filtration,
    pub payload: Payload,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Holds,
    Violated,
    Inapplicable,
}

/// One evaluated comparison `left` vs `right`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Comparison {
    pub label: &'static str,
    pub left: f64,
    pub right: f64,
}

impl Comparison {
    pub fn diff(&self) -> f64 {
        self.left - self.right
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub axiom: AxiomId,
    pub status: Status,
    pub comparisons: Vec<Comparison>,
    pub tolerance: f64,
    /// Why the instance was inapplicable, or which clause failed.
    pub reason: Option<String>,
    pub instance: AxiomInstance,
}

impl Verdict {
    pub fn is_violation(&self) -> bool {
        self.status == Status::Violated
    }
}

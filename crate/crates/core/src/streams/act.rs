use alloc::vec;
use alloc::vec::Vec;

use serde::Serialize;

use super::{Filtration, StateSet, StreamError, UtilityFunction};

/// A discount factor `β ∈ (0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct DiscountFactor(f64);

impl DiscountFactor {
    pub fn new(beta: f64) -> Result<Self, StreamError> {
        if beta > 0.0 && beta < 1.0 {
            Ok(DiscountFactor(beta))
        } else {
            Err(StreamError::Discount(beta))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `β^t` by repeated multiplication.
    pub fn pow(self, t: usize) -> f64 {
        (0..t).fold(1.0, |acc, _| acc * self.0)
    }

    /// Weight of a constant continuation starting at date `t`: `β^t / (1-β)`.
    pub fn tail_weight(self, t: usize) -> f64 {
        self.pow(t) / (1.0 - self.0)
    }
}

/// Date of a payoff: an explicit period or the constant continuation after the horizon.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Date {
    Period(usize),
    Tail,
}

/// A stochastic payoff stream with an explicit horizon and a constant continuation.
///
/// `payoffs[t][ω]` is the outcome at date `t ≤ T` in state `ω`; from `T + 1` on the
/// outcome is `tail[ω]` forever.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Act {
    payoffs: Vec<Vec<f64>>,
    tail: Vec<f64>,
}

impl Act {
    pub fn new(payoffs: Vec<Vec<f64>>, tail: Vec<f64>) -> Result<Self, StreamError> {
        let n = tail.len();
        if payoffs.is_empty() {
            return Err(StreamError::EmptyAct);
        }
        if n == 0 || n > super::MAX_STATES {
            return Err(StreamError::StateCount(n));
        }
        if let Some(t) = payoffs.iter().position(|row| row.len() != n) {
            return Err(StreamError::DimensionMismatch {
                expected: n,
                found: payoffs[t].len(),
            });
        }
        if payoffs
            .iter()
            .flatten()
            .chain(&tail)
            .any(|x| !x.is_finite())
        {
            return Err(StreamError::NonFinite);
        }
        Ok(Act { payoffs, tail })
    }

    /// `x` in every state and period.
    pub fn constant(states: usize, x: f64) -> Self {
        Act {
            payoffs: vec![vec![x; states]],
            tail: vec![x; states],
        }
    }

    pub fn horizon(&self) -> usize {
        self.payoffs.len() - 1
    }

    pub fn states(&self) -> usize {
        self.tail.len()
    }

    pub fn payoffs(&self) -> &[Vec<f64>] {
        &self.payoffs
    }

    pub fn tail(&self) -> &[f64] {
        &self.tail
    }

    /// Payoff vector at date `t`, reading the tail past the horizon.
    pub fn at(&self, t: usize) -> &[f64] {
        self.payoffs.get(t).unwrap_or(&self.tail)
    }

    pub fn is_deterministic(&self) -> bool {
        self.payoffs
            .iter()
            .chain(core::iter::once(&self.tail))
            .all(|row| row.iter().all(|&x| x == row[0]))
    }

    /// The deterministic sequence `h(ω)` received in state `ω`.
    pub fn path(&self, state: usize) -> DeterministicStream {
        DeterministicStream {
            periods: self.payoffs.iter().map(|row| row[state]).collect(),
            tail: self.tail[state],
        }
    }

    /// Rows `t..=T` with the tail; empty rows when `t > T`.
    pub fn continuation_from(&self, t: usize) -> (&[Vec<f64>], &[f64]) {
        (&self.payoffs[t.min(self.payoffs.len())..], &self.tail)
    }

    /// Assemble an act from leading rows, following rows and a tail.
    pub fn spliced(
        prefix: &[Vec<f64>],
        rest: &[Vec<f64>],
        tail: &[f64],
    ) -> Result<Self, StreamError> {
        let mut payoffs: Vec<Vec<f64>> = prefix.iter().chain(rest).cloned().collect();
        if payoffs.is_empty() {
            payoffs.push(tail.to_vec());
        }
        Act::new(payoffs, tail.to_vec())
    }

    /// The same stream written out to a longer horizon; the value is unchanged.
    pub fn extended_to(&self, horizon: usize) -> Act {
        let mut payoffs = self.payoffs.clone();
        while payoffs.len() <= horizon {
            payoffs.push(self.tail.clone());
        }
        Act {
            payoffs,
            tail: self.tail.clone(),
        }
    }

    /// Apply `op` to every outcome.
    pub fn map(&self, mut op: impl FnMut(f64) -> f64) -> Act {
        Act {
            payoffs: self
                .payoffs
                .iter()
                .map(|row| row.iter().map(|&x| op(x)).collect())
                .collect(),
            tail: self.tail.iter().map(|&x| op(x)).collect(),
        }
    }
}

/// A deterministic stream `(d_0, …, d_T, c, c, …)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeterministicStream {
    pub periods: Vec<f64>,
    pub tail: f64,
}

impl DeterministicStream {
    pub fn new(periods: Vec<f64>, tail: f64) -> Self {
        DeterministicStream { periods, tail }
    }

    pub fn constant(x: f64) -> Self {
        DeterministicStream {
            periods: Vec::new(),
            tail: x,
        }
    }

    /// `(x, self)`.
    #[must_use]
    pub fn prepend(&self, x: f64) -> Self {
        let mut periods = vec![x];
        if self.periods.is_empty() {
            periods.push(self.tail);
        } else {
            periods.extend_from_slice(&self.periods);
        }
        DeterministicStream {
            periods,
            tail: self.tail,
        }
    }

    pub fn at(&self, t: usize) -> f64 {
        self.periods.get(t).copied().unwrap_or(self.tail)
    }

    /// The stream as an act on `states` states.
    pub fn to_act(&self, states: usize) -> Act {
        let mut payoffs: Vec<Vec<f64>> = self.periods.iter().map(|&x| vec![x; states]).collect();
        if payoffs.is_empty() {
            payoffs.push(vec![self.tail; states]);
        }
        Act {
            payoffs,
            tail: vec![self.tail; states],
        }
    }
}

/// One cell on which a payoff is not constant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MeasurabilityIssue {
    pub date: Date,
    pub cell: StateSet,
}

/// Every `(date, cell)` where an act fails to be adapted. Empty means adapted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub issues: Vec<MeasurabilityIssue>,
}

impl ValidationReport {
    pub fn is_adapted(&self) -> bool {
        self.issues.is_empty()
    }
}

/// Check that every payoff is measurable with respect to its date's partition.
pub fn validate_act(act: &Act, filt: &Filtration) -> Result<ValidationReport, StreamError> {
    if act.states() != filt.states() {
        return Err(StreamError::DimensionMismatch {
            expected: filt.states(),
            found: act.states(),
        });
    }
    if act.horizon() != filt.horizon() {
        return Err(StreamError::HorizonMismatch {
            act: act.horizon(),
            filtration: filt.horizon(),
        });
    }
    let mut issues = Vec::new();
    for (t, row) in act.payoffs.iter().enumerate() {
        issues.extend(
            filt.at(t)
                .nonconstant_cells(row)
                .map(|cell| MeasurabilityIssue {
                    date: Date::Period(t),
                    cell,
                }),
        );
    }
    issues.extend(
        filt.at(act.horizon())
            .nonconstant_cells(&act.tail)
            .map(|cell| MeasurabilityIssue {
                date: Date::Tail,
                cell,
            }),
    );
    Ok(ValidationReport { issues })
}

/// Total discounted utility per state: `Σ_{t≤T} β^t u(h_t(ω)) + β^{T+1}/(1-β)·u(tail(ω))`.
pub fn util_act(
    act: &Act,
    u: &UtilityFunction,
    beta: DiscountFactor,
) -> Result<Vec<f64>, StreamError> {
    let n = act.states();
    let mut total = vec![0.0; n];
    let mut weight = 1.0;
    for row in &act.payoffs {
        for (acc, &x) in total.iter_mut().zip(row) {
            *acc += weight * u.eval(x)?;
        }
        weight *= beta.value();
    }
    let tail_weight = weight / (1.0 - beta.value());
    for (acc, &x) in total.iter_mut().zip(&act.tail) {
        *acc += tail_weight * u.eval(x)?;
    }
    Ok(total)
}

/// Insert the payoff `g` at date `t`, pushing dates `t, t+1, …` one period later.
///
/// Returns the new act (horizon `T + 1`) and the filtration fitted to it; the
/// finest partition is repeated when the filtration has to grow.
pub fn insert_at(
    act: &Act,
    t: usize,
    g: &[f64],
    filt: &Filtration,
) -> Result<(Act, Filtration), StreamError> {
    if g.len() != act.states() {
        return Err(StreamError::DimensionMismatch {
            expected: act.states(),
            found: g.len(),
        });
    }
    if t > act.horizon() + 1 {
        return Err(StreamError::DateOutOfRange {
            date: t,
            horizon: act.horizon(),
        });
    }
    let extended = filt.fitted(act.horizon() + 1);
    if let Some(cell) = extended.at(t).first_nonconstant_cell(g) {
        return Err(StreamError::Measurability {
            date: Date::Period(t),
            cell,
        });
    }
    let mut payoffs = act.payoffs.clone();
    payoffs.insert(t, g.to_vec());
    Act::new(payoffs, act.tail.clone()).map(|a| (a, extended))
}

/// Remove date `t`, pulling later dates one period earlier.
///
/// Every moved payoff must be measurable for the coarser partition at its new
/// date; the first offending `(new date, cell)` is reported otherwise.
pub fn drop_at(act: &Act, t: usize, filt: &Filtration) -> Result<(Act, Filtration), StreamError> {
    if t > act.horizon() {
        return Err(StreamError::DateOutOfRange {
            date: t,
            horizon: act.horizon(),
        });
    }
    let mut payoffs = act.payoffs.clone();
    payoffs.remove(t);
    if payoffs.is_empty() {
        // Horizon 0: the tail moves into period 0.
        payoffs.push(act.tail.clone());
    }
    let new_horizon = payoffs.len() - 1;
    let fitted = filt.fitted(new_horizon);
    for (i, row) in payoffs.iter().enumerate().skip(t) {
        if let Some(cell) = fitted.at(i).first_nonconstant_cell(row) {
            return Err(StreamError::Measurability {
                date: Date::Period(i),
                cell,
            });
        }
    }
    if let Some(cell) = fitted.at(new_horizon).first_nonconstant_cell(&act.tail) {
        return Err(StreamError::Measurability {
            date: Date::Tail,
            cell,
        });
    }
    Act::new(payoffs, act.tail.clone()).map(|a| (a, fitted))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::streams::Partition;

    fn two_state_example() -> (Act, Filtration) {
        // t=1 pays (0, 7), t=2 pays (10, 0)
        let act = Act::new(
            vec![vec![0.0, 0.0], vec![0.0, 7.0], vec![10.0, 0.0]],
            vec![0.0, 0.0],
        )
        .unwrap();
        (act, Filtration::standard(2, 2))
    }

    #[test]
    fn constant_act_is_adapted_everywhere() {
        let filt = Filtration::standard(3, 0);
        let r = validate_act(&Act::constant(3, 4.0), &filt).unwrap();
        assert!(r.is_adapted());
        let trivial = Filtration::trivial(3, 2);
        let r = validate_act(&Act::constant(3, 4.0).extended_to(2), &trivial).unwrap();
        assert!(r.is_adapted());
    }

    #[test]
    fn state_dependent_period_zero_is_flagged() {
        let act = Act::new(vec![vec![1.0, 2.0]], vec![0.0, 0.0]).unwrap();
        let r = validate_act(&act, &Filtration::standard(2, 0)).unwrap();
        assert_eq!(
            r.issues,
            vec![MeasurabilityIssue {
                date: Date::Period(0),
                cell: StateSet::full(2)
            }]
        );
    }

    #[test]
    fn split_on_event_is_adapted() {
        let (act, filt) = two_state_example();
        assert!(validate_act(&act, &filt).unwrap().is_adapted());
    }

    #[test]
    fn validate_rejects_horizon_mismatch() {
        let (act, _) = two_state_example();
        assert!(matches!(
            validate_act(&act, &Filtration::standard(2, 1)),
            Err(StreamError::HorizonMismatch { .. })
        ));
    }

    #[test]
    fn tail_measured_at_last_partition() {
        let filt = Filtration::new(vec![Partition::trivial(2), Partition::trivial(2)]).unwrap();
        let act = Act::new(vec![vec![0.0, 0.0], vec![1.0, 1.0]], vec![0.0, 3.0]).unwrap();
        let r = validate_act(&act, &filt).unwrap();
        assert_eq!(r.issues.len(), 1);
        assert_eq!(r.issues[0].date, Date::Tail);
    }

    #[test]
    fn util_act_constant_is_geometric() {
        let beta = DiscountFactor::new(0.8).unwrap();
        let v = util_act(&Act::constant(2, 3.0), &UtilityFunction::identity(), beta).unwrap();
        for x in v {
            assert!((x - 15.0).abs() < 1e-12);
        }
    }

    #[test]
    fn util_act_two_state_hand_sum() {
        let (act, _) = two_state_example();
        let beta = DiscountFactor::new(0.8).unwrap();
        let v = util_act(&act, &UtilityFunction::identity(), beta).unwrap();
        assert!((v[0] - 6.4).abs() < 1e-12);
        assert!((v[1] - 5.6).abs() < 1e-12);
    }

    #[test]
    fn util_act_zero() {
        let beta = DiscountFactor::new(0.3).unwrap();
        let act = Act::constant(4, 0.0).extended_to(3);
        assert_eq!(
            util_act(&act, &UtilityFunction::identity(), beta).unwrap(),
            vec![0.0; 4]
        );
    }

    #[test]
    fn util_act_domain_error() {
        let beta = DiscountFactor::new(0.5).unwrap();
        let act = Act::new(vec![vec![1.0, -1.0]], vec![1.0, 1.0]).unwrap();
        assert_eq!(
            util_act(&act, &UtilityFunction::log(), beta),
            Err(StreamError::Domain(-1.0))
        );
    }

    #[test]
    fn insert_constant_at_zero() {
        let (act, filt) = two_state_example();
        let (out, f2) = insert_at(&act, 0, &[5.0, 5.0], &filt).unwrap();
        assert_eq!(out.horizon(), 3);
        assert_eq!(out.payoffs()[0], vec![5.0, 5.0]);
        assert_eq!(&out.payoffs()[1..], act.payoffs());
        assert!(validate_act(&out, &f2).unwrap().is_adapted());
    }

    #[test]
    fn insert_builds_example_one_hat() {
        // f pays (10, 0) at t = 1; inserting (0, 7) at t = 1 gives f̂.
        let f = Act::new(vec![vec![0.0, 0.0], vec![10.0, 0.0]], vec![0.0, 0.0]).unwrap();
        let filt = Filtration::standard(2, 1);
        let (fhat, _) = insert_at(&f, 1, &[0.0, 7.0], &filt).unwrap();
        let (expected, _) = two_state_example();
        assert_eq!(fhat, expected);
    }

    #[test]
    fn insert_random_at_zero_is_rejected() {
        let (act, filt) = two_state_example();
        assert!(matches!(
            insert_at(&act, 0, &[0.0, 1.0], &filt),
            Err(StreamError::Measurability {
                date: Date::Period(0),
                ..
            })
        ));
    }

    #[test]
    fn drop_shifts_back() {
        let filt = Filtration::standard(2, 2);
        let act = Act::new(
            vec![vec![4.0, 4.0], vec![1.0, 1.0], vec![2.0, 3.0]],
            vec![2.0, 3.0],
        )
        .unwrap();
        let (out, f2) = drop_at(&act, 0, &filt).unwrap();
        assert_eq!(out.payoffs(), &[vec![1.0, 1.0], vec![2.0, 3.0]]);
        assert_eq!(f2.horizon(), 1);
        assert!(validate_act(&out, &f2).unwrap().is_adapted());
    }

    #[test]
    fn drop_refuses_to_pull_random_payoff_into_period_zero() {
        let filt = Filtration::standard(2, 1);
        let act = Act::new(vec![vec![4.0, 4.0], vec![1.0, 2.0]], vec![0.0, 0.0]).unwrap();
        assert_eq!(
            drop_at(&act, 0, &filt),
            Err(StreamError::Measurability {
                date: Date::Period(0),
                cell: StateSet::full(2)
            })
        );
    }

    #[test]
    fn drop_at_horizon_zero_moves_tail() {
        let filt = Filtration::standard(3, 0);
        let act = Act::new(vec![vec![1.0; 3]], vec![2.0; 3]).unwrap();
        let (out, _) = drop_at(&act, 0, &filt).unwrap();
        assert_eq!(out.payoffs(), &[vec![2.0; 3]]);
    }

    #[test]
    fn insert_then_drop_round_trip() {
        let (act, filt) = two_state_example();
        for t in 1..=3 {
            let (ins, f2) = insert_at(&act, t, &[1.0, 9.0], &filt).unwrap();
            let (back, f3) = drop_at(&ins, t, &f2).unwrap();
            assert_eq!(back, act);
            assert_eq!(f3, filt);
        }
    }

    #[test]
    fn deterministic_stream_prepend() {
        let d = DeterministicStream::new(vec![1.0, 2.0], 3.0);
        let p = d.prepend(9.0);
        assert_eq!(p.periods, vec![9.0, 1.0, 2.0]);
        assert_eq!(
            DeterministicStream::constant(2.0).prepend(1.0).periods,
            vec![1.0, 2.0]
        );
        assert!(p.to_act(3).is_deterministic());
    }
}

use alloc::vec;
use alloc::vec::Vec;

use serde::Serialize;

use super::{
    choquet, core_contains, descending_order, is_convex, marginal_vector, Capacity, CapacityError,
    ProbabilityVector,
};
use crate::lp::{DenseLp, LpOutcome};
use crate::streams::StateSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CoreStatus {
    Ok,
    EmptyCore,
}

/// Agreement between the LP optimum and the Choquet/marginal-vector route.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MarginalCheck {
    pub choquet: f64,
    pub marginal: ProbabilityVector,
    /// `|LP value - Choquet integral|`.
    pub value_delta: f64,
    /// Largest coordinate gap between LP minimizer and marginal vector.
    pub minimizer_delta: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoreQueryResult {
    pub status: CoreStatus,
    /// `min_{P ∈ core(v)} E_P[f]`; NaN when the core is empty.
    pub value: f64,
    pub minimizer: Option<ProbabilityVector>,
    /// Present when `v` is convex.
    pub check: Option<MarginalCheck>,
}

/// Minimize `E_P[f]` over the core of `v`.
///
/// Solved through the dual
/// `max z + Σ_A v(A)·y_A  s.t.  z + Σ_{A∋ω} y_A ≤ f(ω), y ≥ 0`, whose row
/// prices are the minimizing probability. The dual is always feasible, so an
/// unbounded dual means the core is empty. When `v` is convex the result is
/// cross-checked against the Choquet integral and the marginal vector along
/// the decreasing order of `f`.
pub fn core_min_expectation(
    f: &[f64],
    v: &Capacity,
    eps: f64,
) -> Result<CoreQueryResult, CapacityError> {
    let n = v.states();
    if f.len() != n {
        return Err(CapacityError::LengthMismatch {
            expected: n,
            found: f.len(),
        });
    }
    let shift = f.iter().copied().fold(f64::INFINITY, f64::min);
    let full = StateSet::full(n);
    let events: Vec<StateSet> = StateSet::all(n)
        .filter(|a| !a.is_empty() && *a != full)
        .collect();

    // Columns: z⁺, z⁻, then one y_A per proper nonempty event.
    let mut c = vec![1.0, -1.0];
    c.extend(events.iter().map(|&a| v.value(a)));
    let a = (0..n)
        .map(|s| {
            let mut row = vec![1.0, -1.0];
            row.extend(events.iter().map(|e| if e.contains(s) { 1.0 } else { 0.0 }));
            row
        })
        .collect();
    let b = f.iter().map(|x| x - shift).collect();
    let lp = DenseLp { a, b, c };

    let sol = match lp.solve().expect("LP is well-formed by construction") {
        LpOutcome::Unbounded => {
            return Ok(CoreQueryResult {
                status: CoreStatus::EmptyCore,
                value: f64::NAN,
                minimizer: None,
                check: None,
            })
        }
        LpOutcome::Optimal(sol) => sol,
    };
    let minimizer = ProbabilityVector::from_raw(sol.duals);
    debug_assert!(core_contains(&minimizer, v, 1e-7).unwrap_or(false));
    let value = sol.value + shift;

    let check = if is_convex(v, eps) {
        let marginal = marginal_vector(v, &descending_order(f), eps)?;
        let choquet = choquet(f, v)?;
        Some(MarginalCheck {
            value_delta: (value - choquet).abs(),
            minimizer_delta: minimizer.max_abs_diff(&marginal),
            choquet,
            marginal,
        })
    } else {
        None
    };
    Ok(CoreQueryResult {
        status: CoreStatus::Ok,
        value,
        minimizer: Some(minimizer),
        check,
    })
}

//! Small worked scenarios on the two-state space `{A, Aᶜ}`.
//!
//! State 0 is `A` (the event "democrats win" in the solar/carbon story),
//! state 1 is its complement.

use alloc::vec;

use crate::capacity::Capacity;
use crate::streams::{insert_at, Act, Filtration};

/// Acts of the hedging example, before and after inserting `h` at date `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct HedgingScenario {
    pub t: usize,
    /// Payoff inserted at date `t`: 0 on `A`, 7 on `Aᶜ`.
    pub h: [f64; 2],
    /// Filtration for `f` and `g`.
    pub filtration: Filtration,
    /// Pays 10 on `A` at date `t`, nothing otherwise.
    pub f: Act,
    /// Pays 10 on `Aᶜ` at date `t`, nothing otherwise.
    pub g: Act,
    pub f_hat: Act,
    pub g_hat: Act,
    /// Filtration for `f_hat` and `g_hat`.
    pub filtration_hat: Filtration,
}

/// `f`, `g`, `f̂ = (0, h, f_1, …)` and `ĝ = (0, h, g_1, …)` with `t = 1`.
pub fn example_one() -> HedgingScenario {
    let t = 1;
    let h = [0.0, 7.0];
    let filtration = Filtration::standard(2, 1);
    let f = Act::new(vec![vec![0.0, 0.0], vec![10.0, 0.0]], vec![0.0, 0.0]).expect("valid act");
    let g = Act::new(vec![vec![0.0, 0.0], vec![0.0, 10.0]], vec![0.0, 0.0]).expect("valid act");
    let (f_hat, filtration_hat) = insert_at(&f, t, &h, &filtration).expect("h is measurable at t");
    let (g_hat, _) = insert_at(&g, t, &h, &filtration).expect("h is measurable at t");
    HedgingScenario {
        t,
        h,
        filtration,
        f,
        g,
        f_hat,
        g_hat,
        filtration_hat,
    }
}

/// Solar (`s`) and carbon (`c`) investments, originally and after the tax promise.
#[derive(Clone, Debug, PartialEq)]
pub struct SolarCarbon {
    pub solar: Act,
    pub carbon: Act,
    pub solar_shifted: Act,
    pub carbon_shifted: Act,
}

pub fn solar_carbon() -> SolarCarbon {
    let ex = example_one();
    SolarCarbon {
        solar: ex.f,
        carbon: ex.g,
        solar_shifted: ex.f_hat,
        carbon_shifted: ex.g_hat,
    }
}

/// Two-state capacity with `v(A) = a`, `v(Aᶜ) = b`.
pub fn two_state_capacity(a: f64, b: f64) -> Capacity {
    Capacity::from_table(2, vec![0.0, a, b, 1.0]).expect("two-state table")
}

//! Named reproductions: each table is recomputed through the library.

use rand::Rng;
use serde::Serialize;
use stationarity_core::capacity::{core_min_expectation, is_convex, CoreStatus, ProbabilityVector};
use stationarity_core::evaluate::{
    deu_value, deu_value_swapped, prefer, PreferenceModel, Relation,
};
use stationarity_core::gen;
use stationarity_core::scenarios::{example_one, solar_carbon, two_state_capacity};
use stationarity_core::streams::{DiscountFactor, UtilityFunction};

use crate::output::{fmt_num, Cell, Table};

pub const NAMES: [&str; 4] = ["solar-carbon", "example1", "exchange", "core-identity"];

#[derive(Debug, thiserror::Error)]
#[error("unknown example {0:?}; expected one of solar-carbon, example1, exchange, core-identity")]
pub struct UnknownExample(pub String);

const BETA: f64 = 0.8;

fn beta() -> DiscountFactor {
    DiscountFactor::new(BETA).expect("0.8 is a discount factor")
}

fn symmetric_cdeu(x: f64, eps: f64) -> PreferenceModel {
    PreferenceModel::cdeu(
        two_state_capacity(x, x),
        UtilityFunction::identity(),
        beta(),
        eps,
    )
    .expect("symmetric two-state capacity is valid")
}

pub fn run(name: &str, seed: u64, eps: f64) -> Result<Table, UnknownExample> {
    match name {
        "solar-carbon" => Ok(solar_carbon_table(eps)),
        "example1" => Ok(example1_table(eps)),
        "exchange" => Ok(exchange_sweep(seed, 100).table()),
        "core-identity" => Ok(core_identity_sweep(seed, 100, eps).table()),
        other => Err(UnknownExample(other.into())),
    }
}

/// Solar vs carbon before and after the common payoff `h`, under DEU with
/// even odds and under CDEU with `v(D) = v(R) = 0.4`.
pub fn solar_carbon_table(eps: f64) -> Table {
    let sc = solar_carbon();
    let deu = PreferenceModel::deu(
        ProbabilityVector::uniform(2),
        UtilityFunction::identity(),
        beta(),
    );
    let cdeu = symmetric_cdeu(0.4, eps);
    let mut rows = Vec::new();
    for (model_name, model) in [("DEU P=(0.5,0.5)", &deu), ("CDEU v=0.4/0.4", &cdeu)] {
        for (scenario, s, c) in [
            ("original", &sc.solar, &sc.carbon),
            ("with h", &sc.solar_shifted, &sc.carbon_shifted),
        ] {
            let v = prefer(model, s, c, eps).expect("scenario acts evaluate");
            rows.push(vec![
                Cell::text(model_name),
                Cell::text(scenario),
                Cell::Num(v.left),
                Cell::Num(v.right),
                Cell::text(v.relation.name()),
            ]);
        }
    }
    Table {
        name: "solar-carbon".into(),
        title: "Solar (s) vs carbon (c), u = identity, beta = 0.8".into(),
        columns: ["model", "scenario", "V(s)", "V(c)", "verdict"]
            .map(String::from)
            .to_vec(),
        rows,
        notes: vec!["h pays 0 if D and 7 if R in 2021; both streams shift one year".into()],
    }
}

/// One row of the capacity sweep for the hedging example.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub v: f64,
    pub f_hat: f64,
    pub g_hat: f64,
    pub relation: Relation,
}

/// `V(f̂)` and `V(ĝ)` for `v(A) = v(Aᶜ) = x`, `x ∈ {0.1, …, 0.9}`.
pub fn example1_sweep(eps: f64) -> Vec<SweepRow> {
    let ex = example_one();
    (1..=9)
        .map(|k| {
            let x = k as f64 / 10.0;
            let v =
                prefer(&symmetric_cdeu(x, eps), &ex.f_hat, &ex.g_hat, eps).expect("acts evaluate");
            SweepRow {
                v: x,
                f_hat: v.left,
                g_hat: v.right,
                relation: v.relation,
            }
        })
        .collect()
}

pub fn example1_table(eps: f64) -> Table {
    let ex = example_one();
    let model = symmetric_cdeu(0.4, eps);
    let before = prefer(&model, &ex.f, &ex.g, eps).expect("acts evaluate");
    let after = prefer(&model, &ex.f_hat, &ex.g_hat, eps).expect("acts evaluate");
    let mut rows = vec![
        vec![
            Cell::text("0.4"),
            Cell::text("f vs g"),
            Cell::Num(before.left),
            Cell::Num(before.right),
            Cell::text(before.relation.name()),
        ],
        vec![
            Cell::text("0.4"),
            Cell::text("f^ vs g^"),
            Cell::Num(after.left),
            Cell::Num(after.right),
            Cell::text(after.relation.name()),
        ],
    ];
    for row in example1_sweep(eps) {
        rows.push(vec![
            Cell::text(fmt_num(row.v)),
            Cell::text("f^ vs g^"),
            Cell::Num(row.f_hat),
            Cell::Num(row.g_hat),
            Cell::text(row.relation.name()),
        ]);
    }
    Table {
        name: "example1".into(),
        title: "Hedging example, CDEU with v(A) = v(A^c) = v, u = identity, beta = 0.8".into(),
        columns: ["v", "comparison", "left", "right", "verdict"]
            .map(String::from)
            .to_vec(),
        rows,
        notes: vec!["f^ is strictly preferred exactly when v(A) + v(A^c) < 1".into()],
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExchangeSummary {
    pub seed: u64,
    pub acts: usize,
    pub max_abs_diff: f64,
}

impl ExchangeSummary {
    pub fn table(&self) -> Table {
        Table {
            name: "exchange".into(),
            title: "DEU computed per state then expected vs per period then summed".into(),
            columns: ["seed", "acts", "max |inner - swapped|", "below 1e-9"]
                .map(String::from)
                .to_vec(),
            rows: vec![vec![
                Cell::text(self.seed.to_string()),
                Cell::text(self.acts.to_string()),
                Cell::Num(self.max_abs_diff),
                Cell::text(if self.max_abs_diff < 1e-9 {
                    "yes"
                } else {
                    "no"
                }),
            ]],
            notes: Vec::new(),
        }
    }
}

fn random_utility<R: Rng>(rng: &mut R) -> UtilityFunction {
    match rng.gen_range(0..4) {
        0 => UtilityFunction::identity(),
        1 => UtilityFunction::crra(rng.gen_range(0.1..0.9)).expect("gamma in (0, 1)"),
        2 => UtilityFunction::cara(rng.gen_range(0.05..1.0)).expect("alpha positive"),
        _ => UtilityFunction::linear(rng.gen_range(0.5..3.0), rng.gen_range(-5.0..5.0))
            .expect("positive slope"),
    }
}

/// Both DEU evaluation orders on `count` random adapted acts.
pub fn exchange_sweep(seed: u64, count: usize) -> ExchangeSummary {
    let mut max_abs_diff: f64 = 0.0;
    for k in 0..count {
        let mut rng = gen::trial_rng(seed, k as u64);
        let n = rng.gen_range(1..=5);
        let horizon = rng.gen_range(0..=6);
        let filt = gen::filtration(&mut rng, n, horizon);
        let grid: Vec<f64> = (0..6).map(|_| rng.gen_range(0.0..20.0)).collect();
        let act = gen::adapted_act(&mut rng, &filt, &grid);
        let p = gen::probability(&mut rng, n);
        let b = DiscountFactor::new(rng.gen_range(0.3..0.97)).expect("in (0, 1)");
        let model = PreferenceModel::deu(p, random_utility(&mut rng), b);
        let inner = deu_value(&act, &model).expect("grid is inside every domain");
        let swapped = deu_value_swapped(&act, &model).expect("grid is inside every domain");
        max_abs_diff = max_abs_diff.max((inner - swapped).abs());
    }
    ExchangeSummary {
        seed,
        acts: count,
        max_abs_diff,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoreIdentitySummary {
    pub seed: u64,
    pub capacities: usize,
    /// Capacities that passed the convexity check.
    pub convex: usize,
    pub max_value_delta: f64,
    pub max_minimizer_delta: f64,
}

impl CoreIdentitySummary {
    pub fn table(&self) -> Table {
        let ok = self.convex == self.capacities
            && self.max_value_delta < 1e-9
            && self.max_minimizer_delta < 1e-9;
        Table {
            name: "core-identity".into(),
            title: "Choquet integral vs minimum expectation over the core (convex capacities)"
                .into(),
            columns: [
                "seed",
                "capacities",
                "convex",
                "max |choquet - core min|",
                "max minimizer gap",
                "below 1e-9",
            ]
            .map(String::from)
            .to_vec(),
            rows: vec![vec![
                Cell::text(self.seed.to_string()),
                Cell::text(self.capacities.to_string()),
                Cell::text(self.convex.to_string()),
                Cell::Num(self.max_value_delta),
                Cell::Num(self.max_minimizer_delta),
                Cell::text(if ok { "yes" } else { "no" }),
            ]],
            notes: vec!["minimizer compared with the marginal vector along decreasing f".into()],
        }
    }
}

/// Core LP against the Choquet integral on `count` random convex capacities
/// with 2 to 5 states and objectives without ties.
pub fn core_identity_sweep(seed: u64, count: usize, eps: f64) -> CoreIdentitySummary {
    let mut out = CoreIdentitySummary {
        seed,
        capacities: count,
        convex: 0,
        max_value_delta: 0.0,
        max_minimizer_delta: 0.0,
    };
    for k in 0..count {
        let mut rng = gen::trial_rng(seed, k as u64);
        let n = rng.gen_range(2..=5);
        let v = gen::convex_capacity(&mut rng, n);
        if is_convex(&v, eps) {
            out.convex += 1;
        }
        let f = gen::vector(&mut rng, n, -10.0, 10.0);
        let r = core_min_expectation(&f, &v, eps).expect("lengths match");
        match (r.status, r.check) {
            (CoreStatus::Ok, Some(check)) => {
                out.max_value_delta = out.max_value_delta.max(check.value_delta);
                out.max_minimizer_delta = out.max_minimizer_delta.max(check.minimizer_delta);
            }
            _ => {
                out.max_value_delta = f64::INFINITY;
                out.max_minimizer_delta = f64::INFINITY;
            }
        }
    }
    out
}

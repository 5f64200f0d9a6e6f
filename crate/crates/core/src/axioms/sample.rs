use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use super::check::comonotonic;
use super::{AxiomId, AxiomInstance, Payload};
use crate::gen::{self, TrialRng};
use crate::streams::{Act, DeterministicStream, Filtration, Partition};

/// Bounds for randomly sampled instances.
#[derive(Clone, Debug, PartialEq)]
pub struct SamplerConfig {
    /// Largest horizon of a sampled filtration.
    pub max_horizon: usize,
    /// Outcomes drawn for every payoff.
    pub grid: Vec<f64>,
    /// Draws allowed per payoff row when a comonotonicity constraint applies.
    pub rejection_budget: usize,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            max_horizon: 4,
            grid: vec![0.0, 1.0, 3.0, 7.0, 10.0],
            rejection_budget: 10_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SampleError {
    #[error("no {axiom} instance found after {attempts} draws")]
    Exhausted { axiom: AxiomId, attempts: usize },
    #[error("{axiom} needs a filtration horizon of at least {needed}")]
    HorizonTooShort { axiom: AxiomId, needed: usize },
    #[error("outcome grid is empty")]
    EmptyGrid,
}

/// Draw an instance of `axiom` whose acts are adapted to `filt`.
///
/// The same `(axiom, filt, seed, cfg)` always yields the same instance.
pub fn sample_instance(
    axiom: AxiomId,
    filt: &Filtration,
    seed: u64,
    cfg: &SamplerConfig,
) -> Result<AxiomInstance, SampleError> {
    sample_with(axiom, filt, &mut gen::trial_rng(seed, 0), cfg)
}

pub(crate) fn sample_with(
    axiom: AxiomId,
    filt: &Filtration,
    rng: &mut TrialRng,
    cfg: &SamplerConfig,
) -> Result<AxiomInstance, SampleError> {
    if cfg.grid.is_empty() {
        return Err(SampleError::EmptyGrid);
    }
    let payload = match axiom {
        AxiomId::SS | AxiomId::CS | AxiomId::PS | AxiomId::KochS | AxiomId::KStat => {
            shift(axiom, filt, rng, cfg)?
        }
        AxiomId::IH => hedging(filt, rng, cfg)?,
        AxiomId::TS => {
            let g = &cfg.grid;
            let mut draw = || g[rng.gen_range(0..g.len())];
            let (x, y, x2, y2) = (draw(), draw(), draw(), draw());
            let len = rng.gen_range(0..=filt.horizon());
            let d = gen::deterministic(rng, len, g);
            let len2 = rng.gen_range(0..=filt.horizon());
            let d2 = gen::deterministic(rng, len2, g);
            Payload::Separability {
                x,
                y,
                x2,
                y2,
                d,
                d2,
            }
        }
        AxiomId::M => {
            let right = gen::adapted_act(rng, filt, &cfg.grid);
            let left = if rng.gen_bool(0.5) {
                let bump = gen::adapted_act(rng, filt, &[0.0, 0.0, 1.0, 2.0]);
                add(&right, &bump)
            } else {
                gen::adapted_act(rng, filt, &cfg.grid)
            };
            Payload::Dominance { left, right }
        }
        AxiomId::P5 => {
            let n = filt.states();
            let h = filt.horizon();
            let right = gen::deterministic_act(rng, n, h, &cfg.grid);
            let left = if rng.gen_bool(0.5) {
                add(
                    &right,
                    &gen::deterministic_act(rng, n, h, &[0.0, 0.0, 1.0, 2.0]),
                )
            } else {
                gen::deterministic_act(rng, n, h, &cfg.grid)
            };
            Payload::Dominance { left, right }
        }
        AxiomId::P2 => {
            let len = rng.gen_range(0..=filt.horizon());
            Payload::Sensitivity {
                grid: cfg.grid.clone(),
                d: gen::deterministic(rng, len, &cfg.grid),
            }
        }
    };
    Ok(AxiomInstance {
        axiom,
        filtration: filt.clone(),
        payload,
    })
}

fn add(a: &Act, b: &Act) -> Act {
    let rows = a
        .payoffs()
        .iter()
        .zip(b.payoffs())
        .map(|(x, y)| x.iter().zip(y).map(|(p, q)| p + q).collect())
        .collect();
    let tail = a.tail().iter().zip(b.tail()).map(|(p, q)| p + q).collect();
    Act::new(rows, tail).expect("same shape")
}

/// A row measurable for `p`, comonotonic with `anchor` when one is given.
fn constrained_row(
    axiom: AxiomId,
    rng: &mut TrialRng,
    p: &Partition,
    cfg: &SamplerConfig,
    deterministic: bool,
    anchor: Option<&[f64]>,
) -> Result<Vec<f64>, SampleError> {
    for _ in 0..cfg.rejection_budget.max(1) {
        let row = if deterministic {
            gen::constant_row(rng, p.states(), &cfg.grid)
        } else {
            gen::measurable_row(rng, p, &cfg.grid)
        };
        match anchor {
            Some(h) if !comonotonic(h, &row, 0.0) => continue,
            _ => return Ok(row),
        }
    }
    Err(SampleError::Exhausted {
        axiom,
        attempts: cfg.rejection_budget,
    })
}

fn continuation(
    axiom: AxiomId,
    filt: &Filtration,
    t: usize,
    rng: &mut TrialRng,
    cfg: &SamplerConfig,
    deterministic: bool,
    anchor: Option<&[f64]>,
) -> Result<Act, SampleError> {
    let horizon = filt.horizon();
    let rows = (t..=horizon)
        .map(|date| constrained_row(axiom, rng, filt.at(date), cfg, deterministic, anchor))
        .collect::<Result<Vec<_>, _>>()?;
    let tail = constrained_row(axiom, rng, filt.at(horizon), cfg, deterministic, anchor)?;
    Ok(Act::new(rows, tail).expect("rows share the state count"))
}

fn shift(
    axiom: AxiomId,
    filt: &Filtration,
    rng: &mut TrialRng,
    cfg: &SamplerConfig,
) -> Result<Payload, SampleError> {
    let n = filt.states();
    let at_zero = matches!(axiom, AxiomId::KochS | AxiomId::KStat);
    let t = if at_zero {
        0
    } else {
        rng.gen_range(0..=filt.horizon())
    };
    let deterministic_prefix = matches!(axiom, AxiomId::CS | AxiomId::PS);
    let prefix = (0..t)
        .map(|date| {
            if deterministic_prefix {
                gen::constant_row(rng, n, &cfg.grid)
            } else {
                gen::measurable_row(rng, filt.at(date), &cfg.grid)
            }
        })
        .collect();
    let inserted = if at_zero {
        gen::constant_row(rng, n, &cfg.grid)
    } else {
        gen::measurable_row(rng, filt.at(t), &cfg.grid)
    };
    let deterministic = axiom == AxiomId::KStat;
    let left_anchor = (axiom == AxiomId::CS).then_some(inserted.as_slice());
    let right_anchor = matches!(axiom, AxiomId::CS | AxiomId::PS).then_some(inserted.as_slice());
    let left = continuation(axiom, filt, t, rng, cfg, deterministic, left_anchor)?;
    let right = continuation(axiom, filt, t, rng, cfg, deterministic, right_anchor)?;
    Ok(Payload::Shift {
        t,
        prefix,
        inserted,
        left,
        right,
    })
}

fn hedging(
    filt: &Filtration,
    rng: &mut TrialRng,
    cfg: &SamplerConfig,
) -> Result<Payload, SampleError> {
    let horizon = filt.horizon();
    if horizon < 1 {
        return Err(SampleError::HorizonTooShort {
            axiom: AxiomId::IH,
            needed: 1,
        });
    }
    let t = rng.gen_range(0..horizon);
    let g = &cfg.grid;
    let prefix = (0..t).map(|_| g[rng.gen_range(0..g.len())]).collect();
    let gt = gen::measurable_row(rng, filt.at(t), g);
    let ht = gen::measurable_row(rng, filt.at(t), g);
    let cont: DeterministicStream = gen::deterministic(rng, horizon - t - 1, g);
    Ok(Payload::Hedging {
        t,
        prefix,
        g: gt,
        h: ht,
        continuation: cont,
    })
}

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use serde::Serialize;

use super::check::{check_instance, side_conditions};
use super::sample::{sample_with, SamplerConfig};
use super::{AxiomId, AxiomInstance, Payload, Status, Verdict};
use crate::evaluate::PreferenceModel;
use crate::gen;
use crate::streams::{Act, DeterministicStream, Filtration};

/// The hedging example as an instance of a stationarity axiom.
///
/// `f` pays 10 on `A` at date 1, `g` pays 10 on `Aᶜ`, and `h = (0 on A, 7 on Aᶜ)`
/// is inserted at date 1 after the common outcome 0.
pub fn example_one_instance(axiom: AxiomId) -> AxiomInstance {
    AxiomInstance {
        axiom,
        filtration: Filtration::standard(2, 1),
        payload: Payload::Shift {
            t: 1,
            prefix: vec![vec![0.0, 0.0]],
            inserted: vec![0.0, 7.0],
            left: Act::new(vec![vec![10.0, 0.0]], vec![0.0, 0.0]).expect("valid act"),
            right: Act::new(vec![vec![0.0, 10.0]], vec![0.0, 0.0]).expect("valid act"),
        },
    }
}

fn swapped(inst: &AxiomInstance) -> AxiomInstance {
    let mut out = inst.clone();
    if let Payload::Shift { left, right, .. } = &mut out.payload {
        core::mem::swap(left, right);
    }
    out
}

/// Fixed instances tried before random sampling.
fn corpus(axiom: AxiomId, states: usize) -> Vec<AxiomInstance> {
    if states == 2 && matches!(axiom, AxiomId::SS | AxiomId::CS | AxiomId::PS) {
        let inst = example_one_instance(axiom);
        vec![swapped(&inst), inst]
    } else {
        Vec::new()
    }
}

/// Shift `h` (or `g`) by a constant so that `(d, h, h, c) ∼ (d, g, g, c)`.
///
/// Raises whichever of the two is worth less, using bisection on the shift.
/// Returns `None` when the model cannot evaluate the acts or no shift closes
/// the gap to within `eps / 4`.
pub fn calibrate_hedging(
    model: &PreferenceModel,
    inst: &AxiomInstance,
    eps: f64,
) -> Option<AxiomInstance> {
    let Payload::Hedging {
        t,
        prefix,
        g,
        h,
        continuation,
    } = &inst.payload
    else {
        return None;
    };
    let n = inst.filtration.states();
    let value_of = |x: &[f64], shift: f64| -> Option<f64> {
        let mut rows: Vec<Vec<f64>> = prefix.iter().map(|&d| vec![d; n]).collect();
        let row: Vec<f64> = x.iter().map(|v| v + shift).collect();
        rows.push(row.clone());
        rows.push(row);
        rows.extend(continuation.periods.iter().map(|&d| vec![d; n]));
        let act = Act::new(rows, vec![continuation.tail; n]).ok()?;
        model.value(&act).ok()
    };
    let vh = value_of(h, 0.0)?;
    let vg = value_of(g, 0.0)?;
    let raise_h = vh < vg;
    let (low, target) = if raise_h { (h, vg) } else { (g, vh) };
    let gap = |c: f64| value_of(low, c).map(|v| v - target);

    let mut lo = 0.0;
    let mut hi = 1.0;
    let mut found = false;
    for _ in 0..64 {
        if gap(hi)? >= 0.0 {
            found = true;
            break;
        }
        lo = hi;
        hi *= 2.0;
    }
    if !found {
        return None;
    }
    let mut best = lo;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let d = gap(mid)?;
        if d.abs() <= eps / 4.0 {
            best = mid;
            break;
        }
        if d < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        best = mid;
    }
    if gap(best)?.abs() > eps / 4.0 {
        return None;
    }
    let shifted: Vec<f64> = low.iter().map(|v| v + best).collect();
    let (g2, h2) = if raise_h {
        (g.clone(), shifted)
    } else {
        (shifted, h.clone())
    };
    Some(AxiomInstance {
        axiom: inst.axiom,
        filtration: inst.filtration.clone(),
        payload: Payload::Hedging {
            t: *t,
            prefix: prefix.clone(),
            g: g2,
            h: h2,
            continuation: continuation.clone(),
        },
    })
}

/// The sampler grid moved inside the utility's domain when its smallest
/// value falls outside (e.g. 0 under `ln`).
fn grid_for(model: &PreferenceModel, cfg: &SamplerConfig) -> Vec<f64> {
    let domain = model.utility().domain();
    let lowest = cfg.grid.iter().copied().fold(f64::INFINITY, f64::min);
    if domain.contains(lowest) || !domain.lo.is_finite() {
        cfg.grid.clone()
    } else {
        let shift = domain.lo - lowest + 1.0;
        cfg.grid.iter().map(|x| x + shift).collect()
    }
}

/// A violated verdict with the trial that produced it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub seed: u64,
    pub trial: usize,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FalsifyOutcome {
    pub axiom: AxiomId,
    pub seed: u64,
    pub trials_run: usize,
    /// Trials whose instance was checked and found applicable.
    pub applicable: usize,
    /// Trials for which no instance could be sampled.
    pub sampling_failures: usize,
    pub violation: Option<Violation>,
}

/// A random instance on a random filtration for one trial.
fn random_instance(
    model: &PreferenceModel,
    axiom: AxiomId,
    states: usize,
    (seed, trial): (u64, usize),
    cfg: &SamplerConfig,
    eps: f64,
) -> Option<AxiomInstance> {
    let mut rng = gen::trial_rng(seed, trial as u64);
    let horizon = rng.gen_range(1..=cfg.max_horizon.max(1));
    let filt = gen::filtration(&mut rng, states, horizon);
    let inst = sample_with(axiom, &filt, &mut rng, cfg).ok()?;
    if axiom == AxiomId::IH {
        // An uncalibrated pair is almost never indifferent; keep it so the
        // trial is reported as inapplicable rather than lost.
        return Some(calibrate_hedging(model, &inst, eps).unwrap_or(inst));
    }
    Some(inst)
}

/// Search for a violation of `axiom` under `model` over `trials` instances.
///
/// Trials run in order and the first violation is returned; trial `k` draws
/// from the stream keyed by `(seed, k)`, so results are reproducible. Acts
/// have as many states as the model (one for DU).
pub fn falsify(
    model: &PreferenceModel,
    axiom: AxiomId,
    trials: usize,
    seed: u64,
    eps: f64,
    cfg: &SamplerConfig,
) -> FalsifyOutcome {
    let states = model.states().unwrap_or(1);
    let cfg = SamplerConfig {
        grid: grid_for(model, cfg),
        ..cfg.clone()
    };
    let fixed = corpus(axiom, states);
    let mut outcome = FalsifyOutcome {
        axiom,
        seed,
        trials_run: 0,
        applicable: 0,
        sampling_failures: 0,
        violation: None,
    };
    for trial in 0..trials {
        outcome.trials_run += 1;
        let inst = match fixed.get(trial) {
            Some(inst) => Some(inst.clone()),
            None => random_instance(model, axiom, states, (seed, trial), &cfg, eps),
        };
        let Some(inst) = inst else {
            outcome.sampling_failures += 1;
            continue;
        };
        let verdict = check_instance(model, &inst, eps);
        if verdict.status != Status::Inapplicable {
            outcome.applicable += 1;
        }
        if verdict.status == Status::Violated {
            outcome.violation = Some(Violation {
                seed,
                trial,
                verdict,
            });
            break;
        }
    }
    outcome
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NestingReport {
    pub stronger: AxiomId,
    pub weaker: AxiomId,
    pub trials: usize,
    /// Sampled instances of the weaker axiom that were checked.
    pub instances: usize,
    /// Instances that failed the stronger axiom's side conditions.
    pub structural_failures: usize,
    /// `(instance, model)` pairs whose verdicts disagree.
    pub verdict_mismatches: usize,
    pub first_failure: Option<String>,
}

impl NestingReport {
    pub fn is_valid(&self) -> bool {
        self.structural_failures == 0 && self.verdict_mismatches == 0 && self.instances > 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum NestingError {
    #[error("{stronger} ⇒ {weaker} is not an adjacent step of SS ⇒ PS ⇒ CS ⇒ KochS ⇒ KStat")]
    NotAdjacent { stronger: AxiomId, weaker: AxiomId },
    #[error("models must be nonempty and share one state count")]
    Models,
}

const CHAIN: [AxiomId; 5] = [
    AxiomId::SS,
    AxiomId::PS,
    AxiomId::CS,
    AxiomId::KochS,
    AxiomId::KStat,
];

/// Check that sampled `weaker` instances are also `stronger` instances.
///
/// Every instance must pass the stronger axiom's side conditions. For each
/// model, a violated weaker verdict must be a violated stronger verdict, and
/// when both checks are biconditionals the verdicts must agree. (PS is only
/// an implication on instances that are not two-sided comonotonic, so for the
/// pair (SS, PS) the check is one-directional.)
pub fn nesting_check(
    stronger: AxiomId,
    weaker: AxiomId,
    models: &[PreferenceModel],
    trials: usize,
    seed: u64,
    eps: f64,
    cfg: &SamplerConfig,
) -> Result<NestingReport, NestingError> {
    let adjacent = CHAIN.windows(2).any(|w| w[0] == stronger && w[1] == weaker);
    if !adjacent {
        return Err(NestingError::NotAdjacent { stronger, weaker });
    }
    let states = models
        .first()
        .ok_or(NestingError::Models)?
        .states()
        .unwrap_or(1);
    if models.iter().any(|m| m.states().unwrap_or(1) != states) {
        return Err(NestingError::Models);
    }
    let mut report = NestingReport {
        stronger,
        weaker,
        trials,
        instances: 0,
        structural_failures: 0,
        verdict_mismatches: 0,
        first_failure: None,
    };
    for trial in 0..trials {
        let mut rng = gen::trial_rng(seed, trial as u64);
        let horizon = rng.gen_range(1..=cfg.max_horizon.max(1));
        let filt = gen::filtration(&mut rng, states, horizon);
        let Ok(inst) = sample_with(weaker, &filt, &mut rng, cfg) else {
            continue;
        };
        report.instances += 1;
        let embedded = AxiomInstance {
            axiom: stronger,
            ..inst.clone()
        };
        if let Err(reason) = side_conditions(&inst, eps).and(side_conditions(&embedded, eps)) {
            report.structural_failures += 1;
            report
                .first_failure
                .get_or_insert_with(|| format!("trial {trial}: {reason}"));
            continue;
        }
        for (k, model) in models.iter().enumerate() {
            let w = check_instance(model, &inst, eps).status;
            let s = check_instance(model, &embedded, eps).status;
            let one_directional = (stronger, weaker) == (AxiomId::SS, AxiomId::PS);
            let mismatch = (w == Status::Violated && s != Status::Violated)
                || (w == Status::Holds && s == Status::Inapplicable)
                || (!one_directional && w != Status::Inapplicable && s != w);
            if mismatch {
                report.verdict_mismatches += 1;
                report.first_failure.get_or_insert_with(|| {
                    format!("trial {trial}, model {k}: {weaker} {w:?} but {stronger} {s:?}")
                });
            }
        }
    }
    Ok(report)
}

/// Outcomes `x > y` on `grid` with `(x, d) ≻ (y, d)` for `d` constant at the
/// smallest grid value.
///
/// Larger gaps are tried first. `None` when the model is indifferent across
/// the whole grid, e.g. for a constant utility.
pub fn sensitivity_witness(
    model: &PreferenceModel,
    grid: &[f64],
    eps: f64,
) -> Option<(f64, f64, DeterministicStream)> {
    let mut sorted = grid.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.dedup();
    let d = DeterministicStream::constant(*sorted.first()?);
    let n = model.states().unwrap_or(1);
    for &x in sorted.iter().rev() {
        for &y in &sorted {
            if y >= x {
                break;
            }
            let vx = model.value(&d.prepend(x).to_act(n));
            let vy = model.value(&d.prepend(y).to_act(n));
            if let (Ok(vx), Ok(vy)) = (vx, vy) {
                if vx - vy > eps {
                    return Some((x, y, d));
                }
            }
        }
    }
    None
}

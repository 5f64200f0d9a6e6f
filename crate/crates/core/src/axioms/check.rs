use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::{AxiomId, AxiomInstance, Comparison, Payload, Status, Verdict};
use crate::comono::{are_comonotonic, comonotonic_with_tails};
use crate::evaluate::PreferenceModel;
use crate::streams::{insert_at, util_act, validate_act, Act, Filtration};

struct Acts {
    before_left: Act,
    before_right: Act,
    after_left: Act,
    after_right: Act,
}

fn adapted(act: &Act, filt: &Filtration, what: &str) -> Result<(), String> {
    match validate_act(act, filt) {
        Ok(report) if report.is_adapted() => Ok(()),
        Ok(report) => Err(format!(
            "{what} is not adapted: {:?}",
            report.issues.first().expect("nonempty report")
        )),
        Err(e) => Err(format!("{what}: {e}")),
    }
}

fn shift_acts(
    filt: &Filtration,
    t: usize,
    prefix: &[Vec<f64>],
    inserted: &[f64],
    left: &Act,
    right: &Act,
) -> Result<Acts, String> {
    if prefix.len() != t {
        return Err(format!(
            "prefix has {} rows, expected t = {t}",
            prefix.len()
        ));
    }
    let splice =
        |act: &Act| Act::spliced(prefix, act.payoffs(), act.tail()).map_err(|e| e.to_string());
    let before_left = splice(left)?;
    let before_right = splice(right)?;
    adapted(&before_left, filt, "left act")?;
    adapted(&before_right, filt, "right act")?;
    let (after_left, after_filt) =
        insert_at(&before_left, t, inserted, filt).map_err(|e| e.to_string())?;
    let (after_right, _) =
        insert_at(&before_right, t, inserted, filt).map_err(|e| e.to_string())?;
    adapted(&after_left, &after_filt, "shifted left act")?;
    adapted(&after_right, &after_filt, "shifted right act")?;
    Ok(Acts {
        before_left,
        before_right,
        after_left,
        after_right,
    })
}

fn is_constant(row: &[f64]) -> bool {
    row.iter().all(|&x| x == row[0])
}

fn hedging_acts(
    filt: &Filtration,
    t: usize,
    prefix: &[f64],
    g: &[f64],
    h: &[f64],
    continuation: &crate::streams::DeterministicStream,
) -> Result<[Act; 3], String> {
    let n = filt.states();
    if prefix.len() != t {
        return Err(format!(
            "prefix has {} entries, expected t = {t}",
            prefix.len()
        ));
    }
    let build = |first: &[f64], second: &[f64]| {
        let mut rows: Vec<Vec<f64>> = prefix.iter().map(|&x| vec![x; n]).collect();
        rows.push(first.to_vec());
        rows.push(second.to_vec());
        rows.extend(continuation.periods.iter().map(|&x| vec![x; n]));
        Act::new(rows, vec![continuation.tail; n]).map_err(|e| e.to_string())
    };
    let a = build(h, h)?;
    let b = build(g, g)?;
    let c = build(g, h)?;
    adapted(&a, filt, "act (d, h, h, c)")?;
    adapted(&b, filt, "act (d, g, g, c)")?;
    adapted(&c, filt, "act (d, g, h, c)")?;
    Ok([a, b, c])
}

/// Structural side conditions of `inst` for its own axiom.
///
/// Acts must be adapted; CS and PS need a deterministic prefix and the
/// comonotonicity precondition; KochS and KStat need a constant payoff
/// inserted at date 0, and KStat deterministic acts.
pub fn side_conditions(inst: &AxiomInstance, eps: f64) -> Result<(), String> {
    let filt = &inst.filtration;
    match (&inst.payload, inst.axiom) {
        (
            Payload::Shift {
                t,
                prefix,
                inserted,
                left,
                right,
            },
            axiom,
        ) if axiom.is_stationarity() => {
            let acts = shift_acts(filt, *t, prefix, inserted, left, right)?;
            if matches!(axiom, AxiomId::CS | AxiomId::PS)
                && !prefix.iter().all(|row| is_constant(row))
            {
                return Err("prefix must be deterministic".into());
            }
            match axiom {
                AxiomId::CS => {
                    let fail = comonotonic_with_tails(
                        inserted,
                        &acts.before_left,
                        &acts.before_right,
                        *t,
                        eps,
                    )
                    .map_err(|e| e.to_string())?;
                    if let Some(fail) = fail {
                        return Err(format!("inserted payoff not comonotonic: {fail:?}"));
                    }
                }
                AxiomId::PS => {
                    let fail = crate::comono::comonotonic_with_tail(
                        inserted,
                        &acts.before_right,
                        *t,
                        crate::comono::Side::Right,
                        eps,
                    )
                    .map_err(|e| e.to_string())?;
                    if let Some(fail) = fail {
                        return Err(format!(
                            "inserted payoff not comonotonic with the right tail: {fail:?}"
                        ));
                    }
                }
                AxiomId::KochS | AxiomId::KStat => {
                    if *t != 0 || !is_constant(inserted) {
                        return Err("insertion must be a constant at date 0".into());
                    }
                    if axiom == AxiomId::KStat
                        && !(acts.before_left.is_deterministic()
                            && acts.before_right.is_deterministic())
                    {
                        return Err("acts must be deterministic".into());
                    }
                }
                _ => {}
            }
            Ok(())
        }
        (
            Payload::Hedging {
                t,
                prefix,
                g,
                h,
                continuation,
            },
            AxiomId::IH,
        ) => hedging_acts(filt, *t, prefix, g, h, continuation).map(|_| ()),
        (Payload::Dominance { left, right }, AxiomId::M) => {
            adapted(left, filt, "left act")?;
            adapted(right, filt, "right act")
        }
        (Payload::Dominance { left, right }, AxiomId::P5) => {
            if !(left.is_deterministic() && right.is_deterministic()) {
                return Err("acts must be deterministic".into());
            }
            adapted(left, filt, "left act")?;
            adapted(right, filt, "right act")
        }
        (Payload::Separability { .. }, AxiomId::TS) => Ok(()),
        (Payload::Sensitivity { grid, .. }, AxiomId::P2) => {
            if grid.is_empty() {
                Err("grid is empty".into())
            } else {
                Ok(())
            }
        }
        _ => Err("payload shape does not fit the axiom".into()),
    }
}

struct Outcome {
    status: Status,
    comparisons: Vec<Comparison>,
    reason: Option<String>,
}

impl Outcome {
    fn inapplicable(reason: impl Into<String>, comparisons: Vec<Comparison>) -> Self {
        Outcome {
            status: Status::Inapplicable,
            comparisons,
            reason: Some(reason.into()),
        }
    }
}

fn value(model: &PreferenceModel, act: &Act) -> Result<f64, String> {
    model
        .value(act)
        .map_err(|e| format!("model cannot evaluate act: {e}"))
}

fn compare(
    model: &PreferenceModel,
    label: &'static str,
    left: &Act,
    right: &Act,
) -> Result<Comparison, String> {
    Ok(Comparison {
        label,
        left: value(model, left)?,
        right: value(model, right)?,
    })
}

/// First clause of `before ⇔ after` (for `≿` in both directions) that fails.
fn biconditional_failure(d1: f64, d2: f64, eps: f64) -> Option<&'static str> {
    let strict = 10.0 * eps;
    if d1 >= -eps && d2 < -strict {
        Some("left weakly preferred before the shift, strictly worse after")
    } else if d2 >= -eps && d1 < -strict {
        Some("left weakly preferred after the shift, strictly worse before")
    } else if d1 <= eps && d2 > strict {
        Some("right weakly preferred before the shift, strictly worse after")
    } else if d2 <= eps && d1 > strict {
        Some("right weakly preferred after the shift, strictly worse before")
    } else {
        None
    }
}

fn from_failure(failure: Option<&'static str>, comparisons: Vec<Comparison>) -> Outcome {
    Outcome {
        status: if failure.is_some() {
            Status::Violated
        } else {
            Status::Holds
        },
        comparisons,
        reason: failure.map(String::from),
    }
}

fn check_shift(model: &PreferenceModel, inst: &AxiomInstance, eps: f64) -> Outcome {
    let Payload::Shift {
        t,
        prefix,
        inserted,
        left,
        right,
    } = &inst.payload
    else {
        unreachable!("caller matched the payload")
    };
    if let Err(reason) = side_conditions(inst, eps) {
        return Outcome::inapplicable(reason, Vec::new());
    }
    let acts = match shift_acts(&inst.filtration, *t, prefix, inserted, left, right) {
        Ok(a) => a,
        Err(reason) => return Outcome::inapplicable(reason, Vec::new()),
    };
    let comparisons = match (
        compare(model, "before", &acts.before_left, &acts.before_right),
        compare(model, "after", &acts.after_left, &acts.after_right),
    ) {
        (Ok(a), Ok(b)) => vec![a, b],
        (Err(reason), _) | (_, Err(reason)) => return Outcome::inapplicable(reason, Vec::new()),
    };
    let d1 = comparisons[0].diff();
    let d2 = comparisons[1].diff();

    let one_sided = inst.axiom == AxiomId::PS
        && comonotonic_with_tails(inserted, &acts.before_left, &acts.before_right, *t, eps)
            .map(|f| f.is_some())
            .unwrap_or(true);
    if one_sided {
        // Only `before ≿ ⇒ after ≿` is required.
        if d1 < -eps {
            return Outcome::inapplicable(
                "left not weakly preferred before the shift",
                comparisons,
            );
        }
        let failure = (d2 < -10.0 * eps)
            .then_some("left weakly preferred before the shift, strictly worse after");
        return from_failure(failure, comparisons);
    }
    from_failure(biconditional_failure(d1, d2, eps), comparisons)
}

fn check_hedging(model: &PreferenceModel, inst: &AxiomInstance, eps: f64) -> Outcome {
    let Payload::Hedging {
        t,
        prefix,
        g,
        h,
        continuation,
    } = &inst.payload
    else {
        unreachable!("caller matched the payload")
    };
    let [a, b, c] = match hedging_acts(&inst.filtration, *t, prefix, g, h, continuation) {
        Ok(acts) => acts,
        Err(reason) => return Outcome::inapplicable(reason, Vec::new()),
    };
    let comparisons = match (
        compare(model, "hh vs gg", &a, &b),
        compare(model, "gh vs hh", &c, &a),
    ) {
        (Ok(x), Ok(y)) => vec![x, y],
        (Err(reason), _) | (_, Err(reason)) => return Outcome::inapplicable(reason, Vec::new()),
    };
    if comparisons[0].diff().abs() > eps {
        return Outcome::inapplicable(
            "(d, h, h, c) and (d, g, g, c) are not indifferent",
            comparisons,
        );
    }
    let failure = (comparisons[1].diff() < -10.0 * eps)
        .then_some("(d, g, h, c) strictly worse than (d, h, h, c)");
    from_failure(failure, comparisons)
}

fn check_separability(model: &PreferenceModel, inst: &AxiomInstance, eps: f64) -> Outcome {
    let Payload::Separability {
        x,
        y,
        x2,
        y2,
        d,
        d2,
    } = &inst.payload
    else {
        unreachable!("caller matched the payload")
    };
    let n = inst.filtration.states();
    let stream = |a: f64, b: f64, tail: &crate::streams::DeterministicStream| {
        tail.prepend(b).prepend(a).to_act(n)
    };
    let comparisons = match (
        compare(model, "with d", &stream(*x, *y, d), &stream(*x2, *y2, d)),
        compare(model, "with d2", &stream(*x, *y, d2), &stream(*x2, *y2, d2)),
    ) {
        (Ok(a), Ok(b)) => vec![a, b],
        (Err(reason), _) | (_, Err(reason)) => return Outcome::inapplicable(reason, Vec::new()),
    };
    let failure = biconditional_failure(comparisons[0].diff(), comparisons[1].diff(), eps);
    from_failure(failure, comparisons)
}

fn check_dominance(model: &PreferenceModel, inst: &AxiomInstance, eps: f64) -> Outcome {
    let Payload::Dominance { left, right } = &inst.payload else {
        unreachable!("caller matched the payload")
    };
    if let Err(reason) = side_conditions(inst, eps) {
        return Outcome::inapplicable(reason, Vec::new());
    }
    let overall = match compare(model, "value", left, right) {
        Ok(c) => c,
        Err(reason) => return Outcome::inapplicable(reason, Vec::new()),
    };
    let u = model.utility();
    let beta = model.discount();

    // Hypothesis terms: per-state path values for M, per-date utilities for P5.
    let mut terms = Vec::new();
    if inst.axiom == AxiomId::M {
        let (l, r) = match (util_act(left, u, beta), util_act(right, u, beta)) {
            (Ok(l), Ok(r)) => (l, r),
            (Err(e), _) | (_, Err(e)) => {
                return Outcome::inapplicable(format!("path value undefined: {e}"), vec![overall])
            }
        };
        terms.extend(l.into_iter().zip(r).map(|(a, b)| (a, b, 1.0)));
    } else {
        let horizon = left.horizon().max(right.horizon());
        for date in 0..=horizon + 1 {
            let weight = if date <= horizon {
                beta.pow(date)
            } else {
                beta.tail_weight(date)
            };
            match (u.eval(left.at(date)[0]), u.eval(right.at(date)[0])) {
                (Ok(a), Ok(b)) => terms.push((a, b, weight)),
                (Err(e), _) | (_, Err(e)) => {
                    return Outcome::inapplicable(format!("utility undefined: {e}"), vec![overall])
                }
            }
        }
    }
    let weakest = terms
        .iter()
        .min_by(|p, q| (p.0 - p.1).total_cmp(&(q.0 - q.1)))
        .expect("at least one term");
    let label = if inst.axiom == AxiomId::M {
        "weakest state path"
    } else {
        "weakest period utility"
    };
    let comparisons = vec![
        overall,
        Comparison {
            label,
            left: weakest.0,
            right: weakest.1,
        },
    ];
    if weakest.0 - weakest.1 < -eps {
        return Outcome::inapplicable("left does not dominate right", comparisons);
    }
    let diff = comparisons[0].diff();
    let strict =
        inst.axiom == AxiomId::P5 && terms.iter().any(|(a, b, w)| w * (a - b) > 10.0 * eps);
    let failure = if strict && diff <= eps {
        Some("left strictly better in some period yet not strictly preferred")
    } else if diff < -10.0 * eps {
        Some("dominating act strictly worse")
    } else {
        None
    };
    from_failure(failure, comparisons)
}

fn check_sensitivity(model: &PreferenceModel, inst: &AxiomInstance, eps: f64) -> Outcome {
    let Payload::Sensitivity { grid, d } = &inst.payload else {
        unreachable!("caller matched the payload")
    };
    let n = inst.filtration.states();
    let mut evaluated = false;
    for &x in grid {
        for &y in grid {
            if x <= y {
                continue;
            }
            if let Ok(c) = compare(
                model,
                "(x, d) vs (y, d)",
                &d.prepend(x).to_act(n),
                &d.prepend(y).to_act(n),
            ) {
                evaluated = true;
                if c.diff() > eps {
                    return from_failure(None, vec![c]);
                }
            }
        }
    }
    if evaluated {
        from_failure(
            Some("no strict preference between grid outcomes in period 0"),
            Vec::new(),
        )
    } else {
        Outcome::inapplicable("model cannot evaluate any grid pair", Vec::new())
    }
}

/// Evaluate `inst` under `model` and report whether the axiom holds on it.
pub fn check_instance(model: &PreferenceModel, inst: &AxiomInstance, eps: f64) -> Verdict {
    let outcome = match (&inst.payload, inst.axiom) {
        (Payload::Shift { .. }, a) if a.is_stationarity() => check_shift(model, inst, eps),
        (Payload::Hedging { .. }, AxiomId::IH) => check_hedging(model, inst, eps),
        (Payload::Separability { .. }, AxiomId::TS) => check_separability(model, inst, eps),
        (Payload::Dominance { .. }, AxiomId::M | AxiomId::P5) => check_dominance(model, inst, eps),
        (Payload::Sensitivity { .. }, AxiomId::P2) => check_sensitivity(model, inst, eps),
        _ => Outcome::inapplicable("payload shape does not fit the axiom", Vec::new()),
    };
    Verdict {
        axiom: inst.axiom,
        status: outcome.status,
        comparisons: outcome.comparisons,
        tolerance: eps,
        reason: outcome.reason,
        instance: inst.clone(),
    }
}

/// Check (M) on one pair: if every path of `left` is worth at least the
/// corresponding path of `right`, `left` must not be strictly worse.
pub fn check_monotonicity_pair(
    model: &PreferenceModel,
    left: &Act,
    right: &Act,
    filt: &Filtration,
    eps: f64,
) -> Verdict {
    let inst = AxiomInstance {
        axiom: AxiomId::M,
        filtration: filt.clone(),
        payload: Payload::Dominance {
            left: left.clone(),
            right: right.clone(),
        },
    };
    check_instance(model, &inst, eps)
}

/// `are_comonotonic` for callers that only need the boolean.
pub(crate) fn comonotonic(f: &[f64], g: &[f64], eps: f64) -> bool {
    are_comonotonic(f, g, eps)
        .map(|v| v.comonotonic)
        .unwrap_or(false)
}

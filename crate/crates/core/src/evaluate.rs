//! Preference functionals over acts and the preference relation they induce.
//!
//! | kind   | value of `h`                                   |
//! |--------|------------------------------------------------|
//! | DU     | `Σ β^t u(d_t)` (deterministic acts only)        |
//! | DEU    | `E_P[Σ β^t u(h_t)]`                             |
//! | CDEU   | `∫ Σ β^t u(h_t) dv` (Choquet)                  |
//! | MaxMin | `min_{P ∈ 𝒫} E_P[Σ β^t u(h_t)]`                 |

use alloc::vec::Vec;

use serde::Serialize;

use crate::capacity::{self, validate_capacity, Capacity, CapacityError, ProbabilityVector};
use crate::streams::{util_act, Act, DiscountFactor, StreamError, UtilityFunction};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error(transparent)]
    Stream(#[from] StreamError),
    #[error(transparent)]
    Capacity(#[from] CapacityError),
    #[error("act varies across states; discounted utility needs a deterministic stream")]
    NotDeterministic,
    #[error("model is for {model} states, act has {act}")]
    StateMismatch { model: usize, act: usize },
    #[error("operation needs a {expected} model")]
    WrongKind { expected: &'static str },
    #[error("MaxMin needs at least one prior")]
    EmptyPriorSet,
    #[error("invalid capacity")]
    InvalidCapacity(capacity::ValidationReport),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", content = "payload")]
pub enum ModelKind {
    #[serde(rename = "DU")]
    Du,
    #[serde(rename = "DEU")]
    Deu(ProbabilityVector),
    #[serde(rename = "CDEU")]
    Cdeu(Capacity),
    #[serde(rename = "MaxMin")]
    MaxMin(Vec<ProbabilityVector>),
}

impl ModelKind {
    pub fn name(&self) -> &'static str {
        match self {
            ModelKind::Du => "DU",
            ModelKind::Deu(_) => "DEU",
            ModelKind::Cdeu(_) => "CDEU",
            ModelKind::MaxMin(_) => "MaxMin",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PreferenceModel {
    kind: ModelKind,
    utility: UtilityFunction,
    discount: DiscountFactor,
}

impl PreferenceModel {
    pub fn new(
        kind: ModelKind,
        utility: UtilityFunction,
        discount: DiscountFactor,
        eps: f64,
    ) -> Result<Self, EvalError> {
        match &kind {
            ModelKind::Du | ModelKind::Deu(_) => {}
            ModelKind::Cdeu(v) => {
                let report = validate_capacity(v, eps);
                if !report.is_valid() {
                    return Err(EvalError::InvalidCapacity(report));
                }
            }
            ModelKind::MaxMin(priors) => {
                let first = priors.first().ok_or(EvalError::EmptyPriorSet)?;
                if let Some(p) = priors.iter().find(|p| p.states() != first.states()) {
                    return Err(EvalError::StateMismatch {
                        model: first.states(),
                        act: p.states(),
                    });
                }
            }
        }
        Ok(PreferenceModel {
            kind,
            utility,
            discount,
        })
    }

    pub fn du(utility: UtilityFunction, discount: DiscountFactor) -> Self {
        PreferenceModel {
            kind: ModelKind::Du,
            utility,
            discount,
        }
    }

    pub fn deu(p: ProbabilityVector, utility: UtilityFunction, discount: DiscountFactor) -> Self {
        PreferenceModel {
            kind: ModelKind::Deu(p),
            utility,
            discount,
        }
    }

    pub fn cdeu(
        v: Capacity,
        utility: UtilityFunction,
        discount: DiscountFactor,
        eps: f64,
    ) -> Result<Self, EvalError> {
        Self::new(ModelKind::Cdeu(v), utility, discount, eps)
    }

    pub fn maxmin(
        priors: Vec<ProbabilityVector>,
        utility: UtilityFunction,
        discount: DiscountFactor,
    ) -> Result<Self, EvalError> {
        Self::new(ModelKind::MaxMin(priors), utility, discount, 0.0)
    }

    pub fn kind(&self) -> &ModelKind {
        &self.kind
    }

    pub fn utility(&self) -> &UtilityFunction {
        &self.utility
    }

    pub fn discount(&self) -> DiscountFactor {
        self.discount
    }

    /// Number of states the model is defined on; `None` for DU.
    pub fn states(&self) -> Option<usize> {
        match &self.kind {
            ModelKind::Du => None,
            ModelKind::Deu(p) => Some(p.states()),
            ModelKind::Cdeu(v) => Some(v.states()),
            ModelKind::MaxMin(ps) => Some(ps[0].states()),
        }
    }

    /// The same model with utility replaced by `scale·u + shift`.
    pub fn with_affine_utility(&self, scale: f64, shift: f64) -> Result<Self, EvalError> {
        Ok(PreferenceModel {
            kind: self.kind.clone(),
            utility: self.utility.clone().affine(scale, shift)?,
            discount: self.discount,
        })
    }

    fn check_states(&self, act: &Act) -> Result<(), EvalError> {
        match self.states() {
            Some(n) if n != act.states() => Err(EvalError::StateMismatch {
                model: n,
                act: act.states(),
            }),
            _ => Ok(()),
        }
    }

    /// Value of `act` under whichever functional the model carries.
    pub fn value(&self, act: &Act) -> Result<f64, EvalError> {
        match &self.kind {
            ModelKind::Du => du_value(act, self),
            ModelKind::Deu(_) => deu_value(act, self),
            ModelKind::Cdeu(_) => cdeu_value(act, self),
            ModelKind::MaxMin(_) => maxmin_value(act, self),
        }
    }

    /// Discounted utility of a deterministic stream, whatever the model kind.
    ///
    /// All four functionals agree on deterministic acts.
    pub fn deterministic_value(&self, act: &Act) -> Result<f64, EvalError> {
        if !act.is_deterministic() {
            return Err(EvalError::NotDeterministic);
        }
        Ok(util_act(act, &self.utility, self.discount)?[0])
    }
}

/// `Σ β^t u(d_t)` for a stream that is constant across states.
pub fn du_value(act: &Act, model: &PreferenceModel) -> Result<f64, EvalError> {
    model.deterministic_value(act)
}

/// `E_P[U∘h]`, the expectation of the per-state discounted utility.
pub fn deu_value(act: &Act, model: &PreferenceModel) -> Result<f64, EvalError> {
    let ModelKind::Deu(p) = &model.kind else {
        return Err(EvalError::WrongKind { expected: "DEU" });
    };
    model.check_states(act)?;
    Ok(p.expectation(&util_act(act, &model.utility, model.discount)?))
}

/// `Σ_t β^t E_P[u(h_t)]`, summing per-period expectations instead.
pub fn deu_value_swapped(act: &Act, model: &PreferenceModel) -> Result<f64, EvalError> {
    let ModelKind::Deu(p) = &model.kind else {
        return Err(EvalError::WrongKind { expected: "DEU" });
    };
    model.check_states(act)?;
    let u = &model.utility;
    let beta = model.discount;
    let expected_utility = |row: &[f64]| -> Result<f64, StreamError> {
        let mut acc = 0.0;
        for (&prob, &x) in p.as_slice().iter().zip(row) {
            acc += prob * u.eval(x)?;
        }
        Ok(acc)
    };
    let mut total = 0.0;
    for (t, row) in act.payoffs().iter().enumerate() {
        total += beta.pow(t) * expected_utility(row)?;
    }
    total += beta.tail_weight(act.horizon() + 1) * expected_utility(act.tail())?;
    Ok(total)
}

/// Choquet integral of the per-state discounted utility.
pub fn cdeu_value(act: &Act, model: &PreferenceModel) -> Result<f64, EvalError> {
    let ModelKind::Cdeu(v) = &model.kind else {
        return Err(EvalError::WrongKind { expected: "CDEU" });
    };
    model.check_states(act)?;
    Ok(capacity::choquet(
        &util_act(act, &model.utility, model.discount)?,
        v,
    )?)
}

/// Smallest expected discounted utility over the listed priors.
///
/// The objective is linear in `P`, so the minimum over the convex hull of the
/// list is attained at one of the listed points.
pub fn maxmin_value(act: &Act, model: &PreferenceModel) -> Result<f64, EvalError> {
    let ModelKind::MaxMin(priors) = &model.kind else {
        return Err(EvalError::WrongKind { expected: "MaxMin" });
    };
    model.check_states(act)?;
    let utils = util_act(act, &model.utility, model.discount)?;
    Ok(priors
        .iter()
        .map(|p| p.expectation(&utils))
        .fold(f64::INFINITY, f64::min))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    StrictlyPrefersLeft,
    StrictlyPrefersRight,
    Indifferent,
}

impl Relation {
    pub fn name(self) -> &'static str {
        match self {
            Relation::StrictlyPrefersLeft => "strictly-prefers-left",
            Relation::StrictlyPrefersRight => "strictly-prefers-right",
            Relation::Indifferent => "indifferent",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PreferenceVerdict {
    pub relation: Relation,
    pub left: f64,
    pub right: f64,
    pub tolerance: f64,
}

impl PreferenceVerdict {
    pub fn from_values(left: f64, right: f64, tolerance: f64) -> Self {
        let diff = left - right;
        let relation = if diff.abs() <= tolerance {
            Relation::Indifferent
        } else if diff > 0.0 {
            Relation::StrictlyPrefersLeft
        } else {
            Relation::StrictlyPrefersRight
        };
        PreferenceVerdict {
            relation,
            left,
            right,
            tolerance,
        }
    }

    pub fn diff(&self) -> f64 {
        self.left - self.right
    }
}

/// Compare two acts; gaps within `eps` are indifference.
pub fn prefer(
    model: &PreferenceModel,
    left: &Act,
    right: &Act,
    eps: f64,
) -> Result<PreferenceVerdict, EvalError> {
    Ok(PreferenceVerdict::from_values(
        model.value(left)?,
        model.value(right)?,
        eps,
    ))
}

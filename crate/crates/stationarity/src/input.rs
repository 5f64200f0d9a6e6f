//! JSON files for acts, capacities and preference models.
//!
//! States are referred to by label everywhere; labels are resolved against
//! the `states` list of the file that declares them.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use stationarity_core::capacity::{
    validate_capacity, Capacity, CapacityIssue, ProbabilityVector, ValidationReport,
};
use stationarity_core::evaluate::{ModelKind, PreferenceModel};
use stationarity_core::streams::{
    validate_act, Act, DiscountFactor, Filtration, Partition, StateSet, StateSpace, UtilityFunction,
};

#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Stream(#[from] stationarity_core::streams::StreamError),
    #[error(transparent)]
    Capacity(#[from] stationarity_core::capacity::CapacityError),
    #[error(transparent)]
    Eval(#[from] stationarity_core::evaluate::EvalError),
    #[error("capacity is not valid: {0}")]
    InvalidCapacity(String),
    #[error("act is not adapted to its filtration: {0}")]
    NotAdapted(String),
    #[error("{0}")]
    Schema(String),
}

fn describe_capacity_report(space: &StateSpace, v: &Capacity, r: &ValidationReport) -> String {
    let set = |a: StateSet| format!("{{{}}}", event_key(space, a));
    r.issues
        .iter()
        .map(|i| match i {
            CapacityIssue::NonFinite { subset } => format!("v({}) is not finite", set(*subset)),
            CapacityIssue::EmptySetNotZero { value } => format!("v({{}}) = {value}, expected 0"),
            CapacityIssue::FullSetNotOne { value } => {
                format!("v(all states) = {value}, expected 1")
            }
            CapacityIssue::Monotonicity { subset, superset } => format!(
                "v({}) = {} exceeds v({}) = {}",
                set(*subset),
                v.value(*subset),
                set(*superset),
                v.value(*superset)
            ),
        })
        .collect::<Vec<_>>()
        .join("; ")
}

fn schema(msg: impl Into<String>) -> InputError {
    InputError::Schema(msg.into())
}

pub fn read_file(path: &Path) -> Result<String, InputError> {
    std::fs::read_to_string(path).map_err(|source| InputError::Read {
        path: path.display().to_string(),
        source,
    })
}

fn resolve(space: &StateSpace, label: &str) -> Result<usize, InputError> {
    space
        .index_of(label)
        .ok_or_else(|| schema(format!("unknown state label {label:?}")))
}

/// An act together with its labelled state space and filtration.
#[derive(Clone, Debug, PartialEq)]
pub struct ActInput {
    pub space: StateSpace,
    pub act: Act,
    pub filtration: Filtration,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ActJson {
    states: Vec<String>,
    horizon: usize,
    #[serde(default)]
    partitions: Option<Vec<Vec<Vec<String>>>>,
    payoffs: Vec<Vec<f64>>,
    tail: Vec<f64>,
}

/// Parse an act; without `partitions` the default filtration (trivial at 0,
/// full information after) is used.
pub fn parse_act(text: &str) -> Result<ActInput, InputError> {
    let raw: ActJson = serde_json::from_str(text)?;
    let space = StateSpace::new(raw.states)?;
    let n = space.len();
    if raw.payoffs.len() != raw.horizon + 1 {
        return Err(schema(format!(
            "horizon {} needs {} payoff rows, found {}",
            raw.horizon,
            raw.horizon + 1,
            raw.payoffs.len()
        )));
    }
    let act = Act::new(raw.payoffs, raw.tail)?;
    if act.states() != n {
        return Err(schema(format!(
            "payoff rows have {} entries for {n} states",
            act.states()
        )));
    }
    let filtration = match raw.partitions {
        None => Filtration::standard(n, raw.horizon),
        Some(parts) => {
            if parts.len() != raw.horizon + 1 {
                return Err(schema(format!(
                    "horizon {} needs {} partitions, found {}",
                    raw.horizon,
                    raw.horizon + 1,
                    parts.len()
                )));
            }
            let partitions = parts
                .iter()
                .map(|cells| {
                    let cells = cells
                        .iter()
                        .map(|cell| {
                            cell.iter()
                                .map(|l| resolve(&space, l))
                                .collect::<Result<Vec<_>, _>>()
                                .map(StateSet::from_states)
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    Ok(Partition::new(n, cells)?)
                })
                .collect::<Result<Vec<_>, InputError>>()?;
            Filtration::new(partitions)?
        }
    };
    let report = validate_act(&act, &filtration)?;
    if let Some(issue) = report.issues.first() {
        let cell: Vec<&str> = issue
            .cell
            .iter()
            .map(|s| space.labels()[s].as_str())
            .collect();
        return Err(InputError::NotAdapted(format!(
            "payoff at {:?} varies on cell {{{}}}",
            issue.date,
            cell.join(",")
        )));
    }
    Ok(ActInput {
        space,
        act,
        filtration,
    })
}

/// A capacity with the labels it was declared on.
#[derive(Clone, Debug, PartialEq)]
pub struct CapacityInput {
    pub space: StateSpace,
    pub capacity: Capacity,
}

#[derive(Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct CapacityJson {
    states: Vec<String>,
    values: BTreeMap<String, f64>,
}

fn parse_event(space: &StateSpace, key: &str) -> Result<StateSet, InputError> {
    if key.trim().is_empty() {
        return Ok(StateSet::EMPTY);
    }
    key.split(',')
        .map(|l| resolve(space, l.trim()))
        .collect::<Result<Vec<_>, _>>()
        .map(StateSet::from_states)
}

fn capacity_from_json(raw: CapacityJson, eps: f64) -> Result<CapacityInput, InputError> {
    let space = StateSpace::new(raw.states)?;
    let n = space.len();
    let full = space.full();
    let mut table: Vec<Option<f64>> = vec![None; 1 << n];
    for (key, value) in &raw.values {
        let a = parse_event(&space, key)?;
        if table[a.index()].replace(*value).is_some() {
            return Err(schema(format!("event {key:?} listed twice")));
        }
    }
    table[0].get_or_insert(0.0);
    table[full.index()].get_or_insert(1.0);
    let mut values = Vec::with_capacity(1 << n);
    for (bits, v) in table.into_iter().enumerate() {
        match v {
            Some(v) => values.push(v),
            None => {
                let a = StateSet::from_bits(bits as u32);
                return Err(schema(format!(
                    "capacity has no value for event {{{}}}",
                    event_key(&space, a)
                )));
            }
        }
    }
    let capacity = Capacity::from_table(n, values)?;
    let report = validate_capacity(&capacity, eps);
    if !report.is_valid() {
        return Err(InputError::InvalidCapacity(describe_capacity_report(
            &space, &capacity, &report,
        )));
    }
    Ok(CapacityInput { space, capacity })
}

/// Parse `{"states": [...], "values": {"A,B": 0.4, ...}}`.
///
/// Events are comma-joined labels in any order; `""` is the empty set. The
/// empty set and the full set default to 0 and 1, every other event is
/// required. Normalization and monotonicity are checked within `eps`.
pub fn parse_capacity(text: &str, eps: f64) -> Result<CapacityInput, InputError> {
    capacity_from_json(serde_json::from_str(text)?, eps)
}

/// Comma-joined labels of `a` in state order.
pub fn event_key(space: &StateSpace, a: StateSet) -> String {
    a.iter()
        .map(|s| space.labels()[s].as_str())
        .collect::<Vec<_>>()
        .join(",")
}

/// The capacity file for `v`, events keyed in state order.
pub fn capacity_to_json(space: &StateSpace, v: &Capacity) -> serde_json::Value {
    let values: BTreeMap<String, f64> = StateSet::all(space.len())
        .map(|a| (event_key(space, a), v.value(a)))
        .collect();
    serde_json::json!({ "states": space.labels(), "values": values })
}

#[derive(Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
enum UtilityJson {
    Linear {
        a: f64,
        b: f64,
    },
    Crra {
        gamma: f64,
    },
    Cara {
        alpha: f64,
    },
    Log,
    Tabulated {
        xs: Vec<f64>,
        ys: Vec<f64>,
    },
    Affine {
        base: Box<UtilityJson>,
        scale: f64,
        shift: f64,
    },
}

impl UtilityJson {
    fn build(self) -> Result<UtilityFunction, InputError> {
        Ok(match self {
            UtilityJson::Linear { a, b } => UtilityFunction::linear(a, b)?,
            UtilityJson::Crra { gamma } => UtilityFunction::crra(gamma)?,
            UtilityJson::Cara { alpha } => UtilityFunction::cara(alpha)?,
            UtilityJson::Log => UtilityFunction::log(),
            UtilityJson::Tabulated { xs, ys } => UtilityFunction::tabulated(xs, ys)?,
            UtilityJson::Affine { base, scale, shift } => base.build()?.affine(scale, shift)?,
        })
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ProbabilityJson {
    states: Vec<String>,
    values: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PriorsJson {
    states: Vec<String>,
    values: Vec<Vec<f64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelJson {
    kind: String,
    beta: f64,
    u: UtilityJson,
    #[serde(default)]
    capacity: Option<CapacityJson>,
    #[serde(default)]
    probability: Option<ProbabilityJson>,
    #[serde(default)]
    priors: Option<PriorsJson>,
}

/// A preference model and, except for DU, the state labels it is defined on.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelInput {
    pub space: Option<StateSpace>,
    pub model: PreferenceModel,
}

impl ModelInput {
    /// JSON description in the same schema the file was read from.
    pub fn to_json(&self) -> serde_json::Value {
        let mut out = serde_json::json!({
            "kind": self.model.kind().name(),
            "beta": self.model.discount().value(),
            "u": self.model.utility(),
        });
        let labels = self.space.as_ref().map(|s| s.labels().to_vec());
        match self.model.kind() {
            ModelKind::Du => {}
            ModelKind::Deu(p) => {
                out["probability"] = serde_json::json!({ "states": labels, "values": p });
            }
            ModelKind::Cdeu(v) => {
                let space = self.space.as_ref().expect("CDEU models carry labels");
                out["capacity"] = capacity_to_json(space, v);
            }
            ModelKind::MaxMin(ps) => {
                out["priors"] = serde_json::json!({ "states": labels, "values": ps });
            }
        }
        out
    }

    /// Error unless `space` lists the same labels in the same order.
    pub fn check_states(&self, space: &StateSpace) -> Result<(), InputError> {
        match &self.space {
            Some(own) if own.labels() != space.labels() => Err(schema(format!(
                "model states {:?} differ from act states {:?}",
                own.labels(),
                space.labels()
            ))),
            _ => Ok(()),
        }
    }
}

/// Parse `{"kind": "DU"|"DEU"|"CDEU"|"MaxMin", "beta": β, "u": {...}, ...}`.
///
/// DEU needs `"probability": {"states": [...], "values": [...]}`, CDEU a
/// capacity object, MaxMin `"priors": {"states": [...], "values": [[...], ...]}`.
pub fn parse_model(text: &str, eps: f64) -> Result<ModelInput, InputError> {
    let raw: ModelJson = serde_json::from_str(text)?;
    let beta = DiscountFactor::new(raw.beta)?;
    let u = raw.u.build()?;
    let extra = |name: &str, present: bool| {
        if present {
            Err(schema(format!("{} model does not take {name:?}", raw.kind)))
        } else {
            Ok(())
        }
    };
    let (space, kind) = match raw.kind.as_str() {
        "DU" => {
            extra("capacity", raw.capacity.is_some())?;
            extra("probability", raw.probability.is_some())?;
            extra("priors", raw.priors.is_some())?;
            (None, ModelKind::Du)
        }
        "DEU" => {
            extra("capacity", raw.capacity.is_some())?;
            extra("priors", raw.priors.is_some())?;
            let p = raw
                .probability
                .ok_or_else(|| schema("DEU model needs \"probability\""))?;
            let space = StateSpace::new(p.states)?;
            let p = labelled_probability(&space, p.values, eps)?;
            (Some(space), ModelKind::Deu(p))
        }
        "CDEU" => {
            extra("probability", raw.probability.is_some())?;
            extra("priors", raw.priors.is_some())?;
            let c = raw
                .capacity
                .ok_or_else(|| schema("CDEU model needs \"capacity\""))?;
            let c = capacity_from_json(c, eps)?;
            (Some(c.space), ModelKind::Cdeu(c.capacity))
        }
        "MaxMin" => {
            extra("capacity", raw.capacity.is_some())?;
            extra("probability", raw.probability.is_some())?;
            let ps = raw
                .priors
                .ok_or_else(|| schema("MaxMin model needs \"priors\""))?;
            let space = StateSpace::new(ps.states)?;
            let priors = ps
                .values
                .into_iter()
                .map(|p| labelled_probability(&space, p, eps))
                .collect::<Result<Vec<_>, _>>()?;
            (Some(space), ModelKind::MaxMin(priors))
        }
        other => {
            return Err(schema(format!(
                "unknown model kind {other:?}; expected DU, DEU, CDEU or MaxMin"
            )))
        }
    };
    let model = PreferenceModel::new(kind, u, beta, eps)?;
    Ok(ModelInput { space, model })
}

fn labelled_probability(
    space: &StateSpace,
    values: Vec<f64>,
    eps: f64,
) -> Result<ProbabilityVector, InputError> {
    if values.len() != space.len() {
        return Err(schema(format!(
            "probability has {} entries for {} states",
            values.len(),
            space.len()
        )));
    }
    Ok(ProbabilityVector::new(values, eps)?)
}

/// Parse a comma-separated list of numbers such as `"5,1"`.
pub fn parse_vector(text: &str) -> Result<Vec<f64>, InputError> {
    text.split(',')
        .map(|s| {
            let s = s.trim();
            s.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| schema(format!("not a finite number: {s:?}")))
        })
        .collect()
}

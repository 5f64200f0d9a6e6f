//! Command dispatch. Every command returns its full output as a string so the
//! binary only prints and picks an exit code.

use std::fmt::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use stationarity_core::axioms::{falsify, AxiomId, SamplerConfig};
use stationarity_core::capacity::{
    convexity_violation, core_min_expectation, is_additive, CoreStatus,
};
use stationarity_core::evaluate::prefer;
use stationarity_core::streams::{StateSet, StateSpace};

use crate::input::{self, event_key, InputError};
use crate::output::fmt_num;
use crate::repro;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

impl From<InputError> for CliError {
    fn from(e: InputError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "stationarity",
    version,
    about = "Evaluate stochastic payoff streams and test stationarity axioms"
)]
pub struct Cli {
    /// Tolerance for value comparisons.
    #[arg(long, global = true, default_value_t = stationarity_core::EPS)]
    pub eps: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Value of an act under a model; with --act2, the preference between two acts.
    Eval {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        act: PathBuf,
        #[arg(long)]
        act2: Option<PathBuf>,
    },
    /// Convexity, additivity and core of a capacity; with --objective, the
    /// minimum expectation over the core.
    Core {
        #[arg(long)]
        capacity: PathBuf,
        /// Comma-separated payoff per state, e.g. "5,1".
        #[arg(long, allow_hyphen_values = true)]
        objective: Option<String>,
    },
    /// Search for a violation of an axiom under a model.
    Axiom {
        #[arg(long)]
        model: PathBuf,
        /// One of M, TS, SS, CS, PS, IH, KochS, KStat, P2, P5.
        #[arg(long)]
        axiom: String,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Recompute a named example: solar-carbon, example1, exchange, core-identity.
    Repro {
        name: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

pub fn run(cli: &Cli) -> Result<String, CliError> {
    if !(cli.eps > 0.0 && cli.eps.is_finite()) {
        return Err(CliError::Invalid(format!(
            "--eps must be positive, got {}",
            cli.eps
        )));
    }
    match &cli.command {
        Command::Eval { model, act, act2 } => eval(cli, model, act, act2.as_deref()),
        Command::Core {
            capacity,
            objective,
        } => core(cli, capacity, objective.as_deref()),
        Command::Axiom {
            model,
            axiom,
            trials,
            seed,
        } => axiom_search(cli, model, axiom, *trials, *seed),
        Command::Repro { name, seed } => {
            let table =
                repro::run(name, *seed, cli.eps).map_err(|e| CliError::Invalid(e.to_string()))?;
            Ok(match cli.format {
                Format::Text => table.render_text(),
                Format::Json => to_json(&table)?,
            })
        }
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| CliError::Internal(e.to_string()))
}

fn eval(cli: &Cli, model: &Path, act: &Path, act2: Option<&Path>) -> Result<String, CliError> {
    let m = input::parse_model(&input::read_file(model)?, cli.eps)?;
    let a = input::parse_act(&input::read_file(act)?)?;
    m.check_states(&a.space)?;
    let eval_err = |e: stationarity_core::evaluate::EvalError| CliError::Invalid(e.to_string());
    let v1 = m.model.value(&a.act).map_err(eval_err)?;
    let Some(act2) = act2 else {
        return match cli.format {
            Format::Text => Ok(format!(
                "model: {} (beta {})\nV(act) = {}\n",
                m.model.kind().name(),
                fmt_num(m.model.discount().value()),
                fmt_num(v1)
            )),
            Format::Json => to_json(&json!({ "model": m.to_json(), "value": v1 })),
        };
    };
    let b = input::parse_act(&input::read_file(act2)?)?;
    m.check_states(&b.space)?;
    if a.space.labels() != b.space.labels() {
        return Err(CliError::Invalid(
            "the two acts use different state labels".into(),
        ));
    }
    let verdict = prefer(&m.model, &a.act, &b.act, cli.eps).map_err(eval_err)?;
    match cli.format {
        Format::Text => Ok(format!(
            "model: {} (beta {})\nV(act)  = {}\nV(act2) = {}\nverdict: {} (difference {}, tolerance {})\n",
            m.model.kind().name(),
            fmt_num(m.model.discount().value()),
            fmt_num(verdict.left),
            fmt_num(verdict.right),
            verdict.relation.name(),
            fmt_num(verdict.diff()),
            verdict.tolerance
        )),
        Format::Json => to_json(&json!({ "model": m.to_json(), "verdict": verdict })),
    }
}

fn labelled(space: &StateSpace, p: &[f64]) -> serde_json::Map<String, serde_json::Value> {
    space
        .labels()
        .iter()
        .zip(p)
        .map(|(l, x)| (l.clone(), json!(x)))
        .collect()
}

fn labelled_text(space: &StateSpace, p: &[f64]) -> String {
    space
        .labels()
        .iter()
        .zip(p)
        .map(|(l, x)| format!("{l}={}", fmt_num(*x)))
        .collect::<Vec<_>>()
        .join(", ")
}

fn set_text(space: &StateSpace, a: StateSet) -> String {
    format!("{{{}}}", event_key(space, a))
}

fn core(cli: &Cli, capacity: &Path, objective: Option<&str>) -> Result<String, CliError> {
    let c = input::parse_capacity(&input::read_file(capacity)?, cli.eps)?;
    let (space, v) = (&c.space, &c.capacity);
    let n = space.len();
    let witness = convexity_violation(v, cli.eps);
    let additive = is_additive(v, cli.eps);
    let f = match objective {
        Some(text) => {
            let f = input::parse_vector(text)?;
            if f.len() != n {
                return Err(CliError::Invalid(format!(
                    "objective has {} entries for {n} states",
                    f.len()
                )));
            }
            Some(f)
        }
        None => None,
    };
    let probe = f.clone().unwrap_or_else(|| vec![0.0; n]);
    let r =
        core_min_expectation(&probe, v, cli.eps).map_err(|e| CliError::Internal(e.to_string()))?;
    let empty = r.status == CoreStatus::EmptyCore;

    match cli.format {
        Format::Json => {
            let mut out = json!({
                "states": space.labels(),
                "convex": witness.is_none(),
                "convexity_witness": witness.map(|(a, b)| [event_key(space, a), event_key(space, b)]),
                "additive": additive,
                "core_empty": empty,
            });
            if additive {
                let singles: Vec<f64> = (0..n).map(|s| v.value(StateSet::singleton(s))).collect();
                out["core_singleton"] = json!(labelled(space, &singles));
            }
            if let Some(f) = &f {
                out["objective"] = json!(f);
                out["status"] = json!(r.status);
                out["value"] = if empty { json!(null) } else { json!(r.value) };
                out["minimizer"] =
                    json!(r.minimizer.as_ref().map(|p| labelled(space, p.as_slice())));
                if let Some(check) = &r.check {
                    out["choquet"] = json!(check.choquet);
                    out["value_delta"] = json!(check.value_delta);
                    out["marginal_vector"] = json!(labelled(space, check.marginal.as_slice()));
                    out["minimizer_delta"] = json!(check.minimizer_delta);
                }
            }
            to_json(&out)
        }
        Format::Text => {
            let mut out = String::new();
            let yes = |b: bool| if b { "yes" } else { "no" };
            writeln!(out, "states: {}", space.labels().join(", ")).unwrap();
            match witness {
                None => writeln!(out, "convex: yes").unwrap(),
                Some((a, b)) => writeln!(
                    out,
                    "convex: no (v(A∪B) + v(A∩B) < v(A) + v(B) for A = {}, B = {})",
                    set_text(space, a),
                    set_text(space, b)
                )
                .unwrap(),
            }
            writeln!(out, "additive: {}", yes(additive)).unwrap();
            if empty {
                writeln!(out, "core: empty").unwrap();
            } else if additive {
                let singles: Vec<f64> = (0..n).map(|s| v.value(StateSet::singleton(s))).collect();
                writeln!(
                    out,
                    "core: the single probability {}",
                    labelled_text(space, &singles)
                )
                .unwrap();
            } else {
                writeln!(out, "core: nonempty").unwrap();
            }
            if let (Some(f), false) = (&f, empty) {
                writeln!(out, "objective: {}", labelled_text(space, f)).unwrap();
                writeln!(out, "min over core: {}", fmt_num(r.value)).unwrap();
                if let Some(p) = &r.minimizer {
                    writeln!(out, "minimizer: {}", labelled_text(space, p.as_slice())).unwrap();
                }
                if let Some(check) = &r.check {
                    writeln!(
                        out,
                        "choquet: {} (delta {})",
                        fmt_num(check.choquet),
                        fmt_num(check.value_delta)
                    )
                    .unwrap();
                    writeln!(
                        out,
                        "marginal vector: {} (delta {})",
                        labelled_text(space, check.marginal.as_slice()),
                        fmt_num(check.minimizer_delta)
                    )
                    .unwrap();
                }
            }
            Ok(out)
        }
    }
}

fn axiom_search(
    cli: &Cli,
    model: &Path,
    axiom: &str,
    trials: usize,
    seed: u64,
) -> Result<String, CliError> {
    let axiom: AxiomId = axiom
        .parse()
        .map_err(|e: stationarity_core::axioms::UnknownAxiom| {
            CliError::Invalid(format!(
                "{e}; expected one of M, TS, SS, CS, PS, IH, KochS, KStat, P2, P5"
            ))
        })?;
    if trials == 0 {
        return Err(CliError::Invalid("--trials must be at least 1".into()));
    }
    let m = input::parse_model(&input::read_file(model)?, cli.eps)?;
    let outcome = falsify(
        &m.model,
        axiom,
        trials,
        seed,
        cli.eps,
        &SamplerConfig::default(),
    );
    let report = json!({
        "axiom": axiom,
        "model": m.to_json(),
        "states": m.space.as_ref().map(|sp| sp.labels()),
        "seed": seed,
        "trials_run": outcome.trials_run,
        "applicable": outcome.applicable,
        "sampling_failures": outcome.sampling_failures,
        "violation": outcome.violation,
    });
    match (cli.format, &outcome.violation) {
        (Format::Json, _) => to_json(&report),
        (Format::Text, None) => Ok(format!(
            "no violation of {axiom} found in {} trials (seed {seed}; {} applicable, {} not sampled)\n",
            outcome.trials_run, outcome.applicable, outcome.sampling_failures
        )),
        (Format::Text, Some(v)) => Ok(format!(
            "violation of {axiom} found at trial {} (seed {seed}): {}\n{}",
            v.trial,
            v.verdict.reason.as_deref().unwrap_or(""),
            to_json(&report)?
        )),
    }
}

//! Comonotonicity of random payoffs.
//!
//! Outcomes are ranked numerically, so `f` and `g` are comonotonic when
//! `[f(ω) - f(ω')]·[g(ω) - g(ω')] ≥ 0` for every pair of states.

use serde::Serialize;

use crate::streams::{Act, Date};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ComonoError {
    #[error("vectors have lengths {0} and {1}")]
    LengthMismatch(usize, usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ComonoVerdict {
    pub comonotonic: bool,
    /// States `(ω, ω')` with `f(ω) > f(ω')` and `g(ω') > g(ω)`.
    pub witness: Option<(usize, usize)>,
}

/// Differences within `eps` count as ties.
pub fn are_comonotonic(f: &[f64], g: &[f64], eps: f64) -> Result<ComonoVerdict, ComonoError> {
    if f.len() != g.len() {
        return Err(ComonoError::LengthMismatch(f.len(), g.len()));
    }
    for w in 0..f.len() {
        for w2 in 0..f.len() {
            if f[w] > f[w2] + eps && g[w2] > g[w] + eps {
                return Ok(ComonoVerdict {
                    comonotonic: false,
                    witness: Some((w, w2)),
                });
            }
        }
    }
    Ok(ComonoVerdict {
        comonotonic: true,
        witness: None,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

/// First payoff of an act (from date `t` on) that is not comonotonic with `h`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TailFailure {
    pub side: Side,
    pub date: Date,
    pub witness: (usize, usize),
}

/// Check `h` against `act`'s payoffs at every date `≥ t`, tail included.
pub fn comonotonic_with_tail(
    h: &[f64],
    act: &Act,
    t: usize,
    side: Side,
    eps: f64,
) -> Result<Option<TailFailure>, ComonoError> {
    let (rows, tail) = act.continuation_from(t);
    let dates = rows
        .iter()
        .enumerate()
        .map(|(k, row)| (Date::Period(t + k), row.as_slice()))
        .chain(core::iter::once((Date::Tail, tail)));
    for (date, row) in dates {
        if let Some(witness) = are_comonotonic(h, row, eps)?.witness {
            return Ok(Some(TailFailure {
                side,
                date,
                witness,
            }));
        }
    }
    Ok(None)
}

/// `h` comonotonic with `f_i` and `g_i` for all `i ≥ t`; returns the first failure.
pub fn comonotonic_with_tails(
    h: &[f64],
    left: &Act,
    right: &Act,
    t: usize,
    eps: f64,
) -> Result<Option<TailFailure>, ComonoError> {
    if let Some(fail) = comonotonic_with_tail(h, left, t, Side::Left, eps)? {
        return Ok(Some(fail));
    }
    comonotonic_with_tail(h, right, t, Side::Right, eps)
}

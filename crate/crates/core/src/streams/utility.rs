use alloc::boxed::Box;
use alloc::vec::Vec;

use serde::Serialize;

use super::StreamError;

/// A real interval, possibly unbounded or open at either end.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub lo_open: bool,
    pub hi_open: bool,
}

impl Interval {
    pub const REALS: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
        lo_open: true,
        hi_open: true,
    };

    pub fn closed(lo: f64, hi: f64) -> Self {
        Interval {
            lo,
            hi,
            lo_open: false,
            hi_open: false,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        if x.is_nan() {
            return false;
        }
        let above = if self.lo_open {
            x > self.lo
        } else {
            x >= self.lo
        };
        let below = if self.hi_open {
            x < self.hi
        } else {
            x <= self.hi
        };
        above && below
    }
}

/// Piecewise-linear utility through the knots `(xs[i], ys[i])`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Tabulated {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl Tabulated {
    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    fn eval(&self, x: f64) -> f64 {
        // `x` is inside [xs[0], xs[last]] here.
        let k = self.xs.partition_point(|&k| k <= x);
        if k == 0 {
            return self.ys[0];
        }
        if k == self.xs.len() {
            return self.ys[k - 1];
        }
        let (x0, x1) = (self.xs[k - 1], self.xs[k]);
        let (y0, y1) = (self.ys[k - 1], self.ys[k]);
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }
}

/// Instantaneous utility of an outcome.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum UtilityFunction {
    /// `a·x + b`, `a > 0`.
    Linear {
        a: f64,
        b: f64,
    },
    /// `x^(1-γ)/(1-γ)`, or `ln x` at `γ = 1`.
    Crra {
        gamma: f64,
    },
    /// `(1 - e^(-αx))/α`.
    Cara {
        alpha: f64,
    },
    Log,
    Tabulated(Tabulated),
    /// `scale·base(x) + shift`.
    Affine {
        base: Box<UtilityFunction>,
        scale: f64,
        shift: f64,
    },
}

impl UtilityFunction {
    pub fn identity() -> Self {
        UtilityFunction::Linear { a: 1.0, b: 0.0 }
    }

    pub fn linear(a: f64, b: f64) -> Result<Self, StreamError> {
        if !(a > 0.0 && a.is_finite() && b.is_finite()) {
            return Err(StreamError::InvalidUtility("linear slope must be positive"));
        }
        Ok(UtilityFunction::Linear { a, b })
    }

    pub fn crra(gamma: f64) -> Result<Self, StreamError> {
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(StreamError::InvalidUtility("CRRA gamma must be positive"));
        }
        Ok(UtilityFunction::Crra { gamma })
    }

    pub fn cara(alpha: f64) -> Result<Self, StreamError> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(StreamError::InvalidUtility("CARA alpha must be positive"));
        }
        Ok(UtilityFunction::Cara { alpha })
    }

    pub fn log() -> Self {
        UtilityFunction::Log
    }

    /// Knots must have strictly increasing `xs` and non-decreasing `ys`.
    ///
    /// Flat segments are accepted so degenerate utilities can be expressed;
    /// see [`UtilityFunction::is_strictly_increasing`].
    pub fn tabulated(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self, StreamError> {
        if xs.len() < 2 || xs.len() != ys.len() {
            return Err(StreamError::InvalidUtility(
                "tabulated utility needs at least two knots and matching lengths",
            ));
        }
        if xs.iter().chain(&ys).any(|v| !v.is_finite()) {
            return Err(StreamError::InvalidUtility(
                "tabulated knots must be finite",
            ));
        }
        if xs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(StreamError::InvalidUtility(
                "tabulated x knots must be strictly increasing",
            ));
        }
        if ys.windows(2).any(|w| w[1] < w[0]) {
            return Err(StreamError::InvalidUtility(
                "tabulated utility must be non-decreasing",
            ));
        }
        Ok(UtilityFunction::Tabulated(Tabulated { xs, ys }))
    }

    /// `scale·self + shift`, `scale > 0`.
    pub fn affine(self, scale: f64, shift: f64) -> Result<Self, StreamError> {
        if !(scale > 0.0 && scale.is_finite() && shift.is_finite()) {
            return Err(StreamError::InvalidUtility("affine scale must be positive"));
        }
        Ok(UtilityFunction::Affine {
            base: Box::new(self),
            scale,
            shift,
        })
    }

    pub fn domain(&self) -> Interval {
        match self {
            UtilityFunction::Linear { .. } | UtilityFunction::Cara { .. } => Interval::REALS,
            UtilityFunction::Crra { gamma } => Interval {
                lo: 0.0,
                hi: f64::INFINITY,
                lo_open: *gamma >= 1.0,
                hi_open: true,
            },
            UtilityFunction::Log => Interval {
                lo: 0.0,
                hi: f64::INFINITY,
                lo_open: true,
                hi_open: true,
            },
            UtilityFunction::Tabulated(t) => Interval::closed(t.xs[0], t.xs[t.xs.len() - 1]),
            UtilityFunction::Affine { base, .. } => base.domain(),
        }
    }

    pub fn is_strictly_increasing(&self) -> bool {
        match self {
            UtilityFunction::Tabulated(t) => t.ys.windows(2).all(|w| w[1] > w[0]),
            UtilityFunction::Affine { base, .. } => base.is_strictly_increasing(),
            _ => true,
        }
    }

    pub fn eval(&self, x: f64) -> Result<f64, StreamError> {
        if !self.domain().contains(x) {
            return Err(StreamError::Domain(x));
        }
        Ok(self.eval_unchecked(x))
    }

    fn eval_unchecked(&self, x: f64) -> f64 {
        match self {
            UtilityFunction::Linear { a, b } => a * x + b,
            UtilityFunction::Crra { gamma } => {
                if (*gamma - 1.0).abs() < 1e-12 {
                    libm::log(x)
                } else {
                    libm::pow(x, 1.0 - gamma) / (1.0 - gamma)
                }
            }
            UtilityFunction::Cara { alpha } => (1.0 - libm::exp(-alpha * x)) / alpha,
            UtilityFunction::Log => libm::log(x),
            UtilityFunction::Tabulated(t) => t.eval(x),
            UtilityFunction::Affine { base, scale, shift } => {
                scale * base.eval_unchecked(x) + shift
            }
        }
    }
}

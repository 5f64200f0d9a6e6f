//! Discounted, expected, Choquet and MaxMin evaluation of stochastic payoff
//! streams, with checkers for the stationarity axioms behind them.
//!
//! Everything here is `no_std` with `alloc`. File formats and the command-line
//! front end live in the companion `stationarity` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod axioms;
pub mod capacity;
pub mod comono;
pub mod evaluate;
pub mod gen;
pub mod lp;
pub mod scenarios;
pub mod streams;

/// Default absolute tolerance for comparing values.
pub const EPS: f64 = 1e-9;

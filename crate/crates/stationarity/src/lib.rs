//! File formats, reproductions and the command-line front end for
//! `stationarity-core`.

pub mod cli;
pub mod input;
pub mod output;
pub mod repro;

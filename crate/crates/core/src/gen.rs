//! Seeded random generators for acts, filtrations, probabilities and capacities.
//!
//! Each trial of a randomized run draws from its own ChaCha stream, keyed by
//! `(seed, trial)`, so any single trial can be replayed without the others.

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::capacity::{capacity_from_distortion, Capacity, ProbabilityVector};
use crate::streams::{Act, DeterministicStream, Filtration, Partition, StateSet};

pub type TrialRng = ChaCha8Rng;

/// Random stream for trial `trial` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> TrialRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// A strictly positive probability vector.
pub fn probability<R: Rng>(rng: &mut R, n: usize) -> ProbabilityVector {
    let w: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = w.iter().sum();
    ProbabilityVector::from_raw(w.into_iter().map(|x| x / total).collect())
}

/// Convex capacity `v(A) = g(P(A))` with `g(x) = λx + (1-λ)x^k`, `k ≥ 1`.
pub fn convex_capacity<R: Rng>(rng: &mut R, n: usize) -> Capacity {
    let p = probability(rng, n);
    let k: f64 = rng.gen_range(1.0..4.0);
    let lambda: f64 = rng.gen_range(0.0..1.0);
    capacity_from_distortion(&p, |x| lambda * x + (1.0 - lambda) * libm::pow(x, k), 1e-9)
        .expect("convex distortion is valid")
}

/// A monotone normalized capacity with no further structure.
///
/// Built bottom-up: each event gets the largest value of its maximal proper
/// subsets plus a random fraction of the remaining headroom.
pub fn capacity<R: Rng>(rng: &mut R, n: usize) -> Capacity {
    let full = StateSet::full(n);
    let mut table = vec![0.0; 1 << n];
    let mut events: Vec<StateSet> = StateSet::all(n).filter(|a| !a.is_empty()).collect();
    events.sort_by_key(|a| a.len());
    for a in events {
        if a == full {
            table[a.index()] = 1.0;
            continue;
        }
        let floor = a
            .iter()
            .map(|s| table[a.without(s).index()])
            .fold(0.0, f64::max);
        let step: f64 = rng.gen_range(0.0..0.6);
        table[a.index()] = floor + step * (1.0 - floor);
    }
    Capacity::from_table(n, table).expect("table has 2^n entries")
}

/// A vector with entries drawn uniformly from `[lo, hi)`.
pub fn vector<R: Rng>(rng: &mut R, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(lo..hi)).collect()
}

/// A vector of grid values; repeated values are likely, which exercises ties.
pub fn grid_vector<R: Rng>(rng: &mut R, n: usize, grid: &[f64]) -> Vec<f64> {
    (0..n).map(|_| pick(rng, grid)).collect()
}

fn pick<R: Rng>(rng: &mut R, grid: &[f64]) -> f64 {
    *grid.choose(rng).expect("grid is nonempty")
}

/// Refine `p` by splitting each multi-state cell in two with probability 1/2.
fn refine<R: Rng>(rng: &mut R, p: &Partition) -> Partition {
    let mut cells = Vec::new();
    for &cell in p.cells() {
        let members: Vec<usize> = cell.iter().collect();
        if members.len() < 2 || !rng.gen_bool(0.5) {
            cells.push(cell);
            continue;
        }
        let mut left = StateSet::EMPTY;
        let mut right = StateSet::EMPTY;
        for &s in &members {
            if rng.gen_bool(0.5) {
                left = left.with(s);
            } else {
                right = right.with(s);
            }
        }
        if left.is_empty() || right.is_empty() {
            // Force a proper split: move the first member to the empty side.
            let first = members[0];
            left = StateSet::singleton(first);
            right = cell.without(first);
        }
        cells.push(left);
        cells.push(right);
    }
    Partition::new(p.states(), cells).expect("split cells partition the states")
}

/// Filtration on `n` states with trivial `F_0` and random refinements after.
pub fn filtration<R: Rng>(rng: &mut R, n: usize, horizon: usize) -> Filtration {
    let mut partitions = vec![Partition::trivial(n)];
    for _ in 0..horizon {
        let next = refine(rng, partitions.last().expect("nonempty"));
        partitions.push(next);
    }
    Filtration::new(partitions).expect("refining sequence with trivial start")
}

/// A payoff constant on each cell of `p`, values from `grid`.
pub fn measurable_row<R: Rng>(rng: &mut R, p: &Partition, grid: &[f64]) -> Vec<f64> {
    let mut row = vec![0.0; p.states()];
    for cell in p.cells() {
        let x = pick(rng, grid);
        for s in cell.iter() {
            row[s] = x;
        }
    }
    row
}

pub fn constant_row<R: Rng>(rng: &mut R, n: usize, grid: &[f64]) -> Vec<f64> {
    vec![pick(rng, grid); n]
}

/// An act adapted to `filt`, with horizon equal to the filtration's.
pub fn adapted_act<R: Rng>(rng: &mut R, filt: &Filtration, grid: &[f64]) -> Act {
    let horizon = filt.horizon();
    let payoffs = (0..=horizon)
        .map(|t| measurable_row(rng, filt.at(t), grid))
        .collect();
    let tail = measurable_row(rng, filt.at(horizon), grid);
    Act::new(payoffs, tail).expect("rows have matching lengths")
}

/// A deterministic stream with `periods` explicit periods.
pub fn deterministic<R: Rng>(rng: &mut R, periods: usize, grid: &[f64]) -> DeterministicStream {
    let ps = (0..periods).map(|_| pick(rng, grid)).collect();
    DeterministicStream::new(ps, pick(rng, grid))
}

/// A state-independent act on `n` states with the given horizon.
pub fn deterministic_act<R: Rng>(rng: &mut R, n: usize, horizon: usize, grid: &[f64]) -> Act {
    deterministic(rng, horizon + 1, grid).to_act(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capacity::{is_convex, validate_capacity};
    use crate::streams::validate_act;
    use crate::EPS;

    #[test]
    fn trial_streams_are_reproducible_and_distinct() {
        let a: u64 = trial_rng(7, 3).gen();
        let b: u64 = trial_rng(7, 3).gen();
        let c: u64 = trial_rng(7, 4).gen();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn generated_objects_are_valid() {
        let mut rng = trial_rng(1, 0);
        for n in 1..=5 {
            let v = convex_capacity(&mut rng, n);
            assert!(validate_capacity(&v, EPS).is_valid());
            assert!(is_convex(&v, EPS));
            let w = capacity(&mut rng, n);
            assert!(validate_capacity(&w, EPS).is_valid());
            let filt = filtration(&mut rng, n, 3);
            let act = adapted_act(&mut rng, &filt, &[0.0, 1.0, 3.0]);
            assert!(validate_act(&act, &filt).unwrap().is_adapted());
            let p = probability(&mut rng, n);
            assert!(ProbabilityVector::new(p.as_slice().to_vec(), EPS).is_ok());
        }
    }
}

//! Capacities on a finite state space and their Choquet integrals.
//!
//! A capacity is stored as a full table indexed by [`StateSet`] bitmask, so
//! `2^n` values for `n` states. Core queries solve a linear program whose
//! size also grows as `2^n`; they are practical up to about 12 states.

mod core_lp;

use alloc::vec;
use alloc::vec::Vec;

use serde::Serialize;

use crate::streams::{StateSet, MAX_STATES};

pub use core_lp::{core_min_expectation, CoreQueryResult, CoreStatus, MarginalCheck};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CapacityError {
    #[error("capacity table for {states} states needs {expected} entries, got {found}")]
    TableSize {
        states: usize,
        expected: usize,
        found: usize,
    },
    #[error("state count {0} outside 1..=16")]
    StateCount(usize),
    #[error("invalid capacity: {0:?}")]
    Invalid(ValidationReport),
    #[error("invalid probability vector: {0}")]
    InvalidProbability(&'static str),
    #[error("vector has {found} entries, capacity has {expected} states")]
    LengthMismatch { expected: usize, found: usize },
    #[error("ordering is not a permutation of the states")]
    BadOrdering,
    #[error("marginal vector has negative mass {mass} at state {state}")]
    NegativeMass { state: usize, mass: f64 },
    #[error("invalid distortion: {0}")]
    InvalidDistortion(&'static str),
}

/// A set function on all subsets of `{0, …, n-1}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Capacity {
    n: usize,
    table: Vec<f64>,
}

impl Capacity {
    /// Wrap a raw table without checking normalization or monotonicity.
    pub fn from_table(n: usize, table: Vec<f64>) -> Result<Self, CapacityError> {
        if n == 0 || n > MAX_STATES {
            return Err(CapacityError::StateCount(n));
        }
        if table.len() != 1 << n {
            return Err(CapacityError::TableSize {
                states: n,
                expected: 1 << n,
                found: table.len(),
            });
        }
        Ok(Capacity { n, table })
    }

    /// A validated capacity.
    pub fn new(n: usize, table: Vec<f64>, eps: f64) -> Result<Self, CapacityError> {
        let v = Self::from_table(n, table)?;
        let report = validate_capacity(&v, eps);
        if report.is_valid() {
            Ok(v)
        } else {
            Err(CapacityError::Invalid(report))
        }
    }

    /// Build from a closure over subsets; `∅` and `Ω` are forced to 0 and 1.
    pub fn from_fn(
        n: usize,
        mut value: impl FnMut(StateSet) -> f64,
    ) -> Result<Self, CapacityError> {
        if n == 0 || n > MAX_STATES {
            return Err(CapacityError::StateCount(n));
        }
        let full = StateSet::full(n);
        let table = StateSet::all(n)
            .map(|a| {
                if a.is_empty() {
                    0.0
                } else if a == full {
                    1.0
                } else {
                    value(a)
                }
            })
            .collect();
        Ok(Capacity { n, table })
    }

    pub fn states(&self) -> usize {
        self.n
    }

    pub fn value(&self, a: StateSet) -> f64 {
        self.table[a.index()]
    }

    pub fn table(&self) -> &[f64] {
        &self.table
    }
}

/// A probability on a finite state space.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ProbabilityVector(Vec<f64>);

impl ProbabilityVector {
    pub fn new(p: Vec<f64>, eps: f64) -> Result<Self, CapacityError> {
        if p.is_empty() || p.len() > MAX_STATES {
            return Err(CapacityError::StateCount(p.len()));
        }
        if p.iter().any(|x| !x.is_finite() || *x < -eps) {
            return Err(CapacityError::InvalidProbability(
                "negative or non-finite mass",
            ));
        }
        if (p.iter().sum::<f64>() - 1.0).abs() > eps {
            return Err(CapacityError::InvalidProbability(
                "masses do not sum to one",
            ));
        }
        Ok(ProbabilityVector(p))
    }

    pub fn uniform(n: usize) -> Self {
        ProbabilityVector(vec![1.0 / n as f64; n])
    }

    pub(crate) fn from_raw(p: Vec<f64>) -> Self {
        ProbabilityVector(p)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn states(&self) -> usize {
        self.0.len()
    }

    pub fn measure(&self, a: StateSet) -> f64 {
        a.iter().map(|s| self.0[s]).sum()
    }

    /// `E_P[f]`, accumulated in state order.
    pub fn expectation(&self, f: &[f64]) -> f64 {
        self.0.iter().zip(f).map(|(p, x)| p * x).sum()
    }

    /// The additive capacity `A ↦ P(A)`.
    pub fn to_capacity(&self) -> Capacity {
        Capacity::from_fn(self.states(), |a| self.measure(a)).expect("state count already checked")
    }

    pub fn max_abs_diff(&self, other: &ProbabilityVector) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CapacityIssue {
    NonFinite {
        subset: StateSet,
    },
    EmptySetNotZero {
        value: f64,
    },
    FullSetNotOne {
        value: f64,
    },
    Monotonicity {
        subset: StateSet,
        superset: StateSet,
    },
}

/// Normalization and monotonicity problems; empty means valid.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub issues: Vec<CapacityIssue>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }
}

/// Monotonicity is checked on covering pairs `A ⊂ A ∪ {ω}`, which implies it for
/// every inclusion.
pub fn validate_capacity(v: &Capacity, eps: f64) -> ValidationReport {
    let mut issues = Vec::new();
    for a in StateSet::all(v.n) {
        if !v.value(a).is_finite() {
            issues.push(CapacityIssue::NonFinite { subset: a });
        }
    }
    if !issues.is_empty() {
        return ValidationReport { issues };
    }
    let empty = v.value(StateSet::EMPTY);
    if empty.abs() > eps {
        issues.push(CapacityIssue::EmptySetNotZero { value: empty });
    }
    let full = v.value(StateSet::full(v.n));
    if (full - 1.0).abs() > eps {
        issues.push(CapacityIssue::FullSetNotOne { value: full });
    }
    for a in StateSet::all(v.n) {
        for s in (0..v.n).filter(|&s| !a.contains(s)) {
            let b = a.with(s);
            if v.value(a) > v.value(b) + eps {
                issues.push(CapacityIssue::Monotonicity {
                    subset: a,
                    superset: b,
                });
            }
        }
    }
    ValidationReport { issues }
}

/// A pair `(A, B)` with `v(A∪B) + v(A∩B) < v(A) + v(B) - eps`, if any.
///
/// Supermodularity is checked on the local pairs `(S∪{i}, S∪{j})`, which is
/// equivalent to the condition over all pairs.
pub fn convexity_violation(v: &Capacity, eps: f64) -> Option<(StateSet, StateSet)> {
    for s in StateSet::all(v.n) {
        for i in (0..v.n).filter(|&i| !s.contains(i)) {
            for j in (i + 1..v.n).filter(|&j| !s.contains(j)) {
                let a = s.with(i);
                let b = s.with(j);
                if v.value(a.union(b)) + v.value(s) < v.value(a) + v.value(b) - eps {
                    return Some((a, b));
                }
            }
        }
    }
    None
}

pub fn is_convex(v: &Capacity, eps: f64) -> bool {
    convexity_violation(v, eps).is_none()
}

/// True when `v(A) = Σ_{ω∈A} v({ω})` for every `A`.
pub fn is_additive(v: &Capacity, eps: f64) -> bool {
    StateSet::all(v.n).all(|a| {
        let sum: f64 = a.iter().map(|s| v.value(StateSet::singleton(s))).sum();
        (v.value(a) - sum).abs() <= eps
    })
}

/// States sorted by decreasing `f`, ties by index.
pub(crate) fn descending_order(f: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..f.len()).collect();
    order.sort_by(|&a, &b| f[b].total_cmp(&f[a]).then(a.cmp(&b)));
    order
}

/// Choquet integral of `f` with respect to `v`.
///
/// With distinct values `a_1 > … > a_k` this is
/// `a_k + Σ_{i<k} (a_i - a_{i+1})·v({f ≥ a_i})`; tied states enter the upper
/// set together.
pub fn choquet(f: &[f64], v: &Capacity) -> Result<f64, CapacityError> {
    if f.len() != v.n {
        return Err(CapacityError::LengthMismatch {
            expected: v.n,
            found: f.len(),
        });
    }
    let order = descending_order(f);
    let mut upper = StateSet::EMPTY;
    let mut total = 0.0;
    let mut k = 0;
    while k < order.len() {
        let level = f[order[k]];
        while k < order.len() && f[order[k]] == level {
            upper = upper.with(order[k]);
            k += 1;
        }
        let next = if k < order.len() { f[order[k]] } else { 0.0 };
        if k < order.len() {
            total += (level - next) * v.value(upper);
        } else {
            total += level;
        }
    }
    Ok(total)
}

/// True when `P(A) ≥ v(A) - eps` for every event.
pub fn core_contains(p: &ProbabilityVector, v: &Capacity, eps: f64) -> Result<bool, CapacityError> {
    if p.states() != v.n {
        return Err(CapacityError::LengthMismatch {
            expected: v.n,
            found: p.states(),
        });
    }
    Ok(StateSet::all(v.n).all(|a| p.measure(a) >= v.value(a) - eps))
}

/// Increments of `v` along `ordering`:
/// `p(π_i) = v({π_1..π_i}) - v({π_1..π_{i-1}})`.
pub fn marginal_vector(
    v: &Capacity,
    ordering: &[usize],
    eps: f64,
) -> Result<ProbabilityVector, CapacityError> {
    if ordering.len() != v.n {
        return Err(CapacityError::BadOrdering);
    }
    let mut seen = StateSet::EMPTY;
    let mut p = vec![0.0; v.n];
    for &s in ordering {
        if s >= v.n || seen.contains(s) {
            return Err(CapacityError::BadOrdering);
        }
        let next = seen.with(s);
        let mass = v.value(next) - v.value(seen);
        if mass < -eps {
            return Err(CapacityError::NegativeMass { state: s, mass });
        }
        p[s] = mass;
        seen = next;
    }
    Ok(ProbabilityVector::from_raw(p))
}

/// Marginal vectors over every ordering of the states, duplicates removed.
///
/// For a convex capacity these are the vertices of its core. There are `n!`
/// orderings; intended for small `n`.
pub fn marginal_vectors(v: &Capacity, eps: f64) -> Result<Vec<ProbabilityVector>, CapacityError> {
    let mut out: Vec<ProbabilityVector> = Vec::new();
    let mut perm: Vec<usize> = (0..v.n).collect();
    let mut err = None;
    permutations(&mut perm, 0, &mut |ordering| {
        if err.is_some() {
            return;
        }
        match marginal_vector(v, ordering, eps) {
            Ok(p) => {
                if !out.iter().any(|q| q.max_abs_diff(&p) <= eps) {
                    out.push(p);
                }
            }
            Err(e) => err = Some(e),
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

fn permutations(perm: &mut [usize], k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == perm.len() {
        visit(perm);
        return;
    }
    for i in k..perm.len() {
        perm.swap(k, i);
        permutations(perm, k + 1, visit);
        perm.swap(k, i);
    }
}

/// `v(A) = g(P(A))` for a distortion `g` with `g(0) = 0`, `g(1) = 1`, `g` non-decreasing.
///
/// Convex `g` gives a convex capacity.
pub fn capacity_from_distortion(
    p: &ProbabilityVector,
    g: impl Fn(f64) -> f64,
    eps: f64,
) -> Result<Capacity, CapacityError> {
    if g(0.0).abs() > eps || (g(1.0) - 1.0).abs() > eps {
        return Err(CapacityError::InvalidDistortion(
            "g(0) must be 0 and g(1) must be 1",
        ));
    }
    let n = p.states();
    let mut points: Vec<f64> = (0..=100).map(|k| k as f64 / 100.0).collect();
    points.extend(StateSet::all(n).map(|a| p.measure(a).clamp(0.0, 1.0)));
    points.sort_by(f64::total_cmp);
    let mut prev = g(points[0]);
    for &x in &points[1..] {
        let y = g(x);
        if !y.is_finite() || y < prev - eps {
            return Err(CapacityError::InvalidDistortion("g must be non-decreasing"));
        }
        prev = y;
    }
    Capacity::from_fn(n, |a| g(p.measure(a).clamp(0.0, 1.0)))
}

#[cfg(test)]
mod tests {
    use super::*;

    const EPS: f64 = crate::EPS;

    fn two_state(a: f64, ac: f64) -> Capacity {
        Capacity::from_table(2, vec![0.0, a, ac, 1.0]).unwrap()
    }

    #[test]
    fn uniform_probability_is_valid() {
        let v = ProbabilityVector::uniform(2).to_capacity();
        assert!(validate_capacity(&v, EPS).is_valid());
    }

    #[test]
    fn monotonicity_violation_reported() {
        // v({1}) = 0.5 > v({1,2}) = 0.4
        let v = Capacity::from_table(2, vec![0.0, 0.5, 0.2, 0.4]).unwrap();
        let r = validate_capacity(&v, EPS);
        assert!(r.issues.contains(&CapacityIssue::Monotonicity {
            subset: StateSet::singleton(0),
            superset: StateSet::full(2),
        }));
        assert!(r
            .issues
            .contains(&CapacityIssue::FullSetNotOne { value: 0.4 }));
        assert!(Capacity::new(2, vec![0.0, 0.5, 0.2, 0.4], EPS).is_err());
    }

    #[test]
    fn symmetric_sub_half_is_valid() {
        assert!(validate_capacity(&two_state(0.4, 0.4), EPS).is_valid());
    }

    #[test]
    fn table_size_checked() {
        assert!(matches!(
            Capacity::from_table(2, vec![0.0, 1.0]),
            Err(CapacityError::TableSize { .. })
        ));
    }

    #[test]
    fn convexity_examples() {
        assert!(is_convex(
            &ProbabilityVector::new(vec![0.2, 0.3, 0.5], EPS)
                .unwrap()
                .to_capacity(),
            EPS
        ));
        assert!(is_convex(&two_state(0.4, 0.4), EPS));
        assert_eq!(
            convexity_violation(&two_state(0.6, 0.6), EPS),
            Some((StateSet::singleton(0), StateSet::singleton(1)))
        );
    }

    #[test]
    fn additivity_examples() {
        let p = ProbabilityVector::new(vec![0.1, 0.6, 0.3], EPS).unwrap();
        assert!(is_additive(&p.to_capacity(), EPS));
        assert!(!is_additive(&two_state(0.4, 0.4), EPS));
        assert!(is_additive(&two_state(0.5, 0.5), EPS));
    }

    #[test]
    fn choquet_examples() {
        let v = two_state(0.3, 0.2);
        assert!((choquet(&[5.0, 1.0], &v).unwrap() - 2.2).abs() < 1e-12);
        assert!((choquet(&[3.5, 3.5], &v).unwrap() - 3.5).abs() < 1e-12);
        let p = ProbabilityVector::new(vec![0.1, 0.6, 0.3], EPS).unwrap();
        let f = [2.0, -1.0, 4.0];
        let expected = 0.2 - 0.6 + 1.2;
        assert!((choquet(&f, &p.to_capacity()).unwrap() - expected).abs() < 1e-12);
        assert!(choquet(&[1.0], &v).is_err());
    }

    #[test]
    fn core_membership() {
        let v = two_state(0.4, 0.4);
        let marg = marginal_vector(&v, &[0, 1], EPS).unwrap();
        assert!(core_contains(&marg, &v, EPS).unwrap());

        let p = ProbabilityVector::new(vec![0.3, 0.7], EPS).unwrap();
        let additive = p.to_capacity();
        assert!(core_contains(&p, &additive, EPS).unwrap());
        let other = ProbabilityVector::new(vec![0.31, 0.69], EPS).unwrap();
        assert!(!core_contains(&other, &additive, EPS).unwrap());

        let empty = two_state(0.6, 0.6);
        for k in 0..=100 {
            let x = k as f64 / 100.0;
            let q = ProbabilityVector::new(vec![x, 1.0 - x], EPS).unwrap();
            assert!(!core_contains(&q, &empty, EPS).unwrap());
        }
    }

    #[test]
    fn marginal_vector_examples() {
        let v = two_state(0.4, 0.4);
        assert_eq!(
            marginal_vector(&v, &[0, 1], EPS).unwrap().as_slice(),
            &[0.4, 0.6]
        );
        assert_eq!(
            marginal_vector(&v, &[1, 0], EPS).unwrap().as_slice(),
            &[0.6, 0.4]
        );
        let p = ProbabilityVector::new(vec![0.25, 0.75], EPS).unwrap();
        assert_eq!(marginal_vector(&p.to_capacity(), &[1, 0], EPS).unwrap(), p);
        // Not in the core, but increments of a monotone capacity are never negative.
        assert_eq!(
            marginal_vector(&two_state(0.6, 0.6), &[0, 1], EPS)
                .unwrap()
                .as_slice(),
            &[0.6, 0.4]
        );
        let raw = Capacity::from_table(2, vec![0.0, 0.5, 0.2, 0.4]).unwrap();
        assert!(matches!(
            marginal_vector(&raw, &[0, 1], EPS),
            Err(CapacityError::NegativeMass { state: 1, .. })
        ));
        assert_eq!(
            marginal_vector(&v, &[0, 0], EPS),
            Err(CapacityError::BadOrdering)
        );
    }

    #[test]
    fn all_marginal_vectors_of_convex_capacity() {
        let verts = marginal_vectors(&two_state(0.4, 0.4), EPS).unwrap();
        assert_eq!(verts.len(), 2);
        let p = ProbabilityVector::new(vec![0.2, 0.3, 0.5], EPS).unwrap();
        assert_eq!(marginal_vectors(&p.to_capacity(), EPS).unwrap().len(), 1);
    }

    #[test]
    fn distortion_examples() {
        let p = ProbabilityVector::uniform(2);
        let id = capacity_from_distortion(&p, |x| x, EPS).unwrap();
        assert!(is_additive(&id, EPS));
        let sq = capacity_from_distortion(&p, |x| x * x, EPS).unwrap();
        assert!((sq.value(StateSet::singleton(0)) - 0.25).abs() < 1e-15);
        assert!(is_convex(&sq, EPS));
        let root = capacity_from_distortion(&p, libm::sqrt, EPS).unwrap();
        assert!(!is_convex(&root, EPS));
        assert!(matches!(
            capacity_from_distortion(&p, |x| 1.0 - x, EPS),
            Err(CapacityError::InvalidDistortion(_))
        ));
        assert!(matches!(
            capacity_from_distortion(
                &p,
                |x| x + 0.3 * libm::sin(2.0 * core::f64::consts::PI * x),
                EPS
            ),
            Err(CapacityError::InvalidDistortion(_))
        ));
    }
}

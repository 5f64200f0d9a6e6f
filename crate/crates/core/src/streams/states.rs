use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use super::StreamError;

/// Largest supported state space. Capacities store one value per subset.
pub const MAX_STATES: usize = 16;

/// A set of states encoded as a bitmask over state indices.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct StateSet(u32);

impl StateSet {
    pub const EMPTY: StateSet = StateSet(0);

    pub const fn from_bits(bits: u32) -> Self {
        StateSet(bits)
    }

    pub const fn bits(self) -> u32 {
        self.0
    }

    pub const fn index(self) -> usize {
        self.0 as usize
    }

    /// The full state set `{0, …, n-1}`.
    pub const fn full(n: usize) -> Self {
        if n >= 32 {
            StateSet(u32::MAX)
        } else {
            StateSet((1u32 << n) - 1)
        }
    }

    pub const fn singleton(state: usize) -> Self {
        StateSet(1 << state)
    }

    pub fn from_states<I: IntoIterator<Item = usize>>(states: I) -> Self {
        states
            .into_iter()
            .fold(StateSet::EMPTY, |acc, s| acc.with(s))
    }

    pub const fn contains(self, state: usize) -> bool {
        self.0 & (1 << state) != 0
    }

    #[must_use]
    pub const fn with(self, state: usize) -> Self {
        StateSet(self.0 | (1 << state))
    }

    #[must_use]
    pub const fn without(self, state: usize) -> Self {
        StateSet(self.0 & !(1 << state))
    }

    #[must_use]
    pub const fn union(self, other: StateSet) -> Self {
        StateSet(self.0 | other.0)
    }

    #[must_use]
    pub const fn intersection(self, other: StateSet) -> Self {
        StateSet(self.0 & other.0)
    }

    #[must_use]
    pub const fn complement(self, n: usize) -> Self {
        StateSet(!self.0 & StateSet::full(n).0)
    }

    pub const fn is_subset(self, other: StateSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub const fn is_disjoint(self, other: StateSet) -> bool {
        self.0 & other.0 == 0
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Member states in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        core::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let s = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(s)
            }
        })
    }

    /// Every subset of `{0, …, n-1}`, in bitmask order.
    pub fn all(n: usize) -> impl Iterator<Item = StateSet> {
        (0..(1u32 << n)).map(StateSet)
    }
}

impl fmt::Debug for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for StateSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.len()))?;
        for s in self.iter() {
            seq.serialize_element(&s)?;
        }
        seq.end()
    }
}

/// A finite, labelled set of states of nature.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StateSpace {
    labels: Vec<String>,
}

impl StateSpace {
    pub fn new(labels: Vec<String>) -> Result<Self, StreamError> {
        if labels.is_empty() || labels.len() > MAX_STATES {
            return Err(StreamError::StateCount(labels.len()));
        }
        for (i, a) in labels.iter().enumerate() {
            if labels[..i].contains(a) {
                return Err(StreamError::DuplicateLabel(a.clone()));
            }
        }
        Ok(StateSpace { labels })
    }

    /// States labelled `s1, …, sn`.
    pub fn numbered(n: usize) -> Result<Self, StreamError> {
        Self::new((1..=n).map(|i| alloc::format!("s{i}")).collect())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn full(&self) -> StateSet {
        StateSet::full(self.len())
    }
}

/// A partition of the state space into nonempty, disjoint cells.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Partition {
    n: usize,
    cells: Vec<StateSet>,
}

impl Partition {
    pub fn new(n: usize, mut cells: Vec<StateSet>) -> Result<Self, StreamError> {
        let mut covered = StateSet::EMPTY;
        for &c in &cells {
            if c.is_empty() || !c.is_subset(StateSet::full(n)) || !c.is_disjoint(covered) {
                return Err(StreamError::InvalidPartition);
            }
            covered = covered.union(c);
        }
        if covered != StateSet::full(n) {
            return Err(StreamError::InvalidPartition);
        }
        cells.sort_by_key(|c| c.bits().trailing_zeros());
        Ok(Partition { n, cells })
    }

    /// `{Ω}`.
    pub fn trivial(n: usize) -> Self {
        Partition {
            n,
            cells: alloc::vec![StateSet::full(n)],
        }
    }

    /// Every state in its own cell.
    pub fn discrete(n: usize) -> Self {
        Partition {
            n,
            cells: (0..n).map(StateSet::singleton).collect(),
        }
    }

    pub fn states(&self) -> usize {
        self.n
    }

    pub fn cells(&self) -> &[StateSet] {
        &self.cells
    }

    pub fn cell_of(&self, state: usize) -> StateSet {
        self.cells
            .iter()
            .copied()
            .find(|c| c.contains(state))
            .expect("partition covers every state")
    }

    /// True when every cell of `self` lies inside a cell of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        self.n == coarser.n
            && self
                .cells
                .iter()
                .all(|c| coarser.cells.iter().any(|k| c.is_subset(*k)))
    }

    /// True when `values` is constant on every cell.
    pub fn measures(&self, values: &[f64]) -> bool {
        self.first_nonconstant_cell(values).is_none()
    }

    pub(crate) fn nonconstant_cells<'a>(
        &'a self,
        values: &'a [f64],
    ) -> impl Iterator<Item = StateSet> + 'a {
        self.cells.iter().copied().filter(move |cell| {
            let mut it = cell.iter().map(|s| values[s]);
            let first = it.next().unwrap_or(0.0);
            it.any(|x| x != first)
        })
    }

    pub fn first_nonconstant_cell(&self, values: &[f64]) -> Option<StateSet> {
        self.nonconstant_cells(values).next()
    }
}

/// An increasing sequence of partitions `F_0 ⊆ F_1 ⊆ … ⊆ F_T`, with `F_0` trivial.
///
/// Information after `T` is taken to stay at `F_T`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Filtration {
    partitions: Vec<Partition>,
}

impl Filtration {
    pub fn new(partitions: Vec<Partition>) -> Result<Self, StreamError> {
        let first = partitions.first().ok_or(StreamError::EmptyFiltration)?;
        if first.cells().len() != 1 {
            return Err(StreamError::NontrivialInitialInformation);
        }
        for (t, pair) in partitions.windows(2).enumerate() {
            if !pair[1].refines(&pair[0]) {
                return Err(StreamError::NotRefining(t + 1));
            }
        }
        Ok(Filtration { partitions })
    }

    /// `F_0` trivial and full information from period 1 on.
    pub fn standard(n: usize, horizon: usize) -> Self {
        let mut partitions = alloc::vec![Partition::trivial(n)];
        partitions.extend((0..horizon).map(|_| Partition::discrete(n)));
        Filtration { partitions }
    }

    /// Trivial information in every period; only deterministic payoffs are adapted.
    pub fn trivial(n: usize, horizon: usize) -> Self {
        Filtration {
            partitions: (0..=horizon).map(|_| Partition::trivial(n)).collect(),
        }
    }

    pub fn horizon(&self) -> usize {
        self.partitions.len() - 1
    }

    pub fn states(&self) -> usize {
        self.partitions[0].states()
    }

    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    /// Partition at date `t`; dates past the horizon reuse the last one.
    pub fn at(&self, t: usize) -> &Partition {
        &self.partitions[t.min(self.horizon())]
    }

    /// The same filtration cut or extended (repeating the finest partition) to `horizon`.
    pub fn fitted(&self, horizon: usize) -> Filtration {
        let partitions = (0..=horizon).map(|t| self.at(t).clone()).collect();
        Filtration { partitions }
    }
}

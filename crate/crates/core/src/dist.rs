//! Sparse joint probability mass functions over named finite-alphabet
//! variables.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::abs;

/// One symbol per variable, each in `0..alphabet_size`.
pub type State = Vec<u32>;

/// Allowed distance between the total probability mass and one.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

/// A variable's name together with its position in the distribution.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VariableId {
    pub name: String,
    pub index: usize,
}

/// Sorted, duplicate-free set of variable positions.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexSet(Vec<usize>);

impl IndexSet {
    /// Builds a set from arbitrary positions; order and repeats are ignored.
    pub fn new(members: impl IntoIterator<Item = usize>) -> Self {
        let mut v: Vec<usize> = members.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        IndexSet(v)
    }

    pub fn empty() -> Self {
        IndexSet(Vec::new())
    }

    pub fn singleton(i: usize) -> Self {
        IndexSet(alloc::vec![i])
    }

    /// `{0, 1, ..., n - 1}`.
    pub fn range(n: usize) -> Self {
        IndexSet((0..n).collect())
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn union(&self, other: &IndexSet) -> IndexSet {
        IndexSet::new(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn difference(&self, other: &IndexSet) -> IndexSet {
        IndexSet(self.0.iter().copied().filter(|&i| !other.contains(i)).collect())
    }

    pub fn without(&self, i: usize) -> IndexSet {
        IndexSet(self.0.iter().copied().filter(|&j| j != i).collect())
    }

    pub fn is_disjoint(&self, other: &IndexSet) -> bool {
        self.0.iter().all(|&i| !other.contains(i))
    }

    pub fn is_subset(&self, other: &IndexSet) -> bool {
        self.0.iter().all(|&i| other.contains(i))
    }

    /// Members selected by the bits of `mask` (bit `k` picks the `k`-th member).
    pub fn select(&self, mask: u64) -> IndexSet {
        IndexSet(
            self.0
                .iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .map(|(_, &i)| i)
                .collect(),
        )
    }
}

impl FromIterator<usize> for IndexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        IndexSet::new(iter)
    }
}

/// Joint pmf over `N` variables. Only states with positive probability are
/// stored; an absent state has probability zero.
///
/// Construction validates the input and the value is immutable afterwards,
/// so every derived distribution is valid as well.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteDistribution {
    names: Vec<String>,
    alphabets: Vec<u32>,
    pmf: BTreeMap<State, f64>,
}

impl DiscreteDistribution {
    /// Validates and builds a distribution. Zero-probability entries are
    /// dropped; repeated states are rejected.
    pub fn new<N, A, E>(names: N, alphabets: A, entries: E) -> Result<Self>
    where
        N: IntoIterator,
        N::Item: Into<String>,
        A: IntoIterator<Item = u32>,
        E: IntoIterator<Item = (State, f64)>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let alphabets: Vec<u32> = alphabets.into_iter().collect();
        if names.len() != alphabets.len() {
            return Err(Error::MalformedState(format!(
                "{} variable names but {} alphabet sizes",
                names.len(),
                alphabets.len()
            )));
        }
        if names.is_empty() {
            return Err(Error::MalformedState("distribution has no variables".into()));
        }
        for (i, name) in names.iter().enumerate() {
            if names[..i].contains(name) {
                return Err(Error::DuplicateVariable(name.clone()));
            }
        }
        if let Some(pos) = alphabets.iter().position(|&a| a == 0) {
            return Err(Error::MalformedState(format!(
                "variable `{}` has an empty alphabet",
                names[pos]
            )));
        }

        let mut pmf = BTreeMap::new();
        for (state, p) in entries {
            check_state(&state, &alphabets)?;
            if !p.is_finite() {
                return Err(Error::MalformedState(format!(
                    "non-finite probability for state {}",
                    fmt_state(&state)
                )));
            }
            if p < 0.0 {
                return Err(Error::NegativeProbability { state: fmt_state(&state), p });
            }
            if pmf.contains_key(&state) {
                return Err(Error::MalformedState(format!(
                    "state {} listed twice",
                    fmt_state(&state)
                )));
            }
            if p > 0.0 {
                pmf.insert(state, p);
            }
        }
        let d = DiscreteDistribution { names, alphabets, pmf };
        d.validate()?;
        Ok(d)
    }

    /// Re-checks every invariant: non-negative entries, well-formed states and
    /// total mass within [`NORMALIZATION_TOLERANCE`] of one.
    pub fn validate(&self) -> Result<()> {
        for (state, &p) in &self.pmf {
            check_state(state, &self.alphabets)?;
            if p < 0.0 {
                return Err(Error::NegativeProbability { state: fmt_state(state), p });
            }
        }
        let sum: f64 = self.pmf.values().sum();
        if abs(sum - 1.0) > NORMALIZATION_TOLERANCE {
            return Err(Error::NotNormalized { sum, deficit: 1.0 - sum });
        }
        Ok(())
    }

    pub fn num_variables(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn alphabets(&self) -> &[u32] {
        &self.alphabets
    }

    pub fn all(&self) -> IndexSet {
        IndexSet::range(self.names.len())
    }

    pub fn variable(&self, index: usize) -> Option<VariableId> {
        self.names.get(index).map(|n| VariableId { name: n.clone(), index })
    }

    pub fn find(&self, name: &str) -> Option<VariableId> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|index| VariableId { name: name.to_string(), index })
    }

    /// Support states and their probabilities, in lexicographic state order.
    pub fn iter(&self) -> impl Iterator<Item = (&State, f64)> + '_ {
        self.pmf.iter().map(|(s, &p)| (s, p))
    }

    pub fn support_len(&self) -> usize {
        self.pmf.len()
    }

    pub fn prob(&self, state: &[u32]) -> f64 {
        self.pmf.get(state).copied().unwrap_or(0.0)
    }

    pub(crate) fn check_set(&self, set: &IndexSet) -> Result<()> {
        match set.members().iter().find(|&&i| i >= self.names.len()) {
            Some(i) => Err(Error::UnknownVariable(format!("#{i}"))),
            None => Ok(()),
        }
    }

    /// Marginal pmf with keys ordered as `order` (which need not be sorted).
    /// An empty `order` yields the single empty state with mass one.
    pub(crate) fn project(&self, order: &[usize]) -> BTreeMap<State, f64> {
        let mut out: BTreeMap<State, f64> = BTreeMap::new();
        for (state, &p) in &self.pmf {
            let key: State = order.iter().map(|&i| state[i]).collect();
            *out.entry(key).or_insert(0.0) += p;
        }
        out
    }

    /// Sums out every variable not in `keep`.
    pub fn marginalize(&self, keep: &IndexSet) -> Result<Self> {
        if keep.is_empty() {
            return Err(Error::EmptyKeepSet);
        }
        self.check_set(keep)?;
        let order = keep.members();
        Ok(DiscreteDistribution {
            names: order.iter().map(|&i| self.names[i].clone()).collect(),
            alphabets: order.iter().map(|&i| self.alphabets[i]).collect(),
            pmf: self.project(order),
        })
    }

    /// `p(rest | on = state)` over the remaining variables in their original
    /// order. `state` lists one symbol per member of `on`, in set order.
    pub fn condition(&self, on: &IndexSet, state: &[u32]) -> Result<Self> {
        self.check_set(on)?;
        if state.len() != on.len() {
            return Err(Error::MalformedState(format!(
                "conditioning state has {} symbols for {} variables",
                state.len(),
                on.len()
            )));
        }
        if on.is_empty() {
            return Ok(self.clone());
        }
        let rest = self.all().difference(on);
        if rest.is_empty() {
            return Err(Error::EmptyKeepSet);
        }
        let matches = |s: &State| on.members().iter().zip(state).all(|(&i, &v)| s[i] == v);
        let mass: f64 = self.pmf.iter().filter(|(s, _)| matches(s)).map(|(_, &p)| p).sum();
        if mass <= 0.0 {
            return Err(Error::ZeroProbabilityCondition);
        }
        let mut pmf = BTreeMap::new();
        for (s, &p) in self.pmf.iter().filter(|(s, _)| matches(s)) {
            let key: State = rest.members().iter().map(|&i| s[i]).collect();
            *pmf.entry(key).or_insert(0.0) += p / mass;
        }
        Ok(DiscreteDistribution {
            names: rest.members().iter().map(|&i| self.names[i].clone()).collect(),
            alphabets: rest.members().iter().map(|&i| self.alphabets[i]).collect(),
            pmf,
        })
    }

    /// Collapses each block into one composite variable whose symbol is the
    /// mixed-radix code of its members (first member most significant).
    /// Variables outside every block are summed out.
    pub fn group(&self, blocks: &[IndexSet]) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::EmptyKeepSet);
        }
        for (k, b) in blocks.iter().enumerate() {
            if b.is_empty() {
                return Err(Error::EmptyBlock);
            }
            self.check_set(b)?;
            if blocks[..k].iter().any(|other| !other.is_disjoint(b)) {
                return Err(Error::OverlappingBlocks);
            }
        }
        let mut names = Vec::with_capacity(blocks.len());
        let mut alphabets = Vec::with_capacity(blocks.len());
        for b in blocks {
            let mut size: u32 = 1;
            for &i in b.members() {
                size = size.checked_mul(self.alphabets[i]).ok_or_else(|| {
                    Error::MalformedState("composite alphabet overflows u32".into())
                })?;
            }
            alphabets.push(size);
            let parts: Vec<&str> = b.members().iter().map(|&i| self.names[i].as_str()).collect();
            names.push(parts.join(","));
        }
        let mut pmf: BTreeMap<State, f64> = BTreeMap::new();
        for (s, &p) in &self.pmf {
            let key: State = blocks
                .iter()
                .map(|b| b.members().iter().fold(0u32, |acc, &i| acc * self.alphabets[i] + s[i]))
                .collect();
            *pmf.entry(key).or_insert(0.0) += p;
        }
        Ok(DiscreteDistribution { names, alphabets, pmf })
    }
}

fn check_state(state: &[u32], alphabets: &[u32]) -> Result<()> {
    if state.len() != alphabets.len() {
        return Err(Error::MalformedState(format!(
            "state {} has {} symbols, expected {}",
            fmt_state(state),
            state.len(),
            alphabets.len()
        )));
    }
    if let Some(k) = state.iter().zip(alphabets).position(|(s, a)| s >= a) {
        return Err(Error::MalformedState(format!(
            "symbol {} of state {} is outside alphabet of size {}",
            state[k],
            fmt_state(state),
            alphabets[k]
        )));
    }
    Ok(())
}

pub(crate) fn fmt_state(state: &[u32]) -> String {
    let parts: Vec<String> = state.iter().map(|s| s.to_string()).collect();
    format!("({})", parts.join(","))
}

/// Source set `S` and target `Y` within one distribution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SourceTargetSplit {
    sources: IndexSet,
    target: usize,
}

impl SourceTargetSplit {
    pub fn new(d: &DiscreteDistribution, sources: IndexSet, target: usize) -> Result<Self> {
        if sources.is_empty() {
            return Err(Error::InvalidSplit("no source variables".into()));
        }
        if target >= d.num_variables() {
            return Err(Error::InvalidSplit(format!("target #{target} does not exist")));
        }
        if let Some(&i) = sources.members().iter().find(|&&i| i >= d.num_variables()) {
            return Err(Error::InvalidSplit(format!("source #{i} does not exist")));
        }
        if sources.contains(target) {
            return Err(Error::InvalidSplit(format!(
                "target `{}` is also a source",
                d.names()[target]
            )));
        }
        Ok(SourceTargetSplit { sources, target })
    }

    /// Resolves variable names against `d`.
    pub fn by_names(d: &DiscreteDistribution, sources: &[&str], target: &str) -> Result<Self> {
        let lookup = |n: &str| {
            d.find(n)
                .map(|v| v.index)
                .ok_or_else(|| Error::InvalidSplit(format!("no variable named `{n}`")))
        };
        let mut idx = Vec::with_capacity(sources.len());
        for s in sources {
            let i = lookup(s)?;
            if idx.contains(&i) {
                return Err(Error::InvalidSplit(format!("source `{s}` listed twice")));
            }
            idx.push(i);
        }
        SourceTargetSplit::new(d, IndexSet::new(idx), lookup(target)?)
    }

    pub fn sources(&self) -> &IndexSet {
        &self.sources
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn target_set(&self) -> IndexSet {
        IndexSet::singleton(self.target)
    }

    /// Sources together with the target.
    pub fn all(&self) -> IndexSet {
        self.sources.union(&self.target_set())
    }
}

//! Entropy-based information measures. Every function returns bits.
//!
//! Zero-probability terms contribute nothing (`0 log 0 = 0`) and conditional
//! terms whose conditioning event has zero probability are skipped. Measures
//! that are non-negative in theory are floored at zero when floating-point
//! cancellation leaves them within `1e-12` below it.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use crate::dist::{DiscreteDistribution, IndexSet, SourceTargetSplit, State};
use crate::error::{Error, Result};
use crate::math::{clamp_nonneg, log2, plogp};

/// Largest variable set accepted by the subset expansions.
pub const MAX_EXPANSION_VARS: usize = 20;

fn nonempty(d: &DiscreteDistribution, set: &IndexSet) -> Result<()> {
    if set.is_empty() {
        return Err(Error::EmptyKeepSet);
    }
    d.check_set(set)
}

fn disjoint(a: &IndexSet, b: &IndexSet) -> Result<()> {
    if a.is_disjoint(b) {
        Ok(())
    } else {
        Err(Error::OverlappingSets)
    }
}

fn arity(d: &DiscreteDistribution, vars: &IndexSet, measure: &'static str) -> Result<()> {
    d.check_set(vars)?;
    if vars.len() < 2 || vars.len() > MAX_EXPANSION_VARS {
        return Err(Error::InvalidArity { measure, got: vars.len() });
    }
    Ok(())
}

/// Joint entropy of the given positions; no precondition checks.
pub(crate) fn h(d: &DiscreteDistribution, order: &[usize]) -> f64 {
    if order.is_empty() {
        return 0.0;
    }
    d.project(order).values().map(|&p| plogp(p)).sum()
}

/// `H(over)`.
pub fn entropy(d: &DiscreteDistribution, over: &IndexSet) -> Result<f64> {
    nonempty(d, over)?;
    Ok(clamp_nonneg(h(d, over.members())))
}

/// `H(of | given) = Σ_g p(g) H(of | g)`, summed directly over the joint of
/// `of` and `given`.
pub fn conditional_entropy(d: &DiscreteDistribution, of: &IndexSet, given: &IndexSet) -> Result<f64> {
    nonempty(d, of)?;
    d.check_set(given)?;
    disjoint(of, given)?;
    let order: Vec<usize> = given.members().iter().chain(of.members()).copied().collect();
    let joint = d.project(&order);
    let pg = d.project(given.members());
    let k = given.len();
    let mut acc = 0.0;
    for (s, &p) in &joint {
        let g = pg[&s[..k]];
        acc += p * log2(g / p);
    }
    Ok(clamp_nonneg(acc))
}

/// `I(a; b) = H(a) + H(b) − H(a, b)`. Multi-member sets are treated as single
/// vector-valued variables.
pub fn mutual_information(d: &DiscreteDistribution, a: &IndexSet, b: &IndexSet) -> Result<f64> {
    nonempty(d, a)?;
    nonempty(d, b)?;
    disjoint(a, b)?;
    let ab = a.union(b);
    Ok(clamp_nonneg(h(d, a.members()) + h(d, b.members()) - h(d, ab.members())))
}

/// `I(a; b | given) = Σ p(a,b,g) log[p(g) p(a,b,g) / (p(a,g) p(b,g))]`.
pub fn conditional_mutual_information(
    d: &DiscreteDistribution,
    a: &IndexSet,
    b: &IndexSet,
    given: &IndexSet,
) -> Result<f64> {
    nonempty(d, a)?;
    nonempty(d, b)?;
    d.check_set(given)?;
    disjoint(a, b)?;
    disjoint(a, given)?;
    disjoint(b, given)?;
    let (na, nb, ng) = (a.len(), b.len(), given.len());
    let order: Vec<usize> = given
        .members()
        .iter()
        .chain(a.members())
        .chain(b.members())
        .copied()
        .collect();
    let joint = d.project(&order);
    let pg = d.project(given.members());
    let ga: Vec<usize> = order[..ng + na].to_vec();
    let pga = d.project(&ga);
    let gb: Vec<usize> = given.members().iter().chain(b.members()).copied().collect();
    let pgb = d.project(&gb);
    let mut acc = 0.0;
    let mut key_gb: State = Vec::with_capacity(ng + nb);
    for (s, &p) in &joint {
        key_gb.clear();
        key_gb.extend_from_slice(&s[..ng]);
        key_gb.extend_from_slice(&s[ng + na..]);
        let num = pg[&s[..ng]] * p;
        let den = pga[&s[..ng + na]] * pgb[&key_gb[..]];
        acc += p * log2(num / den);
    }
    Ok(clamp_nonneg(acc))
}

/// Alternating-sign entropy expansion over all non-empty subsets `T` of
/// `vars`: `II(S) = −Σ_T (−1)^{|S|−|T|} H(T)`. Positive and negative values
/// are both meaningful.
pub fn interaction_information(d: &DiscreteDistribution, vars: &IndexSet) -> Result<f64> {
    arity(d, vars, "interaction information")?;
    let n = vars.len();
    let mut acc = 0.0;
    for mask in 1u64..(1 << n) {
        let t = vars.select(mask);
        let sign = if (n - t.len()).is_multiple_of(2) { -1.0 } else { 1.0 };
        acc += sign * h(d, t.members());
    }
    Ok(acc)
}

/// `CI(S) = (−1)^{|S|} II(S)`.
pub fn co_information(d: &DiscreteDistribution, vars: &IndexSet) -> Result<f64> {
    let ii = interaction_information(d, vars)?;
    Ok(if vars.len().is_multiple_of(2) { ii } else { -ii })
}

/// `TC(S) = Σ_i H(X_i) − H(S)`.
pub fn total_correlation(d: &DiscreteDistribution, vars: &IndexSet) -> Result<f64> {
    arity(d, vars, "total correlation")?;
    let singles: f64 = vars.members().iter().map(|&i| h(d, &[i])).sum();
    Ok(clamp_nonneg(singles - h(d, vars.members())))
}

/// `DTC(S) = Σ_i H(S ∖ X_i) − (n − 1) H(S)`.
pub fn dual_total_correlation(d: &DiscreteDistribution, vars: &IndexSet) -> Result<f64> {
    arity(d, vars, "dual total correlation")?;
    let n = vars.len() as f64;
    let leave_one_out: f64 = vars
        .members()
        .iter()
        .map(|&i| h(d, vars.without(i).members()))
        .sum();
    Ok(clamp_nonneg(leave_one_out - (n - 1.0) * h(d, vars.members())))
}

/// The conditionally independent model of the sources given the target:
/// `p_ind(x⃗|y) = Π_i p(x_i|y)`, its mixture `p_ind(x⃗)` and the Bayes
/// posterior `p_ind(y|x⃗)`.
///
/// Source states are keyed in split order; only source states with
/// `p(x⃗) > 0` are represented.
#[derive(Clone, Debug)]
pub struct IndependentModel {
    /// `p(y)` for target states with positive probability.
    target: BTreeMap<u32, f64>,
    /// `p(x⃗)` from the data.
    sources: BTreeMap<State, f64>,
    /// `p(x⃗, y)` from the data, key = `x⃗ ++ [y]`.
    joint: BTreeMap<State, f64>,
    /// `p_ind(x⃗|y)`, key = `x⃗ ++ [y]`, every supported `x⃗` and `y`.
    likelihood: BTreeMap<State, f64>,
    /// `p_ind(x⃗)`.
    evidence: BTreeMap<State, f64>,
}

impl IndependentModel {
    pub fn new(d: &DiscreteDistribution, split: &SourceTargetSplit) -> Result<Self> {
        let t = split.target();
        let srcs = split.sources().members();
        let target: BTreeMap<u32, f64> =
            d.project(&[t]).into_iter().map(|(s, p)| (s[0], p)).collect();
        if target.is_empty() {
            return Err(Error::ZeroProbabilityTarget);
        }
        let per_source: Vec<BTreeMap<State, f64>> =
            srcs.iter().map(|&i| d.project(&[i, t])).collect();
        let sources = d.project(srcs);
        let order: Vec<usize> = srcs.iter().copied().chain([t]).collect();
        let joint = d.project(&order);

        let mut likelihood = BTreeMap::new();
        let mut evidence = BTreeMap::new();
        for x in sources.keys() {
            let mut mix = 0.0;
            for (&y, &py) in &target {
                let mut prod = 1.0;
                for (k, m) in per_source.iter().enumerate() {
                    prod *= m.get(&[x[k], y][..]).copied().unwrap_or(0.0) / py;
                }
                let mut key = x.clone();
                key.push(y);
                likelihood.insert(key, prod);
                mix += prod * py;
            }
            if !(mix > 0.0) {
                return Err(Error::InternalInconsistency(format!(
                    "independent model assigns zero probability to observed source state {}",
                    crate::dist::fmt_state(x)
                )));
            }
            evidence.insert(x.clone(), mix);
        }
        Ok(IndependentModel { target, sources, joint, likelihood, evidence })
    }

    /// `p_ind(x⃗|y)`; zero for unsupported states.
    pub fn likelihood(&self, x: &[u32], y: u32) -> f64 {
        let mut key: State = x.to_vec();
        key.push(y);
        self.likelihood.get(&key).copied().unwrap_or(0.0)
    }

    /// `p_ind(x⃗)`.
    pub fn evidence(&self, x: &[u32]) -> f64 {
        self.evidence.get(x).copied().unwrap_or(0.0)
    }

    /// `p_ind(y|x⃗)`; `None` when `x⃗` never occurs.
    pub fn posterior(&self, x: &[u32], y: u32) -> Option<f64> {
        let ev = *self.evidence.get(x)?;
        let py = self.target.get(&y).copied().unwrap_or(0.0);
        Some(self.likelihood(x, y) * py / ev)
    }

    /// Observed `p(y|x⃗)`; `None` when `x⃗` never occurs.
    pub fn observed_posterior(&self, x: &[u32], y: u32) -> Option<f64> {
        let px = *self.sources.get(x)?;
        let mut key: State = x.to_vec();
        key.push(y);
        Some(self.joint.get(&key).copied().unwrap_or(0.0) / px)
    }

    /// Observed source states.
    pub fn source_states(&self) -> impl Iterator<Item = &State> + '_ {
        self.sources.keys()
    }

    /// Target symbols with positive probability.
    pub fn target_states(&self) -> impl Iterator<Item = u32> + '_ {
        self.target.keys().copied()
    }

    fn delta_i(&self) -> Result<f64> {
        let mut acc = 0.0;
        for (key, &pxy) in &self.joint {
            let (x, y) = key.split_at(key.len() - 1);
            let observed = pxy / self.sources[x];
            let model = self.posterior(x, y[0]).unwrap_or(0.0);
            if !(model > 0.0) {
                return Err(Error::InternalInconsistency(format!(
                    "independent posterior vanishes on observed state {}",
                    crate::dist::fmt_state(key)
                )));
            }
            acc += pxy * log2(observed / model);
        }
        Ok(clamp_nonneg(acc))
    }

    fn gap(&self) -> Result<f64> {
        let mut acc = 0.0;
        for (key, &pxy) in &self.joint {
            let lik = self.likelihood.get(key).copied().unwrap_or(0.0);
            if !(lik > 0.0) {
                return Err(Error::InternalInconsistency(format!(
                    "independent likelihood vanishes on observed state {}",
                    crate::dist::fmt_state(key)
                )));
            }
            acc += pxy * log2(lik / self.evidence[&key[..key.len() - 1]]);
        }
        Ok(acc)
    }
}

/// ΔI: expected KL divergence between the observed posterior `p(y|x⃗)` and
/// the posterior of the conditionally independent model. Never negative,
/// and may exceed `I(S;Y)`.
pub fn delta_i(d: &DiscreteDistribution, split: &SourceTargetSplit) -> Result<f64> {
    IndependentModel::new(d, split)?.delta_i()
}

/// `I(S;Y) − ΔI(S;Y)`, evaluated directly as
/// `Σ p(x⃗,y) log[p_ind(x⃗|y) / p_ind(x⃗)]`. Either sign is possible.
pub fn mi_delta_gap(d: &DiscreteDistribution, split: &SourceTargetSplit) -> Result<f64> {
    IndependentModel::new(d, split)?.gap()
}

/// `I(S;Y)` for a split.
pub fn split_mutual_information(d: &DiscreteDistribution, split: &SourceTargetSplit) -> Result<f64> {
    mutual_information(d, split.sources(), &split.target_set())
}

fn at_least_two_sources(split: &SourceTargetSplit, measure: &'static str) -> Result<()> {
    if split.sources().len() < 2 {
        return Err(Error::InvalidArity { measure, got: split.sources().len() });
    }
    Ok(())
}

/// RSI: `I(S;Y) − Σ_i I(X_i;Y)`.
pub fn redundancy_synergy_index(d: &DiscreteDistribution, split: &SourceTargetSplit) -> Result<f64> {
    at_least_two_sources(split, "redundancy-synergy index")?;
    let y = split.target_set();
    let mut singles = 0.0;
    for &i in split.sources().members() {
        singles += mutual_information(d, &IndexSet::singleton(i), &y)?;
    }
    Ok(split_mutual_information(d, split)? - singles)
}

/// Every partition of `{0, .., n-1}` into `min_blocks` or more non-empty
/// blocks, each block a bitmask. Generated from restricted growth strings.
pub fn set_partitions(n: usize, min_blocks: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    if n == 0 || n > 16 {
        return out;
    }
    let mut rgs = alloc::vec![0usize; n];
    loop {
        let blocks = rgs.iter().max().map_or(0, |m| m + 1);
        if blocks >= min_blocks {
            let mut masks = alloc::vec![0u64; blocks];
            for (elem, &b) in rgs.iter().enumerate() {
                masks[b] |= 1 << elem;
            }
            out.push(masks);
        }
        // next restricted growth string: rgs[i] <= 1 + max(rgs[..i])
        let mut i = n - 1;
        loop {
            if i == 0 {
                return out;
            }
            let prefix_max = rgs[..i].iter().copied().max().unwrap_or(0);
            if rgs[i] <= prefix_max {
                rgs[i] += 1;
                for r in rgs[i + 1..].iter_mut() {
                    *r = 0;
                }
                break;
            }
            i -= 1;
        }
    }
}

/// Varadan's synergy: `I(S;Y)` minus the best sum `Σ_j I(S_j;Y)` over all
/// partitions of `S` into at least two blocks.
pub fn varadan_synergy(d: &DiscreteDistribution, split: &SourceTargetSplit) -> Result<f64> {
    at_least_two_sources(split, "Varadan's synergy")?;
    let y = split.target_set();
    let srcs = split.sources();
    // cache I(block;Y) per block mask
    let mut block_mi: BTreeMap<u64, f64> = BTreeMap::new();
    let mut best = f64::NEG_INFINITY;
    for partition in set_partitions(srcs.len(), 2) {
        let mut total = 0.0;
        for mask in partition {
            let v = match block_mi.get(&mask) {
                Some(&v) => v,
                None => {
                    let v = mutual_information(d, &srcs.select(mask), &y)?;
                    block_mi.insert(mask, v);
                    v
                }
            };
            total += v;
        }
        if total > best {
            best = total;
        }
    }
    Ok(split_mutual_information(d, split)? - best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems;

    fn s(i: usize) -> IndexSet {
        IndexSet::singleton(i)
    }

    fn split2(d: &DiscreteDistribution) -> SourceTargetSplit {
        SourceTargetSplit::new(d, IndexSet::new([0, 1]), 2).unwrap()
    }

    fn coin() -> DiscreteDistribution {
        DiscreteDistribution::new(["C"], [2], [(alloc::vec![0], 0.5), (alloc::vec![1], 0.5)]).unwrap()
    }

    /// Two independent biased bits.
    fn independent_pair() -> DiscreteDistribution {
        let (pa, pb) = (0.3, 0.8);
        let e = (0..4u32).map(|k| {
            let (a, b) = (k & 1, k >> 1);
            let p = if a == 1 { pa } else { 1.0 - pa } * if b == 1 { pb } else { 1.0 - pb };
            (alloc::vec![a, b], p)
        });
        DiscreteDistribution::new(["A", "B"], [2, 2], e).unwrap()
    }

    fn independent_triple() -> DiscreteDistribution {
        let ps = [0.3, 0.6, 0.9];
        let e = (0..8u32).map(|k| {
            let st: Vec<u32> = (0..3).map(|i| k >> i & 1).collect();
            let p: f64 = st.iter().zip(ps).map(|(&v, q)| if v == 1 { q } else { 1.0 - q }).product();
            (st, p)
        });
        DiscreteDistribution::new(["A", "B", "C"], [2, 2, 2], e).unwrap()
    }

    #[test]
    fn entropy_examples() {
        assert!((entropy(&coin(), &s(0)).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(entropy(&systems::constant_target(), &s(2)).unwrap(), 0.0);
        let expected = -(0.75 * libm::log2(0.75) + 0.25 * libm::log2(0.25));
        assert!((entropy(&systems::and(), &s(2)).unwrap() - expected).abs() < 1e-15);
        assert_eq!(entropy(&coin(), &IndexSet::empty()), Err(Error::EmptyKeepSet));
    }

    #[test]
    fn conditional_entropy_examples() {
        let xor = systems::xor();
        assert_eq!(conditional_entropy(&xor, &s(2), &IndexSet::new([0, 1])).unwrap(), 0.0);
        let ind = independent_pair();
        let hy = entropy(&ind, &s(1)).unwrap();
        assert!((conditional_entropy(&ind, &s(1), &s(0)).unwrap() - hy).abs() < 1e-12);
        assert!((conditional_entropy(&systems::and(), &s(2), &s(0)).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(conditional_entropy(&ind, &s(1), &s(1)), Err(Error::OverlappingSets));
    }

    #[test]
    fn mutual_information_examples() {
        let and = systems::and();
        assert!((mutual_information(&and, &s(0), &s(2)).unwrap() - 0.311).abs() < 5e-4);
        let xor = systems::xor();
        assert!(mutual_information(&xor, &s(0), &s(2)).unwrap().abs() < 1e-15);
        assert!((mutual_information(&xor, &IndexSet::new([0, 1]), &s(2)).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn conditional_mutual_information_examples() {
        let xor = systems::xor();
        assert!((conditional_mutual_information(&xor, &s(0), &s(1), &s(2)).unwrap() - 1.0).abs() < 1e-15);
        let and = systems::and();
        let cmi = conditional_mutual_information(&and, &s(0), &s(2), &IndexSet::empty()).unwrap();
        let mi = mutual_information(&and, &s(0), &s(2)).unwrap();
        assert!((cmi - mi).abs() < 1e-15);
        let ind = independent_triple();
        assert!(conditional_mutual_information(&ind, &s(0), &s(1), &s(2)).unwrap() < 1e-12);
    }

    #[test]
    fn interaction_information_examples() {
        let all3 = IndexSet::range(3);
        assert!((interaction_information(&systems::and(), &all3).unwrap() - 0.189).abs() < 5e-4);
        let ex4 = interaction_information(&systems::correlated_sources(), &all3).unwrap();
        assert!((ex4 + 0.0323).abs() < 5e-5);
        let ii4 = interaction_information(&systems::xor12(), &IndexSet::range(4)).unwrap();
        assert!(ii4.abs() < 1e-12);
        assert!(matches!(
            interaction_information(&systems::and(), &s(0)),
            Err(Error::InvalidArity { .. })
        ));
    }

    #[test]
    fn co_information_sign() {
        let and = systems::and();
        let all3 = IndexSet::range(3);
        let ii = interaction_information(&and, &all3).unwrap();
        assert_eq!(co_information(&and, &all3).unwrap(), -ii);
        let x = systems::xor3();
        let all4 = IndexSet::range(4);
        assert_eq!(co_information(&x, &all4).unwrap(), interaction_information(&x, &all4).unwrap());
        assert!((co_information(&and, &all3).unwrap() + 0.189).abs() < 5e-4);
    }

    #[test]
    fn total_correlation_examples() {
        let all3 = IndexSet::range(3);
        assert!((total_correlation(&systems::correlated_sources(), &all3).unwrap() - 0.9136).abs() < 5e-5);
        assert!((total_correlation(&systems::constant_target(), &all3).unwrap() - 1.0).abs() < 1e-15);
        assert!(total_correlation(&independent_triple(), &all3).unwrap() < 1e-12);
    }

    #[test]
    fn dual_total_correlation_examples() {
        assert!((dual_total_correlation(&systems::xor(), &IndexSet::range(3)).unwrap() - 2.0).abs() < 1e-12);
        assert!((dual_total_correlation(&systems::xor3(), &IndexSet::range(4)).unwrap() - 3.0).abs() < 1e-12);
        let ex4 = dual_total_correlation(&systems::correlated_sources(), &IndexSet::range(3)).unwrap();
        assert!((ex4 - 0.8813).abs() < 5e-5);
    }

    #[test]
    fn delta_i_examples() {
        let and = systems::and();
        assert!((delta_i(&and, &split2(&and)).unwrap() - 0.104).abs() < 5e-4);
        let ex4 = systems::correlated_sources();
        let di = delta_i(&ex4, &split2(&ex4)).unwrap();
        let mi = split_mutual_information(&ex4, &split2(&ex4)).unwrap();
        assert!((di - 0.0337).abs() < 5e-5);
        assert!(di > mi);
        let ind = independent_triple();
        assert!(delta_i(&ind, &split2(&ind)).unwrap() < 1e-12);
    }

    #[test]
    fn and_independent_posterior() {
        let and = systems::and();
        let m = IndependentModel::new(&and, &split2(&and)).unwrap();
        assert!((m.posterior(&[1, 1], 1).unwrap() - 0.75).abs() < 1e-12);
        assert!((m.posterior(&[1, 1], 0).unwrap() - 0.25).abs() < 1e-12);
        assert_eq!(m.posterior(&[0, 1], 1).unwrap(), 0.0);
        assert_eq!(m.observed_posterior(&[1, 1], 1).unwrap(), 1.0);
    }

    #[test]
    fn gap_examples() {
        let and = systems::and();
        let sp = split2(&and);
        let gap = mi_delta_gap(&and, &sp).unwrap();
        let diff = split_mutual_information(&and, &sp).unwrap() - delta_i(&and, &sp).unwrap();
        assert!((gap - diff).abs() < 1e-10);
        assert!((gap - 0.707).abs() < 1e-3);
        let ex4 = systems::correlated_sources();
        let g4 = mi_delta_gap(&ex4, &split2(&ex4)).unwrap();
        assert!((g4 + 0.0014).abs() < 1e-4);
        let ind = independent_triple();
        let gi = mi_delta_gap(&ind, &split2(&ind)).unwrap();
        assert!((gi - split_mutual_information(&ind, &split2(&ind)).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn rsi_examples() {
        let x = systems::xor12();
        let sp = SourceTargetSplit::new(&x, IndexSet::range(3), 3).unwrap();
        assert!((redundancy_synergy_index(&x, &sp).unwrap() - 1.0).abs() < 1e-12);
        let and = systems::and();
        let rsi = redundancy_synergy_index(&and, &split2(&and)).unwrap();
        let ii = interaction_information(&and, &IndexSet::range(3)).unwrap();
        assert!((rsi - ii).abs() < 1e-12);
        let one = SourceTargetSplit::new(&and, s(0), 2).unwrap();
        assert!(redundancy_synergy_index(&and, &one).is_err());
    }

    #[test]
    fn varadan_examples() {
        let x3 = systems::xor3();
        let sp = SourceTargetSplit::new(&x3, IndexSet::range(3), 3).unwrap();
        assert!((varadan_synergy(&x3, &sp).unwrap() - 1.0).abs() < 1e-12);
        let x12 = systems::xor12();
        assert!(varadan_synergy(&x12, &sp).unwrap().abs() < 1e-12);
        let and = systems::and();
        assert!((varadan_synergy(&and, &split2(&and)).unwrap() - 0.189).abs() < 5e-4);
    }

    #[test]
    fn partition_counts_are_bell_numbers() {
        // Bell numbers minus the single one-block partition.
        let counts: Vec<usize> = (1..=6).map(|n| set_partitions(n, 2).len()).collect();
        assert_eq!(counts, [0, 1, 4, 14, 51, 202]);
        assert_eq!(set_partitions(3, 1).len(), 5);
    }
}

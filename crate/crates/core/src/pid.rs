//! Williams–Beer partial information decomposition for two and three sources.
//!
//! Redundancy is measured with `I_min`, the expected minimum specific
//! information over the members of a lattice node. Partial information terms
//! follow by Möbius inversion over the redundancy lattice of antichains.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::dist::{DiscreteDistribution, IndexSet, SourceTargetSplit};
use crate::error::{Error, Result};
use crate::math::log2;
use crate::measures;

/// Negative partial information terms above this are float noise and are
/// clamped to zero; anything lower is reported as an error.
pub const NEGATIVE_TERM_TOLERANCE: f64 = 1e-9;

/// A lattice node: source subsets, none contained in another.
///
/// Each member is a bitmask over the split's sources in order (bit `k` is the
/// `k`-th source), displayed with 1-based positions, e.g. `{1}{23}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Antichain(Vec<u8>);

fn member_key(m: u8) -> (u32, u8) {
    (m.count_ones(), m)
}

impl Antichain {
    pub fn new(members: impl IntoIterator<Item = u8>) -> Result<Self> {
        let mut v: Vec<u8> = members.into_iter().collect();
        if v.is_empty() {
            return Err(Error::InvalidAntichain("no members".into()));
        }
        if v.contains(&0) {
            return Err(Error::InvalidAntichain("empty member".into()));
        }
        v.sort_by_key(|&m| member_key(m));
        for (i, &a) in v.iter().enumerate() {
            for &b in &v[i + 1..] {
                if a & b == a || a & b == b {
                    return Err(Error::InvalidAntichain(format!(
                        "members {} and {} are nested",
                        fmt_member(a),
                        fmt_member(b)
                    )));
                }
            }
        }
        Ok(Antichain(v))
    }

    /// Parses labels such as `{1}{23}`.
    pub fn parse(label: &str) -> Result<Self> {
        let mut members = Vec::new();
        let mut rest = label.trim();
        while !rest.is_empty() {
            let body = rest
                .strip_prefix('{')
                .and_then(|r| r.split_once('}'))
                .ok_or_else(|| Error::InvalidAntichain(format!("cannot parse `{label}`")))?;
            let mut mask = 0u8;
            for c in body.0.chars() {
                let k = c
                    .to_digit(10)
                    .filter(|&k| (1..=8).contains(&k))
                    .ok_or_else(|| Error::InvalidAntichain(format!("bad source `{c}` in `{label}`")))?;
                mask |= 1 << (k - 1);
            }
            members.push(mask);
            rest = body.1.trim_start();
        }
        Antichain::new(members)
    }

    pub fn members(&self) -> &[u8] {
        &self.0
    }

    /// Highest source position referenced, plus one.
    pub fn width(&self) -> usize {
        self.0.iter().map(|&m| 8 - m.leading_zeros() as usize).max().unwrap_or(0)
    }

    /// Lattice order: `self ≤ other` iff every member of `other` contains
    /// some member of `self`.
    pub fn precedes(&self, other: &Antichain) -> bool {
        other.0.iter().all(|&b| self.0.iter().any(|&a| a & b == a))
    }
}

fn fmt_member(m: u8) -> String {
    let mut s = String::from("{");
    for k in 0..8 {
        if m >> k & 1 == 1 {
            s.push(char::from(b'1' + k as u8));
        }
    }
    s.push('}');
    s
}

impl fmt::Display for Antichain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &m in &self.0 {
            f.write_str(&fmt_member(m))?;
        }
        Ok(())
    }
}

fn nodes(labels: &[&[u8]]) -> Vec<Antichain> {
    labels
        .iter()
        .map(|m| Antichain::new(m.iter().copied()).expect("static lattice node"))
        .collect()
}

/// The redundancy lattice for 2 or 3 sources in a topological order (every
/// node appears after all nodes below it).
pub fn lattice(n_sources: usize) -> Result<Vec<Antichain>> {
    const S1: u8 = 0b001;
    const S2: u8 = 0b010;
    const S3: u8 = 0b100;
    const S12: u8 = S1 | S2;
    const S13: u8 = S1 | S3;
    const S23: u8 = S2 | S3;
    const S123: u8 = S1 | S2 | S3;
    match n_sources {
        2 => Ok(nodes(&[&[S1, S2], &[S1], &[S2], &[S12]])),
        3 => Ok(nodes(&[
            &[S1, S2, S3],
            &[S1, S2],
            &[S1, S3],
            &[S2, S3],
            &[S1, S23],
            &[S2, S13],
            &[S3, S12],
            &[S1],
            &[S2],
            &[S3],
            &[S12, S13, S23],
            &[S12, S13],
            &[S12, S23],
            &[S13, S23],
            &[S12],
            &[S13],
            &[S23],
            &[S123],
        ])),
        n => Err(Error::UnsupportedSourceCount(n)),
    }
}

/// `I_spec(y; A)` for every non-empty subset mask `A` of the sources and every
/// target state `y` with `p(y) > 0`.
#[derive(Clone, Debug)]
pub struct SpecificInformation {
    target: BTreeMap<u32, f64>,
    /// Indexed by subset mask; entry 0 is unused.
    by_subset: Vec<BTreeMap<u32, f64>>,
}

impl SpecificInformation {
    pub fn new(d: &DiscreteDistribution, split: &SourceTargetSplit) -> Result<Self> {
        let srcs = split.sources();
        if srcs.len() > 8 {
            return Err(Error::UnsupportedSourceCount(srcs.len()));
        }
        let t = split.target();
        let target: BTreeMap<u32, f64> =
            d.project(&[t]).into_iter().map(|(s, p)| (s[0], p)).collect();
        let mut by_subset = vec![BTreeMap::new()];
        for mask in 1u64..(1 << srcs.len()) {
            by_subset.push(subset_specific(d, &srcs.select(mask), t, &target)?);
        }
        Ok(SpecificInformation { target, by_subset })
    }

    /// `I_spec(y; A)`; `A` is a subset mask over the split's sources.
    pub fn get(&self, y: u32, subset: u8) -> Result<f64> {
        if !self.target.contains_key(&y) {
            return Err(Error::ZeroProbabilityTarget);
        }
        self.by_subset
            .get(subset as usize)
            .filter(|_| subset != 0)
            .map(|m| m.get(&y).copied().unwrap_or(0.0))
            .ok_or_else(|| Error::InvalidAntichain(format!("subset mask {subset:#b} out of range")))
    }

    /// `Σ_y p(y) min_{A ∈ node} I_spec(y; A)`.
    pub fn i_min(&self, node: &Antichain) -> Result<f64> {
        let mut acc = 0.0;
        for (&y, &py) in &self.target {
            let mut lo = f64::INFINITY;
            for &m in node.members() {
                lo = lo.min(self.get(y, m)?);
            }
            acc += py * lo;
        }
        Ok(acc)
    }
}

/// `Σ_a p(a|y) [log 1/p(y) − log 1/p(y|a)]` for each `y`, with `a` ranging
/// over the joint states of `subset`.
fn subset_specific(
    d: &DiscreteDistribution,
    subset: &IndexSet,
    t: usize,
    target: &BTreeMap<u32, f64>,
) -> Result<BTreeMap<u32, f64>> {
    let order: Vec<usize> = subset.members().iter().copied().chain([t]).collect();
    let joint = d.project(&order);
    let marginal = d.project(subset.members());
    let mut out: BTreeMap<u32, f64> = target.keys().map(|&y| (y, 0.0)).collect();
    for (key, &pay) in &joint {
        let (a, y) = key.split_at(key.len() - 1);
        let pa = marginal.get(a).copied().unwrap_or(0.0);
        if !(pa > 0.0) {
            return Err(Error::InternalInconsistency(format!(
                "source state {} has zero marginal but positive joint",
                crate::dist::fmt_state(a)
            )));
        }
        let py = target[&y[0]];
        let a_given_y = pay / py;
        let y_given_a = pay / pa;
        *out.get_mut(&y[0]).expect("target state") += a_given_y * (log2(y_given_a) - log2(py));
    }
    Ok(out)
}

/// Specific information `I_spec(y; subset)` where `subset` is a non-empty set
/// of the split's source variables (distribution positions).
pub fn specific_information(
    d: &DiscreteDistribution,
    split: &SourceTargetSplit,
    y_state: u32,
    subset: &IndexSet,
) -> Result<f64> {
    if subset.is_empty() || !subset.is_subset(split.sources()) {
        return Err(Error::InvalidSplit("subset must be a non-empty set of sources".into()));
    }
    let t = split.target();
    let target: BTreeMap<u32, f64> =
        d.project(&[t]).into_iter().map(|(s, p)| (s[0], p)).collect();
    if !target.contains_key(&y_state) {
        return Err(Error::ZeroProbabilityTarget);
    }
    Ok(subset_specific(d, subset, t, &target)?[&y_state])
}

fn check_node(split: &SourceTargetSplit, node: &Antichain) -> Result<()> {
    if node.width() > split.sources().len() {
        return Err(Error::InvalidAntichain(format!(
            "{node} refers to more than {} sources",
            split.sources().len()
        )));
    }
    Ok(())
}

/// `I_min` of one lattice node.
pub fn i_min(d: &DiscreteDistribution, split: &SourceTargetSplit, node: &Antichain) -> Result<f64> {
    check_node(split, node)?;
    SpecificInformation::new(d, split)?.i_min(node)
}

/// Partial information terms and the `I_min` value of every lattice node.
#[derive(Clone, Debug, PartialEq)]
pub struct PidResult {
    split: SourceTargetSplit,
    nodes: Vec<Antichain>,
    terms: Vec<f64>,
    imin: Vec<f64>,
}

impl PidResult {
    pub fn split(&self) -> &SourceTargetSplit {
        &self.split
    }

    /// Nodes in the order the terms were evaluated.
    pub fn nodes(&self) -> &[Antichain] {
        &self.nodes
    }

    /// `(node, Π(node))` pairs in evaluation order.
    pub fn terms(&self) -> impl Iterator<Item = (&Antichain, f64)> + '_ {
        self.nodes.iter().zip(self.terms.iter().copied())
    }

    pub fn term(&self, node: &Antichain) -> Option<f64> {
        self.nodes.iter().position(|n| n == node).map(|i| self.terms[i])
    }

    /// Term by label, e.g. `"{1}{2}"`; zero-cost lookup helper for reports.
    pub fn term_by_label(&self, label: &str) -> Option<f64> {
        Antichain::parse(label).ok().and_then(|n| self.term(&n))
    }

    pub fn i_min(&self, node: &Antichain) -> Option<f64> {
        self.nodes.iter().position(|n| n == node).map(|i| self.imin[i])
    }

    /// Redundancy: the term of the bottom node `{1}{2}..{n}`.
    pub fn redundancy(&self) -> f64 {
        let n = self.split.sources().len();
        self.term(&Antichain::new((0..n).map(|k| 1u8 << k)).expect("bottom node"))
            .unwrap_or(0.0)
    }

    /// Unique information of the `k`-th source (0-based).
    pub fn unique(&self, k: usize) -> f64 {
        Antichain::new([1u8 << k]).ok().and_then(|n| self.term(&n)).unwrap_or(0.0)
    }

    /// Synergy: the term of the top node `{12..n}`.
    pub fn synergy(&self) -> f64 {
        let n = self.split.sources().len();
        self.term(&Antichain::new([((1u16 << n) - 1) as u8]).expect("top node"))
            .unwrap_or(0.0)
    }

    pub fn total(&self) -> f64 {
        self.terms.iter().sum()
    }
}

/// Full decomposition of `I(S;Y)` for 2 or 3 sources.
pub fn decompose(d: &DiscreteDistribution, split: &SourceTargetSplit) -> Result<PidResult> {
    let order = lattice(split.sources().len())?;
    decompose_with_order(d, split, &order)
}

/// Decomposition evaluated in a caller-supplied node order, which must be a
/// linear extension of the lattice for the split's source count.
pub fn decompose_with_order(
    d: &DiscreteDistribution,
    split: &SourceTargetSplit,
    order: &[Antichain],
) -> Result<PidResult> {
    let reference = lattice(split.sources().len())?;
    if order.len() != reference.len() || !reference.iter().all(|n| order.contains(n)) {
        return Err(Error::InvalidAntichain("order does not cover the lattice".into()));
    }
    for (i, a) in order.iter().enumerate() {
        if order[i + 1..].iter().any(|b| b.precedes(a)) {
            return Err(Error::InvalidAntichain(format!("{a} is evaluated before a node below it")));
        }
    }

    let spec = SpecificInformation::new(d, split)?;
    let imin: Vec<f64> = order.iter().map(|n| spec.i_min(n)).collect::<Result<_>>()?;
    let mut terms: Vec<f64> = Vec::with_capacity(order.len());
    for (i, node) in order.iter().enumerate() {
        let below: f64 = order[..i]
            .iter()
            .zip(&terms)
            .filter(|(b, _)| b.precedes(node))
            .map(|(_, &t)| t)
            .sum();
        let mut t = imin[i] - below;
        if t < 0.0 {
            if t > -NEGATIVE_TERM_TOLERANCE {
                t = 0.0;
            } else {
                return Err(Error::DecompositionError { node: format!("{node}"), value: t });
            }
        }
        terms.push(t);
    }
    Ok(PidResult { split: split.clone(), nodes: order.to_vec(), terms, imin })
}

/// `|II − (combination of partial terms)|` where the combination is
/// `synergy − redundancy` for two sources and the signed lattice sum for
/// three sources. Should be at rounding level.
pub fn ii_consistency(d: &DiscreteDistribution, split: &SourceTargetSplit, pid: &PidResult) -> Result<f64> {
    let ii = measures::interaction_information(d, &split.all())?;
    let t = |label: &str| pid.term_by_label(label).unwrap_or(0.0);
    let combo = match split.sources().len() {
        2 => t("{12}") - t("{1}{2}"),
        3 => {
            t("{123}") + t("{1}{2}{3}")
                - t("{1}{23}")
                - t("{2}{13}")
                - t("{3}{12}")
                - t("{12}{13}")
                - t("{12}{23}")
                - t("{13}{23}")
                - 2.0 * t("{12}{13}{23}")
        }
        n => return Err(Error::UnsupportedSourceCount(n)),
    };
    Ok(crate::math::abs(ii - combo))
}

//! Three-node binary network `X1 → X2`, `X1 → Y`, `X2 → Y` with a baseline
//! activation probability, expanded to its exact joint distribution.
//!
//! Every node is active spontaneously with probability `p_r`, and each active
//! parent independently activates its child with the edge's drive. A node is
//! inactive only if all of these causes fail (noisy-OR):
//!
//! ```text
//! p(x1 = 1)         = p_r
//! p(x2 = 1 | x1)    = 1 − (1 − p_r)(1 − p_12)^x1
//! p(y = 1 | x1, x2) = 1 − (1 − p_r)(1 − p_1y)^x1 (1 − p_2y)^x2
//! ```
//!
//! All three nodes are drawn in one shot; there is no time dependence.

use alloc::vec;
use alloc::vec::Vec;

use crate::dist::{DiscreteDistribution, IndexSet, SourceTargetSplit};
use crate::error::{Error, Result};
use crate::registry::{self, Measure, MeasureResult, Unit};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NetworkParams {
    /// Spontaneous activation probability of every node.
    pub p_r: f64,
    /// Drive from `X1` to `X2`.
    pub p_12: f64,
    /// Drive from `X1` to `Y`.
    pub p_1y: f64,
    /// Drive from `X2` to `Y`.
    pub p_2y: f64,
}

impl NetworkParams {
    pub fn new(p_r: f64, p_12: f64, p_1y: f64, p_2y: f64) -> Result<Self> {
        let params = NetworkParams { p_r, p_12, p_1y, p_2y };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("p_r", self.p_r),
            ("p_12", self.p_12),
            ("p_1y", self.p_1y),
            ("p_2y", self.p_2y),
        ] {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::ParamOutOfRange { name, value });
            }
        }
        Ok(())
    }

    /// `p(x2 = 1 | x1)`.
    pub fn p_x2(&self, x1: u32) -> f64 {
        1.0 - (1.0 - self.p_r) * fail(self.p_12, x1)
    }

    /// `p(y = 1 | x1, x2)`.
    pub fn p_y(&self, x1: u32, x2: u32) -> f64 {
        1.0 - (1.0 - self.p_r) * fail(self.p_1y, x1) * fail(self.p_2y, x2)
    }
}

fn fail(drive: f64, parent: u32) -> f64 {
    if parent == 1 {
        1.0 - drive
    } else {
        1.0
    }
}

fn bernoulli(p1: f64, v: u32) -> f64 {
    if v == 1 {
        p1
    } else {
        1.0 - p1
    }
}

/// Named parameter sets for the five canonical wirings, all with `p_r = 0.02`
/// and drives of 0.1 on present edges.
pub const PRESETS: [(&str, NetworkParams); 5] = [
    ("convergent", NetworkParams { p_r: 0.02, p_12: 0.0, p_1y: 0.1, p_2y: 0.1 }),
    ("full", NetworkParams { p_r: 0.02, p_12: 0.1, p_1y: 0.1, p_2y: 0.1 }),
    ("chain", NetworkParams { p_r: 0.02, p_12: 0.1, p_1y: 0.0, p_2y: 0.1 }),
    ("common-driver", NetworkParams { p_r: 0.02, p_12: 0.1, p_1y: 0.1, p_2y: 0.0 }),
    ("isolated-target", NetworkParams { p_r: 0.02, p_12: 0.1, p_1y: 0.0, p_2y: 0.0 }),
];

pub fn preset(name: &str) -> Option<NetworkParams> {
    PRESETS.iter().find(|(n, _)| *n == name).map(|(_, p)| *p)
}

/// Joint distribution over `(X1, X2, Y)`.
pub fn expand(params: &NetworkParams) -> Result<DiscreteDistribution> {
    params.validate()?;
    let mut entries = Vec::with_capacity(8);
    for x1 in 0..2 {
        for x2 in 0..2 {
            for y in 0..2 {
                let p = bernoulli(params.p_r, x1)
                    * bernoulli(params.p_x2(x1), x2)
                    * bernoulli(params.p_y(x1, x2), y);
                entries.push((vec![x1, x2, y], p));
            }
        }
    }
    DiscreteDistribution::new(["X1", "X2", "Y"], [2, 2, 2], entries)
}

/// Every measure with sources `{X1, X2}` and target `Y`, in millibits.
pub fn sweep(params: &NetworkParams) -> Result<Vec<MeasureResult>> {
    let d = expand(params)?;
    let split = SourceTargetSplit::new(&d, IndexSet::new([0, 1]), 2)?;
    let mut rows = registry::evaluate(&d, Some(&split), &Measure::ALL)?;
    let scale = Unit::Millibits.scale();
    for r in &mut rows {
        r.value *= scale;
    }
    Ok(rows)
}

/// Convenience lookup into [`sweep`] output.
pub fn find<'a>(rows: &'a [MeasureResult], label: &str) -> Option<&'a MeasureResult> {
    rows.iter().find(|r| r.label == label)
}

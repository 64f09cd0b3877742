//! The fixed set of measure names understood by front ends, and a single
//! entry point that evaluates a selection of them.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::dist::{DiscreteDistribution, IndexSet, SourceTargetSplit};
use crate::error::{Error, Result};
use crate::{measures, pid};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Measure {
    /// `I(X_i;Y)` for each source, labelled `mi_x1`, `mi_x2`, ...
    MiEach,
    /// `I(S;Y)`.
    Mi,
    Ii,
    Ci,
    Tc,
    Dtc,
    DeltaI,
    MiDeltaGap,
    Rsi,
    Vs,
    /// Every partial information term, labelled `pid_{1}{2}`, ...
    Pid,
    /// Joint entropy of the variables under study.
    Entropy,
    /// `H(Y)`.
    TargetEntropy,
}

impl Measure {
    pub const ALL: [Measure; 13] = [
        Measure::MiEach,
        Measure::Mi,
        Measure::Ii,
        Measure::Ci,
        Measure::Tc,
        Measure::Dtc,
        Measure::DeltaI,
        Measure::MiDeltaGap,
        Measure::Rsi,
        Measure::Vs,
        Measure::Pid,
        Measure::Entropy,
        Measure::TargetEntropy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Measure::MiEach => "mi_each",
            Measure::Mi => "mi",
            Measure::Ii => "ii",
            Measure::Ci => "ci",
            Measure::Tc => "tc",
            Measure::Dtc => "dtc",
            Measure::DeltaI => "delta_i",
            Measure::MiDeltaGap => "mi_delta_gap",
            Measure::Rsi => "rsi",
            Measure::Vs => "vs",
            Measure::Pid => "pid",
            Measure::Entropy => "entropy",
            Measure::TargetEntropy => "h_y",
        }
    }

    /// Whether the measure distinguishes sources from a target.
    pub fn needs_split(self) -> bool {
        !matches!(self, Measure::Ii | Measure::Ci | Measure::Tc | Measure::Dtc | Measure::Entropy)
    }

    /// Parses a comma-separated list; `all` expands to [`Measure::ALL`].
    /// Repeats are dropped, first occurrence wins.
    pub fn parse_list(list: &str) -> Result<Vec<Measure>> {
        let mut out = Vec::new();
        for part in list.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let items: Vec<Measure> = if part == "all" {
                Measure::ALL.to_vec()
            } else {
                alloc::vec![part.parse()?]
            };
            for m in items {
                if !out.contains(&m) {
                    out.push(m);
                }
            }
        }
        if out.is_empty() {
            return Err(Error::UnknownMeasure(list.to_string()));
        }
        Ok(out)
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Measure::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::UnknownMeasure(s.to_string()))
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Unit {
    #[default]
    Bits,
    Millibits,
}

impl Unit {
    pub fn scale(self) -> f64 {
        match self {
            Unit::Bits => 1.0,
            Unit::Millibits => 1000.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Unit::Bits => "bits",
            Unit::Millibits => "millibits",
        }
    }
}

impl FromStr for Unit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bits" => Ok(Unit::Bits),
            "millibits" | "mbits" => Ok(Unit::Millibits),
            other => Err(Error::UnknownMeasure(format!("unit `{other}`"))),
        }
    }
}

/// One reported value, in bits unless stated otherwise by the producer.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasureResult {
    pub measure: Measure,
    pub label: String,
    pub value: f64,
}

/// Row labels `evaluate` produces for `measures` given the number of sources.
pub fn labels(measures: &[Measure], n_sources: usize) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for &m in measures {
        match m {
            Measure::MiEach => out.extend((1..=n_sources).map(|k| format!("mi_x{k}"))),
            Measure::Pid => {
                out.extend(pid::lattice(n_sources)?.iter().map(|n| format!("pid_{n}")))
            }
            m => out.push(m.name().to_string()),
        }
    }
    Ok(out)
}

/// Evaluates `selection` in order. Split-free measures (`ii`, `ci`, `tc`,
/// `dtc`, `entropy`) use the split's sources and target when a split is
/// given, otherwise every variable of `d`.
pub fn evaluate(
    d: &DiscreteDistribution,
    split: Option<&SourceTargetSplit>,
    selection: &[Measure],
) -> Result<Vec<MeasureResult>> {
    let vars = split.map_or_else(|| d.all(), SourceTargetSplit::all);
    let need = |m: Measure| -> Result<&SourceTargetSplit> {
        split.ok_or_else(|| Error::InvalidSplit(format!("`{m}` needs sources and a target")))
    };
    let mut out = Vec::new();
    let mut push = |m: Measure, label: String, value: f64| {
        out.push(MeasureResult { measure: m, label, value })
    };
    for &m in selection {
        match m {
            Measure::MiEach => {
                let sp = need(m)?;
                let y = sp.target_set();
                for (k, &i) in sp.sources().members().iter().enumerate() {
                    let v = measures::mutual_information(d, &IndexSet::singleton(i), &y)?;
                    push(m, format!("mi_x{}", k + 1), v);
                }
            }
            Measure::Mi => push(m, m.name().into(), measures::split_mutual_information(d, need(m)?)?),
            Measure::Ii => push(m, m.name().into(), measures::interaction_information(d, &vars)?),
            Measure::Ci => push(m, m.name().into(), measures::co_information(d, &vars)?),
            Measure::Tc => push(m, m.name().into(), measures::total_correlation(d, &vars)?),
            Measure::Dtc => push(m, m.name().into(), measures::dual_total_correlation(d, &vars)?),
            Measure::DeltaI => push(m, m.name().into(), measures::delta_i(d, need(m)?)?),
            Measure::MiDeltaGap => push(m, m.name().into(), measures::mi_delta_gap(d, need(m)?)?),
            Measure::Rsi => push(m, m.name().into(), measures::redundancy_synergy_index(d, need(m)?)?),
            Measure::Vs => push(m, m.name().into(), measures::varadan_synergy(d, need(m)?)?),
            Measure::Pid => {
                let result = pid::decompose(d, need(m)?)?;
                for (node, t) in result.terms() {
                    push(m, format!("pid_{node}"), t);
                }
            }
            Measure::Entropy => push(m, m.name().into(), measures::entropy(d, &vars)?),
            Measure::TargetEntropy => {
                push(m, m.name().into(), measures::entropy(d, &need(m)?.target_set())?)
            }
        }
    }
    Ok(out)
}

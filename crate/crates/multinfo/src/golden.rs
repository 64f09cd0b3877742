//! Reference values for the canonical example systems, embedded at compile
//! time, and a runner that recomputes every cell.
//!
//! Each row of `data/golden.csv` names a group, a system, a quantity, the
//! expected value, an absolute tolerance and the unit the expectation is
//! written in. Systems are either distribution files under `data/systems`
//! (the last column is the target, the others are sources) or `net:<preset>`
//! for the noisy-OR network presets. Quantities are registry labels
//! (`mi_x1`, `ii`, `pid_{1}{2}`, ...) or probabilities:
//!
//! * `p(x1=0,x2=1,y=1)`: a joint probability;
//! * `p(y=1|x1=1,x2=1)`: the observed posterior of the target;
//! * `p_ind(y=1|x1=1,x2=1)`: the posterior of the conditionally independent
//!   model.
//!
//! Comparisons happen in bits; millibit cells are rescaled first.

use std::fmt::Write as _;
use std::path::Path;

use multinfo_core::measures::IndependentModel;
use multinfo_core::{netgen, registry, DiscreteDistribution, IndexSet, Measure, SourceTargetSplit};

use crate::error::{Error, Result};
use crate::format::num;
use crate::io;

const GOLDEN: &str = include_str!("../data/golden.csv");

const SYSTEMS: [(&str, &str); 8] = [
    ("xor", include_str!("../data/systems/xor.csv")),
    ("copy_x1", include_str!("../data/systems/copy_x1.csv")),
    ("and", include_str!("../data/systems/and.csv")),
    ("correlated_sources", include_str!("../data/systems/correlated_sources.csv")),
    ("distinct_states", include_str!("../data/systems/distinct_states.csv")),
    ("constant_target", include_str!("../data/systems/constant_target.csv")),
    ("xor3", include_str!("../data/systems/xor3.csv")),
    ("xor12", include_str!("../data/systems/xor12.csv")),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CellUnit {
    Bits,
    Millibits,
    Probability,
}

impl CellUnit {
    fn parse(s: &str) -> Option<Self> {
        match s {
            "bits" => Some(CellUnit::Bits),
            "millibits" => Some(CellUnit::Millibits),
            "probability" => Some(CellUnit::Probability),
            _ => None,
        }
    }

    fn name(self) -> &'static str {
        match self {
            CellUnit::Bits => "bits",
            CellUnit::Millibits => "millibits",
            CellUnit::Probability => "probability",
        }
    }

    /// Factor from the stored unit (bits or plain probability) to this one.
    fn scale(self) -> f64 {
        match self {
            CellUnit::Millibits => 1000.0,
            _ => 1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Cell {
    pub group: String,
    pub system: String,
    pub quantity: String,
    /// In `unit`.
    pub expected: f64,
    /// In `unit`.
    pub tolerance: f64,
    pub unit: CellUnit,
}

/// All embedded cells, in file order.
pub fn cells() -> Result<Vec<Cell>> {
    let path = Path::new("data/golden.csv");
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(GOLDEN.as_bytes());
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::parse(path, None, e.to_string()))?;
        let line = rec.position().map(|p| p.line() as usize);
        let bad = |what: &str| Error::parse(path, line, format!("invalid {what}"));
        out.push(Cell {
            group: rec[0].to_string(),
            system: rec[1].to_string(),
            quantity: rec[2].to_string(),
            expected: rec[3].parse().map_err(|_| bad("expected value"))?,
            tolerance: rec[4].parse().map_err(|_| bad("tolerance"))?,
            unit: CellUnit::parse(&rec[5]).ok_or_else(|| bad("unit"))?,
        });
    }
    Ok(out)
}

/// Names of the embedded distribution files.
pub fn system_names() -> impl Iterator<Item = &'static str> {
    SYSTEMS.iter().map(|(n, _)| *n)
}

/// Loads a named system and its conventional split (last variable is the
/// target).
pub fn system(name: &str) -> Result<(DiscreteDistribution, SourceTargetSplit)> {
    let d = if let Some(preset) = name.strip_prefix("net:") {
        let params = netgen::preset(preset).ok_or_else(|| Error::Usage(format!("unknown network preset `{preset}`")))?;
        netgen::expand(&params)?
    } else {
        let text = SYSTEMS
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, t)| *t)
            .ok_or_else(|| Error::Usage(format!("unknown system `{name}`")))?;
        io::parse_distribution_csv(text, Path::new(name))?.dist
    };
    let n = d.num_variables();
    let split = SourceTargetSplit::new(&d, IndexSet::range(n - 1), n - 1)?;
    Ok((d, split))
}

/// Computes a quantity named by a golden cell. Values are in bits, or plain
/// probabilities.
pub trait Evaluator {
    fn value(&self, d: &DiscreteDistribution, split: &SourceTargetSplit, quantity: &str) -> Result<f64>;
}

/// The library's own implementation.
#[derive(Clone, Copy, Debug, Default)]
pub struct Reference;

/// `name=value` pairs of a probability query.
fn assignments(s: &str) -> Result<Vec<(&str, u32)>> {
    s.split(',')
        .map(|kv| {
            let (k, v) = kv.split_once('=').ok_or_else(|| Error::Usage(format!("malformed assignment `{kv}`")))?;
            let v = v.trim().parse().map_err(|_| Error::Usage(format!("malformed value in `{kv}`")))?;
            Ok((k.trim(), v))
        })
        .collect()
}

fn position(d: &DiscreteDistribution, name: &str) -> Result<usize> {
    d.names()
        .iter()
        .position(|n| n.eq_ignore_ascii_case(name))
        .ok_or_else(|| Error::Core(multinfo_core::Error::UnknownVariable(name.to_string())))
}

fn probability(d: &DiscreteDistribution, split: &SourceTargetSplit, q: &str) -> Result<f64> {
    let (independent, body) = match (q.strip_prefix("p_ind("), q.strip_prefix("p(")) {
        (Some(b), _) => (true, b),
        (None, Some(b)) => (false, b),
        _ => return Err(Error::Usage(format!("unknown quantity `{q}`"))),
    };
    let body = body.strip_suffix(')').ok_or_else(|| Error::Usage(format!("unbalanced `{q}`")))?;
    match body.split_once('|') {
        None if !independent => {
            let mut state = vec![0; d.num_variables()];
            let given = assignments(body)?;
            if given.len() != state.len() {
                return Err(Error::Usage(format!("`{q}` must assign every variable")));
            }
            for (k, v) in given {
                state[position(d, k)?] = v;
            }
            Ok(d.prob(&state))
        }
        None => Err(Error::Usage(format!("`{q}` needs a condition"))),
        Some((lhs, rhs)) => {
            let target = assignments(lhs)?;
            let &[(name, y)] = target.as_slice() else {
                return Err(Error::Usage(format!("`{q}` must name one target value")));
            };
            if position(d, name)? != split.target() {
                return Err(Error::Usage(format!("`{name}` is not the target")));
            }
            let mut x = vec![0; split.sources().len()];
            let given = assignments(rhs)?;
            if given.len() != x.len() {
                return Err(Error::Usage(format!("`{q}` must condition on every source")));
            }
            for (k, v) in given {
                let i = position(d, k)?;
                let slot = split
                    .sources()
                    .members()
                    .iter()
                    .position(|&s| s == i)
                    .ok_or_else(|| Error::Usage(format!("`{k}` is not a source")))?;
                x[slot] = v;
            }
            let model = IndependentModel::new(d, split)?;
            let p = if independent { model.posterior(&x, y) } else { model.observed_posterior(&x, y) };
            p.ok_or_else(|| Error::Usage(format!("`{q}` conditions on an impossible state")))
        }
    }
}

impl Evaluator for Reference {
    fn value(&self, d: &DiscreteDistribution, split: &SourceTargetSplit, quantity: &str) -> Result<f64> {
        if quantity.starts_with("p(") || quantity.starts_with("p_ind(") {
            return probability(d, split, quantity);
        }
        let measure = if quantity.starts_with("mi_x") {
            Measure::MiEach
        } else if quantity.starts_with("pid_") {
            Measure::Pid
        } else {
            quantity.parse()?
        };
        registry::evaluate(d, Some(split), &[measure])?
            .into_iter()
            .find(|r| r.label == quantity)
            .map(|r| r.value)
            .ok_or_else(|| Error::Usage(format!("`{quantity}` is not produced for this system")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub cell: Cell,
    /// In the cell's unit; `None` when evaluation failed.
    pub actual: Option<f64>,
    pub error: Option<String>,
}

impl Outcome {
    pub fn residual(&self) -> Option<f64> {
        self.actual.map(|a| a - self.cell.expected)
    }

    /// Compared in bits (or plain probability): millibit cells are divided
    /// back down before the check.
    pub fn passed(&self) -> bool {
        let scale = self.cell.unit.scale();
        match self.actual {
            Some(a) => ((a - self.cell.expected) / scale).abs() <= self.cell.tolerance / scale,
            None => false,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub outcomes: Vec<Outcome>,
}

impl Report {
    pub fn failures(&self) -> impl Iterator<Item = &Outcome> {
        self.outcomes.iter().filter(|o| !o.passed())
    }

    pub fn all_passed(&self) -> bool {
        self.failures().next().is_none()
    }

    /// `status,group,system,quantity,expected,actual,residual,tolerance,unit`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("status,group,system,quantity,expected,actual,residual,tolerance,unit\n");
        for o in &self.outcomes {
            let c = &o.cell;
            let quantity = if c.quantity.contains(',') { format!("\"{}\"", c.quantity) } else { c.quantity.clone() };
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                if o.passed() { "PASS" } else { "FAIL" },
                c.group,
                c.system,
                quantity,
                num(c.expected),
                o.actual.map(num).or_else(|| o.error.clone().map(|e| format!("\"error: {}\"", e.replace('"', "'")))).unwrap_or_default(),
                o.residual().map(num).unwrap_or_default(),
                num(c.tolerance),
                c.unit.name(),
            );
        }
        out
    }
}

/// Recomputes every cell whose group or system equals `filter` (all cells
/// when `None`). Evaluation errors count as failures, not as run errors.
pub fn run<E: Evaluator>(eval: &E, filter: Option<&str>) -> Result<Report> {
    let mut outcomes = Vec::new();
    let mut loaded: Option<(String, DiscreteDistribution, SourceTargetSplit)> = None;
    for cell in cells()? {
        if filter.is_some_and(|f| f != cell.group && f != cell.system) {
            continue;
        }
        if loaded.as_ref().is_none_or(|(n, _, _)| *n != cell.system) {
            let (d, s) = system(&cell.system)?;
            loaded = Some((cell.system.clone(), d, s));
        }
        let (_, d, split) = loaded.as_ref().expect("loaded above");
        let (actual, error) = match eval.value(d, split, &cell.quantity) {
            Ok(v) => (Some(v * cell.unit.scale()), None),
            Err(e) => (None, Some(e.to_string())),
        };
        outcomes.push(Outcome { cell, actual, error });
    }
    if outcomes.is_empty() {
        if let Some(f) = filter {
            return Err(Error::Usage(format!("no golden cells match `{f}`")));
        }
    }
    Ok(Report { outcomes })
}

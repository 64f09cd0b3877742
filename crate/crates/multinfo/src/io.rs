//! Text formats: distributions (CSV and JSON), event lists, rasters, sweep
//! tables and percentile summaries.
//!
//! Distribution CSV has a header `p,<var1>,...,<varN>` and one row per
//! support state. Probabilities are decimal literals or fractions such as
//! `1/3`. A column whose values are all non-negative integers is used as-is
//! (alphabet = max + 1); any other column is label-coded in order of first
//! appearance.
//!
//! The JSON form is
//! `{"variables": [..], "alphabets": [..], "states": [{"state": [..], "p": ..}], "labels": [[..], ..]}`
//! with `labels` optional.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use multinfo_core::ingest::{EventSeries, SpikeRaster, Summary, Sweep};
use multinfo_core::DiscreteDistribution;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::{num, opt};

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| match source.kind() {
        std::io::ErrorKind::NotFound => Error::FileNotFound(path.to_path_buf()),
        _ => Error::Io { path: path.to_path_buf(), source },
    })
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

/// A distribution plus, per variable, the labels of its states when the
/// file used non-numeric values.
#[derive(Clone, Debug, PartialEq)]
pub struct LoadedDistribution {
    pub dist: DiscreteDistribution,
    pub labels: Vec<Option<Vec<String>>>,
}

fn parse_probability(s: &str) -> Option<f64> {
    let v = match s.split_once('/') {
        Some((a, b)) => a.trim().parse::<f64>().ok()? / b.trim().parse::<f64>().ok()?,
        None => s.parse().ok()?,
    };
    v.is_finite().then_some(v)
}

fn csv_reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes())
}

pub fn parse_distribution_csv(text: &str, path: &Path) -> Result<LoadedDistribution> {
    let mut rdr = csv_reader(text);
    let header = rdr.headers().map_err(|e| Error::parse(path, None, e.to_string()))?.clone();
    if header.get(0) != Some("p") || header.len() < 2 {
        return Err(Error::parse(path, Some(1), "header must be `p,<var1>,...`"));
    }
    let names: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
    let mut rows: Vec<(f64, Vec<String>)> = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::parse(path, None, e.to_string()))?;
        let line = rec.position().map(|p| p.line() as usize);
        let p = parse_probability(&rec[0])
            .ok_or_else(|| Error::parse(path, line, format!("invalid probability `{}`", &rec[0])))?;
        rows.push((p, rec.iter().skip(1).map(str::to_string).collect()));
    }
    if rows.is_empty() {
        return Err(Error::parse(path, None, "no states"));
    }

    let mut alphabets = Vec::with_capacity(names.len());
    let mut labels = Vec::with_capacity(names.len());
    let mut codes: Vec<Vec<u32>> = vec![Vec::with_capacity(names.len()); rows.len()];
    for col in 0..names.len() {
        let numeric: Option<Vec<u32>> = rows.iter().map(|(_, v)| v[col].parse::<u32>().ok()).collect();
        match numeric {
            Some(values) => {
                alphabets.push(values.iter().max().map_or(1, |m| m + 1));
                labels.push(None);
                for (r, v) in values.into_iter().enumerate() {
                    codes[r].push(v);
                }
            }
            None => {
                let mut seen: Vec<String> = Vec::new();
                for (r, (_, v)) in rows.iter().enumerate() {
                    let code = match seen.iter().position(|s| s == &v[col]) {
                        Some(c) => c,
                        None => {
                            seen.push(v[col].clone());
                            seen.len() - 1
                        }
                    };
                    codes[r].push(code as u32);
                }
                alphabets.push(seen.len() as u32);
                labels.push(Some(seen));
            }
        }
    }
    let entries = codes.into_iter().zip(rows.iter().map(|(p, _)| *p));
    let dist = DiscreteDistribution::new(names, alphabets, entries)?;
    Ok(LoadedDistribution { dist, labels })
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonState {
    state: Vec<u32>,
    p: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonDistribution {
    variables: Vec<String>,
    alphabets: Vec<u32>,
    states: Vec<JsonState>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<Option<Vec<String>>>>,
}

pub fn parse_distribution_json(text: &str, path: &Path) -> Result<LoadedDistribution> {
    let doc: JsonDistribution = serde_json::from_str(text)
        .map_err(|e| Error::parse(path, Some(e.line()), e.to_string()))?;
    let labels = doc.labels.unwrap_or_else(|| vec![None; doc.variables.len()]);
    if labels.len() != doc.variables.len() {
        return Err(Error::parse(path, None, "`labels` must have one entry per variable"));
    }
    let dist = DiscreteDistribution::new(
        doc.variables,
        doc.alphabets,
        doc.states.into_iter().map(|s| (s.state, s.p)),
    )?;
    Ok(LoadedDistribution { dist, labels })
}

/// Reads CSV or JSON; JSON is recognised by a `.json` extension or a
/// leading `{`.
pub fn load_distribution(path: &Path) -> Result<LoadedDistribution> {
    let text = read_text(path)?;
    let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"))
        || text.trim_start().starts_with('{');
    if is_json {
        parse_distribution_json(&text, path)
    } else {
        parse_distribution_csv(&text, path)
    }
}

/// Integer-coded distribution CSV, states in lexicographic order.
pub fn distribution_csv(d: &DiscreteDistribution) -> String {
    let mut out = String::from("p");
    for n in d.names() {
        out.push(',');
        out.push_str(n);
    }
    out.push('\n');
    for (state, p) in d.iter() {
        out.push_str(&num(p));
        for v in state {
            let _ = write!(out, ",{v}");
        }
        out.push('\n');
    }
    out
}

pub fn distribution_json(d: &LoadedDistribution) -> String {
    let doc = JsonDistribution {
        variables: d.dist.names().to_vec(),
        alphabets: d.dist.alphabets().to_vec(),
        states: d.dist.iter().map(|(s, p)| JsonState { state: s.clone(), p }).collect(),
        labels: d.labels.iter().any(Option::is_some).then(|| d.labels.clone()),
    };
    serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
}

/// Value of a `# key=value` comment line, if present.
fn comment_value<'a>(text: &'a str, key: &str) -> Option<&'a str> {
    text.lines()
        .filter_map(|l| l.trim().strip_prefix('#'))
        .filter_map(|l| l.trim().strip_prefix(key))
        .find_map(|l| l.trim_start().strip_prefix('='))
        .map(str::trim)
}

/// Channel ids in natural order: numerically when all are integers,
/// otherwise lexicographically.
fn natural_order(mut ids: Vec<String>) -> Vec<String> {
    ids.sort();
    ids.dedup();
    if ids.iter().all(|c| c.parse::<u64>().is_ok()) {
        ids.sort_by_key(|c| c.parse::<u64>().unwrap());
    }
    ids
}

/// Events CSV `channel,time_s`. The duration comes from `duration`, then a
/// `# duration_s=` comment, then the last event time. Channels appear in
/// natural order.
pub fn parse_events_csv(text: &str, path: &Path, duration: Option<f64>) -> Result<EventSeries> {
    let mut rdr = csv_reader(text);
    let header = rdr.headers().map_err(|e| Error::parse(path, None, e.to_string()))?.clone();
    if header.iter().collect::<Vec<_>>() != ["channel", "time_s"] {
        return Err(Error::parse(path, Some(1), "header must be `channel,time_s`"));
    }
    let mut events: Vec<(String, f64)> = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::parse(path, None, e.to_string()))?;
        let line = rec.position().map(|p| p.line() as usize);
        let t: f64 = rec[1]
            .parse()
            .ok()
            .filter(|t: &f64| t.is_finite() && *t >= 0.0)
            .ok_or_else(|| Error::parse(path, line, format!("invalid time `{}`", &rec[1])))?;
        events.push((rec[0].to_string(), t));
    }
    let duration = match duration {
        Some(d) => d,
        None => match comment_value(text, "duration_s") {
            Some(v) => v
                .parse()
                .map_err(|_| Error::parse(path, None, format!("invalid duration `{v}`")))?,
            None => events.iter().map(|e| e.1).fold(0.0, f64::max),
        },
    };
    let channels = natural_order(events.iter().map(|e| e.0.clone()).collect());
    Ok(EventSeries::new(channels, events, duration)?)
}

/// Raster CSV: a `# bin_width_s=<w>` comment, then `channel,b0,b1,...` rows.
/// An optional header row starting with `channel` is skipped. `fallback`
/// supplies the bin width when the comment is missing.
pub fn parse_raster_csv(text: &str, path: &Path, fallback: Option<f64>) -> Result<SpikeRaster> {
    let bin_width = match comment_value(text, "bin_width_s") {
        Some(v) => v
            .parse()
            .map_err(|_| Error::parse(path, None, format!("invalid bin width `{v}`")))?,
        None => fallback.ok_or_else(|| Error::parse(path, None, "missing `# bin_width_s=` line"))?,
    };
    let mut channels = Vec::new();
    let mut rows: Vec<Vec<u8>> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split(',').map(str::trim);
        let id = fields.next().unwrap_or_default();
        if id == "channel" && rows.is_empty() {
            continue;
        }
        let row = fields
            .map(|f| match f {
                "0" => Ok(0),
                "1" => Ok(1),
                other => Err(Error::parse(path, Some(i + 1), format!("raster cell `{other}` is not 0 or 1"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        channels.push(id.to_string());
        rows.push(row);
    }
    Ok(SpikeRaster::from_rows(channels, bin_width, &rows)?)
}

pub fn raster_csv(r: &SpikeRaster) -> String {
    let mut out = String::with_capacity(r.n_channels() * (2 * r.n_bins() + 16) + 32);
    let _ = writeln!(out, "# bin_width_s={}", num(r.bin_width()));
    for (c, id) in r.channels().iter().enumerate() {
        out.push_str(id);
        for bit in r.row(c) {
            out.push_str(if bit { ",1" } else { ",0" });
        }
        out.push('\n');
    }
    out
}

fn sweep_header(out: &mut String, labels: &[String], prefix: &str) {
    for l in labels {
        let _ = write!(out, ",{prefix}{l}");
    }
    for l in labels {
        let _ = write!(out, ",{prefix}{l}_norm");
    }
    let _ = write!(out, ",{prefix}h_y");
}

fn sweep_cells(out: &mut String, row: &multinfo_core::ingest::TripletResult) {
    for &v in &row.values {
        out.push(',');
        out.push_str(&num(v));
    }
    for i in 0..row.values.len() {
        out.push(',');
        out.push_str(&opt(row.normalized(i)));
    }
    out.push(',');
    out.push_str(&num(row.h_y));
}

/// `y,x1,x2,<m>...,<m>_norm...,h_y`, then the same block prefixed `shuf_`
/// when a null sweep is given. Normalized cells are empty when `H(Y) = 0`.
pub fn sweep_csv(channels: &[String], sweep: &Sweep, shuffled: Option<&Sweep>) -> Result<String> {
    if let Some(s) = shuffled {
        if s.rows.len() != sweep.rows.len() || s.labels != sweep.labels {
            return Err(Error::Usage("shuffled sweep does not match the observed sweep".into()));
        }
    }
    let mut out = String::from("y,x1,x2");
    sweep_header(&mut out, &sweep.labels, "");
    if shuffled.is_some() {
        sweep_header(&mut out, &sweep.labels, "shuf_");
    }
    out.push('\n');
    for (i, row) in sweep.rows.iter().enumerate() {
        let t = row.triplet;
        let _ = write!(out, "{},{},{}", channels[t.y], channels[t.x1], channels[t.x2]);
        sweep_cells(&mut out, row);
        if let Some(s) = shuffled {
            sweep_cells(&mut out, &s.rows[i]);
        }
        out.push('\n');
    }
    Ok(out)
}

/// `measure,count,p10,median,p90,mean` over normalized values.
pub fn summary_csv(summary: &[Summary], shuffled: Option<&[Summary]>) -> String {
    let mut out = String::from("measure,count,p10,median,p90,mean\n");
    let rows = summary.iter().map(|s| ("", s));
    let shuf = shuffled.unwrap_or_default().iter().map(|s| ("shuf_", s));
    for (prefix, s) in rows.chain(shuf) {
        let _ = writeln!(
            out,
            "{prefix}{},{},{},{},{},{}",
            s.label,
            s.count,
            num(s.p10),
            num(s.median),
            num(s.p90),
            num(s.mean)
        );
    }
    out
}

/// Named measure values, one `label,value` row each.
pub fn report_csv(unit_name: &str, rows: &[(String, f64)]) -> String {
    let mut out = format!("measure,{unit_name}\n");
    for (label, v) in rows {
        let _ = writeln!(out, "{label},{}", num(*v));
    }
    out
}

/// Groups labelled state values back into a readable map, for diagnostics.
pub fn state_labels(d: &LoadedDistribution, state: &[u32]) -> BTreeMap<String, String> {
    d.dist
        .names()
        .iter()
        .zip(state)
        .zip(&d.labels)
        .map(|((n, &v), l)| {
            let shown = l.as_ref().and_then(|l| l.get(v as usize).cloned()).unwrap_or_else(|| v.to_string());
            (n.clone(), shown)
        })
        .collect()
}

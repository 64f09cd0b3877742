//! Subcommands: `compute`, `tables`, `netgen`, `analyze`, `shuffle`.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand};
use multinfo_core::ingest::{self, SpikeRaster};
use multinfo_core::netgen::{self, NetworkParams};
use multinfo_core::{registry, Measure, SourceTargetSplit, Unit};

use crate::error::{Error, Result};
use crate::{golden, io, sweep};

#[derive(Debug, Parser)]
#[command(name = "multinfo", version, about = "Multivariate information measures for discrete data")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate measures on a distribution file.
    Compute(ComputeArgs),
    /// Recompute the embedded reference values and report every cell.
    Tables(TablesArgs),
    /// Expand the three-node noisy-OR network into a distribution file.
    Netgen(NetgenArgs),
    /// Sweep every channel triplet of an event or raster file.
    Analyze(AnalyzeArgs),
    /// Write the circular-shift null of a raster.
    Shuffle(ShuffleArgs),
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    /// Distribution file (CSV or JSON).
    #[arg(long)]
    pub dist: PathBuf,
    /// Source variables. Defaults to every variable but the last.
    #[arg(long, value_delimiter = ',')]
    pub sources: Option<Vec<String>>,
    /// Target variable. Defaults to the last variable.
    #[arg(long)]
    pub target: Option<String>,
    /// Comma-separated measure names, or `all`.
    #[arg(long, default_value = "all")]
    pub measures: String,
    /// `bits` or `millibits`.
    #[arg(long, default_value = "bits")]
    pub unit: String,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TablesArgs {
    /// Only cells whose group or system has this name.
    #[arg(long)]
    pub filter: Option<String>,
}

#[derive(Debug, Args)]
pub struct NetgenArgs {
    /// Start from a named parameter set; explicit flags override it.
    #[arg(long)]
    pub preset: Option<String>,
    #[arg(long)]
    pub pr: Option<f64>,
    #[arg(long)]
    pub p12: Option<f64>,
    #[arg(long)]
    pub p1y: Option<f64>,
    #[arg(long)]
    pub p2y: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("input").required(true).args(["events", "raster"])))]
pub struct AnalyzeArgs {
    /// Events CSV `channel,time_s`.
    #[arg(long)]
    pub events: Option<PathBuf>,
    /// Raster CSV.
    #[arg(long)]
    pub raster: Option<PathBuf>,
    /// Bin width in seconds for events, and for rasters without a
    /// `# bin_width_s=` line.
    #[arg(long, default_value_t = 0.016)]
    pub bin_width: f64,
    /// Recording length in seconds for events; defaults to the file's
    /// `# duration_s=` line or the last event.
    #[arg(long)]
    pub duration: Option<f64>,
    #[arg(long, default_value = "all")]
    pub measures: String,
    /// Also sweep the circular-shift null drawn with this seed.
    #[arg(long)]
    pub shuffle: Option<u64>,
    /// Sweep CSV.
    #[arg(long)]
    pub out: PathBuf,
    /// Percentile summary CSV; printed to standard output when omitted.
    #[arg(long)]
    pub summary: Option<PathBuf>,
    /// Worker threads (default: one per core).
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ShuffleArgs {
    #[arg(long)]
    pub raster: PathBuf,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => io::write_text(p, text),
        None => out
            .write_all(text.as_bytes())
            .map_err(|source| Error::Io { path: "<stdout>".into(), source }),
    }
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Compute(a) => compute(a, out),
        Command::Tables(a) => tables(a, out),
        Command::Netgen(a) => netgen_cmd(a, out),
        Command::Analyze(a) => analyze(a, out),
        Command::Shuffle(a) => shuffle(a),
    }
}

fn compute(a: ComputeArgs, out: &mut dyn Write) -> Result<()> {
    let selection = Measure::parse_list(&a.measures)?;
    let unit: Unit = a.unit.parse().map_err(|_| Error::Usage(format!("unknown unit `{}`", a.unit)))?;
    let loaded = io::load_distribution(&a.dist)?;
    let d = &loaded.dist;
    let n = d.num_variables();
    let target = a.target.unwrap_or_else(|| d.names()[n - 1].clone());
    let sources = match a.sources {
        Some(s) => s,
        None => d.names().iter().filter(|v| **v != target).cloned().collect(),
    };
    let source_refs: Vec<&str> = sources.iter().map(String::as_str).collect();
    let split = SourceTargetSplit::by_names(d, &source_refs, &target)?;
    let rows: Vec<(String, f64)> = registry::evaluate(d, Some(&split), &selection)?
        .into_iter()
        .map(|r| (r.label, r.value * unit.scale()))
        .collect();
    emit(out, a.out.as_deref(), &io::report_csv(unit.name(), &rows))
}

fn tables(a: TablesArgs, out: &mut dyn Write) -> Result<()> {
    let report = golden::run(&golden::Reference, a.filter.as_deref())?;
    emit(out, None, &report.to_csv())?;
    let failed = report.failures().count();
    if failed > 0 {
        return Err(Error::GoldenFailures { failed, total: report.outcomes.len() });
    }
    Ok(())
}

fn network_params(a: &NetgenArgs) -> Result<NetworkParams> {
    let base = match &a.preset {
        Some(name) => Some(netgen::preset(name).ok_or_else(|| {
            let known: Vec<&str> = netgen::PRESETS.iter().map(|(n, _)| *n).collect();
            Error::Usage(format!("unknown preset `{name}` (known: {})", known.join(", ")))
        })?),
        None => None,
    };
    let pick = |flag: Option<f64>, from: Option<f64>, name: &str| {
        flag.or(from).ok_or_else(|| Error::Usage(format!("missing --{name} (or --preset)")))
    };
    Ok(NetworkParams::new(
        pick(a.pr, base.map(|b| b.p_r), "pr")?,
        pick(a.p12, base.map(|b| b.p_12), "p12")?,
        pick(a.p1y, base.map(|b| b.p_1y), "p1y")?,
        pick(a.p2y, base.map(|b| b.p_2y), "p2y")?,
    )?)
}

fn netgen_cmd(a: NetgenArgs, out: &mut dyn Write) -> Result<()> {
    let d = netgen::expand(&network_params(&a)?)?;
    emit(out, a.out.as_deref(), &io::distribution_csv(&d))
}

fn load_raster(a: &AnalyzeArgs) -> Result<SpikeRaster> {
    match (&a.events, &a.raster) {
        (Some(path), None) => {
            let events = io::parse_events_csv(&io::read_text(path)?, path, a.duration)?;
            Ok(ingest::bin(&events, a.bin_width)?)
        }
        (None, Some(path)) => io::parse_raster_csv(&io::read_text(path)?, path, Some(a.bin_width)),
        _ => Err(Error::Usage("give exactly one of --events or --raster".into())),
    }
}

fn analyze(a: AnalyzeArgs, out: &mut dyn Write) -> Result<()> {
    let selection = Measure::parse_list(&a.measures)?;
    if a.threads == Some(0) {
        return Err(Error::Usage("--threads must be at least 1".into()));
    }
    let raster = load_raster(&a)?;
    let (observed, null) = sweep::with_threads(a.threads, || -> Result<_> {
        let observed = sweep::triplet_sweep(&raster, &selection)?;
        let null = match a.shuffle {
            Some(seed) => Some(sweep::triplet_sweep(&ingest::shuffle_null(&raster, seed)?, &selection)?),
            None => None,
        };
        Ok((observed, null))
    })?;
    io::write_text(&a.out, &io::sweep_csv(raster.channels(), &observed, null.as_ref())?)?;
    let summary = ingest::summarize(&observed)?;
    let null_summary = null.as_ref().map(ingest::summarize).transpose()?;
    emit(out, a.summary.as_deref(), &io::summary_csv(&summary, null_summary.as_deref()))
}

fn shuffle(a: ShuffleArgs) -> Result<()> {
    let raster = io::parse_raster_csv(&io::read_text(&a.raster)?, &a.raster, None)?;
    io::write_text(&a.out, &io::raster_csv(&ingest::shuffle_null(&raster, a.seed)?))
}

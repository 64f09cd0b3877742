//! Triplet sweeps fanned out over the rayon pool.
//!
//! Every task reads the shared lagged counts and produces its own row;
//! `collect` keeps the `(y, x1, x2)` order of the triplet list, so output
//! is identical to the sequential sweep whatever the thread count.

use multinfo_core::ingest::{self, LaggedCounts, SpikeRaster, Sweep};
use multinfo_core::{registry, Measure};
use rayon::prelude::*;

use crate::error::Result;

pub fn triplet_sweep(r: &SpikeRaster, selection: &[Measure]) -> Result<Sweep> {
    ingest::check_sweepable(r)?;
    let selection = ingest::sweep_measures(selection);
    let lagged = LaggedCounts::new(r)?;
    let labels = registry::labels(&selection, 2)?;
    let rows = ingest::triplets(r.n_channels())
        .into_par_iter()
        .map(|t| ingest::evaluate_triplet(&lagged, r.channels(), t, &selection))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Sweep { labels, rows })
}

/// Runs `f` on a dedicated pool of `threads` workers, or on the global pool.
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("thread pool")
            .install(f),
        None => f(),
    }
}

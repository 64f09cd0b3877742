//! From event times to lagged triplet distributions.
//!
//! Events are binned into a binary raster (a bin is 1 when the channel fired
//! at least once in it). For a triplet `(x1, x2, y)` the joint pmf of
//! `(x1_t, x2_t, y_{t+1})` is estimated by counting over all `t` with a
//! successor bin. Sweeps visit every target with every unordered source pair,
//! and rows are ordered by `(y, x1, x2)` with `x1 < x2` as channel positions.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dist::{DiscreteDistribution, IndexSet, SourceTargetSplit};
use crate::error::{Error, Result};
use crate::math::abs;
use crate::measures;
use crate::registry::{self, Measure};

/// Times within this many bin widths of a bin edge are snapped onto it.
const EDGE_SNAP: f64 = 1e-9;

fn snapped_ratio(x: f64, w: f64) -> f64 {
    let q = x / w;
    let r = libm::round(q);
    if abs(q - r) < EDGE_SNAP {
        r
    } else {
        q
    }
}

/// Timestamped events for a set of channels.
#[derive(Clone, Debug, PartialEq)]
pub struct EventSeries {
    channels: Vec<String>,
    /// `(channel position, time in seconds)`, sorted by time.
    events: Vec<(usize, f64)>,
    duration: f64,
}

impl EventSeries {
    /// Events name their channel by id; ids missing from `channels` are an
    /// error. Events are sorted by time (stable for ties).
    pub fn new<S: AsRef<str>>(
        channels: Vec<String>,
        events: impl IntoIterator<Item = (S, f64)>,
        duration: f64,
    ) -> Result<Self> {
        for (i, c) in channels.iter().enumerate() {
            if channels[..i].contains(c) {
                return Err(Error::DuplicateChannel(c.clone()));
            }
        }
        if !(duration >= 0.0) || !duration.is_finite() {
            return Err(Error::MalformedState(format!("invalid duration {duration}")));
        }
        let mut out = Vec::new();
        for (id, t) in events {
            let id = id.as_ref();
            let c = channels
                .iter()
                .position(|c| c == id)
                .ok_or_else(|| Error::UnknownChannel(id.to_string()))?;
            if !(0.0..=duration).contains(&t) {
                return Err(Error::MalformedState(format!(
                    "event at {t} s on `{id}` lies outside [0, {duration}]"
                )));
            }
            out.push((c, t));
        }
        out.sort_by(|a, b| a.1.total_cmp(&b.1));
        Ok(EventSeries { channels, events: out, duration })
    }

    pub fn channels(&self) -> &[String] {
        &self.channels
    }

    pub fn events(&self) -> &[(usize, f64)] {
        &self.events
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }
}

/// Binary channel × bin matrix, one packed bit row per channel.
#[derive(Clone, Debug, PartialEq)]
pub struct SpikeRaster {
    channels: Vec<String>,
    bin_width: f64,
    n_bins: usize,
    words: usize,
    bits: Vec<u64>,
}

impl SpikeRaster {
    pub fn zeros(channels: Vec<String>, bin_width: f64, n_bins: usize) -> Result<Self> {
        if !(bin_width > 0.0) || !bin_width.is_finite() {
            return Err(Error::NonPositiveBinWidth(bin_width));
        }
        for (i, c) in channels.iter().enumerate() {
            if channels[..i].contains(c) {
                return Err(Error::DuplicateChannel(c.clone()));
            }
        }
        let words = n_bins.div_ceil(64);
        let bits = vec![0; words * channels.len()];
        Ok(SpikeRaster { channels, bin_width, n_bins, words, bits })
    }

    /// Builds a raster from one 0/1 row per channel; all rows must have the
    /// same length and only contain 0 or 1.
    pub fn from_rows(channels: Vec<String>, bin_width: f64, rows: &[Vec<u8>]) -> Result<Self> {
        if rows.len() != channels.len() {
            return Err(Error::MalformedState(format!(
                "{} rows for {} channels",
                rows.len(),
                channels.len()
            )));
        }
        let n_bins = rows.first().map_or(0, Vec::len);
        let mut r = SpikeRaster::zeros(channels, bin_width, n_bins)?;
        for (c, row) in rows.iter().enumerate() {
            if row.len() != n_bins {
                return Err(Error::MalformedState(format!(
                    "channel `{}` has {} bins, expected {n_bins}",
                    r.channels[c],
                    row.len()
                )));
            }
            for (t, &v) in row.iter().enumerate() {
                match v {
                    0 => {}
                    1 => r.set(c, t),
                    other => {
                        return Err(Error::MalformedState(format!(
                            "raster cell ({}, {t}) is {other}, expected 0 or 1",
                            r.channels[c]
                        )))
                    }
                }
            }
        }
        Ok(r)
    }

    pub fn channels(&self) -> &[String] {
        &self.channels
    }

    pub fn channel_index(&self, id: &str) -> Option<usize> {
        self.channels.iter().position(|c| c == id)
    }

    pub fn bin_width(&self) -> f64 {
        self.bin_width
    }

    pub fn n_bins(&self) -> usize {
        self.n_bins
    }

    pub fn n_channels(&self) -> usize {
        self.channels.len()
    }

    fn row_words(&self, c: usize) -> &[u64] {
        &self.bits[c * self.words..(c + 1) * self.words]
    }

    pub fn get(&self, c: usize, t: usize) -> bool {
        assert!(t < self.n_bins, "bin {t} out of range");
        self.row_words(c)[t / 64] >> (t % 64) & 1 == 1
    }

    /// Marks bin `t` of channel `c` as active.
    pub fn set(&mut self, c: usize, t: usize) {
        assert!(t < self.n_bins, "bin {t} out of range");
        self.bits[c * self.words + t / 64] |= 1 << (t % 64);
    }

    pub fn row(&self, c: usize) -> impl Iterator<Item = bool> + '_ {
        (0..self.n_bins).map(move |t| self.get(c, t))
    }

    /// Number of active bins on channel `c`.
    pub fn count(&self, c: usize) -> u64 {
        self.row_words(c).iter().map(|w| w.count_ones() as u64).sum()
    }
}

/// Bins events: cell `(c, t)` is 1 iff channel `c` has an event in
/// `[t·w, (t+1)·w)`. The raster has `ceil(duration / w)` bins; an event at
/// exactly `duration` lands in the last bin.
pub fn bin(events: &EventSeries, bin_width: f64) -> Result<SpikeRaster> {
    if !(bin_width > 0.0) || !bin_width.is_finite() {
        return Err(Error::NonPositiveBinWidth(bin_width));
    }
    let n_bins = libm::ceil(snapped_ratio(events.duration, bin_width)) as usize;
    let mut r = SpikeRaster::zeros(events.channels.clone(), bin_width, n_bins)?;
    for &(c, t) in &events.events {
        let idx = libm::floor(snapped_ratio(t, bin_width)) as usize;
        if n_bins > 0 {
            r.set(c, idx.min(n_bins - 1));
        }
    }
    Ok(r)
}

/// A target channel and an unordered pair of source channels
/// (positions in the raster, `x1 < x2`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triplet {
    pub y: usize,
    pub x1: usize,
    pub x2: usize,
}

impl Triplet {
    /// Canonicalizes the source order; rejects repeated channels.
    pub fn new(x1: usize, x2: usize, y: usize, channels: &[String]) -> Result<Self> {
        for c in [x1, x2, y] {
            if c >= channels.len() {
                return Err(Error::UnknownChannel(format!("#{c}")));
            }
        }
        if x1 == x2 || x1 == y {
            return Err(Error::DuplicateChannel(channels[x1].clone()));
        }
        if x2 == y {
            return Err(Error::DuplicateChannel(channels[x2].clone()));
        }
        Ok(Triplet { y, x1: x1.min(x2), x2: x1.max(x2) })
    }
}

/// All triplets over `n` channels in `(y, x1, x2)` order:
/// `n · C(n−1, 2)` of them.
pub fn triplets(n: usize) -> Vec<Triplet> {
    let mut out = Vec::new();
    for y in 0..n {
        for x1 in 0..n {
            for x2 in x1 + 1..n {
                if x1 != y && x2 != y {
                    out.push(Triplet { y, x1, x2 });
                }
            }
        }
    }
    out
}

/// Lagged bit rows shared by every triplet of one raster: sources read bins
/// `0..T−1`, targets read bins `1..T`, so bit `t` pairs `x_t` with `y_{t+1}`.
#[derive(Clone, Debug)]
pub struct LaggedCounts {
    samples: usize,
    words: usize,
    lead: Vec<u64>,
    follow: Vec<u64>,
    lead_count: Vec<u64>,
    follow_count: Vec<u64>,
    n_channels: usize,
}

impl LaggedCounts {
    pub fn new(r: &SpikeRaster) -> Result<Self> {
        if r.n_bins < 2 {
            return Err(Error::TooShort { bins: r.n_bins, needed: 2 });
        }
        let samples = r.n_bins - 1;
        let words = samples.div_ceil(64);
        let n = r.n_channels();
        let mut lead = vec![0u64; n * words];
        let mut follow = vec![0u64; n * words];
        let tail_mask = if samples.is_multiple_of(64) { u64::MAX } else { (1u64 << (samples % 64)) - 1 };
        for c in 0..n {
            let src = r.row_words(c);
            for w in 0..words {
                let mut l = src[w];
                let mut f = src[w] >> 1;
                if let Some(&next) = src.get(w + 1) {
                    f |= next << 63;
                }
                if w == words - 1 {
                    l &= tail_mask;
                    f &= tail_mask;
                }
                lead[c * words + w] = l;
                follow[c * words + w] = f;
            }
        }
        let pop = |v: &[u64]| v.iter().map(|w| w.count_ones() as u64).sum::<u64>();
        let lead_count = (0..n).map(|c| pop(&lead[c * words..(c + 1) * words])).collect();
        let follow_count = (0..n).map(|c| pop(&follow[c * words..(c + 1) * words])).collect();
        Ok(LaggedCounts { samples, words, lead, follow, lead_count, follow_count, n_channels: n })
    }

    /// Number of `(t, t+1)` pairs, `T − 1`.
    pub fn samples(&self) -> usize {
        self.samples
    }

    fn lead_row(&self, c: usize) -> &[u64] {
        &self.lead[c * self.words..(c + 1) * self.words]
    }

    fn follow_row(&self, c: usize) -> &[u64] {
        &self.follow[c * self.words..(c + 1) * self.words]
    }

    /// Counts of `(x1_t, x2_t, y_{t+1})`, indexed by `x1 + 2·x2 + 4·y`.
    pub fn counts(&self, t: Triplet) -> [u64; 8] {
        assert!(t.x1 < self.n_channels && t.x2 < self.n_channels && t.y < self.n_channels);
        let (a, b, c) = (self.lead_row(t.x1), self.lead_row(t.x2), self.follow_row(t.y));
        let (mut ab, mut ac, mut bc, mut abc) = (0u64, 0u64, 0u64, 0u64);
        for w in 0..self.words {
            let (x, y, z) = (a[w], b[w], c[w]);
            ab += (x & y).count_ones() as u64;
            ac += (x & z).count_ones() as u64;
            bc += (y & z).count_ones() as u64;
            abc += (x & y & z).count_ones() as u64;
        }
        let (na, nb, nc) = (self.lead_count[t.x1], self.lead_count[t.x2], self.follow_count[t.y]);
        let n = self.samples as u64;
        let mut out = [0u64; 8];
        out[0b111] = abc;
        out[0b011] = ab - abc;
        out[0b101] = ac - abc;
        out[0b110] = bc - abc;
        out[0b001] = na + abc - ab - ac;
        out[0b010] = nb + abc - ab - bc;
        out[0b100] = nc + abc - ac - bc;
        out[0b000] = n + ab + ac + bc - na - nb - nc - abc;
        out
    }

    /// Empirical pmf over `(x1, x2, y)`, variables named after the channels.
    pub fn distribution(&self, t: Triplet, channels: &[String]) -> Result<DiscreteDistribution> {
        let counts = self.counts(t);
        let n = self.samples as f64;
        let entries = (0..8u32).map(|k| (vec![k & 1, k >> 1 & 1, k >> 2 & 1], counts[k as usize] as f64 / n));
        DiscreteDistribution::new(
            [channels[t.x1].clone(), channels[t.x2].clone(), channels[t.y].clone()],
            [2, 2, 2],
            entries,
        )
    }
}

/// Empirical pmf of `(x1_t, x2_t, y_{t+1})` for channel positions.
pub fn triplet_distribution(
    r: &SpikeRaster,
    x1: usize,
    x2: usize,
    y: usize,
) -> Result<DiscreteDistribution> {
    for c in [x1, x2, y] {
        if c >= r.n_channels() {
            return Err(Error::UnknownChannel(format!("#{c}")));
        }
    }
    if x1 == x2 || x1 == y || x2 == y {
        let dup = if x1 == x2 || x1 == y { x1 } else { x2 };
        return Err(Error::DuplicateChannel(r.channels[dup].clone()));
    }
    let lagged = LaggedCounts::new(r)?;
    // keep the caller's source order in the variable order
    let t = Triplet { y, x1, x2 };
    lagged.distribution(t, &r.channels)
}

/// Measures for one triplet, in the order of the sweep's labels, plus the
/// target entropy used for normalization.
#[derive(Clone, Debug, PartialEq)]
pub struct TripletResult {
    pub triplet: Triplet,
    pub values: Vec<f64>,
    pub h_y: f64,
}

impl TripletResult {
    /// `H(Y)` when it is positive.
    pub fn normalizer(&self) -> Option<f64> {
        (self.h_y > 0.0).then_some(self.h_y)
    }

    pub fn normalized(&self, i: usize) -> Option<f64> {
        self.normalizer().map(|h| self.values[i] / h)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Sweep {
    pub labels: Vec<String>,
    pub rows: Vec<TripletResult>,
}

/// Measures evaluated in a sweep: the selection minus `h_y`, which is always
/// reported as the normalizer.
pub fn sweep_measures(selection: &[Measure]) -> Vec<Measure> {
    selection.iter().copied().filter(|&m| m != Measure::TargetEntropy).collect()
}

/// One triplet's row; `selection` should already exclude `h_y`.
pub fn evaluate_triplet(
    lagged: &LaggedCounts,
    channels: &[String],
    t: Triplet,
    selection: &[Measure],
) -> Result<TripletResult> {
    let d = lagged.distribution(t, channels)?;
    let split = SourceTargetSplit::new(&d, IndexSet::new([0, 1]), 2)?;
    let values = registry::evaluate(&d, Some(&split), selection)?
        .into_iter()
        .map(|r| r.value)
        .collect();
    let h_y = measures::entropy(&d, &IndexSet::singleton(2))?;
    Ok(TripletResult { triplet: t, values, h_y })
}

/// A sweep needs three channels and two bins.
pub fn check_sweepable(r: &SpikeRaster) -> Result<()> {
    if r.n_channels() < 3 {
        return Err(Error::InvalidSplit(format!(
            "a triplet sweep needs at least 3 channels, got {}",
            r.n_channels()
        )));
    }
    Ok(())
}

/// Sequential sweep over every triplet of `r`.
pub fn triplet_sweep(r: &SpikeRaster, selection: &[Measure]) -> Result<Sweep> {
    check_sweepable(r)?;
    let selection = sweep_measures(selection);
    let lagged = LaggedCounts::new(r)?;
    let labels = registry::labels(&selection, 2)?;
    let rows = triplets(r.n_channels())
        .into_iter()
        .map(|t| evaluate_triplet(&lagged, &r.channels, t, &selection))
        .collect::<Result<Vec<_>>>()?;
    Ok(Sweep { labels, rows })
}

/// Rotates channel `c` left by `offsets[c]`: new bin `t` holds old bin
/// `(t + offset) mod T`, i.e. the train is cut at `offset` and the two pieces
/// swapped.
pub fn rotate(r: &SpikeRaster, offsets: &[usize]) -> Result<SpikeRaster> {
    if offsets.len() != r.n_channels() {
        return Err(Error::MalformedState(format!(
            "{} offsets for {} channels",
            offsets.len(),
            r.n_channels()
        )));
    }
    let n = r.n_bins;
    let mut out = SpikeRaster::zeros(r.channels.clone(), r.bin_width, n)?;
    if n == 0 {
        return Ok(out);
    }
    for (c, &off) in offsets.iter().enumerate() {
        let off = off % n;
        for t in 0..n {
            let src = (t + off) % n;
            if r.get(c, src) {
                out.set(c, t);
            }
        }
    }
    Ok(out)
}

/// Per-channel split-and-swap null model: every channel is rotated by its own
/// offset drawn uniformly from `1..T`. Deterministic in `seed`.
pub fn shuffle_null(r: &SpikeRaster, seed: u64) -> Result<SpikeRaster> {
    if r.n_bins < 2 {
        return Err(Error::TooShort { bins: r.n_bins, needed: 2 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let offsets: Vec<usize> = (0..r.n_channels()).map(|_| rng.gen_range(1..r.n_bins)).collect();
    rotate(r, &offsets)
}

/// Linear interpolation between closest ranks: position `(n − 1)·q` in the
/// sorted sample. `sorted` must be non-empty and ascending.
pub fn percentile(sorted: &[f64], q: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * q;
    let lo = libm::floor(h) as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Distribution summary of one measure's normalized values. All fields are
/// NaN when no triplet had a positive normalizer.
#[derive(Clone, Debug, PartialEq)]
pub struct Summary {
    pub label: String,
    pub count: usize,
    pub p10: f64,
    pub median: f64,
    pub p90: f64,
    pub mean: f64,
}

/// 10th, 50th and 90th percentiles and mean of each measure's normalized
/// values across the sweep.
pub fn summarize(sweep: &Sweep) -> Result<Vec<Summary>> {
    if sweep.rows.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut out = Vec::with_capacity(sweep.labels.len());
    for (i, label) in sweep.labels.iter().enumerate() {
        let mut v: Vec<f64> = sweep.rows.iter().filter_map(|r| r.normalized(i)).collect();
        v.sort_by(f64::total_cmp);
        let s = if v.is_empty() {
            Summary {
                label: label.clone(),
                count: 0,
                p10: f64::NAN,
                median: f64::NAN,
                p90: f64::NAN,
                mean: f64::NAN,
            }
        } else {
            Summary {
                label: label.clone(),
                count: v.len(),
                p10: percentile(&v, 0.1),
                median: percentile(&v, 0.5),
                p90: percentile(&v, 0.9),
                mean: v.iter().sum::<f64>() / v.len() as f64,
            }
        };
        out.push(s);
    }
    Ok(out)
}

//! Random joint distributions with a reproducible stream.

use multinfo_core::DiscreteDistribution;
use rand::Rng;

/// Decodes flat index `k` into a state, first variable varying fastest.
pub fn decode(mut k: usize, alphabets: &[u32]) -> Vec<u32> {
    alphabets
        .iter()
        .map(|&a| {
            let v = (k % a as usize) as u32;
            k /= a as usize;
            v
        })
        .collect()
}

/// Normalizes non-negative weights, one per state of the dense grid.
/// `None` when every weight is zero.
pub fn from_weights(alphabets: &[u32], weights: &[f64]) -> Option<DiscreteDistribution> {
    let total: f64 = weights.iter().sum();
    if !(total > 0.0) {
        return None;
    }
    let names: Vec<String> = (1..=alphabets.len()).map(|i| format!("V{i}")).collect();
    let entries = weights
        .iter()
        .enumerate()
        .map(|(k, w)| (decode(k, alphabets), w / total));
    Some(DiscreteDistribution::new(names, alphabets.to_vec(), entries).expect("valid by construction"))
}

/// A distribution over `min_vars..=max_vars` variables with alphabets of
/// size `1..=max_alphabet`. About a quarter of the states get zero mass so
/// the `0 log 0` paths are exercised.
pub fn random_distribution<R: Rng>(
    rng: &mut R,
    min_vars: usize,
    max_vars: usize,
    max_alphabet: u32,
) -> DiscreteDistribution {
    loop {
        let n = rng.gen_range(min_vars..=max_vars);
        let alphabets: Vec<u32> = (0..n).map(|_| rng.gen_range(1..=max_alphabet)).collect();
        let size: usize = alphabets.iter().map(|&a| a as usize).product();
        let weights: Vec<f64> = (0..size)
            .map(|_| if rng.gen_bool(0.25) { 0.0 } else { rng.gen::<f64>() })
            .collect();
        if let Some(d) = from_weights(&alphabets, &weights) {
            return d;
        }
    }
}

//! Small reference systems with known information structure: two- and
//! three-input logic gates and a few hand-built three-variable joints.
//!
//! Every variable is binary unless noted; names are `X1`, `X2` (, `X3`) and
//! `Y`, with `Y` last.

use alloc::vec;
use alloc::vec::Vec;

use crate::dist::DiscreteDistribution;

fn gate2(f: impl Fn(u32, u32) -> u32) -> DiscreteDistribution {
    let entries: Vec<_> = [(0, 0), (1, 0), (0, 1), (1, 1)]
        .into_iter()
        .map(|(a, b)| (vec![a, b, f(a, b)], 0.25))
        .collect();
    DiscreteDistribution::new(["X1", "X2", "Y"], [2, 2, 2], entries).expect("valid gate")
}

fn gate3(f: impl Fn(u32, u32, u32) -> u32) -> DiscreteDistribution {
    let entries: Vec<_> = (0..8u32)
        .map(|k| {
            let (a, b, c) = (k & 1, k >> 1 & 1, k >> 2 & 1);
            (vec![a, b, c, f(a, b, c)], 0.125)
        })
        .collect();
    DiscreteDistribution::new(["X1", "X2", "X3", "Y"], [2, 2, 2, 2], entries).expect("valid gate")
}

fn table(rows: &[([u32; 3], f64)], y_alphabet: u32) -> DiscreteDistribution {
    DiscreteDistribution::new(
        ["X1", "X2", "Y"],
        [2, 2, y_alphabet],
        rows.iter().map(|(s, p)| (s.to_vec(), *p)),
    )
    .expect("valid table")
}

/// `Y = X1 XOR X2`, uniform inputs.
pub fn xor() -> DiscreteDistribution {
    gate2(|a, b| a ^ b)
}

/// `Y = X1`, with `X2` an independent fair coin.
pub fn copy_x1() -> DiscreteDistribution {
    gate2(|a, _| a)
}

/// `Y = X1 AND X2`, uniform inputs.
pub fn and() -> DiscreteDistribution {
    gate2(|a, b| a & b)
}

/// Perfectly correlated sources weakly informative about `Y`; ΔI exceeds
/// `I(X1,X2;Y)` here.
pub fn correlated_sources() -> DiscreteDistribution {
    table(
        &[([0, 0, 0], 0.1), ([1, 1, 0], 0.1), ([0, 0, 1], 0.2), ([1, 1, 1], 0.6)],
        2,
    )
}

/// `Y` (four states) names each input combination.
pub fn distinct_states() -> DiscreteDistribution {
    table(
        &[([0, 0, 0], 0.25), ([1, 0, 1], 0.25), ([0, 1, 2], 0.25), ([1, 1, 3], 0.25)],
        4,
    )
}

/// Copied sources and a constant target.
pub fn constant_target() -> DiscreteDistribution {
    table(&[([0, 0, 0], 0.5), ([1, 1, 0], 0.5)], 2)
}

/// `Y = X1 XOR X2 XOR X3`.
pub fn xor3() -> DiscreteDistribution {
    gate3(|a, b, c| a ^ b ^ c)
}

/// `Y = X1 XOR X2` with an unrelated third input `X3`.
pub fn xor12() -> DiscreteDistribution {
    gate3(|a, b, _| a ^ b)
}

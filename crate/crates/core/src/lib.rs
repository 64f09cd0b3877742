//! Multivariate information measures over discrete joint distributions.
//!
//! The crate is `no_std` and only needs `alloc`. Everything here is a pure
//! function of an immutable [`DiscreteDistribution`]:
//!
//! * [`measures`]: entropy, mutual information, conditional mutual
//!   information, interaction information, co-information, total correlation,
//!   dual total correlation, ΔI, the redundancy-synergy index and Varadan's
//!   synergy.
//! * [`pid`]: the Williams–Beer partial information decomposition for two
//!   and three sources, built on specific information and `I_min`.
//! * [`netgen`]: the three-node noisy-OR network expanded to an exact joint
//!   distribution.
//! * [`ingest`]: spike rasters, lagged triplet estimation, the circular-shift
//!   null model and percentile summaries.
//! * [`registry`]: the fixed set of measure names used by front ends.
//!
//! All values are in bits.
//!
//! ```
//! use multinfo_core::{measures, DiscreteDistribution, IndexSet, SourceTargetSplit};
//!
//! // Y = X1 AND X2 with uniform inputs.
//! let d = DiscreteDistribution::new(
//!     ["X1", "X2", "Y"],
//!     [2, 2, 2],
//!     [
//!         (vec![0, 0, 0], 0.25),
//!         (vec![1, 0, 0], 0.25),
//!         (vec![0, 1, 0], 0.25),
//!         (vec![1, 1, 1], 0.25),
//!     ],
//! )
//! .unwrap();
//! let split = SourceTargetSplit::new(&d, IndexSet::new([0, 1]), 2).unwrap();
//! let ii = measures::interaction_information(&d, &IndexSet::range(3)).unwrap();
//! assert!((ii - 0.1887).abs() < 1e-4);
//! assert!(measures::delta_i(&d, &split).unwrap() > 0.10);
//! ```

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod dist;
pub mod error;
pub mod ingest;
pub mod measures;
pub mod netgen;
pub mod pid;
pub mod registry;
pub mod systems;

mod math;

pub use dist::{DiscreteDistribution, IndexSet, SourceTargetSplit, State, VariableId};
pub use error::{Error, Result};
pub use pid::{Antichain, PidResult};
pub use registry::{Measure, MeasureResult, Unit};

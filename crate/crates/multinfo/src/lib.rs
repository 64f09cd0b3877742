//! File formats, the golden-value regression runner, the parallel triplet
//! sweep and the `multinfo` command-line front end, on top of
//! [`multinfo_core`].

pub mod cli;
pub mod error;
pub mod format;
pub mod golden;
pub mod io;
pub mod sweep;

pub use error::{Error, Result};
pub use multinfo_core as core;

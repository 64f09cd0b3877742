//! Helpers shared by the property tests, the oracle tests and the
//! acceptance suite.
#![allow(dead_code)]

pub mod identities;
pub mod oracle;
pub mod random;

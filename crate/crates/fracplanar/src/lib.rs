//! File formats and command implementations around `fracplanar-core`.
//!
//! The binary in `main.rs` only parses arguments; everything it runs lives
//! here so the integration tests can call the same code paths.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod io;
pub mod report;
pub mod reproduce;
pub mod spec;

pub use spec::SystemSpec;

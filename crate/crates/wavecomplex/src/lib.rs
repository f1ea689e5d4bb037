//! Command-line tooling and file formats around `wavecomplex-core`.

pub mod cli;
pub mod config;
pub mod error;
pub mod formats;
pub mod parallel;

pub use error::CliError;

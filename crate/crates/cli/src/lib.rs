//! Command-line driver: model file in, time series, spectrum, peak report
//! and plot out.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod expr;
pub mod plot;

pub use commands::{cmd_plot, cmd_run, cmd_validate, pipeline, write_artifacts, Artifacts};
pub use config::{EngineKind, RunConfig};
pub use error::CliError;

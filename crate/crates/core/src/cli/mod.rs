//! Batch front-end: the run configuration and the work behind each `msp`
//! subcommand.

mod commands;
mod config;

pub use commands::{simulate, validate, write_table, write_table_file, SimulateKind, TableKind};
pub use config::{
    EvaluateConfig, FftConfig, OutputConfig, RunConfig, SimulateConfig, TransitionMethod, UpcrossingMethod,
};

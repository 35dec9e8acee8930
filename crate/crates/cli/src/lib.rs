//! Command-line front end for `blochring`: layered TOML/flag configuration,
//! experiment runners, parameter sweeps, figure presets and table output.

pub mod cli;
pub mod config;
pub mod error;
pub mod experiment;
pub mod presets;
pub mod table;

pub use cli::{execute, Cli, Command, Written};
pub use config::{ConfigLayer, ExperimentConfig, ExperimentKind, Format, TopologyKind, OUT_DIR_ENV};
pub use error::{CliError, Result};
pub use experiment::{run_single, run_sweep, RunOutput};
pub use presets::Figure;
pub use table::{parse_csv, Provenance, ResultTable};

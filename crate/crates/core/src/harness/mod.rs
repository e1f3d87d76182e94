//! Command-line configuration and the scripted experiments.

mod cli;
mod config;
mod experiments;

pub use cli::{run, sample_csv, EXIT_CHECK_FAILED, EXIT_OK, EXIT_USAGE};
pub use config::{Overrides, RunConfig, SEED_ENV};
pub use experiments::{
    amalgam_experiment, converge_experiment, doubling_schedule, lacunary_series, lacunary_tail,
    AmalgamRow, AmalgamTable, ConvergenceCurve, ConvergenceRow, GridSpec,
};

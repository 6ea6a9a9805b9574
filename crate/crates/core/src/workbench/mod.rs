//! Experiment configuration, orchestration and CSV output.

mod config;
mod csv;
mod experiment;

pub use config::{
    figure_config, load_config, load_config_from_reader, parse_config, ConfigError,
    ExperimentConfig, Figure, FigureOverrides, ModelSpec, StatePreset,
};
pub use csv::{emit_csv, format_value, write_csv, Dataset};
pub use experiment::{
    blp_report, equivalence_report, run_experiment, BlpReport, EquivalenceReport, WorkbenchError,
    BOUND_SLACK,
};

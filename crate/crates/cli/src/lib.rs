//! Benchmark harness around the solver library: TOML-configured experiment
//! runs that share one problem instance and one initial point across
//! entries, CSV trace emission, reference-optimum handling, slope fitting,
//! bound tables, and SVG plots.

pub mod bounds;
pub mod config;
pub mod csvio;
pub mod experiment;
pub mod plot;
pub mod presets;

/// Environment variable naming the directory that holds downloaded sparse
/// datasets referenced by dataset-backed configurations.
pub const DATA_DIR_ENV: &str = "SUBGRAD_DATA_DIR";

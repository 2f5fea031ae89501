//! Figure presets, deterministic CSV/JSON artifacts and the command-line
//! driver for the `dissgrover` simulators.

pub mod config;
pub mod error;
pub mod presets;
pub mod runner;
pub mod series;
pub mod validate;

pub use config::{ExperimentConfig, FigureId};
pub use error::{ExperimentError, Result};
pub use runner::{compute_series, run_experiment, RunManifest, RunOutput};
pub use series::{Provenance, Series};
pub use validate::{validate, Diagnostic, Level};

//! Monte Carlo harness for the `smcs-core` detectors.
//!
//! A sweep is described by an [`ExperimentConfig`] (flat `key = value`
//! text), executed by [`run_sweep`] and persisted with [`output`]. Figure
//! presets in [`figures`] bundle several sweeps and emit gnuplot scripts
//! through [`plot`].

pub mod config;
pub mod figures;
pub mod output;
pub mod plot;
pub mod sweep;

pub use config::{ConfigError, DetectorKind, ExperimentConfig, OutputFormat};
pub use sweep::{run_sweep, Refusal, SweepError, SweepRecord, SweepResult};

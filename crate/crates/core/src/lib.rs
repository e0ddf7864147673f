//! Gaussian fuzzy inference classifier for five-channel gas-sensor data.
//!
//! The crate covers the whole desk workflow for odor classification with an
//! electronic nose:
//!
//! - [`fis`] — the fuzzy inference model: Gaussian rule activations, the
//!   normalized weighted-average output, and a per-sample gradient-descent
//!   update of all membership parameters.
//! - [`pipeline`] — one-hot targets, train/test splitting, the
//!   object-sequential training loop, and [`pipeline::run_experiment`] which
//!   drives a full train-then-examine run.
//! - [`eval`] — the segment examination: windowed RMSE against candidate
//!   targets, pass tallies, and the confusion matrix with its efficiency
//!   score.
//! - [`data`] — dataset container and ingest: ADC-to-volt conversion, a
//!   seeded synthetic session generator, session CSV files, and the live
//!   line protocol.
//! - [`model_file`] — a diffable text format for trained models.
//!
//! Everything is deterministic: the same seed, data, and configuration
//! reproduce models and reports bit-for-bit.
//!
//! ```
//! use fisnose::data::{generate_session, SessionConfig};
//! use fisnose::eval::EvalConfig;
//! use fisnose::pipeline::{run_experiment, TrainConfig};
//!
//! let dataset = generate_session(&SessionConfig::default())?;
//! let report = run_experiment(&dataset, &TrainConfig::default(), &EvalConfig::default())?;
//! assert_eq!(report.efficiency(), 100.0);
//! # fisnose::Result::Ok(())
//! ```

pub mod data;
pub mod error;
pub mod eval;
pub mod fis;
pub mod model_file;
pub mod pipeline;

pub use error::{Error, Result};
pub use fis::{Combinator, FisModel, SensorSample};

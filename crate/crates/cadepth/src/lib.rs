//! Files, datasets, reports and the command line around `cadepth-core`.

pub mod catalog;
pub mod config;
pub mod dataset;
mod error;
pub mod evaluate;
pub mod io;
pub mod report;
pub mod weights_file;

pub use error::{Error, Result};
pub use evaluate::{evaluate_dataset, evaluate_samples};
pub use report::{rank_scenes, EvaluationReport};

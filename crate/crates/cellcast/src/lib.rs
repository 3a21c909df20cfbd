//! Hourly cell-level KPI forecasting for 4G/5G radio networks.
//!
//! The crate turns raw per-cell indicator series into week-ahead forecasts:
//! seasonal gap imputation, sliding 28-day windows (21 days of mean-scaled
//! history in, 7 days out), a bias-free densely connected MLP trained with
//! a scale-free percentage loss and hand-rolled backpropagation, two
//! reference forecasters, and a technology-weighted MAPE scorer. A seeded
//! synthetic generator stands in for private network data, so everything
//! here runs self-contained.
//!
//! The fastest way in is the runnable examples:
//!
//! - `cargo run --example synthesize` — generate a seeded corpus and look
//!   at its files
//! - `cargo run --example impute` — fill masked hours from neighboring
//!   weeks
//! - `cargo run --example featurize` — cut a series into model rows
//! - `cargo run --example gradient_check` — verify backpropagation against
//!   finite differences
//! - `cargo run --example train_and_forecast` — fit a small model and
//!   forecast a week
//! - `cargo run --example baselines` — the naive and rule-based reference
//!   forecasts
//! - `cargo run --example evaluate` — score forecast grids
//! - `cargo run --example end_to_end` — the whole chain, scaled down
//!
//! The same capabilities are scriptable through the `cellcast` binary
//! (`synth`, `impute`, `featurize`, `train`, `predict`, `baseline`,
//! `evaluate`, `pipeline`); see README.md.

pub mod baselines;
pub mod cli;
pub mod config;
pub mod error;
pub mod eval;
pub mod ingest;
pub mod model;
pub mod preprocess;
pub mod series;
pub mod synth;

pub use error::{Error, Result};

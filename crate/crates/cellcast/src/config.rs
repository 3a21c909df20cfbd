//! Flat `key = value` run configuration shared by all subcommands.
//!
//! Lines starting with `#` and blank lines are ignored. Unknown and
//! duplicated keys are rejected with their line number so typos cannot
//! silently fall back to defaults.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use chrono::NaiveDate;

use crate::baselines::{BaselineMethod, RuleParams};
use crate::error::{Error, Result};
use crate::ingest::DATE_FORMAT;
use crate::model::{AdamParams, TrainConfig};
use crate::series::{Indicator, Tech};
use crate::synth::SynthConfig;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    pub out_dir: PathBuf,
    pub training_csv: Option<PathBuf>,
    pub holiday_file: Option<PathBuf>,
    pub actual_grid: Option<PathBuf>,
    pub pred_grid: Option<PathBuf>,
    pub model_path: Option<PathBuf>,
    pub train_log_csv: Option<PathBuf>,
    pub indicator: Option<Indicator>,
    pub tech: Option<Tech>,
    pub stride_days: usize,
    pub max_rows: Option<usize>,
    pub epochs: usize,
    pub lr0: f64,
    pub batch_sizes: Vec<usize>,
    pub d_hidden: usize,
    pub adam: AdamParams,
    pub method: BaselineMethod,
    pub rule: RuleParams,
    /// Synthetic-corpus settings; its `seed` field is replaced by [`Self::seed`].
    pub synth: SynthConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 42,
            out_dir: PathBuf::from("out"),
            training_csv: None,
            holiday_file: None,
            actual_grid: None,
            pred_grid: None,
            model_path: None,
            train_log_csv: None,
            indicator: None,
            tech: None,
            stride_days: 1,
            max_rows: None,
            epochs: 128,
            lr0: 0.0005,
            batch_sizes: vec![256],
            d_hidden: 256,
            adam: AdamParams::default(),
            method: BaselineMethod::Naive,
            rule: RuleParams::default(),
            synth: SynthConfig::default(),
        }
    }
}

fn parse_scalar<T: FromStr>(key: &str, line: usize, value: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    value.parse().map_err(|e| {
        Error::Config(format!("line {line}: bad value for {key}: {e} (got {value:?})"))
    })
}

fn parse_list<T: FromStr>(key: &str, line: usize, value: &str) -> Result<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    if value.is_empty() {
        return Ok(Vec::new());
    }
    value
        .split(',')
        .map(|item| parse_scalar(key, line, item.trim()))
        .collect()
}

fn parse_date(key: &str, line: usize, value: &str) -> Result<NaiveDate> {
    NaiveDate::parse_from_str(value, DATE_FORMAT).map_err(|_| {
        Error::Config(format!(
            "line {line}: bad value for {key}: expected YYYY-MM-DD, got {value:?}"
        ))
    })
}

impl RunConfig {
    /// Parse a config file on top of the defaults.
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_str_inner(&text)
    }

    fn from_str_inner(text: &str) -> Result<Self> {
        let mut config = RunConfig::default();
        let mut seen = std::collections::BTreeSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (key, value) = trimmed.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {line}: expected key = value, got {trimmed:?}"))
            })?;
            let key = key.trim();
            let value = value.trim();
            if !seen.insert(key.to_string()) {
                return Err(Error::Config(format!("line {line}: duplicate key {key}")));
            }
            config.apply(key, value, line)?;
        }
        config.validate()?;
        Ok(config)
    }

    fn apply(&mut self, key: &str, value: &str, line: usize) -> Result<()> {
        match key {
            "seed" => self.seed = parse_scalar(key, line, value)?,
            "out_dir" => self.out_dir = PathBuf::from(value),
            "training_csv" => self.training_csv = Some(PathBuf::from(value)),
            "holiday_file" => self.holiday_file = Some(PathBuf::from(value)),
            "actual_grid" => self.actual_grid = Some(PathBuf::from(value)),
            "pred_grid" => self.pred_grid = Some(PathBuf::from(value)),
            "model_path" => self.model_path = Some(PathBuf::from(value)),
            "train_log_csv" => self.train_log_csv = Some(PathBuf::from(value)),
            "indicator" => self.indicator = Some(parse_scalar(key, line, value)?),
            "tech" => self.tech = Some(parse_scalar(key, line, value)?),
            "stride_days" => self.stride_days = parse_scalar(key, line, value)?,
            "max_rows" => self.max_rows = Some(parse_scalar(key, line, value)?),
            "epochs" => self.epochs = parse_scalar(key, line, value)?,
            "lr0" => self.lr0 = parse_scalar(key, line, value)?,
            "batch_sizes" => self.batch_sizes = parse_list(key, line, value)?,
            "d_hidden" => self.d_hidden = parse_scalar(key, line, value)?,
            "beta1" => self.adam.beta1 = parse_scalar(key, line, value)?,
            "beta2" => self.adam.beta2 = parse_scalar(key, line, value)?,
            "epsilon" => self.adam.epsilon = parse_scalar(key, line, value)?,
            "method" => self.method = parse_scalar(key, line, value)?,
            "alpha1" => self.rule.alpha1 = parse_scalar(key, line, value)?,
            "alpha2" => self.rule.alpha2 = parse_scalar(key, line, value)?,
            "rule_weights" => {
                let weights: Vec<f64> = parse_list(key, line, value)?;
                self.rule.weights = weights.try_into().map_err(|v: Vec<f64>| {
                    Error::Config(format!(
                        "line {line}: rule_weights needs exactly 6 values, got {}",
                        v.len()
                    ))
                })?;
            }
            "synth.n_cells_4g" => self.synth.n_cells_4g = parse_scalar(key, line, value)?,
            "synth.n_cells_5g" => self.synth.n_cells_5g = parse_scalar(key, line, value)?,
            "synth.n_days" => self.synth.n_days = parse_scalar(key, line, value)?,
            "synth.daily_amp" => self.synth.daily_amp = parse_scalar(key, line, value)?,
            "synth.weekly_amp" => self.synth.weekly_amp = parse_scalar(key, line, value)?,
            "synth.base_level" => self.synth.base_level = parse_scalar(key, line, value)?,
            "synth.noise_sd" => self.synth.noise_sd = parse_scalar(key, line, value)?,
            "synth.missing_rate" => self.synth.missing_rate = parse_scalar(key, line, value)?,
            "synth.holiday_dip" => self.synth.holiday_dip = parse_scalar(key, line, value)?,
            "synth.holidays" => {
                self.synth.holiday_dates = if value.is_empty() {
                    Vec::new()
                } else {
                    value
                        .split(',')
                        .map(|d| parse_date(key, line, d.trim()))
                        .collect::<Result<_>>()?
                };
            }
            "synth.indicators" => self.synth.indicators = parse_list(key, line, value)?,
            "synth.start_date" => self.synth.start_date = parse_date(key, line, value)?,
            unknown => {
                return Err(Error::Config(format!("line {line}: unknown key {unknown:?}")));
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.stride_days == 0 {
            return Err(Error::Config("stride_days must be at least 1".into()));
        }
        if !(self.lr0 > 0.0 && self.lr0.is_finite()) {
            return Err(Error::Config(format!("lr0 must be positive, got {}", self.lr0)));
        }
        if self.batch_sizes.is_empty() || self.batch_sizes.contains(&0) {
            return Err(Error::Config(
                "batch_sizes must list at least one positive size".into(),
            ));
        }
        if self.d_hidden == 0 {
            return Err(Error::Config("d_hidden must be at least 1".into()));
        }
        for (name, b) in [("beta1", self.adam.beta1), ("beta2", self.adam.beta2)] {
            if !(0.0..1.0).contains(&b) {
                return Err(Error::Config(format!("{name} must be in [0, 1), got {b}")));
            }
        }
        if !(self.adam.epsilon > 0.0) {
            return Err(Error::Config(format!(
                "epsilon must be positive, got {}",
                self.adam.epsilon
            )));
        }
        self.rule.validate()?;
        self.synth.validate()
    }

    pub fn train_config(&self) -> TrainConfig {
        TrainConfig {
            epochs: self.epochs,
            lr0: self.lr0,
            batch_candidates: self.batch_sizes.clone(),
            d_hidden: self.d_hidden,
            seed: self.seed,
            adam: self.adam.clone(),
        }
    }

    pub fn synth_config(&self) -> SynthConfig {
        SynthConfig {
            seed: self.seed,
            ..self.synth.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_defaults() {
        let config = RunConfig::from_str_inner("# only a comment\n\n").unwrap();
        assert_eq!(config, RunConfig::default());
        assert_eq!(config.seed, 42);
        assert_eq!(config.batch_sizes, vec![256]);
    }

    #[test]
    fn full_file_parses() {
        let text = "\
# run settings
seed = 7
out_dir = /tmp/run
training_csv = data/train.csv
holiday_file = data/holidays.txt
actual_grid = data/actual.csv
pred_grid = data/pred.csv
model_path = data/model.bin
train_log_csv = data/log.csv
indicator = RRC
tech = 5G
stride_days = 3
max_rows = 10
epochs = 16
lr0 = 0.001
batch_sizes = 64, 128
d_hidden = 32
beta1 = 0.8
beta2 = 0.99
epsilon = 1e-7
method = rule
alpha1 = 0.5
alpha2 = 0.6
rule_weights = 0.1, 0.1, 0.2, 0.2, 0.2, 0.2
synth.n_cells_4g = 5
synth.n_cells_5g = 2
synth.n_days = 36
synth.daily_amp = 2.0
synth.weekly_amp = 1.0
synth.base_level = 8.0
synth.noise_sd = 0.5
synth.missing_rate = 0.1
synth.holiday_dip = -1.5
synth.holidays = 2021-03-08, 2021-03-09
synth.indicators = PUSCH, RRC
synth.start_date = 2021-02-01
";
        let config = RunConfig::from_str_inner(text).unwrap();
        assert_eq!(config.seed, 7);
        assert_eq!(config.out_dir, PathBuf::from("/tmp/run"));
        assert_eq!(config.indicator, Some(Indicator::Rrc));
        assert_eq!(config.tech, Some(Tech::FiveG));
        assert_eq!(config.stride_days, 3);
        assert_eq!(config.max_rows, Some(10));
        assert_eq!(config.batch_sizes, vec![64, 128]);
        assert_eq!(config.adam.beta1, 0.8);
        assert_eq!(config.method, BaselineMethod::Rule);
        assert_eq!(config.rule.weights[2], 0.2);
        assert_eq!(config.synth.holiday_dates.len(), 2);
        assert_eq!(config.synth.indicators, vec![Indicator::Pusch, Indicator::Rrc]);
        assert_eq!(
            config.synth.start_date,
            NaiveDate::from_ymd_opt(2021, 2, 1).unwrap()
        );
        // The synth seed is slaved to the run seed.
        assert_eq!(config.synth_config().seed, 7);
        let tc = config.train_config();
        assert_eq!(tc.epochs, 16);
        assert_eq!(tc.batch_candidates, vec![64, 128]);
    }

    #[test]
    fn unknown_key_is_rejected_with_line_number() {
        let err = RunConfig::from_str_inner("seed = 1\nlr_zero = 0.1\n")
            .unwrap_err()
            .to_string();
        assert!(err.contains("line 2"), "{err}");
        assert!(err.contains("lr_zero"), "{err}");
    }

    #[test]
    fn duplicate_key_is_rejected_with_line_number() {
        let err = RunConfig::from_str_inner("seed = 1\n# gap\nseed = 2\n")
            .unwrap_err()
            .to_string();
        assert!(err.contains("line 3"), "{err}");
        assert!(err.contains("duplicate"), "{err}");
    }

    #[test]
    fn bad_values_name_the_key_and_line() {
        let err = RunConfig::from_str_inner("epochs = soon\n")
            .unwrap_err()
            .to_string();
        assert!(err.contains("line 1") && err.contains("epochs"), "{err}");

        let err = RunConfig::from_str_inner("synth.start_date = 03/01/2021\n")
            .unwrap_err()
            .to_string();
        assert!(err.contains("YYYY-MM-DD"), "{err}");

        let err = RunConfig::from_str_inner("rule_weights = 0.1, 0.2\n")
            .unwrap_err()
            .to_string();
        assert!(err.contains("exactly 6"), "{err}");

        assert!(RunConfig::from_str_inner("just some words\n").is_err());
    }

    #[test]
    fn validation_catches_bad_combinations() {
        assert!(RunConfig::from_str_inner("stride_days = 0\n").is_err());
        assert!(RunConfig::from_str_inner("batch_sizes = \n").is_err());
        assert!(RunConfig::from_str_inner("lr0 = -0.5\n").is_err());
        assert!(RunConfig::from_str_inner("beta1 = 1.0\n").is_err());
        assert!(RunConfig::from_str_inner("synth.n_days = 10\n").is_err());
    }

    #[test]
    fn missing_file_is_an_io_error() {
        let err = RunConfig::from_file("/nonexistent/config.txt").unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }
}

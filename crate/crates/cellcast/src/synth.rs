//! Seeded synthetic KPI corpora with daily/weekly periodicity, noise,
//! holiday dips, and missing-value masks.
//!
//! Each cell×indicator series is
//! `max(0, base + daily_amp·sin(2πh/24 + φ) + weekly_amp·sin(2πH/168 + ψ)
//! + holiday_dip·[holiday] + noise)` with h = t mod 24, H = t mod 168 and
//! per-cell phases, so with zero noise every series repeats bitwise every
//! 168 hours. The last 7 days are withheld from the training CSV and
//! emitted as the actual grid; the missing mask touches training hours only
//! and always leaves at least one present value per hour-of-week class, so
//! imputation cannot strand a point.

use std::path::{Path, PathBuf};

use chrono::{Duration, NaiveDate};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::eval::{ForecastGrid, GridKey};
use crate::ingest;
use crate::series::{
    CellSeries, HolidayCalendar, Indicator, Tech, HOURS_PER_DAY, HOURS_PER_WEEK,
};

pub const HELD_OUT_DAYS: usize = 7;

#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub n_cells_4g: usize,
    pub n_cells_5g: usize,
    pub n_days: usize,
    pub daily_amp: f64,
    pub weekly_amp: f64,
    pub base_level: f64,
    pub noise_sd: f64,
    pub missing_rate: f64,
    pub holiday_dip: f64,
    pub holiday_dates: Vec<NaiveDate>,
    pub indicators: Vec<Indicator>,
    pub start_date: NaiveDate,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            n_cells_4g: 50,
            n_cells_5g: 10,
            n_days: 42,
            daily_amp: 3.0,
            weekly_amp: 1.5,
            base_level: 10.0,
            noise_sd: 1.0,
            missing_rate: 0.02,
            holiday_dip: -2.0,
            holiday_dates: Vec::new(),
            indicators: vec![Indicator::Pusch],
            start_date: NaiveDate::from_ymd_opt(2021, 3, 1).unwrap(),
            seed: 0,
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        let err = |m: String| Err(Error::Config(m));
        if self.n_cells_4g + self.n_cells_5g == 0 {
            return err("need at least one cell".into());
        }
        if self.n_days < 35 {
            return err(format!(
                "n_days must be at least 35 (28 training + 7 held out), got {}",
                self.n_days
            ));
        }
        for (name, v) in [
            ("daily_amp", self.daily_amp),
            ("weekly_amp", self.weekly_amp),
            ("noise_sd", self.noise_sd),
        ] {
            if !v.is_finite() || v < 0.0 {
                return err(format!("{name} must be finite and non-negative, got {v}"));
            }
        }
        if !self.base_level.is_finite() || self.base_level <= self.daily_amp + self.weekly_amp {
            return err(format!(
                "base_level ({}) must exceed daily_amp + weekly_amp ({}) to keep the signal positive",
                self.base_level,
                self.daily_amp + self.weekly_amp
            ));
        }
        if !self.holiday_dip.is_finite() {
            return err(format!("holiday_dip must be finite, got {}", self.holiday_dip));
        }
        if !(0.0..1.0).contains(&self.missing_rate) {
            return err(format!(
                "missing_rate must be in [0, 1), got {}",
                self.missing_rate
            ));
        }
        if self.indicators.is_empty() {
            return err("indicators must not be empty".into());
        }
        let mut seen = std::collections::BTreeSet::new();
        for ind in &self.indicators {
            if !seen.insert(*ind) {
                return err(format!("duplicate indicator {ind}"));
            }
        }
        Ok(())
    }

    pub fn training_days(&self) -> usize {
        self.n_days - HELD_OUT_DAYS
    }
}

/// One generated corpus: masked training series, the holiday calendar, and
/// the unmasked held-out week as an actual grid.
#[derive(Debug, Clone)]
pub struct SynthOutput {
    pub training: Vec<CellSeries>,
    pub holidays: HolidayCalendar,
    pub actual: ForecastGrid,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive an independent sub-seed from the master seed and a path of tags.
fn mix(seed: u64, parts: &[u64]) -> u64 {
    let mut acc = splitmix64(seed);
    for &p in parts {
        acc = splitmix64(acc ^ p);
    }
    acc
}

fn cell_ids(tech: Tech, count: usize) -> Vec<String> {
    let prefix = match tech {
        Tech::FourG => "c4",
        Tech::FiveG => "c5",
    };
    (1..=count).map(|i| format!("{prefix}_{i:04}")).collect()
}

pub fn generate(config: &SynthConfig) -> Result<SynthOutput> {
    config.validate()?;
    let holidays = HolidayCalendar::new(config.holiday_dates.clone());
    let start = config
        .start_date
        .and_hms_opt(0, 0, 0)
        .expect("midnight exists");
    let total_hours = config.n_days * HOURS_PER_DAY;
    let training_hours = config.training_days() * HOURS_PER_DAY;
    let week_start = start + Duration::hours(training_hours as i64);

    // Holiday membership per hour is shared by every series.
    let holiday_flags: Vec<bool> = (0..total_hours)
        .map(|t| holidays.contains((start + Duration::hours(t as i64)).date()))
        .collect();

    let normal = if config.noise_sd > 0.0 {
        Some(Normal::new(0.0, config.noise_sd).expect("validated sd"))
    } else {
        None
    };

    let mut training = Vec::new();
    let mut actual = ForecastGrid::new(week_start)?;
    let techs = [
        (Tech::FourG, 0u64, config.n_cells_4g),
        (Tech::FiveG, 1u64, config.n_cells_5g),
    ];
    for (tech, tech_tag, count) in techs {
        for (cell_idx, cell_id) in cell_ids(tech, count).into_iter().enumerate() {
            let mut phase_rng =
                ChaCha8Rng::seed_from_u64(mix(config.seed, &[tech_tag, cell_idx as u64, 0]));
            let phi: f64 = phase_rng.gen_range(0.0..std::f64::consts::TAU);
            let psi: f64 = phase_rng.gen_range(0.0..std::f64::consts::TAU);

            for (ind_idx, &indicator) in config.indicators.iter().enumerate() {
                let sub = |purpose: u64| {
                    mix(
                        config.seed,
                        &[tech_tag, cell_idx as u64, ind_idx as u64 + 1, purpose],
                    )
                };
                let mut noise_rng = ChaCha8Rng::seed_from_u64(sub(1));
                let mut mask_rng = ChaCha8Rng::seed_from_u64(sub(2));

                let mut values = Vec::with_capacity(total_hours);
                for (t, &is_holiday) in holiday_flags.iter().enumerate() {
                    let h = (t % HOURS_PER_DAY) as f64;
                    let hw = (t % HOURS_PER_WEEK) as f64;
                    let mut v = config.base_level
                        + config.daily_amp
                            * (std::f64::consts::TAU * h / HOURS_PER_DAY as f64 + phi).sin()
                        + config.weekly_amp
                            * (std::f64::consts::TAU * hw / HOURS_PER_WEEK as f64 + psi).sin();
                    if is_holiday {
                        v += config.holiday_dip;
                    }
                    if let Some(n) = &normal {
                        v += n.sample(&mut noise_rng);
                    }
                    values.push(v.max(0.0));
                }

                let mut masked: Vec<Option<f64>> = values[..training_hours]
                    .iter()
                    .map(|&v| {
                        if mask_rng.gen::<f64>() < config.missing_rate {
                            None
                        } else {
                            Some(v)
                        }
                    })
                    .collect();
                // Keep every hour-of-week class imputable: if a class lost
                // all its occurrences, restore the earliest one.
                for class in 0..HOURS_PER_WEEK.min(training_hours) {
                    let occupied = (class..training_hours)
                        .step_by(HOURS_PER_WEEK)
                        .any(|t| masked[t].is_some());
                    if !occupied {
                        masked[class] = Some(values[class]);
                    }
                }

                training.push(CellSeries::new(
                    cell_id.as_str(),
                    tech,
                    indicator,
                    start,
                    masked,
                )?);
                actual.insert(
                    GridKey {
                        cell_id: cell_id.clone(),
                        tech,
                        indicator,
                    },
                    values[training_hours..].to_vec(),
                )?;
            }
        }
    }

    Ok(SynthOutput {
        training,
        holidays,
        actual,
    })
}

/// File names produced by [`generate_to_dir`].
#[derive(Debug, Clone)]
pub struct SynthPaths {
    pub training_csv: PathBuf,
    pub holiday_file: PathBuf,
    pub actual_csv: PathBuf,
}

/// Generate a corpus and write `training.csv`, `holidays.txt`, and
/// `actual.csv` into `dir`.
pub fn generate_to_dir(config: &SynthConfig, dir: &Path) -> Result<SynthPaths> {
    let output = generate(config)?;
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let paths = SynthPaths {
        training_csv: dir.join("training.csv"),
        holiday_file: dir.join("holidays.txt"),
        actual_csv: dir.join("actual.csv"),
    };
    ingest::write_series_csv(&paths.training_csv, &output.training)?;
    ingest::write_holidays(&paths.holiday_file, &output.holidays)?;
    output.actual.write_csv(&paths.actual_csv)?;
    Ok(paths)
}

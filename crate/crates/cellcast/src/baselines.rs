//! Reference forecasters the model must beat.
//!
//! The naive forecaster repeats the last observed week. The rule-based
//! forecaster blends six statistics of two seasonal populations: S1, the
//! values at the same hour of day, and S2, the values at the same hour of
//! week, both taken chronologically from history strictly before the target
//! hour:
//!
//! ```text
//! s = w1*es(S1, a1) + w2*es(S2, a2) + w3*mean(S1) + w4*mean(S2)
//!   + w5*median(S1) + w6*median(S2)
//! ```
//!
//! where `es` is the exponential smoother below. Note its weights are used
//! as given and do not sum to one — with n = 1 and alpha = 0.82 the result
//! of smoothing `[10]` is 8.2, not 10.

use std::str::FromStr;

use chrono::NaiveDateTime;

use crate::error::{Error, Result};
use crate::series::{CellSeries, HOURS_PER_DAY, HOURS_PER_WEEK};

/// Smoothing constants and blend weights of the rule-based forecaster.
#[derive(Debug, Clone, PartialEq)]
pub struct RuleParams {
    pub alpha1: f64,
    pub alpha2: f64,
    /// Weights of es(S1), es(S2), mean(S1), mean(S2), median(S1), median(S2).
    pub weights: [f64; 6],
}

impl Default for RuleParams {
    fn default() -> Self {
        RuleParams {
            alpha1: 0.82,
            alpha2: 0.82,
            weights: [0.07, 0.13, 0.14, 0.26, 0.14, 0.26],
        }
    }
}

impl RuleParams {
    pub fn validate(&self) -> Result<()> {
        for (name, a) in [("alpha1", self.alpha1), ("alpha2", self.alpha2)] {
            if !(a > 0.0 && a <= 1.0) {
                return Err(Error::Validation(format!(
                    "{name} must be in (0, 1], got {a}"
                )));
            }
        }
        if self.weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::Validation("rule weights must be finite".into()));
        }
        Ok(())
    }
}

/// Which baseline a run should use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaselineMethod {
    Naive,
    Rule,
}

impl BaselineMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            BaselineMethod::Naive => "naive",
            BaselineMethod::Rule => "rule",
        }
    }
}

impl FromStr for BaselineMethod {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "naive" => Ok(BaselineMethod::Naive),
            "rule" => Ok(BaselineMethod::Rule),
            other => Err(format!("unknown method {other:?} (expected naive or rule)")),
        }
    }
}

fn require_fully_present(series: &CellSeries) -> Result<()> {
    if !series.is_fully_present() {
        return Err(Error::Validation(format!(
            "series {} {} {} has missing hours; impute first",
            series.cell_id, series.tech, series.indicator
        )));
    }
    Ok(())
}

/// The last observed week, replayed as the forecast for the next one.
pub fn naive_forecast(series: &CellSeries) -> Result<Vec<f64>> {
    require_fully_present(series)?;
    if series.len() < HOURS_PER_WEEK {
        return Err(Error::Validation(format!(
            "series {} has only {} hours; the naive forecast needs a full week",
            series.cell_id,
            series.len()
        )));
    }
    Ok(series.values[series.len() - HOURS_PER_WEEK..]
        .iter()
        .map(|v| v.expect("fully present"))
        .collect())
}

/// Exponential smoothing of a chronological sample:
/// `sum_{i=1}^{n-1} (1-alpha)^(n-i) x_i + alpha x_n`.
pub fn exp_smooth(values: &[f64], alpha: f64) -> Result<f64> {
    let n = values.len();
    if n == 0 {
        return Err(Error::Validation("cannot smooth an empty sample".into()));
    }
    let mut acc = 0.0;
    for (i, v) in values[..n - 1].iter().enumerate() {
        acc += (1.0 - alpha).powi((n - 1 - i) as i32) * v;
    }
    Ok(acc + alpha * values[n - 1])
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Median with the even case averaged over the two central values.
fn median(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    }
}

/// Seasonal populations of a target hour: values at the same hour of day
/// (S1) and at the same hour of week (S2), chronological, strictly before
/// the target.
fn seasonal_samples(
    series: &CellSeries,
    target_time: NaiveDateTime,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let delta = (target_time - series.start).num_hours();
    if delta <= 0 {
        return Err(Error::Validation(format!(
            "target {target_time} is not after the series start {}",
            series.start
        )));
    }
    let cut = (delta as usize).min(series.len());
    // The series is hourly-contiguous, so "same hour of day" is an index
    // congruence mod 24, and "same hour of week" mod 168.
    let collect = |period: usize| -> Vec<f64> {
        let first = (delta as usize) % period;
        (first..cut)
            .step_by(period)
            .map(|i| series.values[i].expect("fully present"))
            .collect()
    };
    Ok((collect(HOURS_PER_DAY), collect(HOURS_PER_WEEK)))
}

/// Rule-based forecast for one target hour.
pub fn rule_based_forecast(
    series: &CellSeries,
    target_time: NaiveDateTime,
    params: &RuleParams,
) -> Result<f64> {
    require_fully_present(series)?;
    params.validate()?;
    let (s1, s2) = seasonal_samples(series, target_time)?;
    if s1.is_empty() || s2.is_empty() {
        return Err(Error::Validation(format!(
            "series {} has no history at the seasonal positions of {target_time}",
            series.cell_id
        )));
    }
    let [w1, w2, w3, w4, w5, w6] = params.weights;
    Ok(w1 * exp_smooth(&s1, params.alpha1)?
        + w2 * exp_smooth(&s2, params.alpha2)?
        + w3 * mean(&s1)
        + w4 * mean(&s2)
        + w5 * median(&s1)
        + w6 * median(&s2))
}

/// Rule-based forecast of the 168 hours starting at `week_start`, using only
/// series values from before `week_start`.
pub fn rule_based_week(
    series: &CellSeries,
    week_start: NaiveDateTime,
    params: &RuleParams,
) -> Result<Vec<f64>> {
    require_fully_present(series)?;
    let history_hours = (week_start - series.start).num_hours();
    if history_hours <= 0 {
        return Err(Error::Validation(format!(
            "week start {week_start} leaves no history (series starts {})",
            series.start
        )));
    }
    // Clip to the history prefix so later values can never leak in.
    let cut = (history_hours as usize).min(series.len());
    let mut history = series.clone();
    history.values.truncate(cut);

    let mut out = Vec::with_capacity(HOURS_PER_WEEK);
    for j in 0..HOURS_PER_WEEK {
        let t = week_start + chrono::Duration::hours(j as i64);
        out.push(rule_based_forecast(&history, t, params)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{Indicator, Tech};
    use chrono::{Datelike, Timelike};
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ts(s: &str) -> NaiveDateTime {
        NaiveDateTime::parse_from_str(s, "%Y-%m-%dT%H:%M").unwrap()
    }

    fn series_of(values: Vec<f64>) -> CellSeries {
        CellSeries::new(
            "c",
            Tech::FourG,
            Indicator::Pusch,
            ts("2021-03-01T00:00"),
            values.into_iter().map(Some).collect(),
        )
        .unwrap()
    }

    #[test]
    fn naive_copies_the_last_week() {
        let mut values: Vec<f64> = (0..14 * 24).map(|i| i as f64).collect();
        let series = series_of(values.clone());
        let forecast = naive_forecast(&series).unwrap();
        assert_eq!(forecast, values.split_off(7 * 24));
    }

    #[test]
    fn naive_needs_a_full_present_week() {
        assert!(naive_forecast(&series_of(vec![1.0; 100])).is_err());
        let mut series = series_of(vec![1.0; 200]);
        series.values[42] = None;
        assert!(naive_forecast(&series).is_err());
    }

    #[test]
    fn smoother_hand_values() {
        // Single sample: only the alpha term remains.
        assert_eq!(exp_smooth(&[10.0], 0.82).unwrap(), 8.2);
        // Two samples, alpha 0.5: 0.5*2 + 0.5*4 = 3.
        assert_eq!(exp_smooth(&[2.0, 4.0], 0.5).unwrap(), 3.0);
        // alpha = 1 keeps just the newest sample.
        assert_eq!(exp_smooth(&[5.0, 7.0, 9.0], 1.0).unwrap(), 9.0);
        assert!(exp_smooth(&[], 0.5).is_err());
    }

    #[test]
    fn smoother_weights_decay_geometrically() {
        let values = [3.0, 5.0, 11.0];
        let alpha = 0.25;
        let expected = 0.75f64.powi(2) * 3.0 + 0.75 * 5.0 + 0.25 * 11.0;
        assert!((exp_smooth(&values, alpha).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn median_averages_the_central_pair() {
        assert_eq!(median(&[5.0, 1.0, 3.0]), 3.0);
        assert_eq!(median(&[4.0, 1.0, 3.0, 2.0]), 2.5);
        assert_eq!(median(&[2.0]), 2.0);
    }

    #[test]
    fn weight_isolation_reads_off_single_statistics() {
        // Three weeks of history, forecast the first hour after it.
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let values: Vec<f64> = (0..21 * 24).map(|_| rng.gen_range(1.0..9.0)).collect();
        let series = series_of(values.clone());
        let target = ts("2021-03-22T00:00");

        // Only w4 set: the forecast is exactly mean(S2).
        let only_mean_s2 = RuleParams {
            weights: [0.0, 0.0, 0.0, 1.0, 0.0, 0.0],
            ..RuleParams::default()
        };
        let expected_s2: Vec<f64> = (0..3).map(|w| values[w * 168]).collect();
        let got = rule_based_forecast(&series, target, &only_mean_s2).unwrap();
        assert_eq!(got, mean(&expected_s2));

        // Only w5 set: exactly median(S1).
        let only_median_s1 = RuleParams {
            weights: [0.0, 0.0, 0.0, 0.0, 1.0, 0.0],
            ..RuleParams::default()
        };
        let expected_s1: Vec<f64> = (0..21).map(|d| values[d * 24]).collect();
        let got = rule_based_forecast(&series, target, &only_median_s1).unwrap();
        assert_eq!(got, median(&expected_s1));
    }

    #[test]
    fn constant_series_closed_form() {
        // On a constant series every statistic is c except the smoothers,
        // which scale c by their weight sum.
        let c = 4.0;
        let days = 28;
        let series = series_of(vec![c; days * 24]);
        let target = ts("2021-03-29T05:00");
        let params = RuleParams::default();

        let smoother_sum = |n: usize, alpha: f64| -> f64 {
            let tail: f64 = (1..n).map(|j| (1.0 - alpha).powi(j as i32)).sum();
            alpha + tail
        };
        let [w1, w2, w3, w4, w5, w6] = params.weights;
        let expected = c
            * (w1 * smoother_sum(days, params.alpha1)
                + w2 * smoother_sum(days / 7, params.alpha2)
                + w3
                + w4
                + w5
                + w6);
        let got = rule_based_forecast(&series, target, &params).unwrap();
        assert!((got - expected).abs() < 1e-9, "got {got}, want {expected}");
    }

    #[test]
    fn seasonal_samples_match_a_calendar_based_selection() {
        // Independent route: pick S1/S2 by comparing timestamps, not indices.
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let values: Vec<f64> = (0..30 * 24).map(|_| rng.gen_range(0.5..20.0)).collect();
        let series = series_of(values.clone());
        let target = ts("2021-04-01T13:00");

        let (s1, s2) = seasonal_samples(&series, target).unwrap();
        let mut want_s1 = Vec::new();
        let mut want_s2 = Vec::new();
        for (i, v) in values.iter().enumerate() {
            let t = series.timestamp_at(i);
            if t >= target {
                continue;
            }
            if t.hour() == target.hour() {
                want_s1.push(*v);
            }
            if t.hour() == target.hour() && t.weekday() == target.weekday() {
                want_s2.push(*v);
            }
        }
        assert_eq!(s1, want_s1);
        assert_eq!(s2, want_s2);
    }

    #[test]
    fn weekly_forecast_uses_only_history_before_the_week() {
        // Extend the series into the forecast week with huge values; they
        // must not influence the result.
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let history: Vec<f64> = (0..21 * 24).map(|_| rng.gen_range(1.0..5.0)).collect();
        let week_start = ts("2021-03-22T00:00");
        let params = RuleParams::default();

        let clean = series_of(history.clone());
        let clean_forecast = rule_based_week(&clean, week_start, &params).unwrap();

        let mut extended_values = history;
        extended_values.extend(vec![1e6; 168]);
        let extended = series_of(extended_values);
        let extended_forecast = rule_based_week(&extended, week_start, &params).unwrap();

        assert_eq!(clean_forecast, extended_forecast);
        assert_eq!(clean_forecast.len(), 168);
    }

    #[test]
    fn rule_forecast_is_positively_homogeneous() {
        let mut rng = ChaCha8Rng::seed_from_u64(55);
        let values: Vec<f64> = (0..28 * 24).map(|_| rng.gen_range(0.1..7.0)).collect();
        let series = series_of(values.clone());
        let target = ts("2021-03-30T09:00");
        let params = RuleParams::default();
        let base = rule_based_forecast(&series, target, &params).unwrap();

        let doubled = series_of(values.iter().map(|v| v * 2.0).collect());
        let scaled = rule_based_forecast(&doubled, target, &params).unwrap();
        assert!((scaled - 2.0 * base).abs() <= 1e-12 * base.abs().max(1.0));
    }

    #[test]
    fn method_names_parse() {
        assert_eq!("naive".parse::<BaselineMethod>().unwrap(), BaselineMethod::Naive);
        assert_eq!("rule".parse::<BaselineMethod>().unwrap(), BaselineMethod::Rule);
        assert!("mlp".parse::<BaselineMethod>().is_err());
    }
}

//! Forecast a week with the two reference baselines.
//!
//! `naive` repeats the most recent fully observed week. `rule` blends six
//! seasonal statistics per hour — exponential smoothing, mean, and median
//! over the same-hour-of-day and same-hour-of-week samples — with fixed
//! weights.
//!
//!     cargo run --example baselines

use cellcast::baselines::{naive_forecast, rule_based_week, RuleParams};
use cellcast::series::{CellSeries, Indicator, Tech};
use chrono::NaiveDate;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let start = NaiveDate::from_ymd_opt(2021, 3, 1)
        .unwrap()
        .and_hms_opt(0, 0, 0)
        .unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    // Six weeks: a stable weekly shape plus noise that the blend should
    // average out better than a plain copy of the last week.
    let values: Vec<Option<f64>> = (0..6 * 168)
        .map(|t| {
            let day = (t % 24) as f64 / 24.0;
            let week = (t % 168) as f64 / 168.0;
            let v = 10.0
                + 3.0 * (std::f64::consts::TAU * day).sin()
                + 1.5 * (std::f64::consts::TAU * week).sin()
                + rng.gen_range(-1.0..1.0);
            Some(v.max(0.0))
        })
        .collect();
    let series = CellSeries::new("demo", Tech::FourG, Indicator::Pusch, start, values.clone())
        .expect("valid series");

    let naive = naive_forecast(&series).expect("long enough");
    let week_start = series.end();
    let rule = rule_based_week(&series, week_start, &RuleParams::default())
        .expect("long enough");

    println!("forecasts for the week starting {week_start}:");
    println!("hour    naive     rule");
    for h in [0usize, 6, 12, 18, 24, 100, 167] {
        println!("{h:>4}  {:7.3}  {:7.3}", naive[h], rule[h]);
    }

    // The naive forecast is literally the last observed week.
    let last_week: Vec<f64> = values[values.len() - 168..]
        .iter()
        .map(|v| v.unwrap())
        .collect();
    assert_eq!(naive, last_week);
    println!("\nnaive == last observed week: true");

    let spread = |xs: &[f64]| {
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / xs.len() as f64).sqrt()
    };
    println!(
        "hour-to-hour jitter (sd of forecast - clean pattern): naive {:.3}, rule {:.3}",
        spread(
            &naive
                .iter()
                .enumerate()
                .map(|(t, v)| v
                    - 10.0
                    - 3.0 * (std::f64::consts::TAU * (t % 24) as f64 / 24.0).sin()
                    - 1.5 * (std::f64::consts::TAU * (t % 168) as f64 / 168.0).sin())
                .collect::<Vec<_>>()
        ),
        spread(
            &rule
                .iter()
                .enumerate()
                .map(|(t, v)| v
                    - 10.0
                    - 3.0 * (std::f64::consts::TAU * (t % 24) as f64 / 24.0).sin()
                    - 1.5 * (std::f64::consts::TAU * (t % 168) as f64 / 168.0).sin())
                .collect::<Vec<_>>()
        ),
    );
}

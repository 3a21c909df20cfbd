//! Fill missing hours from same-hour-of-week neighbors.
//!
//! Each gap is replaced by the weighted mean of the values one, two, three…
//! weeks away at the same hour, in both directions, with weight 1/k for a
//! neighbor k weeks out. The demo punches holes into a clean series and
//! prints what the filler reconstructs next to the value it erased.
//!
//!     cargo run --example impute

use cellcast::preprocess::impute;
use cellcast::series::{CellSeries, Indicator, Tech};
use chrono::NaiveDate;

fn main() {
    let start = NaiveDate::from_ymd_opt(2021, 3, 1)
        .unwrap()
        .and_hms_opt(0, 0, 0)
        .unwrap();
    // Five weeks of a smooth daily + weekly pattern.
    let clean: Vec<f64> = (0..5 * 168)
        .map(|t| {
            let day = (t % 24) as f64 / 24.0;
            let week = (t % 168) as f64 / 168.0;
            10.0 + 3.0 * (std::f64::consts::TAU * day).sin()
                + 1.5 * (std::f64::consts::TAU * week).sin()
        })
        .map(|v| v.max(0.0))
        .collect();

    let holes = [200usize, 201, 500, 839];
    let mut values: Vec<Option<f64>> = clean.iter().copied().map(Some).collect();
    for &h in &holes {
        values[h] = None;
    }
    let series = CellSeries::new("demo", Tech::FourG, Indicator::Pusch, start, values)
        .expect("valid series");

    let filled = impute(&series).expect("imputable");
    assert!(filled.is_fully_present());

    println!("hole  timestamp            erased   imputed  abs diff");
    for &h in &holes {
        let got = filled.values[h].unwrap();
        println!(
            "{h:>4}  {}  {:7.3}  {:7.3}  {:.3}",
            series.timestamp_at(h),
            clean[h],
            got,
            (clean[h] - got).abs()
        );
    }

    // A neighbor average of a deterministic weekly pattern is exact: every
    // same-hour-of-week donor carries the identical value.
    let weekly_only: Vec<Option<f64>> = (0..5 * 168)
        .map(|t| Some(5.0 + ((t % 168) as f64 / 10.0)))
        .collect();
    let mut punched = weekly_only.clone();
    punched[300] = None;
    let series = CellSeries::new("periodic", Tech::FourG, Indicator::Pusch, start, punched)
        .expect("valid series");
    let filled = impute(&series).expect("imputable");
    println!(
        "\nweekly-periodic series: erased {} -> imputed {} (exact match: {})",
        weekly_only[300].unwrap(),
        filled.values[300].unwrap(),
        weekly_only[300] == filled.values[300]
    );
}

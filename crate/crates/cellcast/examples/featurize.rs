//! Turn an hourly series into supervised training rows.
//!
//! Every window covers 28 consecutive days: 21 days of history feed the
//! model (scaled by the history mean) together with 28 holiday flags, and
//! the final 7 days form the regression target. Windows slide by a
//! configurable day stride.
//!
//!     cargo run --example featurize

use cellcast::preprocess::{extract_windows, HISTORY_HOURS, INPUT_WIDTH, TARGET_HOURS};
use cellcast::series::{CellSeries, HolidayCalendar, Indicator, Tech};
use chrono::NaiveDate;

fn main() {
    let start = NaiveDate::from_ymd_opt(2021, 3, 1)
        .unwrap()
        .and_hms_opt(0, 0, 0)
        .unwrap();
    let n_days = 35;
    let values: Vec<Option<f64>> = (0..n_days * 24)
        .map(|t| {
            let day = (t % 24) as f64 / 24.0;
            Some(8.0 + 2.0 * (std::f64::consts::TAU * day).sin())
        })
        .collect();
    let series = CellSeries::new("demo", Tech::FourG, Indicator::Pdcpul, start, values)
        .expect("valid series");
    let calendar = HolidayCalendar::new([
        NaiveDate::from_ymd_opt(2021, 3, 8).unwrap(),
        NaiveDate::from_ymd_opt(2021, 3, 29).unwrap(),
    ]);

    for stride_days in [1, 7] {
        let rows = extract_windows(&series, &calendar, stride_days, true, None).expect("windows");
        println!("{n_days}-day series, stride {stride_days}d -> {} rows", rows.len());
        for row in &rows {
            let input = row.input_vector();
            let target = row.scaled_target().expect("training row has a target");
            let flags: usize = row.holiday_flags.iter().map(|f| *f as usize).sum();
            let mean = row.scaled_history.iter().sum::<f64>() / HISTORY_HOURS as f64;
            println!(
                "  window at {}: input {} = 28 flags ({flags} set) + {HISTORY_HOURS} scaled \
                 hours (mean {mean:.6}), target {} hours, scale {:.3}",
                row.origin.window_start,
                input.len(),
                target.len(),
                row.scale,
            );
            assert_eq!(input.len(), INPUT_WIDTH);
            assert_eq!(target.len(), TARGET_HOURS);
        }
    }
}

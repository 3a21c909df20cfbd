//! Score a forecast grid against actuals with the weighted error metric.
//!
//! Per point the error is |actual - pred| / actual. Hours from the first
//! forecast day count at weight 1.2, later hours at 1.0; the 4G and 5G
//! averages combine 0.7/0.3. Points with actual == 0 are skipped and
//! reported.
//!
//!     cargo run --example evaluate

use cellcast::eval::{breakdown, weighted_mape, ForecastGrid, GridKey};
use cellcast::series::{Indicator, Tech};
use chrono::NaiveDate;

fn grid_key(cell: &str, tech: Tech, indicator: Indicator) -> GridKey {
    GridKey {
        cell_id: cell.to_string(),
        tech,
        indicator,
    }
}

fn main() {
    let week_start = NaiveDate::from_ymd_opt(2021, 4, 5)
        .unwrap()
        .and_hms_opt(0, 0, 0)
        .unwrap();
    let mut actual = ForecastGrid::new(week_start).expect("aligned");
    let mut pred = ForecastGrid::new(week_start).expect("aligned");

    // Two 4G cells forecast at 5% and 15% error, one 5G cell at 10%.
    let cells = [
        ("a1", Tech::FourG, 0.05),
        ("a2", Tech::FourG, 0.15),
        ("b1", Tech::FiveG, 0.10),
    ];
    for (cell, tech, err) in cells {
        let key = grid_key(cell, tech, Indicator::Pusch);
        let truth: Vec<f64> = (0..168).map(|h| 20.0 + (h % 24) as f64).collect();
        let forecast: Vec<f64> = truth.iter().map(|v| v * (1.0 + err)).collect();
        actual.insert(key.clone(), truth).expect("new key");
        pred.insert(key, forecast).expect("new key");
    }

    let report = weighted_mape(&pred, &actual).expect("matching grids");
    println!("per-tech error:");
    println!("  4G: {:.4} (mean of 5% and 15%)", report.mape_4g.unwrap());
    println!("  5G: {:.4}", report.mape_5g.unwrap());
    println!(
        "combined: 0.7 x {:.4} + 0.3 x {:.4} = {:.4}",
        report.mape_4g.unwrap(),
        report.mape_5g.unwrap(),
        report.weighted_mape
    );
    println!(
        "scored {} points, skipped {} zero-actual points",
        report.n_points_scored, report.n_points_skipped_zero_actual
    );

    println!("\nper tech x indicator:");
    println!("tech  indicator  mape    points");
    for row in breakdown(&pred, &actual).expect("matching grids") {
        println!(
            "{:<4}  {:<9}  {:.4}  {}",
            row.tech.as_str(),
            row.indicator.as_str(),
            row.mape,
            row.n_points
        );
    }
}

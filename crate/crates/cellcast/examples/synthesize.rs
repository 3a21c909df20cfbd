//! Generate a synthetic hourly-traffic corpus and inspect what it wrote.
//!
//! The generator produces a training CSV with randomly masked points, a
//! holiday list, and the held-out final week as an actual grid for scoring.
//!
//!     cargo run --example synthesize

use cellcast::ingest;
use cellcast::series::Indicator;
use cellcast::synth::{generate_to_dir, SynthConfig};
use chrono::NaiveDate;

fn main() {
    let dir = tempfile::tempdir().expect("temp dir");
    let config = SynthConfig {
        n_cells_4g: 6,
        n_cells_5g: 2,
        n_days: 42,
        missing_rate: 0.05,
        holiday_dates: vec![NaiveDate::from_ymd_opt(2021, 3, 8).unwrap()],
        indicators: vec![Indicator::Pusch, Indicator::Rrc],
        seed: 7,
        ..SynthConfig::default()
    };
    let paths = generate_to_dir(&config, dir.path()).expect("generation succeeds");

    println!("wrote:");
    for p in [&paths.training_csv, &paths.holiday_file, &paths.actual_csv] {
        let bytes = std::fs::metadata(p).expect("written file").len();
        println!("  {} ({bytes} bytes)", p.display());
    }

    let series = ingest::parse_series_csv(&paths.training_csv).expect("readable corpus");
    let missing: usize = series.iter().map(|s| s.n_missing()).sum();
    let total: usize = series.iter().map(|s| s.len()).sum();
    println!(
        "training corpus: {} series x {} hours, {missing}/{total} points masked",
        series.len(),
        series[0].len(),
    );

    let s = &series[0];
    println!("first series: {} {} {}", s.cell_id, s.tech.as_str(), s.indicator.as_str());
    for i in 0..6 {
        match s.values[i] {
            Some(v) => println!("  {}  {v:.3}", s.timestamp_at(i)),
            None => println!("  {}  (masked)", s.timestamp_at(i)),
        }
    }
}

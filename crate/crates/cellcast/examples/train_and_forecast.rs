//! Train a dense MLP on a small synthetic corpus and forecast a week.
//!
//! Generates a few cells, imputes the gaps, cuts sliding windows, trains a
//! reduced network, and prints the last week the model produces for one
//! cell next to the actually generated values.
//!
//!     cargo run --example train_and_forecast

use cellcast::eval::GridKey;
use cellcast::model::{train, TrainConfig};
use cellcast::preprocess::{extract_windows, impute, latest_window, unscale};
use cellcast::synth::{generate, SynthConfig};

fn main() {
    let config = SynthConfig {
        n_cells_4g: 8,
        n_cells_5g: 0,
        n_days: 42,
        noise_sd: 0.3,
        missing_rate: 0.02,
        seed: 5,
        ..SynthConfig::default()
    };
    let corpus = generate(&config).expect("valid config");
    let calendar = &corpus.holidays;

    let mut rows = Vec::new();
    let imputed: Vec<_> = corpus
        .training
        .iter()
        .map(|s| impute(s).expect("imputable"))
        .collect();
    for series in &imputed {
        rows.extend(extract_windows(series, calendar, 1, true, None).expect("windows"));
    }
    println!("training on {} rows from {} cells", rows.len(), imputed.len());

    let train_config = TrainConfig {
        epochs: 48,
        d_hidden: 64,
        batch_candidates: vec![64],
        lr0: 0.002,
        ..TrainConfig::default()
    };
    let started = std::time::Instant::now();
    let (model, report) = train(&rows, &train_config, None).expect("training succeeds");
    println!(
        "trained {} epochs at batch size {} in {:.2?}; mean loss {:.2} -> {:.2}",
        report.epoch_losses.len(),
        report.batch_size,
        started.elapsed(),
        report.epoch_losses[0],
        report.final_loss().unwrap(),
    );

    // Forecast the held-out week for the first cell.
    let series = &imputed[0];
    let row = latest_window(series, calendar)
        .expect("well-formed series")
        .expect("enough history");
    let forecast = unscale(&model.predict(&row.input_vector()), row.scale);

    let key = GridKey {
        cell_id: series.cell_id.clone(),
        tech: series.tech,
        indicator: series.indicator,
    };
    let actual = corpus.actual.get(&key).expect("held-out week");
    println!("\n{key}, first hours of the held-out week:");
    println!("hour  forecast   actual");
    for h in 0..12 {
        println!("{h:>4}  {:8.3}  {:7.3}", forecast[h], actual[h]);
    }
    let scored: Vec<f64> = forecast
        .iter()
        .zip(actual)
        .filter(|(_, a)| **a != 0.0)
        .map(|(p, a)| (a - p).abs() / a)
        .collect();
    let ape = scored.iter().sum::<f64>() / scored.len() as f64;
    println!("mean absolute percentage error over the week: {:.2}%", 100.0 * ape);
}

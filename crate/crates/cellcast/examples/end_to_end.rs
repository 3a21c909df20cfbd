//! The full pipeline in one call: synthesize, impute, train, forecast, score.
//!
//! Runs a reduced corpus so it finishes in seconds, then prints the
//! held-out-week score of the trained model next to both baselines and
//! lists the artifacts it left behind.
//!
//!     cargo run --example end_to_end

use cellcast::cli::run_pipeline;
use cellcast::config::RunConfig;
use cellcast::synth::SynthConfig;

fn main() {
    let dir = tempfile::tempdir().expect("temp dir");
    let config = RunConfig {
        out_dir: dir.path().to_path_buf(),
        seed: 42,
        d_hidden: 128,
        batch_sizes: vec![128],
        lr0: 0.002,
        synth: SynthConfig {
            n_cells_4g: 10,
            n_cells_5g: 4,
            ..SynthConfig::default()
        },
        ..RunConfig::default()
    };

    let started = std::time::Instant::now();
    let summary = run_pipeline(&config).expect("pipeline succeeds");
    println!("pipeline finished in {:.2?}", started.elapsed());

    println!("\nweighted error on the held-out week (lower is better):");
    for (name, report) in [
        ("dense_mlp", &summary.dense_mlp),
        ("naive", &summary.naive),
        ("rule", &summary.rule),
    ] {
        println!(
            "  {name:<9} {:.4}  (4G {:.4} / 5G {:.4})",
            report.weighted_mape,
            report.mape_4g.unwrap(),
            report.mape_5g.unwrap(),
        );
    }

    println!("\nartifacts in {}:", summary.out_dir.display());
    let mut names: Vec<String> = std::fs::read_dir(&summary.out_dir)
        .expect("out dir exists")
        .map(|e| e.expect("entry").file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    for name in names {
        println!("  {name}");
    }
}

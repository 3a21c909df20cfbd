//! End-to-end checks of the installed binary: subcommand chain, exit codes,
//! and reproducibility of artifacts.

use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cellcast"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn assert_code(out: &Output, want: i32, context: &str) {
    assert_eq!(
        out.status.code(),
        Some(want),
        "{context}: expected exit {want}\nstdout: {}\nstderr: {}",
        stdout(out),
        stderr(out),
    );
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("run.cfg");
    std::fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn full_subcommand_chain_produces_consistent_artifacts() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let p = |name: &str| dir.join(name).to_string_lossy().into_owned();
    let config = write_config(
        dir,
        &format!(
            "# reduced corpus so the chain finishes fast\n\
             out_dir = {out}\n\
             holiday_file = {out}/holidays.txt\n\
             model_path = {out}/model_4g.bin\n\
             epochs = 6\n\
             lr0 = 0.002\n\
             batch_sizes = 16\n\
             d_hidden = 32\n\
             synth.n_cells_4g = 4\n\
             synth.n_cells_5g = 2\n",
            out = dir.display()
        ),
    );

    let out = run(&["synth", "--config", &config, "--seed", "7"]);
    assert_code(&out, 0, "synth");
    for name in ["training.csv", "holidays.txt", "actual.csv"] {
        assert!(dir.join(name).exists(), "synth must write {name}");
    }

    let out = run(&["impute", "--config", &config, "--in", &p("training.csv"), "--out", &p("imputed.csv")]);
    assert_code(&out, 0, "impute");
    assert!(stdout(&out).contains("imputed_series=6"));

    let out = run(&[
        "featurize", "--config", &config,
        "--in", &p("imputed.csv"), "--out", &p("features_4g.csv"), "--tech", "4G",
    ]);
    assert_code(&out, 0, "featurize");
    // 4 cells x ((35 - 28) / 1 + 1) windows
    assert!(stdout(&out).contains("rows=32"), "got: {}", stdout(&out));

    let out = run(&[
        "train", "--config", &config,
        "--in", &p("features_4g.csv"), "--out", &p("model_4g.bin"),
    ]);
    assert_code(&out, 0, "train");
    assert!(stdout(&out).contains("final_loss="));
    assert!(dir.join("model_4g.bin").exists());
    let log = std::fs::read_to_string(dir.join("model_4g.train_log.csv")).unwrap();
    assert!(log.starts_with("epoch,lr,mean_loss\n"));
    assert_eq!(log.lines().count(), 1 + 6, "one log line per epoch");

    let out = run(&[
        "predict", "--config", &config,
        "--in", &p("imputed.csv"), "--out", &p("pred_mlp_4g.csv"), "--tech", "4G",
    ]);
    assert_code(&out, 0, "predict");
    assert!(stdout(&out).contains("forecasts=4"));

    // Forecasting a mix of techs with one model is refused.
    let out = run(&["predict", "--config", &config, "--in", &p("imputed.csv"), "--out", &p("nope.csv")]);
    assert_code(&out, 1, "predict without tech filter");
    assert!(stderr(&out).contains("tech"), "got: {}", stderr(&out));

    let out = run(&[
        "baseline", "--config", &config,
        "--in", &p("imputed.csv"), "--out", &p("pred_naive.csv"), "--method", "naive",
    ]);
    assert_code(&out, 0, "baseline");
    assert!(stdout(&out).contains("forecasts=6"));
    assert!(stdout(&out).contains("method=naive"));

    let out = run(&[
        "evaluate", "--config", &config,
        "--in", &p("pred_naive.csv"), "--actual", &p("actual.csv"), "--out", &p("breakdown.csv"),
    ]);
    assert_code(&out, 0, "evaluate");
    assert!(stdout(&out).contains("weighted_mape=0."));
    assert!(stdout(&out).contains("mape_4g="));
    let breakdown = std::fs::read_to_string(dir.join("breakdown.csv")).unwrap();
    assert!(breakdown.starts_with("tech,indicator,mape,n_points\n"));

    // Scoring a grid against itself is exactly zero.
    let out = run(&["evaluate", "--config", &config, "--in", &p("actual.csv"), "--actual", &p("actual.csv")]);
    assert_code(&out, 0, "evaluate identical grids");
    assert!(stdout(&out).contains("weighted_mape=0.000000"), "got: {}", stdout(&out));

    // A 4G-only forecast grid cannot be scored against the full actuals.
    let out = run(&["evaluate", "--config", &config, "--in", &p("pred_mlp_4g.csv"), "--actual", &p("actual.csv")]);
    assert_code(&out, 1, "evaluate with missing keys");
    assert!(stderr(&out).contains("c5_"), "error should name a missing cell: {}", stderr(&out));

    // Warm start with zero epochs writes the donor back bit-identically.
    let out = run(&[
        "train", "--config", &config,
        "--in", &p("features_4g.csv"), "--out", &p("warm.bin"),
        "--warm-start", &p("model_4g.bin"), "--epochs", "0",
    ]);
    assert_code(&out, 0, "warm start epochs=0");
    assert!(!stdout(&out).contains("final_loss="), "no epochs, no loss");
    let donor = std::fs::read(dir.join("model_4g.bin")).unwrap();
    let warm = std::fs::read(dir.join("warm.bin")).unwrap();
    assert_eq!(donor, warm, "epochs=0 warm start must copy the donor");

    // The one-shot pipeline chains everything into a fresh directory.
    let out = run(&[
        "pipeline", "--config", &config, "--out", &p("pipeline_run"), "--epochs", "2",
    ]);
    assert_code(&out, 0, "pipeline");
    let text = stdout(&out);
    for method in ["dense_mlp", "naive", "rule"] {
        assert!(text.contains(&format!("method={method} weighted_mape=0.")), "got: {text}");
    }
    assert!(dir.join("pipeline_run/report.csv").exists());
}

#[test]
fn exit_codes_distinguish_usage_validation_and_io_failures() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();

    let out = run(&["--help"]);
    assert_code(&out, 0, "--help");
    assert!(stdout(&out).contains("synth"));
    assert_code(&run(&["--version"]), 0, "--version");

    // Usage errors.
    assert_code(&run(&[]), 1, "no subcommand");
    assert_code(&run(&["synth", "--no-such-flag"]), 1, "unknown flag");
    let out = run(&["baseline", "--in", "x.csv", "--out", "y.csv", "--method", "psychic"]);
    assert_code(&out, 1, "bad method value");

    // Validation errors name the offending key and line.
    let bad = write_config(dir, "epochs = 4\nno_such_key = 1\n");
    let out = run(&["synth", "--config", &bad]);
    assert_code(&out, 1, "unknown config key");
    let err = stderr(&out);
    assert!(err.contains("line 2") && err.contains("no_such_key"), "got: {err}");

    let no_holidays = write_config(dir, "epochs = 4\n");
    std::fs::write(dir.join("empty.csv"), "cell_id,tech,indicator,timestamp,value\n").unwrap();
    let out = run(&[
        "featurize", "--config", &no_holidays,
        "--in", dir.join("empty.csv").to_str().unwrap(), "--out", "f.csv",
    ]);
    assert_code(&out, 1, "missing holiday_file key");
    assert!(stderr(&out).contains("holiday_file"));

    // I/O errors.
    let out = run(&["impute", "--in", "/definitely/not/here.csv", "--out", "o.csv"]);
    assert_code(&out, 2, "missing input file");
    assert!(stderr(&out).contains("/definitely/not/here.csv"));
    assert_code(&run(&["synth", "--config", "/no/such/config"]), 2, "missing config file");
}

#[test]
fn same_config_and_seed_give_byte_identical_artifacts() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let p = |name: &str| dir.join(name).to_string_lossy().into_owned();
    let config = write_config(
        dir,
        "epochs = 4\n\
         lr0 = 0.002\n\
         batch_sizes = 8\n\
         d_hidden = 16\n\
         seed = 21\n\
         synth.n_cells_4g = 2\n\
         synth.n_cells_5g = 0\n",
    );

    for round in ["a", "b"] {
        let out_dir = p(round);
        assert_code(&run(&["synth", "--config", &config, "--out", &out_dir]), 0, "synth");
        let features = format!("{out_dir}/features.csv");
        let holidays_cfg = write_config(
            &dir.join(round),
            &format!(
                "holiday_file = {out_dir}/holidays.txt\n\
                 epochs = 4\nlr0 = 0.002\nbatch_sizes = 8\nd_hidden = 16\nseed = 21\n"
            ),
        );
        let imputed = format!("{out_dir}/imputed.csv");
        assert_code(
            &run(&["impute", "--in", &format!("{out_dir}/training.csv"), "--out", &imputed]),
            0,
            "impute",
        );
        assert_code(
            &run(&["featurize", "--config", &holidays_cfg, "--in", &imputed, "--out", &features]),
            0,
            "featurize",
        );
        assert_code(
            &run(&[
                "train", "--config", &holidays_cfg,
                "--in", &features, "--out", &format!("{out_dir}/model.bin"),
            ]),
            0,
            "train",
        );
    }

    for name in ["training.csv", "actual.csv", "features.csv", "model.bin"] {
        let a = std::fs::read(dir.join("a").join(name)).unwrap();
        let b = std::fs::read(dir.join("b").join(name)).unwrap();
        assert_eq!(a, b, "{name} differs between identical runs");
    }
}

//! Subcommand front end: synth, impute, featurize, train, predict,
//! baseline, evaluate, and a pipeline command chaining them end to end.
//!
//! Every subcommand reads an optional flat config file and applies its
//! flag overrides on top. Exit codes: 0 success, 1 validation/usage error,
//! 2 I/O failure. All outputs are written atomically.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::baselines::{naive_forecast, rule_based_week, BaselineMethod};
use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::eval::{self, EvalReport, ForecastGrid, GridKey};
use crate::ingest;
use crate::model::{self, DenseMlpModel, LossReport};
use crate::preprocess::{self, SampleRow, HISTORY_HOURS, TARGET_HOURS};
use crate::series::{CellSeries, HolidayCalendar, Indicator, Tech};
use crate::synth;

#[derive(Parser, Debug)]
#[command(name = "cellcast", version, about = "Hourly cell-level KPI forecasting")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a seeded synthetic corpus (training CSV, holidays, actuals)
    Synth(SynthArgs),
    /// Fill missing hours from neighboring weeks
    Impute(ImputeArgs),
    /// Cut imputed series into model input/target rows
    Featurize(FeaturizeArgs),
    /// Fit a model to a feature CSV
    Train(TrainArgs),
    /// Forecast the week following each series with a trained model
    Predict(PredictArgs),
    /// Forecast with a reference method instead of the model
    Baseline(BaselineArgs),
    /// Score a forecast grid against actuals
    Evaluate(EvaluateArgs),
    /// synth -> impute -> featurize -> train -> predict -> evaluate
    Pipeline(PipelineArgs),
}

#[derive(Args, Debug)]
struct ConfigArg {
    /// Flat `key = value` config file
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
}

impl ConfigArg {
    fn load(&self) -> Result<RunConfig> {
        match &self.config {
            Some(path) => RunConfig::from_file(path),
            None => Ok(RunConfig::default()),
        }
    }
}

#[derive(Args, Debug)]
struct SynthArgs {
    #[command(flatten)]
    config: ConfigArg,
    /// Master seed override
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ImputeArgs {
    #[command(flatten)]
    config: ConfigArg,
    /// Series CSV to fill
    #[arg(long = "in", value_name = "PATH")]
    input: PathBuf,
    /// Where to write the filled series CSV
    #[arg(long, value_name = "PATH")]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct FeaturizeArgs {
    #[command(flatten)]
    config: ConfigArg,
    /// Imputed series CSV
    #[arg(long = "in", value_name = "PATH")]
    input: PathBuf,
    /// Where to write the feature CSV
    #[arg(long, value_name = "PATH")]
    out: PathBuf,
    /// Keep only this indicator
    #[arg(long)]
    indicator: Option<Indicator>,
    /// Keep only this technology
    #[arg(long)]
    tech: Option<Tech>,
    /// Days between window starts
    #[arg(long)]
    stride: Option<usize>,
    /// Keep only the most recent N windows per series
    #[arg(long)]
    max_rows: Option<usize>,
}

#[derive(Args, Debug)]
struct TrainArgs {
    #[command(flatten)]
    config: ConfigArg,
    /// Feature CSV with targets
    #[arg(long = "in", value_name = "PATH")]
    input: PathBuf,
    /// Where to write the trained model
    #[arg(long, value_name = "PATH")]
    out: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    epochs: Option<usize>,
    /// First-epoch learning rate
    #[arg(long)]
    lr0: Option<f64>,
    /// Comma-separated batch-size candidates
    #[arg(long, value_delimiter = ',')]
    batch_sizes: Option<Vec<usize>>,
    /// Start from this model instead of a random initialization
    #[arg(long, value_name = "MODEL")]
    warm_start: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PredictArgs {
    #[command(flatten)]
    config: ConfigArg,
    /// Imputed series CSV to forecast from
    #[arg(long = "in", value_name = "PATH")]
    input: PathBuf,
    /// Where to write the forecast grid CSV
    #[arg(long, value_name = "PATH")]
    out: PathBuf,
    /// Keep only this indicator
    #[arg(long)]
    indicator: Option<Indicator>,
    /// Keep only this technology
    #[arg(long)]
    tech: Option<Tech>,
}

#[derive(Args, Debug)]
struct BaselineArgs {
    #[command(flatten)]
    config: ConfigArg,
    /// Imputed series CSV to forecast from
    #[arg(long = "in", value_name = "PATH")]
    input: PathBuf,
    /// Where to write the forecast grid CSV
    #[arg(long, value_name = "PATH")]
    out: PathBuf,
    /// naive | rule
    #[arg(long)]
    method: Option<BaselineMethod>,
    #[arg(long)]
    indicator: Option<Indicator>,
    #[arg(long)]
    tech: Option<Tech>,
}

#[derive(Args, Debug)]
struct EvaluateArgs {
    #[command(flatten)]
    config: ConfigArg,
    /// Forecast grid CSV (falls back to the pred_grid config key)
    #[arg(long = "in", value_name = "PATH")]
    input: Option<PathBuf>,
    /// Actual grid CSV (falls back to the actual_grid config key)
    #[arg(long, value_name = "PATH")]
    actual: Option<PathBuf>,
    /// Write a per-(tech, indicator) breakdown CSV here
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PipelineArgs {
    #[command(flatten)]
    config: ConfigArg,
    #[arg(long)]
    seed: Option<u64>,
    /// Run directory (overrides the out_dir config key)
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    #[arg(long)]
    epochs: Option<usize>,
    #[arg(long)]
    lr0: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    batch_sizes: Option<Vec<usize>>,
    #[arg(long)]
    stride: Option<usize>,
    #[arg(long)]
    max_rows: Option<usize>,
}

/// Parse `argv` and run the selected subcommand, returning the process
/// exit code instead of exiting, so tests can call it in-process.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // --help/--version land here too; those are not errors.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Synth(args) => cmd_synth(args),
        Command::Impute(args) => cmd_impute(args),
        Command::Featurize(args) => cmd_featurize(args),
        Command::Train(args) => cmd_train(args),
        Command::Predict(args) => cmd_predict(args),
        Command::Baseline(args) => cmd_baseline(args),
        Command::Evaluate(args) => cmd_evaluate(args),
        Command::Pipeline(args) => cmd_pipeline(args),
    }
}

fn require_key(path: &Option<PathBuf>, key: &str) -> Result<PathBuf> {
    path.clone()
        .ok_or_else(|| Error::Config(format!("the {key} config key is not set")))
}

fn load_calendar(config: &RunConfig) -> Result<HolidayCalendar> {
    ingest::parse_holidays(require_key(&config.holiday_file, "holiday_file")?)
}

fn filter_series(
    series: Vec<CellSeries>,
    indicator: Option<Indicator>,
    tech: Option<Tech>,
) -> Result<Vec<CellSeries>> {
    let kept: Vec<CellSeries> = series
        .into_iter()
        .filter(|s| indicator.is_none_or(|i| s.indicator == i))
        .filter(|s| tech.is_none_or(|t| s.tech == t))
        .collect();
    if kept.is_empty() {
        return Err(Error::Validation(
            "no series left after applying the indicator/tech filters".into(),
        ));
    }
    Ok(kept)
}

/// Build a grid by forecasting each series; all series must end at the
/// same timestamp, which becomes the grid's week start.
fn grid_from_forecasts<F>(series: &[CellSeries], mut forecast: F) -> Result<ForecastGrid>
where
    F: FnMut(&CellSeries) -> Result<Vec<f64>>,
{
    let first = series
        .first()
        .ok_or_else(|| Error::Validation("no series to forecast".into()))?;
    let week_start = first.end();
    let mut grid = ForecastGrid::new(week_start)?;
    for s in series {
        if s.end() != week_start {
            return Err(Error::GridMismatch(format!(
                "series {} ends at {} but {} ends at {week_start}; forecasts must share a week start",
                s.cell_id,
                s.end(),
                first.cell_id,
            )));
        }
        let values = forecast(s)?;
        grid.insert(
            GridKey {
                cell_id: s.cell_id.clone(),
                tech: s.tech,
                indicator: s.indicator,
            },
            values,
        )?;
    }
    Ok(grid)
}

/// Model forecast for one imputed series: scale the latest window, run the
/// network, unscale. An all-zero history (no scale) forecasts zeros.
fn forecast_series(
    model: &DenseMlpModel,
    series: &CellSeries,
    calendar: &HolidayCalendar,
) -> Result<Vec<f64>> {
    if series.len() < HISTORY_HOURS {
        return Err(Error::Validation(format!(
            "series {} has {} hours; forecasting needs at least {HISTORY_HOURS}",
            series.cell_id,
            series.len()
        )));
    }
    match preprocess::latest_window(series, calendar)? {
        Some(row) => Ok(preprocess::unscale(
            &model.predict(&row.input_vector()),
            row.scale,
        )),
        None => Ok(vec![0.0; TARGET_HOURS]),
    }
}

fn train_log_path(config: &RunConfig, model_out: &Path) -> PathBuf {
    config
        .train_log_csv
        .clone()
        .unwrap_or_else(|| model_out.with_extension("train_log.csv"))
}

fn write_train_log(path: &Path, lr0: f64, epochs: usize, report: &LossReport) -> Result<()> {
    let mut text = String::from("epoch,lr,mean_loss\n");
    for (e, loss) in report.epoch_losses.iter().enumerate() {
        let _ = writeln!(text, "{e},{},{loss}", model::lr_at_epoch(lr0, epochs, e));
    }
    ingest::write_atomic(path, text.as_bytes())
}

fn cmd_synth(args: SynthArgs) -> Result<()> {
    let mut config = args.config.load()?;
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    let out_dir = args.out.unwrap_or_else(|| config.out_dir.clone());
    let paths = synth::generate_to_dir(&config.synth_config(), &out_dir)?;
    println!("training_csv={}", paths.training_csv.display());
    println!("holiday_file={}", paths.holiday_file.display());
    println!("actual_csv={}", paths.actual_csv.display());
    Ok(())
}

fn cmd_impute(args: ImputeArgs) -> Result<()> {
    args.config.load()?; // validate the config even though no keys are used
    let series = ingest::parse_series_csv(&args.input)?;
    let mut filled_points = 0;
    let filled: Vec<CellSeries> = series
        .iter()
        .map(|s| {
            filled_points += s.n_missing();
            preprocess::impute(s)
        })
        .collect::<Result<_>>()?;
    ingest::write_series_csv(&args.out, &filled)?;
    println!("imputed_series={} filled_points={filled_points}", filled.len());
    Ok(())
}

fn cmd_featurize(args: FeaturizeArgs) -> Result<()> {
    let config = args.config.load()?;
    let calendar = load_calendar(&config)?;
    let stride = args.stride.unwrap_or(config.stride_days);
    let max_rows = args.max_rows.or(config.max_rows);
    let indicator = args.indicator.or(config.indicator);
    let tech = args.tech.or(config.tech);

    let series = filter_series(ingest::parse_series_csv(&args.input)?, indicator, tech)?;
    let mut rows = Vec::new();
    for s in &series {
        rows.extend(preprocess::extract_windows(s, &calendar, stride, true, max_rows)?);
    }
    if rows.is_empty() {
        return Err(Error::Validation(
            "no training windows: every series is shorter than 28 days or degenerate".into(),
        ));
    }
    preprocess::write_feature_csv(&args.out, &rows)?;
    println!("rows={}", rows.len());
    Ok(())
}

fn cmd_train(args: TrainArgs) -> Result<()> {
    let mut config = args.config.load()?;
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(epochs) = args.epochs {
        config.epochs = epochs;
    }
    if let Some(lr0) = args.lr0 {
        config.lr0 = lr0;
    }
    if let Some(batch_sizes) = args.batch_sizes {
        config.batch_sizes = batch_sizes;
    }
    config.validate()?;

    let donor = match &args.warm_start {
        Some(path) => Some(model::load_model(path)?),
        None => None,
    };
    let rows = preprocess::read_feature_csv(&args.input)?;
    let train_config = config.train_config();
    let (model, report) = model::train(&rows, &train_config, donor.as_ref())?;
    model::save_model(&model, &args.out)?;
    write_train_log(
        &train_log_path(&config, &args.out),
        train_config.lr0,
        train_config.epochs,
        &report,
    )?;
    println!("model={}", args.out.display());
    println!("batch_size={}", report.batch_size);
    if let Some(final_loss) = report.final_loss() {
        println!("final_loss={final_loss}");
    }
    Ok(())
}

fn cmd_predict(args: PredictArgs) -> Result<()> {
    let config = args.config.load()?;
    let model = model::load_model(require_key(&config.model_path, "model_path")?)?;
    let calendar = load_calendar(&config)?;
    let indicator = args.indicator.or(config.indicator);
    let tech = args.tech.or(config.tech);

    let series = filter_series(ingest::parse_series_csv(&args.input)?, indicator, tech)?;
    // One model serves one (tech, indicator) pair; a mixed selection is
    // almost certainly a missing filter.
    let mut pairs: Vec<(Tech, Indicator)> =
        series.iter().map(|s| (s.tech, s.indicator)).collect();
    pairs.sort();
    pairs.dedup();
    if pairs.len() > 1 {
        return Err(Error::Validation(format!(
            "input mixes {} (tech, indicator) pairs; narrow it with --tech/--indicator",
            pairs.len()
        )));
    }

    let grid = grid_from_forecasts(&series, |s| forecast_series(&model, s, &calendar))?;
    grid.write_csv(&args.out)?;
    println!("forecasts={} week_start={}", grid.len(), grid.week_start());
    Ok(())
}

fn cmd_baseline(args: BaselineArgs) -> Result<()> {
    let config = args.config.load()?;
    let method = args.method.unwrap_or(config.method);
    let series = filter_series(
        ingest::parse_series_csv(&args.input)?,
        args.indicator.or(config.indicator),
        args.tech.or(config.tech),
    )?;
    let grid = grid_from_forecasts(&series, |s| match method {
        BaselineMethod::Naive => naive_forecast(s),
        BaselineMethod::Rule => rule_based_week(s, s.end(), &config.rule),
    })?;
    grid.write_csv(&args.out)?;
    println!(
        "forecasts={} week_start={} method={}",
        grid.len(),
        grid.week_start(),
        method.as_str()
    );
    Ok(())
}

fn print_report(report: &EvalReport) {
    println!("weighted_mape={:.6}", report.weighted_mape);
    if let Some(m) = report.mape_4g {
        println!("mape_4g={m:.6}");
    }
    if let Some(m) = report.mape_5g {
        println!("mape_5g={m:.6}");
    }
    println!("n_points_scored={}", report.n_points_scored);
    println!(
        "n_points_skipped_zero_actual={}",
        report.n_points_skipped_zero_actual
    );
}

fn cmd_evaluate(args: EvaluateArgs) -> Result<()> {
    let config = args.config.load()?;
    let pred = match args.input {
        Some(p) => p,
        None => require_key(&config.pred_grid, "pred_grid")?,
    };
    let actual = match args.actual {
        Some(p) => p,
        None => require_key(&config.actual_grid, "actual_grid")?,
    };
    let report = eval::evaluate_run(&pred, &actual, args.out.as_deref())?;
    print_report(&report);
    Ok(())
}

fn cmd_pipeline(args: PipelineArgs) -> Result<()> {
    let mut config = args.config.load()?;
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(out) = args.out {
        config.out_dir = out;
    }
    if let Some(epochs) = args.epochs {
        config.epochs = epochs;
    }
    if let Some(lr0) = args.lr0 {
        config.lr0 = lr0;
    }
    if let Some(batch_sizes) = args.batch_sizes {
        config.batch_sizes = batch_sizes;
    }
    if let Some(stride) = args.stride {
        config.stride_days = stride;
    }
    if let Some(max_rows) = args.max_rows {
        config.max_rows = Some(max_rows);
    }
    config.validate()?;

    let summary = run_pipeline(&config)?;
    for (method, report) in [
        ("dense_mlp", &summary.dense_mlp),
        ("naive", &summary.naive),
        ("rule", &summary.rule),
    ] {
        println!("method={method} weighted_mape={:.6}", report.weighted_mape);
    }
    println!("report={}", summary.report_csv.display());
    Ok(())
}

/// Everything a full run produced, with the scores of the model and both
/// baselines against the held-out week.
#[derive(Debug, Clone)]
pub struct PipelineSummary {
    pub out_dir: PathBuf,
    pub dense_mlp: EvalReport,
    pub naive: EvalReport,
    pub rule: EvalReport,
    pub report_csv: PathBuf,
    pub pred_grid_csv: PathBuf,
}

/// Run the whole chain in `config.out_dir`: generate a synthetic corpus,
/// impute it, train one model per (indicator, tech) — 5G warm-started from
/// the finished 4G model of the same indicator — forecast the held-out
/// week with the models and both baselines, and score all three grids.
pub fn run_pipeline(config: &RunConfig) -> Result<PipelineSummary> {
    config.validate()?;
    let out_dir = &config.out_dir;
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let paths = synth::generate_to_dir(&config.synth_config(), out_dir)?;

    let raw = ingest::parse_series_csv(&paths.training_csv)?;
    let imputed: Vec<CellSeries> = raw.iter().map(preprocess::impute).collect::<Result<_>>()?;
    let imputed_path = out_dir.join("imputed.csv");
    ingest::write_series_csv(&imputed_path, &imputed)?;

    let calendar = ingest::parse_holidays(&paths.holiday_file)?;
    let actual = ForecastGrid::read_csv(&paths.actual_csv)?;
    let train_config = config.train_config();

    let mut mlp_grid = ForecastGrid::new(actual.week_start())?;
    for &indicator in &config.synth.indicators {
        let mut donor: Option<DenseMlpModel> = None;
        for tech in [Tech::FourG, Tech::FiveG] {
            let series: Vec<&CellSeries> = imputed
                .iter()
                .filter(|s| s.indicator == indicator && s.tech == tech)
                .collect();
            if series.is_empty() {
                continue;
            }
            let mut rows: Vec<SampleRow> = Vec::new();
            for s in &series {
                rows.extend(preprocess::extract_windows(
                    s,
                    &calendar,
                    config.stride_days,
                    true,
                    config.max_rows,
                )?);
            }
            let (model, report) = model::train(&rows, &train_config, donor.as_ref())?;

            let tag = format!(
                "{}_{}",
                match tech {
                    Tech::FourG => "4g",
                    Tech::FiveG => "5g",
                },
                indicator.as_str().to_lowercase()
            );
            let model_path = out_dir.join(format!("model_{tag}.bin"));
            model::save_model(&model, &model_path)?;
            write_train_log(
                &model_path.with_extension("train_log.csv"),
                train_config.lr0,
                train_config.epochs,
                &report,
            )?;

            for s in &series {
                mlp_grid.insert(
                    GridKey {
                        cell_id: s.cell_id.clone(),
                        tech: s.tech,
                        indicator: s.indicator,
                    },
                    forecast_series(&model, s, &calendar)?,
                )?;
            }
            if tech == Tech::FourG {
                donor = Some(model);
            }
        }
    }

    let all_imputed: Vec<CellSeries> = imputed;
    let naive_grid = grid_from_forecasts(&all_imputed, naive_forecast)?;
    let rule_grid = grid_from_forecasts(&all_imputed, |s| {
        rule_based_week(s, s.end(), &config.rule)
    })?;

    let pred_grid_csv = out_dir.join("pred_dense_mlp.csv");
    mlp_grid.write_csv(&pred_grid_csv)?;
    naive_grid.write_csv(&out_dir.join("pred_naive.csv"))?;
    rule_grid.write_csv(&out_dir.join("pred_rule.csv"))?;

    let dense_mlp = eval::weighted_mape(&mlp_grid, &actual)?;
    let naive = eval::weighted_mape(&naive_grid, &actual)?;
    let rule = eval::weighted_mape(&rule_grid, &actual)?;

    let report_csv = out_dir.join("report.csv");
    let mut text = String::from(
        "method,weighted_mape,mape_4g,mape_5g,n_points_scored,n_points_skipped_zero_actual\n",
    );
    for (method, report) in [("dense_mlp", &dense_mlp), ("naive", &naive), ("rule", &rule)] {
        let opt = |m: Option<f64>| m.map(|v| v.to_string()).unwrap_or_default();
        let _ = writeln!(
            text,
            "{method},{},{},{},{},{}",
            report.weighted_mape,
            opt(report.mape_4g),
            opt(report.mape_5g),
            report.n_points_scored,
            report.n_points_skipped_zero_actual
        );
    }
    ingest::write_atomic(&report_csv, text.as_bytes())?;

    Ok(PipelineSummary {
        out_dir: out_dir.clone(),
        dense_mlp,
        naive,
        rule,
        report_csv,
        pred_grid_csv,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn help_and_version_exit_zero() {
        assert_eq!(dispatch(["cellcast", "--help"]), 0);
        assert_eq!(dispatch(["cellcast", "--version"]), 0);
        assert_eq!(dispatch(["cellcast", "synth", "--help"]), 0);
    }

    #[test]
    fn unknown_subcommand_and_bad_flags_exit_one() {
        assert_eq!(dispatch(["cellcast", "forecastify"]), 1);
        assert_eq!(dispatch(["cellcast"]), 1);
        assert_eq!(dispatch(["cellcast", "impute", "--in", "x.csv"]), 1); // missing --out
    }

    #[test]
    fn missing_input_file_exits_two() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("out.csv");
        let code = dispatch([
            "cellcast",
            "impute",
            "--in",
            "/nonexistent/series.csv",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code, 2);
    }

    #[test]
    fn bad_config_key_exits_one() {
        let dir = tempfile::tempdir().unwrap();
        let config = dir.path().join("run.conf");
        std::fs::write(&config, "no_such_key = 1\n").unwrap();
        let code = dispatch([
            "cellcast",
            "synth",
            "--config",
            config.to_str().unwrap(),
            "--out",
            dir.path().to_str().unwrap(),
        ]);
        assert_eq!(code, 1);
    }

    #[test]
    fn filters_reject_empty_selection() {
        let series = vec![CellSeries::new(
            "a",
            Tech::FourG,
            Indicator::Pusch,
            chrono::NaiveDate::from_ymd_opt(2021, 3, 1)
                .unwrap()
                .and_hms_opt(0, 0, 0)
                .unwrap(),
            vec![Some(1.0); 24],
        )
        .unwrap()];
        assert!(filter_series(series.clone(), Some(Indicator::Rrc), None).is_err());
        assert!(filter_series(series.clone(), None, Some(Tech::FiveG)).is_err());
        assert_eq!(
            filter_series(series, Some(Indicator::Pusch), Some(Tech::FourG))
                .unwrap()
                .len(),
            1
        );
    }

    #[test]
    fn forecast_grids_require_a_common_week_start() {
        let start = chrono::NaiveDate::from_ymd_opt(2021, 3, 1)
            .unwrap()
            .and_hms_opt(0, 0, 0)
            .unwrap();
        let mk = |cell: &str, hours: usize| {
            CellSeries::new(
                cell,
                Tech::FourG,
                Indicator::Pusch,
                start,
                vec![Some(1.0); hours],
            )
            .unwrap()
        };
        let series = vec![mk("a", 7 * 24), mk("b", 8 * 24)];
        let err = grid_from_forecasts(&series, naive_forecast).unwrap_err();
        assert!(err.to_string().contains("week start"), "{err}");
    }
}

//! Scoring of forecast grids: weighted MAPE with technology weights
//! 0.7 (4G) / 0.3 (5G) and a 1.2 hour weight on the first forecast day.
//!
//! MAPE values are fractions (0.25 means 25%). Points with a zero actual
//! value are excluded from the mean and counted separately.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use chrono::{NaiveDateTime, Timelike};

use crate::error::{Error, Result};
use crate::ingest::{parse_timestamp, write_atomic, TIMESTAMP_FORMAT};
use crate::series::{Indicator, Tech, HOURS_PER_DAY, HOURS_PER_WEEK};

pub const TECH_WEIGHT_4G: f64 = 0.7;
pub const TECH_WEIGHT_5G: f64 = 0.3;
/// Hour weight for forecast hours 0–23; later hours weigh 1.0.
pub const DAY_ONE_WEIGHT: f64 = 1.2;

/// Identity of one forecast series inside a grid.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct GridKey {
    pub cell_id: String,
    pub tech: Tech,
    pub indicator: Indicator,
}

impl std::fmt::Display for GridKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}/{}", self.cell_id, self.tech, self.indicator)
    }
}

/// A week of hourly forecasts (or actuals) per (cell, tech, indicator),
/// all aligned to one declared week start.
#[derive(Debug, Clone, PartialEq)]
pub struct ForecastGrid {
    week_start: NaiveDateTime,
    entries: BTreeMap<GridKey, Vec<f64>>,
}

impl ForecastGrid {
    pub fn new(week_start: NaiveDateTime) -> Result<Self> {
        if week_start.minute() != 0 || week_start.second() != 0 {
            return Err(Error::Validation(format!(
                "grid week start {week_start} is not on an hour boundary"
            )));
        }
        Ok(ForecastGrid {
            week_start,
            entries: BTreeMap::new(),
        })
    }

    pub fn week_start(&self) -> NaiveDateTime {
        self.week_start
    }

    pub fn insert(&mut self, key: GridKey, values: Vec<f64>) -> Result<()> {
        if values.len() != HOURS_PER_WEEK {
            return Err(Error::Validation(format!(
                "grid entry {key} has {} values; a forecast week has {HOURS_PER_WEEK}",
                values.len()
            )));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::Validation(format!(
                "grid entry {key} contains invalid value {bad}"
            )));
        }
        if self.entries.contains_key(&key) {
            return Err(Error::Validation(format!("duplicate grid entry {key}")));
        }
        self.entries.insert(key, values);
        Ok(())
    }

    pub fn get(&self, key: &GridKey) -> Option<&[f64]> {
        self.entries.get(key).map(Vec::as_slice)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GridKey, &[f64])> {
        self.entries.iter().map(|(k, v)| (k, v.as_slice()))
    }

    pub fn keys(&self) -> impl Iterator<Item = &GridKey> {
        self.entries.keys()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Absorb another grid with the same week start and disjoint keys.
    pub fn merge(&mut self, other: ForecastGrid) -> Result<()> {
        if other.week_start != self.week_start {
            return Err(Error::GridMismatch(format!(
                "cannot merge grids with week starts {} and {}",
                self.week_start, other.week_start
            )));
        }
        for (key, values) in other.entries {
            if self.entries.contains_key(&key) {
                return Err(Error::GridMismatch(format!(
                    "merge would overwrite grid entry {key}"
                )));
            }
            self.entries.insert(key, values);
        }
        Ok(())
    }

    /// Write as CSV: a `# week_start=...` comment line, then
    /// `cell_id,tech,indicator,hour_index,value` rows sorted by key.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut body = format!(
            "# week_start={}\n",
            self.week_start.format(TIMESTAMP_FORMAT)
        );
        let mut wtr = csv::Writer::from_writer(Vec::new());
        wtr.write_record(["cell_id", "tech", "indicator", "hour_index", "value"])
            .map_err(|e| Error::io(path, std::io::Error::other(e)))?;
        for (key, values) in &self.entries {
            for (h, v) in values.iter().enumerate() {
                wtr.write_record([
                    key.cell_id.as_str(),
                    &key.tech.to_string(),
                    &key.indicator.to_string(),
                    &h.to_string(),
                    &v.to_string(),
                ])
                .map_err(|e| Error::io(path, std::io::Error::other(e)))?;
            }
        }
        let csv_bytes = wtr
            .into_inner()
            .map_err(|e| Error::io(path, std::io::Error::other(e)))?;
        body.push_str(&String::from_utf8(csv_bytes).expect("csv output is utf-8"));
        write_atomic(path, body.as_bytes())
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let (first, rest) = text.split_once('\n').ok_or_else(|| Error::Parse {
            path: path.to_path_buf(),
            line: 1,
            message: "empty grid file".into(),
        })?;
        let week_start = first
            .trim_end_matches('\r')
            .strip_prefix("# week_start=")
            .ok_or_else(|| Error::Parse {
                path: path.to_path_buf(),
                line: 1,
                message: format!("expected a '# week_start=' comment line, got {first:?}"),
            })
            .and_then(|stamp| {
                parse_timestamp(stamp).map_err(|e| Error::Parse {
                    path: path.to_path_buf(),
                    line: 1,
                    message: e,
                })
            })?;
        let mut grid = ForecastGrid::new(week_start)?;

        let parse_err = |line: u64, message: String| Error::Parse {
            path: path.to_path_buf(),
            line,
            message,
        };
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(rest.as_bytes());
        {
            let headers = rdr
                .headers()
                .map_err(|e| parse_err(2, e.to_string()))?
                .clone();
            let expected = ["cell_id", "tech", "indicator", "hour_index", "value"];
            if headers.iter().collect::<Vec<_>>() != expected {
                return Err(parse_err(2, format!("expected header {expected:?}")));
            }
        }

        // Collect per key, requiring each hour exactly once.
        let mut partial: BTreeMap<GridKey, Vec<Option<f64>>> = BTreeMap::new();
        for (i, record) in rdr.records().enumerate() {
            let line = i as u64 + 3; // 1 comment + 1 header
            let record = record.map_err(|e| parse_err(line, e.to_string()))?;
            if record.len() != 5 {
                return Err(parse_err(line, format!("expected 5 fields, got {}", record.len())));
            }
            let tech: Tech = record[1].parse().map_err(|e| parse_err(line, e))?;
            let indicator: Indicator = record[2].parse().map_err(|e| parse_err(line, e))?;
            let hour: usize = record[3]
                .parse()
                .map_err(|_| parse_err(line, format!("bad hour_index {:?}", &record[3])))?;
            if hour >= HOURS_PER_WEEK {
                return Err(parse_err(line, format!("hour_index {hour} out of range")));
            }
            let value: f64 = record[4]
                .parse()
                .map_err(|_| parse_err(line, format!("bad value {:?}", &record[4])))?;
            if !value.is_finite() || value < 0.0 {
                return Err(parse_err(line, format!("invalid value {value}")));
            }
            let key = GridKey {
                cell_id: record[0].to_string(),
                tech,
                indicator,
            };
            let slot = &mut partial
                .entry(key.clone())
                .or_insert_with(|| vec![None; HOURS_PER_WEEK])[hour];
            if slot.is_some() {
                return Err(parse_err(line, format!("duplicate hour {hour} for {key}")));
            }
            *slot = Some(value);
        }
        for (key, values) in partial {
            let complete: Option<Vec<f64>> = values.into_iter().collect();
            let complete = complete.ok_or_else(|| {
                Error::Validation(format!(
                    "grid entry {key} in {} is missing hours",
                    path.display()
                ))
            })?;
            grid.insert(key, complete)?;
        }
        Ok(grid)
    }
}

/// Score summary of one forecast grid against actuals. Per-tech MAPEs are
/// absent when that tech has no scored points; the overall figure then
/// falls back to the present tech with weight 1.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub mape_4g: Option<f64>,
    pub mape_5g: Option<f64>,
    pub weighted_mape: f64,
    pub n_points_scored: usize,
    pub n_points_skipped_zero_actual: usize,
}

/// Per-(tech, indicator) MAPE row for the breakdown CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct BreakdownRow {
    pub tech: Tech,
    pub indicator: Indicator,
    pub mape: f64,
    pub n_points: usize,
}

pub fn hour_weight(hour_index: usize) -> f64 {
    if hour_index < HOURS_PER_DAY {
        DAY_ONE_WEIGHT
    } else {
        1.0
    }
}

fn check_keys_match(pred: &ForecastGrid, actual: &ForecastGrid) -> Result<()> {
    if pred.week_start != actual.week_start {
        return Err(Error::GridMismatch(format!(
            "prediction week starts {} but actuals start {}",
            pred.week_start, actual.week_start
        )));
    }
    let mut missing: Vec<String> = actual
        .keys()
        .filter(|k| pred.get(k).is_none())
        .map(|k| format!("{k} (missing from prediction)"))
        .collect();
    missing.extend(
        pred.keys()
            .filter(|k| actual.get(k).is_none())
            .map(|k| format!("{k} (missing from actuals)")),
    );
    if missing.is_empty() {
        return Ok(());
    }
    let mut msg = String::from("grids disagree on keys: ");
    for (i, m) in missing.iter().take(5).enumerate() {
        if i > 0 {
            msg.push_str(", ");
        }
        msg.push_str(m);
    }
    if missing.len() > 5 {
        let _ = write!(msg, " (+{} more)", missing.len() - 5);
    }
    Err(Error::GridMismatch(msg))
}

#[derive(Default)]
struct MapeAcc {
    weighted_ape: f64,
    weight: f64,
    scored: usize,
    skipped: usize,
}

impl MapeAcc {
    fn add(&mut self, actual: f64, pred: f64, weight: f64) {
        if actual == 0.0 {
            self.skipped += 1;
            return;
        }
        self.weighted_ape += weight * ((actual - pred).abs() / actual);
        self.weight += weight;
        self.scored += 1;
    }

    fn mape(&self) -> Option<f64> {
        (self.scored > 0).then(|| self.weighted_ape / self.weight)
    }
}

/// Weighted MAPE of a prediction grid against an actual grid with matching
/// keys and week start.
pub fn weighted_mape(pred: &ForecastGrid, actual: &ForecastGrid) -> Result<EvalReport> {
    check_keys_match(pred, actual)?;
    let mut acc_4g = MapeAcc::default();
    let mut acc_5g = MapeAcc::default();
    for (key, actual_values) in actual.iter() {
        let pred_values = pred.get(key).expect("keys checked");
        let acc = match key.tech {
            Tech::FourG => &mut acc_4g,
            Tech::FiveG => &mut acc_5g,
        };
        for (h, (&a, &p)) in actual_values.iter().zip(pred_values).enumerate() {
            acc.add(a, p, hour_weight(h));
        }
    }
    let mape_4g = acc_4g.mape();
    let mape_5g = acc_5g.mape();
    let weighted = match (mape_4g, mape_5g) {
        (Some(a), Some(b)) => TECH_WEIGHT_4G * a + TECH_WEIGHT_5G * b,
        (Some(a), None) => a,
        (None, Some(b)) => b,
        (None, None) => {
            return Err(Error::Validation(
                "no points could be scored: every actual value is zero".into(),
            ))
        }
    };
    Ok(EvalReport {
        mape_4g,
        mape_5g,
        weighted_mape: weighted,
        n_points_scored: acc_4g.scored + acc_5g.scored,
        n_points_skipped_zero_actual: acc_4g.skipped + acc_5g.skipped,
    })
}

/// Per-(tech, indicator) day-weighted MAPEs, sorted by key. Groups where
/// every point has a zero actual are omitted.
pub fn breakdown(pred: &ForecastGrid, actual: &ForecastGrid) -> Result<Vec<BreakdownRow>> {
    check_keys_match(pred, actual)?;
    let mut groups: BTreeMap<(Tech, Indicator), MapeAcc> = BTreeMap::new();
    for (key, actual_values) in actual.iter() {
        let pred_values = pred.get(key).expect("keys checked");
        let acc = groups.entry((key.tech, key.indicator)).or_default();
        for (h, (&a, &p)) in actual_values.iter().zip(pred_values).enumerate() {
            acc.add(a, p, hour_weight(h));
        }
    }
    Ok(groups
        .into_iter()
        .filter_map(|((tech, indicator), acc)| {
            acc.mape().map(|mape| BreakdownRow {
                tech,
                indicator,
                mape,
                n_points: acc.scored,
            })
        })
        .collect())
}

pub fn write_breakdown_csv(rows: &[BreakdownRow], path: &Path) -> Result<()> {
    let mut out = String::from("tech,indicator,mape,n_points\n");
    for row in rows {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            row.tech, row.indicator, row.mape, row.n_points
        );
    }
    write_atomic(path, out.as_bytes())
}

/// Load two grid CSVs, score them, and optionally write the breakdown.
pub fn evaluate_run(
    pred_path: &Path,
    actual_path: &Path,
    breakdown_path: Option<&Path>,
) -> Result<EvalReport> {
    let pred = ForecastGrid::read_csv(pred_path)?;
    let actual = ForecastGrid::read_csv(actual_path)?;
    let report = weighted_mape(&pred, &actual)?;
    if let Some(out) = breakdown_path {
        write_breakdown_csv(&breakdown(&pred, &actual)?, out)?;
    }
    Ok(report)
}

//! Gap filling and feature extraction.
//!
//! Missing hours are filled from the same hour of week in neighbouring
//! weeks: for a gap at index `t`, every originally present value at
//! `t +/- 168k` hours contributes with weight `1/k`, and the fill is the
//! weighted mean over both directions, however far they reach. A single pass
//! reads only originally present values, so imputation is idempotent.
//!
//! Feature rows are 28-day sliding windows aligned to day starts: 28 holiday
//! flags for the window's days plus the 504 hourly values of days 1-21,
//! scaled by their mean, predict the 168 hours of days 22-28. The target is
//! kept unscaled next to the scale so callers can move between the two
//! spaces.

use std::path::Path;

use chrono::{Duration, NaiveDate, NaiveDateTime};

use crate::error::{Error, Result};
use crate::ingest::{parse_timestamp, write_atomic, TIMESTAMP_FORMAT};
use crate::series::{CellSeries, HolidayCalendar, Indicator, Tech, HOURS_PER_DAY, HOURS_PER_WEEK};

pub const WINDOW_DAYS: usize = 28;
pub const HISTORY_DAYS: usize = 21;
pub const HISTORY_HOURS: usize = HISTORY_DAYS * HOURS_PER_DAY; // 504
pub const TARGET_HOURS: usize = 7 * HOURS_PER_DAY; // 168
/// Width of a model input vector: 28 holiday flags + 504 scaled values.
pub const INPUT_WIDTH: usize = WINDOW_DAYS + HISTORY_HOURS; // 532

/// Identifies where a sample row was cut from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowOrigin {
    pub cell_id: String,
    pub indicator: Indicator,
    pub tech: Tech,
    pub window_start: NaiveDateTime,
}

/// One training or inference row.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleRow {
    pub origin: RowOrigin,
    /// One flag per window day (1 = holiday).
    pub holiday_flags: [u8; WINDOW_DAYS],
    /// The 504 history hours divided by their mean.
    pub scaled_history: Vec<f64>,
    /// Mean of the unscaled history hours; strictly positive.
    pub scale: f64,
    /// The 168 target hours, unscaled; `None` for inference rows.
    pub target: Option<Vec<f64>>,
}

impl SampleRow {
    /// Concatenates holiday flags and scaled history into the model input.
    pub fn input_vector(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(INPUT_WIDTH);
        v.extend(self.holiday_flags.iter().map(|&f| f as f64));
        v.extend_from_slice(&self.scaled_history);
        v
    }

    /// Target divided by the row scale, the space the model is fit in.
    pub fn scaled_target(&self) -> Option<Vec<f64>> {
        self.target
            .as_ref()
            .map(|t| t.iter().map(|y| y / self.scale).collect())
    }
}

/// Fills every missing hour from the same hour of week in other weeks.
///
/// Fails with [`Error::Unimputable`] if some gap has no present value at any
/// `+/- 168k` offset. Present values are returned unchanged.
pub fn impute(series: &CellSeries) -> Result<CellSeries> {
    if series.is_fully_present() {
        return Ok(series.clone());
    }
    let src = &series.values;
    let n = src.len();
    let mut filled = src.clone();
    for i in 0..n {
        if src[i].is_some() {
            continue;
        }
        let mut num = 0.0;
        let mut den = 0.0;
        let mut k = 1usize;
        loop {
            let back = i.checked_sub(k * HOURS_PER_WEEK);
            let fwd = i + k * HOURS_PER_WEEK;
            if back.is_none() && fwd >= n {
                break;
            }
            let w = 1.0 / k as f64;
            if let Some(b) = back {
                if let Some(v) = src[b] {
                    num += w * v;
                    den += w;
                }
            }
            if fwd < n {
                if let Some(v) = src[fwd] {
                    num += w * v;
                    den += w;
                }
            }
            k += 1;
        }
        if den == 0.0 {
            return Err(Error::Unimputable {
                cell_id: series.cell_id.clone(),
                tech: series.tech,
                indicator: series.indicator,
                timestamp: series.timestamp_at(i),
            });
        }
        filled[i] = Some(num / den);
    }
    let mut out = series.clone();
    out.values = filled;
    Ok(out)
}

/// One flag per day of a 28-day window starting at `window_start`.
pub fn holiday_vector(calendar: &HolidayCalendar, window_start: NaiveDate) -> [u8; WINDOW_DAYS] {
    let mut flags = [0u8; WINDOW_DAYS];
    for (i, flag) in flags.iter_mut().enumerate() {
        *flag = calendar.contains(window_start + Duration::days(i as i64)) as u8;
    }
    flags
}

/// Scales a history window by its mean and carries the target along.
///
/// Returns `(scaled_history, scale, scaled_target)`. A zero-mean window has
/// no usable scale and yields [`Error::ZeroScale`], which window extraction
/// treats as "skip this row".
pub fn scale_row(
    history: &[f64],
    target: Option<&[f64]>,
) -> Result<(Vec<f64>, f64, Option<Vec<f64>>)> {
    if history.is_empty() {
        return Err(Error::Validation("empty history window".into()));
    }
    let scale = history.iter().sum::<f64>() / history.len() as f64;
    if scale == 0.0 {
        return Err(Error::ZeroScale);
    }
    let scaled_history = history.iter().map(|v| v / scale).collect();
    let scaled_target = target.map(|t| t.iter().map(|v| v / scale).collect());
    Ok((scaled_history, scale, scaled_target))
}

/// Maps a scaled model output back to the original units.
pub fn unscale(scaled: &[f64], scale: f64) -> Vec<f64> {
    assert!(
        scale > 0.0 && scale.is_finite(),
        "unscale requires a positive finite scale, got {scale}"
    );
    scaled.iter().map(|v| v * scale).collect()
}

/// Cuts day-aligned sliding windows out of a fully imputed series.
///
/// Window starts advance by `stride_days`; a window is emitted only if it
/// fits entirely in the series (28 days with targets, 21 days without).
/// Rows with a zero-mean history are skipped, as are rows with a zero-mean
/// target (the training loss is undefined there). With `max_rows`, only the
/// most recent windows are kept. A series shorter than one window yields an
/// empty vector.
pub fn extract_windows(
    series: &CellSeries,
    calendar: &HolidayCalendar,
    stride_days: usize,
    with_targets: bool,
    max_rows: Option<usize>,
) -> Result<Vec<SampleRow>> {
    if stride_days == 0 {
        return Err(Error::Validation("stride_days must be at least 1".into()));
    }
    if !series.starts_at_midnight() {
        return Err(Error::Validation(format!(
            "series {} starts at {}, not at hour 0 of a day",
            series.cell_id, series.start
        )));
    }
    if !series.is_fully_present() {
        return Err(Error::Validation(format!(
            "series {} {} {} still has {} missing hours; impute first",
            series.cell_id,
            series.tech,
            series.indicator,
            series.n_missing()
        )));
    }
    let window_days = if with_targets { WINDOW_DAYS } else { HISTORY_DAYS };
    let window_hours = window_days * HOURS_PER_DAY;
    let n = series.len();

    let mut rows = Vec::new();
    let mut day = 0usize;
    while day * HOURS_PER_DAY + window_hours <= n {
        let offset = day * HOURS_PER_DAY;
        let take = |from: usize, len: usize| -> Vec<f64> {
            series.values[from..from + len]
                .iter()
                .map(|v| v.expect("fully present"))
                .collect()
        };
        let history = take(offset, HISTORY_HOURS);
        let target = with_targets.then(|| take(offset + HISTORY_HOURS, TARGET_HOURS));

        let window_start = series.timestamp_at(offset);
        match scale_row(&history, target.as_deref()) {
            Ok((scaled_history, scale, _)) => {
                let target_ok = target
                    .as_ref()
                    .map_or(true, |t| t.iter().sum::<f64>() > 0.0);
                if target_ok {
                    rows.push(SampleRow {
                        origin: RowOrigin {
                            cell_id: series.cell_id.clone(),
                            indicator: series.indicator,
                            tech: series.tech,
                            window_start,
                        },
                        holiday_flags: holiday_vector(calendar, window_start.date()),
                        scaled_history,
                        scale,
                        target,
                    });
                }
            }
            Err(Error::ZeroScale) => {}
            Err(e) => return Err(e),
        }
        day += stride_days;
    }
    if let Some(max) = max_rows {
        if rows.len() > max {
            rows.drain(..rows.len() - max);
        }
    }
    Ok(rows)
}

/// The most recent history-only window of a series, ready for forecasting
/// the week that follows the series end.
pub fn latest_window(series: &CellSeries, calendar: &HolidayCalendar) -> Result<Option<SampleRow>> {
    if !series.starts_at_midnight() {
        return Err(Error::Validation(format!(
            "series {} starts at {}, not at hour 0 of a day",
            series.cell_id, series.start
        )));
    }
    if series.len() % HOURS_PER_DAY != 0 {
        return Err(Error::Validation(format!(
            "series {} does not end on a day boundary ({} hours)",
            series.cell_id,
            series.len()
        )));
    }
    if !series.is_fully_present() {
        return Err(Error::Validation(format!(
            "series {} still has missing hours; impute first",
            series.cell_id
        )));
    }
    if series.len() < HISTORY_HOURS {
        return Ok(None);
    }
    let offset = series.len() - HISTORY_HOURS;
    let history: Vec<f64> = series.values[offset..]
        .iter()
        .map(|v| v.expect("fully present"))
        .collect();
    let window_start = series.timestamp_at(offset);
    match scale_row(&history, None) {
        Ok((scaled_history, scale, _)) => Ok(Some(SampleRow {
            origin: RowOrigin {
                cell_id: series.cell_id.clone(),
                indicator: series.indicator,
                tech: series.tech,
                window_start,
            },
            holiday_flags: holiday_vector(calendar, window_start.date()),
            scaled_history,
            scale,
            target: None,
        })),
        Err(Error::ZeroScale) => Ok(None),
        Err(e) => Err(e),
    }
}

fn feature_header(with_targets: bool) -> Vec<String> {
    let mut h = vec![
        "cell_id".to_string(),
        "indicator".to_string(),
        "tech".to_string(),
        "window_start".to_string(),
        "scale".to_string(),
    ];
    h.extend((1..=WINDOW_DAYS).map(|i| format!("h{i}")));
    h.extend((1..=HISTORY_HOURS).map(|i| format!("x{i}")));
    if with_targets {
        h.extend((1..=TARGET_HOURS).map(|i| format!("y{i}")));
    }
    h
}

/// Writes sample rows as CSV, one row per line. All rows must agree on
/// whether they carry targets; the header announces the layout.
pub fn write_feature_csv(path: impl AsRef<Path>, rows: &[SampleRow]) -> Result<()> {
    let path = path.as_ref();
    if rows.is_empty() {
        return Err(Error::Validation("no feature rows to write".into()));
    }
    let with_targets = rows[0].target.is_some();
    if rows.iter().any(|r| r.target.is_some() != with_targets) {
        return Err(Error::Validation(
            "cannot mix rows with and without targets in one feature file".into(),
        ));
    }
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(feature_header(with_targets))
        .expect("write to Vec");
    for row in rows {
        let mut record = vec![
            row.origin.cell_id.clone(),
            row.origin.indicator.as_str().to_string(),
            row.origin.tech.as_str().to_string(),
            row.origin.window_start.format(TIMESTAMP_FORMAT).to_string(),
            row.scale.to_string(),
        ];
        record.extend(row.holiday_flags.iter().map(|f| f.to_string()));
        record.extend(row.scaled_history.iter().map(|v| v.to_string()));
        if let Some(target) = &row.target {
            record.extend(target.iter().map(|v| v.to_string()));
        }
        writer.write_record(&record).expect("write to Vec");
    }
    write_atomic(path, &writer.into_inner().expect("write to Vec"))
}

/// Reads a feature CSV written by [`write_feature_csv`].
pub fn read_feature_csv(path: impl AsRef<Path>) -> Result<Vec<SampleRow>> {
    let path = path.as_ref();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: 0,
            message: e.to_string(),
        })?;
    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: 1,
            message: e.to_string(),
        })?
        .iter()
        .map(str::to_string)
        .collect();
    let with_targets = if headers == feature_header(true) {
        true
    } else if headers == feature_header(false) {
        false
    } else {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            line: 1,
            message: "unrecognized feature file header".into(),
        });
    };

    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: e.position().map(|p| p.line()).unwrap_or_default(),
            message: e.to_string(),
        })?;
        let line = record.position().map(|p| p.line()).unwrap_or_default();
        let parse_err = |message: String| Error::Parse {
            path: path.to_path_buf(),
            line,
            message,
        };
        let number = |s: &str| -> Result<f64> {
            s.parse::<f64>()
                .map_err(|_| parse_err(format!("bad number {s:?}")))
        };

        let cell_id = record[0].to_string();
        let indicator: Indicator = record[1].parse().map_err(parse_err)?;
        let tech: Tech = record[2].parse().map_err(parse_err)?;
        let window_start = parse_timestamp(&record[3]).map_err(parse_err)?;
        let scale = number(&record[4])?;
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(parse_err(format!("scale must be positive, got {scale}")));
        }
        let mut holiday_flags = [0u8; WINDOW_DAYS];
        for (i, flag) in holiday_flags.iter_mut().enumerate() {
            *flag = match &record[5 + i] {
                "0" => 0,
                "1" => 1,
                other => return Err(parse_err(format!("bad holiday flag {other:?}"))),
            };
        }
        let base = 5 + WINDOW_DAYS;
        let mut scaled_history = Vec::with_capacity(HISTORY_HOURS);
        for i in 0..HISTORY_HOURS {
            scaled_history.push(number(&record[base + i])?);
        }
        let target = if with_targets {
            let base = base + HISTORY_HOURS;
            let mut t = Vec::with_capacity(TARGET_HOURS);
            for i in 0..TARGET_HOURS {
                t.push(number(&record[base + i])?);
            }
            Some(t)
        } else {
            None
        };
        rows.push(SampleRow {
            origin: RowOrigin {
                cell_id,
                indicator,
                tech,
                window_start,
            },
            holiday_flags,
            scaled_history,
            scale,
            target,
        });
    }
    Ok(rows)
}

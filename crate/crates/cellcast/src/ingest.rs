//! Reading and writing the on-disk input formats.
//!
//! Series CSV: header `cell_id,tech,indicator,timestamp,value` with an
//! optional trailing `city` column. Timestamps are ISO 8601 at hour
//! precision (`YYYY-MM-DDTHH:00`), an empty value cell marks a missing
//! measurement. Rows may arrive in any order; parsing groups them by
//! (cell_id, tech, indicator) and assembles an hourly-contiguous series from
//! the earliest to the latest timestamp seen for the group, with unobserved
//! hours missing.
//!
//! Holiday file: one `YYYY-MM-DD` date per line, blank lines ignored.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use chrono::{NaiveDate, NaiveDateTime};

use crate::error::{Error, Result};
use crate::series::{CellSeries, HolidayCalendar, Indicator, Tech};

pub const TIMESTAMP_FORMAT: &str = "%Y-%m-%dT%H:%M";
pub const DATE_FORMAT: &str = "%Y-%m-%d";

/// Writes `bytes` to `path` via a temp file in the same directory plus a
/// rename, so readers never observe a partially written file.
pub(crate) fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| Error::io(path, e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

pub(crate) fn parse_timestamp(s: &str) -> std::result::Result<NaiveDateTime, String> {
    let ts = NaiveDateTime::parse_from_str(s, TIMESTAMP_FORMAT)
        .map_err(|_| format!("bad timestamp {s:?} (expected YYYY-MM-DDTHH:00)"))?;
    if chrono::Timelike::minute(&ts) != 0 {
        return Err(format!("timestamp {s:?} is not at a full hour"));
    }
    Ok(ts)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct HourStamp(NaiveDateTime);

/// Parses a series CSV into one [`CellSeries`] per (cell_id, tech, indicator)
/// group, sorted by that key.
///
/// Duplicate timestamps within a group are allowed only when they agree: two
/// present values must match exactly, and a missing marker never overrides a
/// present one. Conflicting duplicates are an error.
pub fn parse_series_csv(path: impl AsRef<Path>) -> Result<Vec<CellSeries>> {
    let path = path.as_ref();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| csv_open_error(path, e))?;

    let headers = reader
        .headers()
        .map_err(|e| csv_open_error(path, e))?
        .clone();
    let expected = ["cell_id", "tech", "indicator", "timestamp", "value"];
    let cols: Vec<&str> = headers.iter().collect();
    let has_city = match cols.as_slice() {
        c if c == expected => false,
        c if c.len() == 6 && c[..5] == expected && c[5] == "city" => true,
        _ => {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line: 1,
                message: format!(
                    "bad header {:?} (expected cell_id,tech,indicator,timestamp,value[,city])",
                    cols.join(",")
                ),
            })
        }
    };

    type Key = (String, Tech, Indicator);
    struct Group {
        points: BTreeMap<HourStamp, (Option<f64>, u64)>,
        city: Option<String>,
    }
    let mut groups: BTreeMap<Key, Group> = BTreeMap::new();

    for record in reader.records() {
        let record = record.map_err(|e| csv_open_error(path, e))?;
        let line = record
            .position()
            .map(|p| p.line())
            .unwrap_or_default();
        let parse_err = |message: String| Error::Parse {
            path: path.to_path_buf(),
            line,
            message,
        };
        let invalid = |message: String| Error::InvalidRow {
            path: path.to_path_buf(),
            line,
            message,
        };

        if record.len() != headers.len() {
            return Err(parse_err(format!(
                "expected {} fields, found {}",
                headers.len(),
                record.len()
            )));
        }

        let cell_id = record[0].to_string();
        let tech: Tech = record[1].parse().map_err(invalid)?;
        let indicator: Indicator = record[2].parse().map_err(invalid)?;
        let ts = parse_timestamp(&record[3]).map_err(parse_err)?;
        let raw_value = record[4].trim();
        let value = if raw_value.is_empty() {
            None
        } else {
            let v: f64 = raw_value
                .parse()
                .map_err(|_| parse_err(format!("bad value {raw_value:?}")))?;
            if !v.is_finite() {
                return Err(invalid(format!("non-finite value {raw_value:?}")));
            }
            if v < 0.0 {
                return Err(invalid(format!("negative value {v}")));
            }
            Some(v)
        };
        let city = if has_city && !record[5].is_empty() {
            Some(record[5].to_string())
        } else {
            None
        };

        let group = groups
            .entry((cell_id.clone(), tech, indicator))
            .or_insert_with(|| Group {
                points: BTreeMap::new(),
                city: None,
            });
        match (&group.city, &city) {
            (Some(a), Some(b)) if a != b => {
                return Err(invalid(format!(
                    "conflicting city {b:?} for {cell_id} (previously {a:?})"
                )))
            }
            (None, Some(_)) => group.city = city,
            _ => {}
        }
        match group.points.get(&HourStamp(ts)) {
            None => {
                group.points.insert(HourStamp(ts), (value, line));
            }
            Some((existing, first_line)) => match (existing, &value) {
                (Some(a), Some(b)) if a.to_bits() != b.to_bits() => {
                    return Err(invalid(format!(
                        "conflicting duplicate for {cell_id} {tech} {indicator} at {ts}: {b} vs {a} (line {first_line})"
                    )))
                }
                (None, Some(_)) => {
                    group.points.insert(HourStamp(ts), (value, line));
                }
                _ => {}
            },
        }
    }

    let mut out = Vec::with_capacity(groups.len());
    for ((cell_id, tech, indicator), group) in groups {
        let first = group.points.keys().next().expect("non-empty group").0;
        let last = group.points.keys().next_back().expect("non-empty group").0;
        let n_hours = (last - first).num_hours() as usize + 1;
        let mut values = vec![None; n_hours];
        for (HourStamp(ts), (value, _)) in &group.points {
            let idx = (*ts - first).num_hours() as usize;
            values[idx] = *value;
        }
        let mut series = CellSeries::new(cell_id, tech, indicator, first, values)?;
        series.city = group.city;
        out.push(series);
    }
    Ok(out)
}

fn csv_open_error(path: &Path, e: csv::Error) -> Error {
    match e.kind() {
        csv::ErrorKind::Io(_) => {
            if let csv::ErrorKind::Io(io) = e.into_kind() {
                Error::io(path, io)
            } else {
                unreachable!()
            }
        }
        _ => Error::Parse {
            path: path.to_path_buf(),
            line: e
                .position()
                .map(|p| p.line())
                .unwrap_or_default(),
            message: e.to_string(),
        },
    }
}

/// Serializes series back to CSV in the exact format `parse_series_csv`
/// accepts, one row per hour including missing ones (empty value cell).
/// Groups are emitted sorted by (cell_id, tech, indicator); round-tripping a
/// parsed file reproduces the same series.
pub fn write_series_csv(path: impl AsRef<Path>, series: &[CellSeries]) -> Result<()> {
    let path = path.as_ref();
    let mut sorted: Vec<&CellSeries> = series.iter().collect();
    sorted.sort_by(|a, b| {
        (&a.cell_id, a.tech, a.indicator).cmp(&(&b.cell_id, b.tech, b.indicator))
    });
    let with_city = sorted.iter().any(|s| s.city.is_some());

    let mut writer = csv::Writer::from_writer(Vec::new());
    let header: &[&str] = if with_city {
        &["cell_id", "tech", "indicator", "timestamp", "value", "city"]
    } else {
        &["cell_id", "tech", "indicator", "timestamp", "value"]
    };
    writer.write_record(header).expect("write to Vec");
    for s in sorted {
        for (i, v) in s.values.iter().enumerate() {
            let ts = s.timestamp_at(i).format(TIMESTAMP_FORMAT).to_string();
            let value = v.map(|v| v.to_string()).unwrap_or_default();
            let mut record = vec![s.cell_id.as_str(), s.tech.as_str(), s.indicator.as_str()];
            record.push(&ts);
            record.push(&value);
            let city;
            if with_city {
                city = s.city.clone().unwrap_or_default();
                record.push(&city);
            }
            writer.write_record(&record).expect("write to Vec");
        }
    }
    let bytes = writer.into_inner().expect("write to Vec");
    write_atomic(path, &bytes)
}

/// Parses a holiday file: one ISO date per line, blanks skipped.
pub fn parse_holidays(path: impl AsRef<Path>) -> Result<HolidayCalendar> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut dates = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let date = NaiveDate::parse_from_str(line, DATE_FORMAT).map_err(|_| Error::Parse {
            path: path.to_path_buf(),
            line: i as u64 + 1,
            message: format!("bad date {line:?} (expected YYYY-MM-DD)"),
        })?;
        dates.push(date);
    }
    Ok(HolidayCalendar::new(dates))
}

pub fn write_holidays(path: impl AsRef<Path>, calendar: &HolidayCalendar) -> Result<()> {
    let mut text = String::new();
    for date in calendar.iter() {
        text.push_str(&date.format(DATE_FORMAT).to_string());
        text.push('\n');
    }
    write_atomic(path.as_ref(), text.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn write_tmp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn parses_groups_and_fills_gaps_with_missing() {
        let f = write_tmp(
            "cell_id,tech,indicator,timestamp,value\n\
             a,4G,PUSCH,2021-03-01T02:00,3.5\n\
             a,4G,PUSCH,2021-03-01T00:00,1.25\n\
             b,5G,RRC,2021-03-01T00:00,7\n\
             a,4G,PUSCH,2021-03-01T01:00,\n",
        );
        let series = parse_series_csv(f.path()).unwrap();
        assert_eq!(series.len(), 2);
        assert_eq!(series[0].cell_id, "a");
        assert_eq!(series[0].values, vec![Some(1.25), None, Some(3.5)]);
        assert_eq!(series[1].cell_id, "b");
        assert_eq!(series[1].tech, Tech::FiveG);
        assert_eq!(series[1].values, vec![Some(7.0)]);
    }

    #[test]
    fn unobserved_hours_between_rows_become_missing() {
        let f = write_tmp(
            "cell_id,tech,indicator,timestamp,value\n\
             a,4G,PUSCH,2021-03-01T00:00,1\n\
             a,4G,PUSCH,2021-03-01T03:00,4\n",
        );
        let series = parse_series_csv(f.path()).unwrap();
        assert_eq!(series[0].values, vec![Some(1.0), None, None, Some(4.0)]);
    }

    #[test]
    fn rejects_malformed_timestamp_with_line_number() {
        let f = write_tmp(
            "cell_id,tech,indicator,timestamp,value\n\
             a,4G,PUSCH,2021-03-01 05:00,1\n",
        );
        match parse_series_csv(f.path()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_negative_value() {
        let f = write_tmp(
            "cell_id,tech,indicator,timestamp,value\n\
             a,4G,PUSCH,2021-03-01T05:00,-1.5\n",
        );
        match parse_series_csv(f.path()) {
            Err(Error::InvalidRow { line, message, .. }) => {
                assert_eq!(line, 2);
                assert!(message.contains("negative"));
            }
            other => panic!("expected invalid-row error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_unknown_tech_and_indicator() {
        let f = write_tmp(
            "cell_id,tech,indicator,timestamp,value\n\
             a,3G,PUSCH,2021-03-01T05:00,1\n",
        );
        assert!(matches!(
            parse_series_csv(f.path()),
            Err(Error::InvalidRow { .. })
        ));
        let f = write_tmp(
            "cell_id,tech,indicator,timestamp,value\n\
             a,4G,FOO,2021-03-01T05:00,1\n",
        );
        assert!(matches!(
            parse_series_csv(f.path()),
            Err(Error::InvalidRow { .. })
        ));
    }

    #[test]
    fn duplicate_rows_agreeing_are_tolerated_conflicting_rejected() {
        let f = write_tmp(
            "cell_id,tech,indicator,timestamp,value\n\
             a,4G,PUSCH,2021-03-01T00:00,2\n\
             a,4G,PUSCH,2021-03-01T00:00,2\n",
        );
        assert_eq!(parse_series_csv(f.path()).unwrap()[0].values, vec![Some(2.0)]);

        let f = write_tmp(
            "cell_id,tech,indicator,timestamp,value\n\
             a,4G,PUSCH,2021-03-01T00:00,2\n\
             a,4G,PUSCH,2021-03-01T00:00,3\n",
        );
        assert!(matches!(
            parse_series_csv(f.path()),
            Err(Error::InvalidRow { line: 3, .. })
        ));
    }

    #[test]
    fn city_column_is_accepted_and_preserved() {
        let f = write_tmp(
            "cell_id,tech,indicator,timestamp,value,city\n\
             a,4G,PUSCH,2021-03-01T00:00,2,Porto\n",
        );
        let series = parse_series_csv(f.path()).unwrap();
        assert_eq!(series[0].city.as_deref(), Some("Porto"));
    }

    #[test]
    fn round_trip_preserves_series_and_is_order_insensitive() {
        let f = write_tmp(
            "cell_id,tech,indicator,timestamp,value,city\n\
             a,4G,PUSCH,2021-03-01T00:00,1.5,X\n\
             a,4G,PUSCH,2021-03-01T01:00,,X\n\
             a,4G,PUSCH,2021-03-01T02:00,0.25,X\n\
             b,5G,RRC,2021-03-02T10:00,42,\n",
        );
        let parsed = parse_series_csv(f.path()).unwrap();

        let out = tempfile::NamedTempFile::new().unwrap();
        write_series_csv(out.path(), &parsed).unwrap();
        let reparsed = parse_series_csv(out.path()).unwrap();
        assert_eq!(parsed, reparsed);

        // Shuffle the data rows; parsing must not care about row order.
        let text = std::fs::read_to_string(out.path()).unwrap();
        let mut lines: Vec<&str> = text.lines().collect();
        let header = lines.remove(0);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        lines.shuffle(&mut rng);
        let shuffled = write_tmp(&format!("{header}\n{}\n", lines.join("\n")));
        assert_eq!(parse_series_csv(shuffled.path()).unwrap(), parsed);
    }

    #[test]
    fn holiday_file_round_trip_and_errors() {
        let f = write_tmp("2021-03-08\n\n2021-05-01\n");
        let cal = parse_holidays(f.path()).unwrap();
        assert_eq!(cal.len(), 2);
        assert!(cal.contains(NaiveDate::from_ymd_opt(2021, 5, 1).unwrap()));

        let out = tempfile::NamedTempFile::new().unwrap();
        write_holidays(out.path(), &cal).unwrap();
        assert_eq!(parse_holidays(out.path()).unwrap(), cal);

        let bad = write_tmp("2021-03-08\n03/09/2021\n");
        match parse_holidays(bad.path()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }
}

//! Domain types for hourly cell-level KPI series.
//!
//! A [`CellSeries`] holds one indicator of one cell as an hourly-contiguous
//! vector starting at a fixed timestamp; `None` marks a missing measurement.
//! Invariants enforced at construction:
//!
//! - the start timestamp is aligned to a full hour,
//! - every present value is finite and non-negative.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use chrono::{Duration, NaiveDate, NaiveDateTime, Timelike};

use crate::error::{Error, Result};

pub const HOURS_PER_DAY: usize = 24;
pub const HOURS_PER_WEEK: usize = 168;

/// Radio access technology of a cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tech {
    FourG,
    FiveG,
}

impl Tech {
    pub const ALL: [Tech; 2] = [Tech::FourG, Tech::FiveG];

    pub fn as_str(self) -> &'static str {
        match self {
            Tech::FourG => "4G",
            Tech::FiveG => "5G",
        }
    }
}

impl FromStr for Tech {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "4G" => Ok(Tech::FourG),
            "5G" => Ok(Tech::FiveG),
            other => Err(format!("unknown tech {other:?} (expected 4G or 5G)")),
        }
    }
}

impl fmt::Display for Tech {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The six hourly indicators tracked per cell: uplink/downlink shared channel
/// utilization, control channel utilization, connection count and PDCP
/// traffic volumes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Indicator {
    Pusch,
    Pdsch,
    Pdcch,
    Rrc,
    Pdcpul,
    Pdcpdl,
}

impl Indicator {
    pub const ALL: [Indicator; 6] = [
        Indicator::Pusch,
        Indicator::Pdsch,
        Indicator::Pdcch,
        Indicator::Rrc,
        Indicator::Pdcpul,
        Indicator::Pdcpdl,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Indicator::Pusch => "PUSCH",
            Indicator::Pdsch => "PDSCH",
            Indicator::Pdcch => "PDCCH",
            Indicator::Rrc => "RRC",
            Indicator::Pdcpul => "PDCPUL",
            Indicator::Pdcpdl => "PDCPDL",
        }
    }
}

impl FromStr for Indicator {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "PUSCH" => Ok(Indicator::Pusch),
            "PDSCH" => Ok(Indicator::Pdsch),
            "PDCCH" => Ok(Indicator::Pdcch),
            "RRC" => Ok(Indicator::Rrc),
            "PDCPUL" => Ok(Indicator::Pdcpul),
            "PDCPDL" => Ok(Indicator::Pdcpdl),
            other => Err(format!(
                "unknown indicator {other:?} (expected one of PUSCH, PDSCH, PDCCH, RRC, PDCPUL, PDCPDL)"
            )),
        }
    }
}

impl fmt::Display for Indicator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One cell x indicator hourly series.
#[derive(Debug, Clone, PartialEq)]
pub struct CellSeries {
    pub cell_id: String,
    pub tech: Tech,
    pub indicator: Indicator,
    /// Optional metadata carried through from the input; never used by the
    /// pipeline.
    pub city: Option<String>,
    /// Timestamp of `values[0]`; subsequent entries follow at +1h each.
    pub start: NaiveDateTime,
    pub values: Vec<Option<f64>>,
}

impl CellSeries {
    pub fn new(
        cell_id: impl Into<String>,
        tech: Tech,
        indicator: Indicator,
        start: NaiveDateTime,
        values: Vec<Option<f64>>,
    ) -> Result<Self> {
        let cell_id = cell_id.into();
        if start.minute() != 0 || start.second() != 0 || start.nanosecond() != 0 {
            return Err(Error::Validation(format!(
                "series {cell_id}: start {start} is not aligned to a full hour"
            )));
        }
        for (i, v) in values.iter().enumerate() {
            if let Some(v) = v {
                if !v.is_finite() {
                    return Err(Error::Validation(format!(
                        "series {cell_id}: non-finite value at offset {i}h"
                    )));
                }
                if *v < 0.0 {
                    return Err(Error::Validation(format!(
                        "series {cell_id}: negative value {v} at offset {i}h"
                    )));
                }
            }
        }
        Ok(CellSeries {
            cell_id,
            tech,
            indicator,
            city: None,
            start,
            values,
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn timestamp_at(&self, index: usize) -> NaiveDateTime {
        self.start + Duration::hours(index as i64)
    }

    /// First timestamp after the series.
    pub fn end(&self) -> NaiveDateTime {
        self.timestamp_at(self.len())
    }

    pub fn is_fully_present(&self) -> bool {
        self.values.iter().all(Option::is_some)
    }

    pub fn n_missing(&self) -> usize {
        self.values.iter().filter(|v| v.is_none()).count()
    }

    /// Whether the series begins at hour 0 of a day, the alignment the
    /// windowing step requires.
    pub fn starts_at_midnight(&self) -> bool {
        self.start.hour() == 0
    }
}

/// Set of holiday dates used to build the per-day holiday flags.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct HolidayCalendar {
    dates: BTreeSet<NaiveDate>,
}

impl HolidayCalendar {
    pub fn new(dates: impl IntoIterator<Item = NaiveDate>) -> Self {
        HolidayCalendar {
            dates: dates.into_iter().collect(),
        }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn contains(&self, date: NaiveDate) -> bool {
        self.dates.contains(&date)
    }

    pub fn len(&self) -> usize {
        self.dates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dates.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = NaiveDate> + '_ {
        self.dates.iter().copied()
    }
}

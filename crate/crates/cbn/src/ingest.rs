//! Station time-series ingestion: raw observation CSV to a point cloud of
//! standardized monthly vectors.

use crate::cloud::PointCloud;
use crate::error::{Error, Result};
use chrono::{Datelike, NaiveDate};
use std::collections::BTreeMap;
use std::fmt;
use std::io;

/// A calendar month.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct YearMonth {
    pub year: i32,
    /// 1 through 12.
    pub month: u32,
}

impl YearMonth {
    pub fn new(year: i32, month: u32) -> Result<Self> {
        if !(1..=12).contains(&month) {
            return Err(Error::Ingest(format!("month must be 1..=12, got {month}")));
        }
        Ok(YearMonth { year, month })
    }

    /// Parses `YYYY-MM`.
    pub fn parse(s: &str) -> Result<Self> {
        let (y, m) = s
            .split_once('-')
            .ok_or_else(|| Error::Ingest(format!("expected YYYY-MM, got `{s}`")))?;
        let year: i32 = y
            .parse()
            .map_err(|_| Error::Ingest(format!("bad year in `{s}`")))?;
        let month: u32 = m
            .parse()
            .map_err(|_| Error::Ingest(format!("bad month in `{s}`")))?;
        Self::new(year, month)
    }

    fn index(&self) -> i64 {
        self.year as i64 * 12 + (self.month as i64 - 1)
    }
}

impl fmt::Display for YearMonth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}-{:02}", self.year, self.month)
    }
}

/// An inclusive range of months defining the feature vector layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MonthWindow {
    pub start: YearMonth,
    pub end: YearMonth,
}

impl MonthWindow {
    pub fn new(start: YearMonth, end: YearMonth) -> Result<Self> {
        if end < start {
            return Err(Error::Ingest(format!(
                "window end {end} precedes start {start}"
            )));
        }
        Ok(MonthWindow { start, end })
    }

    /// Parses `YYYY-MM:YYYY-MM`.
    pub fn parse(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once(':')
            .ok_or_else(|| Error::Ingest(format!("expected YYYY-MM:YYYY-MM, got `{s}`")))?;
        Self::new(YearMonth::parse(a)?, YearMonth::parse(b)?)
    }

    /// Number of months covered.
    pub fn len(&self) -> usize {
        (self.end.index() - self.start.index() + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Position of a date's month within the window, if inside it.
    pub fn position(&self, date: NaiveDate) -> Option<usize> {
        let idx = date.year() as i64 * 12 + (date.month() as i64 - 1);
        if idx < self.start.index() || idx > self.end.index() {
            None
        } else {
            Some((idx - self.start.index()) as usize)
        }
    }

    /// The month at a position (inverse of [`MonthWindow::position`]).
    pub fn month_at(&self, pos: usize) -> YearMonth {
        let idx = self.start.index() + pos as i64;
        YearMonth {
            year: idx.div_euclid(12) as i32,
            month: (idx.rem_euclid(12) + 1) as u32,
        }
    }
}

/// One observation row after parsing.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservationRecord {
    pub station: String,
    pub date: NaiveDate,
    pub value: f64,
    pub lat: Option<f64>,
    pub lon: Option<f64>,
}

/// Which CSV columns hold what. Coordinate columns are optional; without
/// them, gap imputation is unavailable.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadSpec {
    pub delimiter: u8,
    pub col_station: String,
    pub col_date: String,
    pub col_value: String,
    pub col_lat: Option<String>,
    pub col_lon: Option<String>,
}

impl Default for LoadSpec {
    fn default() -> Self {
        LoadSpec {
            delimiter: b',',
            col_station: "station".into(),
            col_date: "date".into(),
            col_value: "value".into(),
            col_lat: None,
            col_lon: None,
        }
    }
}

/// Parsed observations plus a count of rows that were dropped (bad dates,
/// unparseable or non-finite values, blank station ids).
#[derive(Debug, Clone, PartialEq)]
pub struct LoadReport {
    pub records: Vec<ObservationRecord>,
    pub skipped_rows: usize,
}

fn parse_date(s: &str) -> Option<NaiveDate> {
    NaiveDate::parse_from_str(s, "%Y-%m-%d")
        .or_else(|_| NaiveDate::parse_from_str(s, "%m/%d/%Y"))
        .ok()
}

/// Reads an observation CSV. Header names are matched after trimming. Rows
/// that cannot be parsed are skipped and counted; an input yielding zero
/// usable rows is an error.
pub fn load_observations(reader: impl io::Read, spec: &LoadSpec) -> Result<LoadReport> {
    let mut csv_reader = csv::ReaderBuilder::new()
        .delimiter(spec.delimiter)
        .flexible(true)
        .from_reader(reader);
    let headers = csv_reader
        .headers()
        .map_err(|e| Error::Ingest(format!("cannot read header: {e}")))?
        .clone();
    let require = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| Error::Ingest(format!("missing column `{name}`")))
    };
    let station_col = require(&spec.col_station)?;
    let date_col = require(&spec.col_date)?;
    let value_col = require(&spec.col_value)?;
    let lat_col = spec.col_lat.as_deref().map(&require).transpose()?;
    let lon_col = spec.col_lon.as_deref().map(&require).transpose()?;

    let mut records = Vec::new();
    let mut skipped_rows = 0usize;
    for row in csv_reader.records() {
        let row = row?;
        let field = |idx: usize| row.get(idx).unwrap_or("").trim();
        let station = field(station_col);
        let date = parse_date(field(date_col));
        let value = field(value_col)
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite());
        // Optional coordinates: blank means absent, garbage voids the row.
        let coord = |idx: Option<usize>| -> std::result::Result<Option<f64>, ()> {
            match idx.map(&field) {
                None | Some("") => Ok(None),
                Some(s) => s
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .map(Some)
                    .ok_or(()),
            }
        };
        match (
            station.is_empty(),
            date,
            value,
            coord(lat_col),
            coord(lon_col),
        ) {
            (false, Some(date), Some(value), Ok(lat), Ok(lon)) => {
                records.push(ObservationRecord {
                    station: station.to_string(),
                    date,
                    value,
                    lat,
                    lon,
                });
            }
            _ => skipped_rows += 1,
        }
    }
    if records.is_empty() {
        return Err(Error::Ingest("no usable observation rows".into()));
    }
    Ok(LoadReport {
        records,
        skipped_rows,
    })
}

/// One station's monthly series over a window. `values[i]` is the mean of
/// the station's observations in month `i` of the window, or `None` when the
/// station has no observation that month.
#[derive(Debug, Clone, PartialEq)]
pub struct StationSeries {
    pub id: String,
    /// `(lat, lon)` in degrees, from the first observation that carries
    /// coordinates.
    pub location: Option<(f64, f64)>,
    pub values: Vec<Option<f64>>,
}

/// Groups observations by station (output sorted by station id) and averages
/// them into per-month values over the window. Observations outside the
/// window are ignored.
pub fn monthly_average(records: &[ObservationRecord], window: &MonthWindow) -> Vec<StationSeries> {
    struct Acc {
        location: Option<(f64, f64)>,
        sums: Vec<f64>,
        counts: Vec<u32>,
    }
    let len = window.len();
    let mut by_station: BTreeMap<&str, Acc> = BTreeMap::new();
    for r in records {
        let acc = by_station.entry(r.station.as_str()).or_insert_with(|| Acc {
            location: None,
            sums: vec![0.0; len],
            counts: vec![0; len],
        });
        if acc.location.is_none() {
            if let (Some(lat), Some(lon)) = (r.lat, r.lon) {
                acc.location = Some((lat, lon));
            }
        }
        if let Some(pos) = window.position(r.date) {
            acc.sums[pos] += r.value;
            acc.counts[pos] += 1;
        }
    }
    by_station
        .into_iter()
        .map(|(id, acc)| StationSeries {
            id: id.to_string(),
            location: acc.location,
            values: (0..len)
                .map(|i| {
                    if acc.counts[i] > 0 {
                        Some(acc.sums[i] / acc.counts[i] as f64)
                    } else {
                        None
                    }
                })
                .collect(),
        })
        .collect()
}

/// Where an imputed cell's value came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ImputationSource {
    /// Nearest station that observed that month.
    Station(String),
    /// The station's own mean, used when no station observed that month.
    OwnMean,
}

/// One filled cell.
#[derive(Debug, Clone, PartialEq)]
pub struct ImputationRecord {
    pub station: String,
    /// Position within the window.
    pub month: usize,
    pub source: ImputationSource,
}

/// Great-circle distance in kilometers between `(lat, lon)` pairs in
/// degrees.
fn haversine_km(a: (f64, f64), b: (f64, f64)) -> f64 {
    let (lat1, lon1) = (a.0.to_radians(), a.1.to_radians());
    let (lat2, lon2) = (b.0.to_radians(), b.1.to_radians());
    let dlat = lat2 - lat1;
    let dlon = lon2 - lon1;
    let h = (dlat / 2.0).sin().powi(2) + lat1.cos() * lat2.cos() * (dlon / 2.0).sin().powi(2);
    2.0 * 6371.0 * h.sqrt().asin()
}

/// Fills every missing cell from the nearest station (by great-circle
/// distance, ties toward the smaller station id) that observed that month,
/// falling back to the station's own mean when no station did. Donor values
/// are always original observations, never previously imputed cells, so the
/// outcome does not depend on fill order.
///
/// Requires coordinates on every station when at least one cell is missing.
/// Series must share one window length.
pub fn impute_from_neighbors(
    series: &[StationSeries],
) -> Result<(Vec<StationSeries>, Vec<ImputationRecord>)> {
    if series.is_empty() {
        return Err(Error::Ingest("no station series".into()));
    }
    let len = series[0].values.len();
    for s in series {
        if s.values.len() != len {
            return Err(Error::Ingest(format!(
                "station {} covers {} months, expected {len}",
                s.id,
                s.values.len()
            )));
        }
    }
    let any_missing = series.iter().any(|s| s.values.iter().any(Option::is_none));
    if !any_missing {
        return Ok((series.to_vec(), Vec::new()));
    }
    for s in series {
        if s.location.is_none() {
            return Err(Error::Ingest(format!(
                "station {} has no coordinates; imputation needs every station located",
                s.id
            )));
        }
    }

    let mut filled = series.to_vec();
    let mut report = Vec::new();
    for (si, s) in series.iter().enumerate() {
        if s.values.iter().all(Option::is_some) {
            continue;
        }
        // All other stations, nearest first.
        let here = s.location.expect("checked above");
        let mut donors: Vec<usize> = (0..series.len()).filter(|&d| d != si).collect();
        donors.sort_by(|&a, &b| {
            let da = haversine_km(here, series[a].location.expect("checked above"));
            let db = haversine_km(here, series[b].location.expect("checked above"));
            da.partial_cmp(&db)
                .unwrap()
                .then_with(|| series[a].id.cmp(&series[b].id))
        });
        let own_mean = {
            let observed: Vec<f64> = s.values.iter().flatten().copied().collect();
            if observed.is_empty() {
                None
            } else {
                Some(observed.iter().sum::<f64>() / observed.len() as f64)
            }
        };
        for month in 0..len {
            if s.values[month].is_some() {
                continue;
            }
            let donated = donors
                .iter()
                .find_map(|&d| series[d].values[month].map(|v| (d, v)));
            let (value, source) = match donated {
                Some((d, v)) => (v, ImputationSource::Station(series[d].id.clone())),
                None => match own_mean {
                    Some(m) => (m, ImputationSource::OwnMean),
                    None => {
                        return Err(Error::Ingest(format!(
                            "station {} has no observations at all and month {month} has no donor",
                            s.id
                        )))
                    }
                },
            };
            filled[si].values[month] = Some(value);
            report.push(ImputationRecord {
                station: s.id.clone(),
                month,
                source,
            });
        }
    }
    Ok((filled, report))
}

/// Standardizes each station's series to mean 0 and sample standard
/// deviation 1 over its present values (missing cells pass through).
/// Stations with fewer than two present values or a constant series are
/// rejected.
pub fn zscale(series: &[StationSeries]) -> Result<Vec<StationSeries>> {
    series
        .iter()
        .map(|s| {
            let observed: Vec<f64> = s.values.iter().flatten().copied().collect();
            if observed.len() < 2 {
                return Err(Error::Ingest(format!(
                    "station {} has {} usable values, need at least 2 to standardize",
                    s.id,
                    observed.len()
                )));
            }
            let n = observed.len() as f64;
            let mean = observed.iter().sum::<f64>() / n;
            let var = observed
                .iter()
                .map(|v| (v - mean) * (v - mean))
                .sum::<f64>()
                / (n - 1.0);
            if var <= 0.0 {
                return Err(Error::Ingest(format!(
                    "station {} is constant, cannot standardize",
                    s.id
                )));
            }
            let sd = var.sqrt();
            Ok(StationSeries {
                id: s.id.clone(),
                location: s.location,
                values: s
                    .values
                    .iter()
                    .map(|v| v.map(|v| (v - mean) / sd))
                    .collect(),
            })
        })
        .collect()
}

/// Assembles complete series into a point cloud (one point per station, one
/// coordinate per month), sorted by station id. Any remaining missing cell
/// is an error.
pub fn to_point_cloud(series: &[StationSeries]) -> Result<PointCloud> {
    let mut sorted: Vec<&StationSeries> = series.iter().collect();
    sorted.sort_by(|a, b| a.id.cmp(&b.id));
    let mut ids = Vec::with_capacity(sorted.len());
    let mut points = Vec::with_capacity(sorted.len());
    for s in sorted {
        let row: Option<Vec<f64>> = s.values.iter().copied().collect();
        let row =
            row.ok_or_else(|| Error::Ingest(format!("station {} still has missing months", s.id)))?;
        ids.push(s.id.clone());
        points.push(row);
    }
    PointCloud::with_ids(points, ids)
}

/// Renders a station-by-month point cloud as CSV: `station` plus one
/// `YYYY-MM` column per month.
pub fn point_cloud_csv(cloud: &PointCloud, window: &MonthWindow) -> Result<String> {
    if cloud.dim() != window.len() {
        return Err(Error::Ingest(format!(
            "cloud has {} columns but the window covers {} months",
            cloud.dim(),
            window.len()
        )));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["station".to_string()];
    header.extend((0..window.len()).map(|i| window.month_at(i).to_string()));
    w.write_record(&header)?;
    for i in 0..cloud.len() {
        let mut row = vec![cloud
            .id_of(i)
            .map(str::to_string)
            .unwrap_or_else(|| i.to_string())];
        row.extend(cloud.point(i).iter().map(|v| v.to_string()));
        w.write_record(&row)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Ingest(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv writer emits UTF-8"))
}

/// Renders the imputation report as CSV: `station,month,donor`, with
/// `own-mean` marking fills that had no donor.
pub fn imputation_report_csv(records: &[ImputationRecord], window: &MonthWindow) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["station", "month", "donor"])?;
    for r in records {
        let donor = match &r.source {
            ImputationSource::Station(id) => id.clone(),
            ImputationSource::OwnMean => "own-mean".to_string(),
        };
        w.write_record([
            r.station.as_str(),
            &window.month_at(r.month).to_string(),
            &donor,
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Ingest(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv writer emits UTF-8"))
}

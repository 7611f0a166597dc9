//! Per-truck table, aggregates and plot series.
//!
//! Every number is carried as a scaled integer (hundredths of SEK,
//! millionths of a rate, microseconds) so the CSV, the summary and any
//! recomputation from the CSV agree digit for digit.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use platoon_core::simulator::{Event, SimulationLog};
use platoon_core::{Money, TruckId};
use serde::{Deserialize, Serialize};

use crate::error::{io_err, Error, Result};
use crate::eventlog::parse_log;
use crate::files::write_json;

pub const EVENTS_FILE: &str = "events.log";
pub const TRUCKS_CSV: &str = "trucks.csv";
pub const SUMMARY_FILE: &str = "summary.json";
pub const CSV_HEADER: [&str; 7] = [
    "truck_id",
    "utility_sek",
    "total_wait_min",
    "travel_min",
    "platoon_min",
    "platooning_rate",
    "mean_solve_ms",
];

/// Plot series file names with the column each one plots.
pub const SERIES: [(&str, &str); 6] = [
    ("series_utility.dat", "utility_sek"),
    ("series_wait.dat", "total_wait_min"),
    ("series_platooning_rate.dat", "platooning_rate"),
    ("series_travel.dat", "travel_min"),
    ("series_platoon.dat", "platoon_min"),
    ("series_solve_ms.dat", "mean_solve_ms"),
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruckRow {
    pub truck: TruckId,
    pub utility: Money,
    pub total_wait: u32,
    pub travel_minutes: u32,
    pub platoon_minutes: u32,
    /// Platooning rate in millionths.
    pub rate_micros: u64,
    /// Mean solve time in microseconds.
    pub solve_micros: u64,
}

fn div_half_even(num: u128, den: u128) -> u128 {
    let (q, r) = (num / den, num % den);
    match (2 * r).cmp(&den) {
        std::cmp::Ordering::Less => q,
        std::cmp::Ordering::Greater => q + 1,
        std::cmp::Ordering::Equal => q + (q & 1),
    }
}

fn fixed(v: u64, digits: u32) -> String {
    let scale = 10u64.pow(digits);
    format!(
        "{}.{:0width$}",
        v / scale,
        v % scale,
        width = digits as usize
    )
}

/// Parses an unsigned decimal with exactly `digits` fraction digits.
fn parse_fixed(s: &str, digits: u32) -> Option<u64> {
    let (int, frac) = s.split_once('.')?;
    if frac.len() != digits as usize || int.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit())
    {
        return None;
    }
    let int: u64 = int.parse().ok()?;
    let frac: u64 = frac.parse().ok()?;
    int.checked_mul(10u64.pow(digits))?.checked_add(frac)
}

impl TruckRow {
    pub fn from_log(
        log: &SimulationLog,
        truck: TruckId,
    ) -> std::result::Result<TruckRow, platoon_core::simulator::LogError> {
        let utility = log.realized_utility(truck)?;
        log.platooning_rate(truck)?;
        let rec = &log.trucks[&truck];
        let rate_micros = div_half_even(
            u128::from(rec.platoon_minutes) * 1_000_000,
            u128::from(rec.travel_minutes),
        ) as u64;
        let solve_micros = div_half_even(rec.mean_solve_duration().as_nanos(), 1000) as u64;
        Ok(TruckRow {
            truck,
            utility,
            total_wait: rec.total_wait,
            travel_minutes: rec.travel_minutes,
            platoon_minutes: rec.platoon_minutes,
            rate_micros,
            solve_micros,
        })
    }

    pub fn rate(&self) -> f64 {
        self.rate_micros as f64 / 1e6
    }

    pub fn solve_ms(&self) -> f64 {
        self.solve_micros as f64 / 1e3
    }

    fn fields(&self) -> [String; 7] {
        [
            self.truck.0.to_string(),
            self.utility.to_string(),
            self.total_wait.to_string(),
            self.travel_minutes.to_string(),
            self.platoon_minutes.to_string(),
            fixed(self.rate_micros, 6),
            fixed(self.solve_micros, 3),
        ]
    }

    fn parse(record: &csv::StringRecord) -> std::result::Result<TruckRow, String> {
        if record.len() != CSV_HEADER.len() {
            return Err(format!(
                "expected {} columns, found {}",
                CSV_HEADER.len(),
                record.len()
            ));
        }
        let int = |i: usize| -> std::result::Result<u32, String> {
            record[i]
                .parse()
                .map_err(|_| format!("bad {} {:?}", CSV_HEADER[i], &record[i]))
        };
        let dec = |i: usize, d: u32| {
            parse_fixed(&record[i], d)
                .ok_or_else(|| format!("bad {} {:?}", CSV_HEADER[i], &record[i]))
        };
        Ok(TruckRow {
            truck: TruckId(int(0)?),
            utility: record[1]
                .parse()
                .map_err(|_| format!("bad utility_sek {:?}", &record[1]))?,
            total_wait: int(2)?,
            travel_minutes: int(3)?,
            platoon_minutes: int(4)?,
            rate_micros: dec(5, 6)?,
            solve_micros: dec(6, 3)?,
        })
    }
}

pub fn rows_from_log(
    log: &SimulationLog,
) -> std::result::Result<Vec<TruckRow>, platoon_core::simulator::LogError> {
    log.trucks
        .keys()
        .map(|&t| TruckRow::from_log(log, t))
        .collect()
}

pub fn write_csv(path: &Path, rows: &[TruckRow]) -> Result<()> {
    let csv_err = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    for row in rows {
        w.write_record(row.fields()).map_err(csv_err)?;
    }
    w.flush().map_err(io_err(path))
}

pub fn read_csv(path: &Path) -> Result<Vec<TruckRow>> {
    let csv_err = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut r = csv::Reader::from_path(path).map_err(csv_err)?;
    let header = r.headers().map_err(csv_err)?;
    if header.iter().ne(CSV_HEADER) {
        return Err(Error::InvalidRecord {
            path: path.to_path_buf(),
            message: format!("header must be {}", CSV_HEADER.join(",")),
        });
    }
    r.records()
        .enumerate()
        .map(|(i, rec)| {
            let rec = rec.map_err(csv_err)?;
            TruckRow::parse(&rec).map_err(|m| Error::InvalidRecord {
                path: path.to_path_buf(),
                message: format!("row {}: {m}", i + 1),
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean_wait_min: f64,
    pub mean_platooning_rate: f64,
    pub frac_nonzero_utility: f64,
    pub mean_solve_ms: f64,
    pub total_trucks: usize,
}

/// Mean of values given in units of `1/scale`, rounded to six decimals.
fn mean6(sum: u128, scale: u128, n: usize) -> f64 {
    div_half_even(sum * (1_000_000 / scale), n as u128) as f64 / 1e6
}

impl Summary {
    /// Aggregates over the table. All means are zero for an empty table.
    pub fn of(rows: &[TruckRow]) -> Summary {
        let n = rows.len();
        if n == 0 {
            return Summary {
                mean_wait_min: 0.0,
                mean_platooning_rate: 0.0,
                frac_nonzero_utility: 0.0,
                mean_solve_ms: 0.0,
                total_trucks: 0,
            };
        }
        let sum = |f: fn(&TruckRow) -> u64| rows.iter().map(|r| u128::from(f(r))).sum::<u128>();
        Summary {
            mean_wait_min: mean6(sum(|r| r.total_wait.into()), 1, n),
            mean_platooning_rate: mean6(sum(|r| r.rate_micros), 1_000_000, n),
            frac_nonzero_utility: mean6(sum(|r| u64::from(!r.utility.is_zero())), 1, n),
            mean_solve_ms: mean6(sum(|r| r.solve_micros), 1000, n),
            total_trucks: n,
        }
    }
}

/// Rows ordered by utility, ties by truck id.
pub fn sorted_by_utility(rows: &[TruckRow]) -> Vec<&TruckRow> {
    let mut v: Vec<&TruckRow> = rows.iter().collect();
    v.sort_by_key(|r| (r.utility, r.truck));
    v
}

/// Two-column text: 1-based rank in utility order, then the value.
pub fn series(rows: &[TruckRow], column: &str) -> String {
    let mut out = format!("# rank {column}\n");
    for (i, r) in sorted_by_utility(rows).into_iter().enumerate() {
        let value = match column {
            "utility_sek" => r.utility.to_string(),
            "total_wait_min" => r.total_wait.to_string(),
            "travel_min" => r.travel_minutes.to_string(),
            "platoon_min" => r.platoon_minutes.to_string(),
            "platooning_rate" => fixed(r.rate_micros, 6),
            "mean_solve_ms" => fixed(r.solve_micros, 3),
            other => panic!("unknown column {other}"),
        };
        let _ = writeln!(out, "{} {value}", i + 1);
    }
    out
}

/// Writes the table and its summary.
pub fn write_table(out_dir: &Path, rows: &[TruckRow]) -> Result<Summary> {
    fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;
    write_csv(&out_dir.join(TRUCKS_CSV), rows)?;
    let summary = Summary::of(rows);
    write_json(&out_dir.join(SUMMARY_FILE), &summary)?;
    Ok(summary)
}

/// Reads a run directory, checks that every truck finished, and writes the
/// table, summary and plot series into `out_dir`.
pub fn report(log_dir: &Path, out_dir: &Path) -> Result<Summary> {
    let incomplete = |message: String| Error::IncompleteLog {
        path: log_dir.to_path_buf(),
        message,
    };
    let events_path = log_dir.join(EVENTS_FILE);
    let csv_path = log_dir.join(TRUCKS_CSV);
    for p in [&events_path, &csv_path] {
        if !p.is_file() {
            return Err(incomplete(format!("missing {}", p.display())));
        }
    }
    let text = fs::read_to_string(&events_path).map_err(io_err(&events_path))?;
    let events = parse_log(&text).map_err(|e| Error::InvalidRecord {
        path: events_path.clone(),
        message: e.to_string(),
    })?;
    let mut seen = BTreeSet::new();
    let mut finished = BTreeSet::new();
    for e in &events {
        match e {
            Event::Arrive { truck, .. }
            | Event::Decide { truck, .. }
            | Event::Depart { truck, .. } => {
                seen.insert(*truck);
            }
            Event::Finish { truck, .. } => {
                seen.insert(*truck);
                finished.insert(*truck);
            }
            Event::PlatoonForm { .. } => {}
        }
    }
    let rows = read_csv(&csv_path)?;
    let listed: BTreeSet<TruckId> = rows.iter().map(|r| r.truck).collect();
    if let Some(t) = seen.difference(&finished).next() {
        return Err(incomplete(format!("truck {t} has no FINISH event")));
    }
    if let Some(t) = listed.difference(&finished).next() {
        return Err(incomplete(format!(
            "truck {t} is in {TRUCKS_CSV} but has no FINISH event"
        )));
    }
    if let Some(t) = finished.difference(&listed).next() {
        return Err(incomplete(format!(
            "truck {t} finished but is missing from {TRUCKS_CSV}"
        )));
    }
    let summary = write_table(out_dir, &rows)?;
    for (file, column) in SERIES {
        let path = out_dir.join(file);
        fs::write(&path, series(&rows, column)).map_err(io_err(&path))?;
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(truck: u32, utility: i64, wait: u32, rate_micros: u64) -> TruckRow {
        TruckRow {
            truck: TruckId(truck),
            utility: Money::from_hundredths(utility),
            total_wait: wait,
            travel_minutes: 120,
            platoon_minutes: 60,
            rate_micros,
            solve_micros: 1234,
        }
    }

    #[test]
    fn fixed_point_round_trip() {
        assert_eq!(fixed(1_000_000, 6), "1.000000");
        assert_eq!(fixed(41, 3), "0.041");
        assert_eq!(parse_fixed("0.041", 3), Some(41));
        assert_eq!(parse_fixed("0.04", 3), None);
        assert_eq!(parse_fixed("-0.041", 3), None);
        assert_eq!(div_half_even(5, 2), 2);
        assert_eq!(div_half_even(7, 2), 4);
        assert_eq!(div_half_even(2, 3), 1);
    }

    #[test]
    fn aggregates() {
        let rows = [
            row(1, 4260, 20, 1_000_000),
            row(2, 0, 0, 0),
            row(3, -150, 2, 333_333),
        ];
        let s = Summary::of(&rows);
        assert_eq!(s.total_trucks, 3);
        assert_eq!(s.mean_wait_min, 7.333333);
        assert_eq!(s.mean_platooning_rate, 0.444444);
        assert_eq!(s.frac_nonzero_utility, 0.666667);
        assert_eq!(s.mean_solve_ms, 1.234);
        assert_eq!(Summary::of(&[]).total_trucks, 0);
    }

    #[test]
    fn series_sorted_by_utility() {
        let rows = [
            row(1, 4260, 20, 1_000_000),
            row(2, 0, 0, 0),
            row(3, -150, 2, 333_333),
        ];
        assert_eq!(
            series(&rows, "utility_sek"),
            "# rank utility_sek\n1 -1.50\n2 0.00\n3 42.60\n"
        );
        assert_eq!(
            series(&rows, "total_wait_min"),
            "# rank total_wait_min\n1 2\n2 0\n3 20\n"
        );
    }

    #[test]
    fn csv_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let rows = vec![row(1, 4260, 20, 1_000_000), row(3, -150, 2, 333_333)];
        let path = dir.path().join(TRUCKS_CSV);
        write_csv(&path, &rows).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("truck_id,utility_sek,total_wait_min,travel_min,platoon_min,platooning_rate,mean_solve_ms\n"));
        assert!(text.contains("\n1,42.60,20,120,60,1.000000,1.234\n"));
        assert_eq!(read_csv(&path).unwrap(), rows);
    }
}

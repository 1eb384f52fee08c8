use std::collections::HashSet;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use chrono::NaiveDate;

use super::{FlightRecord, OperationClass, OperationsRecord};
use crate::error::{Error, Result};

const OPERATIONS_COLUMNS: [&str; 5] = ["airport", "date", "hour", "class", "count"];
const FLIGHT_COLUMNS: [&str; 4] = ["origin", "dest", "date", "duration_hours"];

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|e| Error::io(path, e))
}

/// Returns the index of every required column, or a schema error naming the
/// first missing one.
fn column_indices<const N: usize>(
    headers: &csv::StringRecord,
    required: [&str; N],
    path: &Path,
) -> Result<[usize; N]> {
    let mut out = [0; N];
    for (slot, name) in out.iter_mut().zip(required) {
        *slot = headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| Error::Schema {
                path: path.to_owned(),
                message: format!("missing column {name:?}"),
            })?;
    }
    Ok(out)
}

fn parse_date(raw: &str) -> std::result::Result<NaiveDate, String> {
    NaiveDate::parse_from_str(raw.trim(), "%Y-%m-%d").map_err(|e| format!("bad date {raw:?}: {e}"))
}

/// Reads an operations file. See [`read_operations`].
pub fn ingest_operations(path: impl AsRef<Path>) -> Result<Vec<OperationsRecord>> {
    let path = path.as_ref();
    read_operations(open(path)?, path)
}

/// Parses operations rows from `reader`; `path` only labels diagnostics.
///
/// Row numbers in diagnostics are 1-based data rows (the header is row 0).
pub fn read_operations(reader: impl Read, path: &Path) -> Result<Vec<OperationsRecord>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers()?.clone();
    let [ai, di, hi, ci, ni] = column_indices(&headers, OPERATIONS_COLUMNS, path)?;

    let mut seen = HashSet::new();
    let mut records = Vec::new();
    for (idx, row) in rdr.records().enumerate() {
        let row_no = idx + 1;
        let row = row?;
        let row_err = |message: String| Error::Row {
            path: path.to_owned(),
            row: row_no,
            message,
        };
        let field = |i: usize| row.get(i).unwrap_or("");

        let airport = field(ai).to_owned();
        if airport.is_empty() {
            return Err(row_err("empty airport".into()));
        }
        let date = parse_date(field(di)).map_err(row_err)?;
        let hour: i64 = field(hi)
            .parse()
            .map_err(|_| row_err(format!("hour {:?} is not an integer", field(hi))))?;
        if !(0..=23).contains(&hour) {
            return Err(row_err(format!("hour {hour} outside 0-23")));
        }
        let class: OperationClass = field(ci).parse().map_err(row_err)?;
        let count: i64 = field(ni)
            .parse()
            .map_err(|_| row_err(format!("count {:?} is not an integer", field(ni))))?;
        if count < 0 {
            return Err(row_err(format!("negative count {count}")));
        }
        let count = u32::try_from(count).map_err(|_| row_err(format!("count {count} too large")))?;

        let hour = hour as u8;
        if !seen.insert((airport.clone(), date, hour, class)) {
            return Err(row_err(format!(
                "duplicate cell ({airport}, {date}, {hour}, {class})"
            )));
        }
        records.push(OperationsRecord {
            airport,
            date,
            hour,
            class,
            count,
        });
    }
    Ok(records)
}

/// Reads a flight-history file. See [`read_flight_history`].
pub fn ingest_flight_history(path: impl AsRef<Path>) -> Result<Vec<FlightRecord>> {
    let path = path.as_ref();
    read_flight_history(open(path)?, path)
}

pub fn read_flight_history(reader: impl Read, path: &Path) -> Result<Vec<FlightRecord>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers()?.clone();
    let [oi, di, ti, ui] = column_indices(&headers, FLIGHT_COLUMNS, path)?;

    let mut flights = Vec::new();
    for (idx, row) in rdr.records().enumerate() {
        let row_no = idx + 1;
        let row = row?;
        let row_err = |message: String| Error::Row {
            path: path.to_owned(),
            row: row_no,
            message,
        };
        let field = |i: usize| row.get(i).unwrap_or("");

        let origin = field(oi).to_owned();
        let dest = field(di).to_owned();
        if origin.is_empty() || dest.is_empty() {
            return Err(row_err("empty origin or destination".into()));
        }
        let date = parse_date(field(ti)).map_err(row_err)?;
        let duration_hours: f64 = field(ui)
            .parse()
            .map_err(|_| row_err(format!("duration {:?} is not a number", field(ui))))?;
        if !(duration_hours.is_finite() && duration_hours > 0.0) {
            return Err(row_err(format!("duration {duration_hours} must be positive")));
        }
        flights.push(FlightRecord {
            origin,
            dest,
            date,
            duration_hours,
        });
    }
    Ok(flights)
}

pub fn write_operations(records: &[OperationsRecord], writer: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(OPERATIONS_COLUMNS)?;
    for r in records {
        w.write_record([
            r.airport.as_str(),
            &r.date.to_string(),
            &r.hour.to_string(),
            r.class.code(),
            &r.count.to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::io("<operations>", e))?;
    Ok(())
}

pub fn write_flight_history(flights: &[FlightRecord], writer: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(FLIGHT_COLUMNS)?;
    for f in flights {
        w.write_record([
            f.origin.as_str(),
            f.dest.as_str(),
            &f.date.to_string(),
            &f.duration_hours.to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::io("<flight history>", e))?;
    Ok(())
}

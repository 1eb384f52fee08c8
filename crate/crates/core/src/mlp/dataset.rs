use std::io::{Read, Write};

use crate::data::{CandidateTable, History};
use crate::error::{Error, Result};
use crate::fitness::SelectionVector;
use crate::oracle::solve_exhaustive;
use crate::NUM_DESTINATIONS;

/// Network inputs: 30 destination metrics plus the evacuating capability.
pub const NUM_FEATURES: usize = 3 * NUM_DESTINATIONS + 1;
/// Columns of a dataset row: features followed by ten selection labels.
pub const NUM_COLUMNS: usize = NUM_FEATURES + NUM_DESTINATIONS;

/// One labeled table: `A1..A30` are `(p, c, s)` of rows 0..9 interleaved,
/// `C` the evacuating airport's capability, `S1..S10` the oracle optimum.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingRow {
    pub metrics: [f64; 3 * NUM_DESTINATIONS],
    pub capability: f64,
    pub labels: SelectionVector,
}

impl TrainingRow {
    pub fn from_table(table: &CandidateTable) -> Self {
        let features = table.features();
        TrainingRow {
            metrics: std::array::from_fn(|i| features[i]),
            capability: features[3 * NUM_DESTINATIONS],
            labels: solve_exhaustive(table).best_selection,
        }
    }

    pub fn features(&self) -> [f64; NUM_FEATURES] {
        std::array::from_fn(|i| if i < 3 * NUM_DESTINATIONS { self.metrics[i] } else { self.capability })
    }

    pub fn targets(&self) -> [f64; NUM_DESTINATIONS] {
        std::array::from_fn(|i| if self.labels.bit(i) { 1.0 } else { 0.0 })
    }

    /// The table this row was built from, with default weights and the raw
    /// columns set to the normalized values.
    pub fn to_table(&self) -> CandidateTable {
        let m = &self.metrics;
        CandidateTable::from_normalized(
            self.capability,
            std::array::from_fn(|i| (m[3 * i], m[3 * i + 1], m[3 * i + 2])),
        )
    }

    /// All 41 values in column order.
    pub fn values(&self) -> [f64; NUM_COLUMNS] {
        let f = self.features();
        let t = self.targets();
        std::array::from_fn(|i| if i < NUM_FEATURES { f[i] } else { t[i - NUM_FEATURES] })
    }
}

/// One oracle-labeled row per table, in input order, duplicates kept.
pub fn synthesize_dataset(tables: &[CandidateTable]) -> Vec<TrainingRow> {
    tables.iter().map(TrainingRow::from_table).collect()
}

/// Rows for all 24 hours of every origin airport in `history` except
/// `exclude`, origins in sorted order.
pub fn synthesize_from_history(history: &History, exclude: Option<&str>) -> Result<Vec<TrainingRow>> {
    let origins: Vec<String> = history
        .origins()
        .into_iter()
        .filter(|o| Some(o.as_str()) != exclude)
        .collect();
    if origins.is_empty() {
        return Err(Error::EmptyDataset(match exclude {
            Some(x) => format!("no origin airports remain after excluding {x}"),
            None => "flight history has no origin airports".into(),
        }));
    }
    let mut rows = Vec::with_capacity(origins.len() * 24);
    for origin in &origins {
        rows.extend(synthesize_dataset(&history.candidate_tables(origin)?));
    }
    Ok(rows)
}

fn header() -> Vec<String> {
    (1..=3 * NUM_DESTINATIONS)
        .map(|i| format!("A{i}"))
        .chain(std::iter::once("C".to_owned()))
        .chain((1..=NUM_DESTINATIONS).map(|i| format!("S{i}")))
        .collect()
}

/// Writes the `A1..A30,C,S1..S10` CSV. Reals use the shortest representation
/// that parses back to the same value.
pub fn write_dataset(rows: &[TrainingRow], writer: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(header())?;
    for row in rows {
        let f = row.features();
        let rec: Vec<String> = f
            .iter()
            .map(f64::to_string)
            .chain(row.labels.bits().iter().map(|&b| u8::from(b).to_string()))
            .collect();
        w.write_record(&rec)?;
    }
    w.flush().map_err(|e| Error::io("<dataset>", e))?;
    Ok(())
}

pub fn read_dataset(reader: impl Read, path: &std::path::Path) -> Result<Vec<TrainingRow>> {
    let mut rdr = csv::Reader::from_reader(reader);
    let headers = rdr.headers()?.clone();
    let expected = header();
    if headers.len() != NUM_COLUMNS || headers.iter().zip(&expected).any(|(h, e)| h.trim() != e) {
        return Err(Error::Schema {
            path: path.to_owned(),
            message: format!("expected {NUM_COLUMNS} columns A1..A30,C,S1..S10"),
        });
    }
    let mut rows = Vec::new();
    for (idx, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let row_err = |message: String| Error::Row {
            path: path.to_owned(),
            row: idx + 1,
            message,
        };
        if rec.len() != NUM_COLUMNS {
            return Err(row_err(format!("{} values, expected {NUM_COLUMNS}", rec.len())));
        }
        let mut values = [0.0; NUM_FEATURES];
        for (slot, raw) in values.iter_mut().zip(rec.iter()) {
            *slot = raw
                .trim()
                .parse()
                .map_err(|_| row_err(format!("{raw:?} is not a number")))?;
        }
        let mut bits = [false; NUM_DESTINATIONS];
        for (slot, raw) in bits.iter_mut().zip(rec.iter().skip(NUM_FEATURES)) {
            *slot = match raw.trim() {
                "0" => false,
                "1" => true,
                other => return Err(row_err(format!("label {other:?} is not 0 or 1"))),
            };
        }
        rows.push(TrainingRow {
            metrics: std::array::from_fn(|i| values[i]),
            capability: values[3 * NUM_DESTINATIONS],
            labels: SelectionVector::from_bits(bits),
        });
    }
    Ok(rows)
}

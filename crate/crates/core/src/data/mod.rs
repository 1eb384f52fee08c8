//! Flight-operations ingestion, hourly capability statistics, top-ten
//! destination extraction and candidate-table construction.
//!
//! Two tabular inputs feed the pipeline:
//!
//! - operations file, columns `airport,date,hour,class,count`: hourly
//!   landings plus takeoffs per airport and operation class;
//! - flight-history file, columns `origin,dest,date,duration_hours`: one row
//!   per historical flight.
//!
//! Both are comma-delimited UTF-8 with a header row. Dates are ISO-8601.

mod capability;
mod destinations;
mod ingest;
pub mod synthetic;
mod table;

pub use capability::{compute_hourly_capability, CapabilityProfile};
pub use destinations::top_destinations;
pub use ingest::{
    ingest_flight_history, ingest_operations, read_flight_history, read_operations,
    write_flight_history, write_operations,
};
pub use table::{arrival_hour, build_candidate_table, min_max_normalize, CandidateRow, CandidateTable};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::HOURS_PER_DAY;

/// Operation class as reported by the hourly counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum OperationClass {
    /// Air carrier, more than 60 seats.
    #[serde(rename = "AC")]
    AirCarrier,
    /// Air taxi, at most 60 seats.
    #[serde(rename = "AT")]
    AirTaxi,
    #[serde(rename = "GAV")]
    GeneralAviation,
    #[serde(rename = "MIL")]
    Military,
}

impl OperationClass {
    pub const ALL: [OperationClass; 4] = [
        OperationClass::AirCarrier,
        OperationClass::AirTaxi,
        OperationClass::GeneralAviation,
        OperationClass::Military,
    ];

    /// GAV and MIL make up the non-commercial capability.
    pub fn is_non_commercial(self) -> bool {
        matches!(self, OperationClass::GeneralAviation | OperationClass::Military)
    }

    pub fn code(self) -> &'static str {
        match self {
            OperationClass::AirCarrier => "AC",
            OperationClass::AirTaxi => "AT",
            OperationClass::GeneralAviation => "GAV",
            OperationClass::Military => "MIL",
        }
    }
}

impl fmt::Display for OperationClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for OperationClass {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim() {
            "AC" => Ok(OperationClass::AirCarrier),
            "AT" => Ok(OperationClass::AirTaxi),
            "GAV" => Ok(OperationClass::GeneralAviation),
            "MIL" => Ok(OperationClass::Military),
            other => Err(format!("unknown operation class {other:?} (expected AC, AT, GAV or MIL)")),
        }
    }
}

/// Operations (landings + takeoffs) of one class at one airport during one
/// hour of one day.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperationsRecord {
    pub airport: String,
    pub date: NaiveDate,
    pub hour: u8,
    pub class: OperationClass,
    pub count: u32,
}

/// One historical flight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlightRecord {
    pub origin: String,
    pub dest: String,
    pub date: NaiveDate,
    pub duration_hours: f64,
}

/// Capability statistics of an airport at one hour of the day.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HourlyCapability {
    pub hour: u8,
    /// Mean combined GAV+MIL operations.
    pub c: f64,
    /// Population standard deviation of the daily GAV+MIL sums.
    pub s: f64,
    pub n_days: usize,
}

/// A frequently served destination of an evacuating airport.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DestinationInfo {
    pub dest_id: String,
    pub popularity_raw: u64,
    pub duration_hours: f64,
}

/// Ingested operations and flight history, indexed for table building.
#[derive(Debug, Clone, Default)]
pub struct History {
    pub operations: Vec<OperationsRecord>,
    pub flights: Vec<FlightRecord>,
}

impl History {
    pub fn new(operations: Vec<OperationsRecord>, flights: Vec<FlightRecord>) -> Self {
        History { operations, flights }
    }

    /// Airports present in the operations records, sorted.
    pub fn airports(&self) -> Vec<String> {
        let set: BTreeSet<&str> = self.operations.iter().map(|r| r.airport.as_str()).collect();
        set.into_iter().map(str::to_owned).collect()
    }

    /// Airports that originate flights in the history, sorted.
    pub fn origins(&self) -> Vec<String> {
        let set: BTreeSet<&str> = self.flights.iter().map(|f| f.origin.as_str()).collect();
        set.into_iter().map(str::to_owned).collect()
    }

    pub fn capability(&self, airport: &str) -> Result<CapabilityProfile> {
        compute_hourly_capability(&self.operations, airport)
    }

    pub fn top_destinations(&self, evac_airport: &str) -> Result<Vec<DestinationInfo>> {
        top_destinations(&self.flights, evac_airport)
    }

    /// Builds the 24 candidate tables (depart hours 0..23) for `evac_airport`.
    pub fn candidate_tables(&self, evac_airport: &str) -> Result<Vec<CandidateTable>> {
        let evac_caps = self.capability(evac_airport)?;
        let dests = self.top_destinations(evac_airport)?;
        let mut dest_caps = BTreeMap::new();
        for d in &dests {
            let profile = self.capability(&d.dest_id).map_err(|e| match e {
                Error::EmptyHistory { airport } => Error::MissingProfile { airport },
                other => other,
            })?;
            dest_caps.insert(d.dest_id.clone(), profile);
        }
        (0..HOURS_PER_DAY as u8)
            .map(|h| build_candidate_table(evac_airport, &evac_caps, &dest_caps, &dests, h))
            .collect()
    }
}

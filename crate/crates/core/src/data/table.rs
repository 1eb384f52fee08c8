use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{CapabilityProfile, DestinationInfo};
use crate::error::{Error, Result};
use crate::fitness::FitnessWeights;
use crate::{HOURS_PER_DAY, NUM_DESTINATIONS};

/// One destination of a [`CandidateTable`]: normalized and raw metrics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateRow {
    pub dest_id: String,
    pub arrival_hour: u8,
    pub p: f64,
    pub c: f64,
    pub s: f64,
    pub p_raw: f64,
    pub c_raw: f64,
    pub s_raw: f64,
}

/// The optimization instance for one evacuating airport and departure hour.
///
/// `rows[i]` is governed by bit `i` of every selection vector evaluated
/// against this table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateTable {
    pub evac_airport: String,
    pub depart_hour: u8,
    /// Evacuating airport's mean GAV+MIL capability at `depart_hour`.
    pub capability: f64,
    pub rows: Vec<CandidateRow>,
    #[serde(default)]
    pub weights: FitnessWeights,
}

impl CandidateTable {
    /// Builds a table directly from normalized `(p, c, s)` triples. The raw
    /// columns mirror the normalized ones and destinations are named `D0..D9`.
    pub fn from_normalized(capability: f64, rows: [(f64, f64, f64); NUM_DESTINATIONS]) -> Self {
        let rows = rows
            .iter()
            .enumerate()
            .map(|(i, &(p, c, s))| CandidateRow {
                dest_id: format!("D{i}"),
                arrival_hour: 0,
                p,
                c,
                s,
                p_raw: p,
                c_raw: c,
                s_raw: s,
            })
            .collect();
        CandidateTable {
            evac_airport: String::new(),
            depart_hour: 0,
            capability,
            rows,
            weights: FitnessWeights::default(),
        }
    }

    /// The 31-value feature encoding `(p0, c0, s0, p1, c1, s1, ..., C)`.
    pub fn features(&self) -> [f64; 3 * NUM_DESTINATIONS + 1] {
        let mut out = [0.0; 3 * NUM_DESTINATIONS + 1];
        for (i, r) in self.rows.iter().enumerate() {
            out[3 * i] = r.p;
            out[3 * i + 1] = r.c;
            out[3 * i + 2] = r.s;
        }
        out[3 * NUM_DESTINATIONS] = self.capability;
        out
    }

    pub fn dest_ids(&self) -> impl Iterator<Item = &str> {
        self.rows.iter().map(|r| r.dest_id.as_str())
    }
}

/// Hour of arrival after departing at `depart_hour` on a flight of
/// `duration_hours`, rounding the duration half-up and wrapping at midnight.
pub fn arrival_hour(depart_hour: u8, duration_hours: f64) -> u8 {
    let rounded = (duration_hours + 0.5).floor() as i64;
    (i64::from(depart_hour) + rounded).rem_euclid(HOURS_PER_DAY as i64) as u8
}

/// Min-max normalizes `values` to [0, 1]. A constant column maps to 0.5.
pub fn min_max_normalize(values: &[f64]) -> Vec<f64> {
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let range = max - min;
    if range > 0.0 {
        values.iter().map(|v| (v - min) / range).collect()
    } else {
        vec![0.5; values.len()]
    }
}

/// Assembles the candidate table for one departure hour.
pub fn build_candidate_table(
    evac_airport: &str,
    evac_caps: &CapabilityProfile,
    dest_caps: &BTreeMap<String, CapabilityProfile>,
    dests: &[DestinationInfo],
    depart_hour: u8,
) -> Result<CandidateTable> {
    if dests.len() != NUM_DESTINATIONS {
        return Err(Error::InsufficientDestinations {
            airport: evac_airport.to_owned(),
            found: dests.len(),
            required: NUM_DESTINATIONS,
        });
    }
    if usize::from(depart_hour) >= HOURS_PER_DAY {
        return Err(Error::Config(format!("depart hour {depart_hour} outside 0-23")));
    }

    let mut raw = Vec::with_capacity(NUM_DESTINATIONS);
    for d in dests {
        let profile = dest_caps.get(&d.dest_id).ok_or_else(|| Error::MissingProfile {
            airport: d.dest_id.clone(),
        })?;
        let arrival = arrival_hour(depart_hour, d.duration_hours);
        let cap = profile.at(arrival);
        raw.push((d, arrival, d.popularity_raw as f64, cap.c, cap.s));
    }
    let p = min_max_normalize(&raw.iter().map(|r| r.2).collect::<Vec<_>>());
    let c = min_max_normalize(&raw.iter().map(|r| r.3).collect::<Vec<_>>());
    let s = min_max_normalize(&raw.iter().map(|r| r.4).collect::<Vec<_>>());

    let rows = raw
        .iter()
        .enumerate()
        .map(|(i, &(d, arrival, p_raw, c_raw, s_raw))| CandidateRow {
            dest_id: d.dest_id.clone(),
            arrival_hour: arrival,
            p: p[i],
            c: c[i],
            s: s[i],
            p_raw,
            c_raw,
            s_raw,
        })
        .collect();
    Ok(CandidateTable {
        evac_airport: evac_airport.to_owned(),
        depart_hour,
        capability: evac_caps.at(depart_hour).c,
        rows,
        weights: FitnessWeights::default(),
    })
}

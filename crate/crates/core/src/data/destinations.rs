use std::collections::BTreeMap;

use super::{DestinationInfo, FlightRecord};
use crate::error::{Error, Result};
use crate::NUM_DESTINATIONS;

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2.0
    }
}

/// The ten destinations with the most flights from `evac_airport`, by
/// descending count then ascending identifier, each with its median
/// observed flight duration.
pub fn top_destinations(flights: &[FlightRecord], evac_airport: &str) -> Result<Vec<DestinationInfo>> {
    let mut by_dest: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
    for f in flights.iter().filter(|f| f.origin == evac_airport) {
        by_dest.entry(f.dest.as_str()).or_default().push(f.duration_hours);
    }
    if by_dest.len() < NUM_DESTINATIONS {
        return Err(Error::InsufficientDestinations {
            airport: evac_airport.to_owned(),
            found: by_dest.len(),
            required: NUM_DESTINATIONS,
        });
    }

    let mut ranked: Vec<DestinationInfo> = by_dest
        .into_iter()
        .map(|(dest, mut durations)| DestinationInfo {
            dest_id: dest.to_owned(),
            popularity_raw: durations.len() as u64,
            duration_hours: median(&mut durations),
        })
        .collect();
    ranked.sort_by(|a, b| {
        b.popularity_raw
            .cmp(&a.popularity_raw)
            .then_with(|| a.dest_id.cmp(&b.dest_id))
    });
    ranked.truncate(NUM_DESTINATIONS);
    Ok(ranked)
}

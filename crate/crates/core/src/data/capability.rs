use std::collections::BTreeMap;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use super::{HourlyCapability, OperationsRecord};
use crate::error::{Error, Result};
use crate::HOURS_PER_DAY;

/// The 24 hourly capability statistics of one airport.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapabilityProfile {
    pub airport: String,
    pub hours: Vec<HourlyCapability>,
}

impl CapabilityProfile {
    pub fn at(&self, hour: u8) -> &HourlyCapability {
        &self.hours[usize::from(hour) % HOURS_PER_DAY]
    }
}

/// Mean and population standard deviation of the daily GAV+MIL sums at each
/// hour of the day.
///
/// The day set is every date on which `airport` has any record. A missing
/// (day, hour, class) cell counts as zero operations.
pub fn compute_hourly_capability(
    records: &[OperationsRecord],
    airport: &str,
) -> Result<CapabilityProfile> {
    let mut has_non_commercial = false;
    let mut daily: BTreeMap<NaiveDate, [u64; HOURS_PER_DAY]> = BTreeMap::new();
    for r in records.iter().filter(|r| r.airport == airport) {
        let sums = daily.entry(r.date).or_insert([0; HOURS_PER_DAY]);
        if r.class.is_non_commercial() {
            has_non_commercial = true;
            sums[usize::from(r.hour)] += u64::from(r.count);
        }
    }
    if !has_non_commercial {
        return Err(Error::EmptyHistory {
            airport: airport.to_owned(),
        });
    }

    let n_days = daily.len();
    let n = n_days as f64;
    let hours = (0..HOURS_PER_DAY)
        .map(|h| {
            let mean = daily.values().map(|d| d[h] as f64).sum::<f64>() / n;
            let var = daily
                .values()
                .map(|d| {
                    let dev = d[h] as f64 - mean;
                    dev * dev
                })
                .sum::<f64>()
                / n;
            HourlyCapability {
                hour: h as u8,
                c: mean,
                s: var.sqrt(),
                n_days,
            }
        })
        .collect();
    Ok(CapabilityProfile {
        airport: airport.to_owned(),
        hours,
    })
}

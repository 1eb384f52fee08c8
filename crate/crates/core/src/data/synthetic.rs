//! Seeded generator for plausible operations and flight-history files when
//! no real export is available.
//!
//! Every airport has an hourly rate curve (its peak rate times a shared
//! diurnal shape, or an explicit 24-value override) for combined GAV+MIL
//! operations and a separate peak for commercial traffic. Hourly counts are
//! Poisson draws around those rates. Each origin airport receives a fixed,
//! strictly decreasing flight count per destination so its top-ten set is
//! well defined.

use chrono::{Days, NaiveDate};
use rand::seq::SliceRandom;
use rand::Rng as _;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use super::{FlightRecord, History, OperationClass, OperationsRecord};
use crate::error::{Error, Result};
use crate::seed::{rng_from_seed, Rng};
use crate::HOURS_PER_DAY;

/// Relative activity per hour of day: quiet from midnight to 04:59,
/// busy from mid-morning through late afternoon.
pub const DEFAULT_DIURNAL: [f64; HOURS_PER_DAY] = [
    0.03, 0.03, 0.03, 0.03, 0.03, 0.25, 0.55, 0.9, 1.0, 1.0, 0.95, 0.95, //
    0.9, 0.95, 1.0, 0.95, 0.9, 0.85, 0.75, 0.6, 0.45, 0.3, 0.15, 0.07,
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AirportSpec {
    pub id: String,
    /// Peak hourly GAV+MIL operations; scaled by the diurnal shape.
    pub non_commercial_peak: f64,
    /// Fraction of GAV+MIL operations that are military.
    #[serde(default = "default_military_share")]
    pub military_share: f64,
    /// Peak hourly AC+AT operations.
    #[serde(default = "default_commercial_peak")]
    pub commercial_peak: f64,
    /// Explicit GAV+MIL rate for each hour, overriding peak × diurnal shape.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hourly_rates: Option<Vec<f64>>,
}

fn default_military_share() -> f64 {
    0.1
}

fn default_commercial_peak() -> f64 {
    40.0
}

impl AirportSpec {
    pub fn new(id: &str, non_commercial_peak: f64, commercial_peak: f64) -> Self {
        AirportSpec {
            id: id.to_owned(),
            non_commercial_peak,
            military_share: default_military_share(),
            commercial_peak,
            hourly_rates: None,
        }
    }

    fn non_commercial_rate(&self, diurnal: &[f64], hour: usize) -> f64 {
        match &self.hourly_rates {
            Some(r) => r[hour],
            None => self.non_commercial_peak * diurnal[hour],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SyntheticConfig {
    pub start_date: NaiveDate,
    pub days: u32,
    /// Airports that originate flights (evacuation candidates).
    pub origins: Vec<AirportSpec>,
    /// Airports served from every origin.
    pub destinations: Vec<AirportSpec>,
    pub diurnal: Vec<f64>,
    /// Flights from an origin to its most popular destination over the window.
    pub max_flights_per_pair: u32,
    /// Ratio between the flight counts of consecutive popularity ranks.
    pub popularity_decay: f64,
    pub min_duration_hours: f64,
    pub max_duration_hours: f64,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        let origins = [
            ("DAB", 9.0, 25.0),
            ("MCO", 6.0, 90.0),
            ("TPA", 7.0, 70.0),
            ("MIA", 5.0, 90.0),
            ("FLL", 6.0, 80.0),
            ("JAX", 5.5, 45.0),
            ("PBI", 6.5, 40.0),
            ("RSW", 4.5, 35.0),
            ("TLH", 4.0, 20.0),
        ];
        let destinations = [
            ("ATL", 6.0, 110.0),
            ("CLT", 5.0, 90.0),
            ("EWR", 3.0, 80.0),
            ("JFK", 2.5, 85.0),
            ("LGA", 2.0, 75.0),
            ("BOS", 4.0, 70.0),
            ("ORD", 3.5, 100.0),
            ("DFW", 8.0, 95.0),
            ("IAD", 7.0, 60.0),
            ("DCA", 2.0, 65.0),
            ("PHL", 5.0, 60.0),
            ("DTW", 6.0, 70.0),
        ];
        let spec = |&(id, nc, com): &(&str, f64, f64)| AirportSpec::new(id, nc, com);
        SyntheticConfig {
            start_date: NaiveDate::from_ymd_opt(2023, 1, 1).expect("valid date"),
            days: 60,
            origins: origins.iter().map(spec).collect(),
            destinations: destinations.iter().map(spec).collect(),
            diurnal: DEFAULT_DIURNAL.to_vec(),
            max_flights_per_pair: 240,
            popularity_decay: 0.82,
            min_duration_hours: 0.8,
            max_duration_hours: 3.6,
        }
    }
}

impl SyntheticConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.origins.len() + self.destinations.len() < 2 {
            return bad("synthetic data needs at least 2 airports".into());
        }
        if self.days < 2 {
            return bad("synthetic data needs at least 2 days".into());
        }
        if self.diurnal.len() != HOURS_PER_DAY || self.diurnal.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return bad("diurnal shape must hold 24 non-negative values".into());
        }
        for a in self.origins.iter().chain(&self.destinations) {
            let rates_ok = a
                .hourly_rates
                .as_ref()
                .is_none_or(|r| r.len() == HOURS_PER_DAY && r.iter().all(|v| v.is_finite() && *v >= 0.0));
            if !rates_ok
                || !(a.non_commercial_peak.is_finite() && a.non_commercial_peak >= 0.0)
                || !(a.commercial_peak.is_finite() && a.commercial_peak >= 0.0)
                || !(0.0..=1.0).contains(&a.military_share)
            {
                return bad(format!("airport {}: invalid rates", a.id));
            }
        }
        if !(self.popularity_decay > 0.0 && self.popularity_decay <= 1.0) {
            return bad("popularity_decay must lie in (0, 1]".into());
        }
        if !(self.min_duration_hours > 0.0 && self.min_duration_hours <= self.max_duration_hours) {
            return bad("duration bounds must satisfy 0 < min <= max".into());
        }
        Ok(())
    }
}

fn poisson(rng: &mut Rng, rate: f64) -> u32 {
    if rate <= 0.0 {
        return 0;
    }
    let d = Poisson::new(rate).expect("positive finite rate");
    d.sample(rng) as u32
}

/// Generates operations for every (day, airport, hour, class) cell and a
/// flight history from each origin to every destination.
pub fn generate_synthetic_history(config: &SyntheticConfig, seed: u64) -> Result<History> {
    config.validate()?;
    let mut rng = rng_from_seed(seed);

    let airports: Vec<&AirportSpec> = config.origins.iter().chain(&config.destinations).collect();
    let mut operations =
        Vec::with_capacity(config.days as usize * airports.len() * HOURS_PER_DAY * OperationClass::ALL.len());
    for day in 0..config.days {
        let date = config.start_date + Days::new(u64::from(day));
        for a in &airports {
            for hour in 0..HOURS_PER_DAY {
                let nc = a.non_commercial_rate(&config.diurnal, hour);
                let com = a.commercial_peak * config.diurnal[hour];
                for class in OperationClass::ALL {
                    let rate = match class {
                        OperationClass::AirCarrier => 0.8 * com,
                        OperationClass::AirTaxi => 0.2 * com,
                        OperationClass::GeneralAviation => (1.0 - a.military_share) * nc,
                        OperationClass::Military => a.military_share * nc,
                    };
                    operations.push(OperationsRecord {
                        airport: a.id.clone(),
                        date,
                        hour: hour as u8,
                        class,
                        count: poisson(&mut rng, rate),
                    });
                }
            }
        }
    }

    let mut flights = Vec::new();
    for origin in &config.origins {
        let mut order: Vec<&AirportSpec> = config.destinations.iter().collect();
        order.shuffle(&mut rng);
        let mut prev = u32::MAX;
        for (rank, dest) in order.into_iter().enumerate() {
            let target = (f64::from(config.max_flights_per_pair) * config.popularity_decay.powi(rank as i32)).round();
            let count = (target as u32).min(prev.saturating_sub(1)).max(1);
            prev = count;
            let base = rng.random_range(config.min_duration_hours..=config.max_duration_hours);
            for _ in 0..count {
                let day = rng.random_range(0..config.days);
                let jitter: f64 = rng.random_range(-0.2..=0.2);
                let duration = ((base + jitter).max(0.1) * 100.0).round() / 100.0;
                flights.push(FlightRecord {
                    origin: origin.id.clone(),
                    dest: dest.id.clone(),
                    date: config.start_date + Days::new(u64::from(day)),
                    duration_hours: duration,
                });
            }
        }
    }
    flights.sort_by(|a, b| {
        (&a.origin, a.date, &a.dest)
            .cmp(&(&b.origin, b.date, &b.dest))
            .then(a.duration_hours.total_cmp(&b.duration_hours))
    });

    Ok(History::new(operations, flights))
}

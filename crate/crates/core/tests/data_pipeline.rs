use std::collections::BTreeMap;

use chrono::NaiveDate;
use evac_core::data::synthetic::{generate_synthetic_history, SyntheticConfig};
use evac_core::data::{
    build_candidate_table, compute_hourly_capability, ingest_flight_history, ingest_operations, write_flight_history,
    write_operations, History, OperationClass, OperationsRecord,
};
use evac_core::Error;
use proptest::prelude::*;

fn small_config() -> SyntheticConfig {
    SyntheticConfig {
        days: 7,
        ..SyntheticConfig::default()
    }
}

fn brute_force(records: &[OperationsRecord], airport: &str, hour: u8) -> (f64, f64) {
    let mut days: Vec<NaiveDate> = records.iter().filter(|r| r.airport == airport).map(|r| r.date).collect();
    days.sort();
    days.dedup();
    let sums: Vec<f64> = days
        .iter()
        .map(|d| {
            records
                .iter()
                .filter(|r| r.airport == airport && r.date == *d && r.hour == hour)
                .filter(|r| matches!(r.class, OperationClass::GeneralAviation | OperationClass::Military))
                .map(|r| f64::from(r.count))
                .sum()
        })
        .collect();
    let n = sums.len() as f64;
    let mean = sums.iter().sum::<f64>() / n;
    let var = sums.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

fn record_strategy() -> impl Strategy<Value = OperationsRecord> {
    (
        prop::sample::select(vec!["DAB", "MCO"]),
        0u32..5,
        0u8..24,
        prop::sample::select(vec![
            OperationClass::AirCarrier,
            OperationClass::AirTaxi,
            OperationClass::GeneralAviation,
            OperationClass::Military,
        ]),
        0u32..40,
    )
        .prop_map(|(airport, day, hour, class, count)| OperationsRecord {
            airport: airport.to_owned(),
            date: NaiveDate::from_ymd_opt(2023, 3, 1).unwrap() + chrono::Days::new(day.into()),
            hour,
            class,
            count,
        })
}

proptest! {
    #[test]
    fn capability_matches_brute_force(mut records in prop::collection::vec(record_strategy(), 1..120)) {
        // Make sure DAB has at least one non-commercial record.
        records.push(OperationsRecord {
            airport: "DAB".into(),
            date: NaiveDate::from_ymd_opt(2023, 3, 1).unwrap(),
            hour: 0,
            class: OperationClass::Military,
            count: 1,
        });
        // Cells must be unique, as ingestion enforces.
        let mut seen = std::collections::HashSet::new();
        records.retain(|r| seen.insert((r.airport.clone(), r.date, r.hour, r.class)));
        let profile = compute_hourly_capability(&records, "DAB").unwrap();
        for h in 0..24u8 {
            let (c, s) = brute_force(&records, "DAB", h);
            prop_assert!((profile.at(h).c - c).abs() < 1e-9);
            prop_assert!((profile.at(h).s - s).abs() < 1e-9);
            prop_assert!(profile.at(h).s >= 0.0);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn normalized_columns_span_unit_interval(seed in any::<u64>()) {
        let history = generate_synthetic_history(&small_config(), seed).unwrap();
        for table in history.candidate_tables("DAB").unwrap() {
            prop_assert_eq!(table.rows.len(), 10);
            let columns: [Vec<f64>; 3] = [
                table.rows.iter().map(|r| r.p).collect(),
                table.rows.iter().map(|r| r.c).collect(),
                table.rows.iter().map(|r| r.s).collect(),
            ];
            let raw: [Vec<f64>; 3] = [
                table.rows.iter().map(|r| r.p_raw).collect(),
                table.rows.iter().map(|r| r.c_raw).collect(),
                table.rows.iter().map(|r| r.s_raw).collect(),
            ];
            for (col, raw) in columns.iter().zip(&raw) {
                prop_assert!(col.iter().all(|v| (0.0..=1.0).contains(v)));
                let constant = raw.iter().all(|v| *v == raw[0]);
                if constant {
                    prop_assert!(col.iter().all(|v| *v == 0.5));
                } else {
                    prop_assert_eq!(col.iter().cloned().fold(f64::INFINITY, f64::min), 0.0);
                    prop_assert_eq!(col.iter().cloned().fold(f64::NEG_INFINITY, f64::max), 1.0);
                }
            }
        }
    }
}

#[test]
fn default_generator_emits_every_cell() {
    let cfg = SyntheticConfig::default();
    let history = generate_synthetic_history(&cfg, 3).unwrap();
    let airports = cfg.origins.len() + cfg.destinations.len();
    assert_eq!(history.operations.len(), cfg.days as usize * airports * 24 * 4);
    let origins_only = history.operations.iter().filter(|r| cfg.origins.iter().any(|o| o.id == r.airport)).count();
    assert_eq!(origins_only, 60 * 9 * 24 * 4);
}

#[test]
fn every_origin_builds_24_tables() {
    let history = generate_synthetic_history(&SyntheticConfig::default(), 11).unwrap();
    for origin in history.origins() {
        let tables = history.candidate_tables(&origin).unwrap();
        assert_eq!(tables.len(), 24);
        for (h, t) in tables.iter().enumerate() {
            assert_eq!(usize::from(t.depart_hour), h);
            assert_eq!(t.evac_airport, origin);
        }
    }
}

#[test]
fn files_round_trip_and_order_is_stable() {
    let dir = tempfile::tempdir().unwrap();
    let history = generate_synthetic_history(&small_config(), 5).unwrap();
    let ops = dir.path().join("operations.csv");
    let flights = dir.path().join("flights.csv");
    write_operations(&history.operations, std::fs::File::create(&ops).unwrap()).unwrap();
    write_flight_history(&history.flights, std::fs::File::create(&flights).unwrap()).unwrap();

    let reloaded = History::new(ingest_operations(&ops).unwrap(), ingest_flight_history(&flights).unwrap());
    assert_eq!(reloaded.operations, history.operations);
    assert_eq!(reloaded.flights, history.flights);
    let a = history.top_destinations("DAB").unwrap();
    let b = reloaded.top_destinations("DAB").unwrap();
    assert_eq!(a, b);
    let again = History::new(ingest_operations(&ops).unwrap(), ingest_flight_history(&flights).unwrap());
    assert_eq!(again.top_destinations("DAB").unwrap(), b);
}

#[test]
fn synthetic_files_are_reproducible() {
    let render = |seed| {
        let h = generate_synthetic_history(&small_config(), seed).unwrap();
        let mut ops = Vec::new();
        let mut fl = Vec::new();
        write_operations(&h.operations, &mut ops).unwrap();
        write_flight_history(&h.flights, &mut fl).unwrap();
        (ops, fl)
    };
    assert_eq!(render(9), render(9));
    assert_ne!(render(9), render(10));
}

#[test]
fn zero_rates_give_zero_counts() {
    let mut cfg = small_config();
    cfg.diurnal = vec![0.0; 24];
    let history = generate_synthetic_history(&cfg, 1).unwrap();
    assert!(history.operations.iter().all(|r| r.count == 0));
}

#[test]
fn missing_destination_profile_is_reported() {
    let history = generate_synthetic_history(&small_config(), 2).unwrap();
    let dests = history.top_destinations("DAB").unwrap();
    let evac = history.capability("DAB").unwrap();
    let mut caps = BTreeMap::new();
    for d in &dests[1..] {
        caps.insert(d.dest_id.clone(), history.capability(&d.dest_id).unwrap());
    }
    let err = build_candidate_table("DAB", &evac, &caps, &dests, 3).unwrap_err();
    assert!(matches!(err, Error::MissingProfile { airport } if airport == dests[0].dest_id));
}

#[test]
fn fixture_files_parse() {
    let root = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    let history = History::new(
        ingest_operations(&root.join("operations.csv")).unwrap(),
        ingest_flight_history(&root.join("flights.csv")).unwrap(),
    );
    assert_eq!(history.origins(), vec!["DAB".to_owned()]);
    assert_eq!(history.candidate_tables("DAB").unwrap().len(), 24);
}

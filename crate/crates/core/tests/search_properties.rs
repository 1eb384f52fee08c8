use std::sync::Arc;

use evac_core::fitness::{fitness, FitnessWeights, SelectionVector};
use evac_core::ga::{run_ga, GaConfig};
use evac_core::hybrid::{inject_random, inject_worst, run_hybrid, worst_positions, Approach, HybridConfig};
use evac_core::mlp::MlpModel;
use evac_core::oracle::solve_exhaustive;
use evac_core::seed::rng_from_seed;
use evac_core::CandidateTable;
use proptest::prelude::*;

fn table_strategy() -> impl Strategy<Value = CandidateTable> {
    (0.0f64..12.0, prop::array::uniform10((0.0f64..=1.0, 0.0f64..=1.0, 0.0f64..=1.0)))
        .prop_map(|(c, rows)| CandidateTable::from_normalized(c, rows))
}

fn selection_strategy() -> impl Strategy<Value = SelectionVector> {
    (0u16..1024).prop_map(|e| SelectionVector::from_encoding(e).unwrap())
}

proptest! {
    #[test]
    fn score_is_sum_of_row_terms(table in table_strategy(), sel in selection_strategy()) {
        let f = fitness(sel, &table);
        let w = FitnessWeights::default();
        let rows: f64 = (0..10)
            .filter(|&i| sel.bit(i))
            .map(|i| w.popularity * table.rows[i].p + w.capability * table.rows[i].c - w.deviation * table.rows[i].s)
            .sum();
        prop_assert!((f.score + f.penalty - rows).abs() < 1e-12);
        let recon = 0.5 * f.p_term + 0.2 * f.c_term - 0.3 * f.s_term - f.penalty;
        prop_assert!((f.score - recon).abs() < 1e-12);
        prop_assert_eq!(f.penalty == 1.0, f64::from(sel.count_ones()) > table.capability);
        prop_assert!((-4.0..=7.0).contains(&f.score));
    }

    #[test]
    fn swapping_rows_and_bits_preserves_score(
        table in table_strategy(),
        sel in selection_strategy(),
        i in 0usize..10,
        j in 0usize..10,
    ) {
        let mut swapped = table.clone();
        swapped.rows.swap(i, j);
        let sel2 = sel.with_bit(i, sel.bit(j)).with_bit(j, sel.bit(i));
        prop_assert!((fitness(sel, &table).score - fitness(sel2, &swapped).score).abs() < 1e-12);
    }

    #[test]
    fn penalty_is_monotone_in_added_bits(table in table_strategy(), sel in selection_strategy(), i in 0usize..10) {
        let more = sel.with_bit(i, true);
        prop_assert!(more.count_ones() >= sel.count_ones());
        prop_assert!(fitness(more, &table).penalty >= fitness(sel, &table).penalty);
    }

    #[test]
    fn oracle_dominates_every_selection(table in table_strategy()) {
        let best = solve_exhaustive(&table);
        prop_assert_eq!(best.evaluations, 1024);
        prop_assert_eq!(best.best_fitness, fitness(best.best_selection, &table).score);
        for sel in SelectionVector::all() {
            let s = fitness(sel, &table).score;
            prop_assert!(s <= best.best_fitness);
            if s == best.best_fitness {
                prop_assert!(sel.encoding() >= best.best_selection.encoding());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ga_trace_invariants(table in table_strategy(), pop in 2usize..30, gens in 1usize..12, seed in any::<u64>()) {
        let cfg = GaConfig::new(pop, gens, seed);
        let run = run_ga(&table, &cfg).unwrap();
        let oracle = solve_exhaustive(&table);
        prop_assert_eq!(run.trace.len(), gens);
        prop_assert!(run.best_fitness <= oracle.best_fitness);
        prop_assert_eq!(run.best_fitness, fitness(run.best, &table).score);
        for (k, g) in run.trace.generations.iter().enumerate() {
            prop_assert_eq!(g.generation, k + 1);
            prop_assert!(g.best <= g.best_so_far);
            prop_assert!(g.mean <= g.best + 1e-12);
        }
        for w in run.trace.generations.windows(2) {
            prop_assert!(w[0].best_so_far <= w[1].best_so_far);
        }
        prop_assert_eq!(run.trace.generations.last().unwrap().best_so_far, run.best_fitness);
        let again = run_ga(&table, &cfg).unwrap();
        prop_assert_eq!(again.best, run.best);
        prop_assert_eq!(again.trace, run.trace);
    }

    #[test]
    fn hybrid_trace_invariants(table in table_strategy(), seed in any::<u64>(), worst in any::<bool>()) {
        let model = Arc::new(MlpModel::new(&[8, 4], &mut rng_from_seed(seed)));
        let approach = if worst { Approach::WorstReplace } else { Approach::RandomReplace };
        let cfg = HybridConfig::new(GaConfig::new(15, 5, seed), approach, model);
        let run = run_hybrid(&table, &cfg).unwrap();
        prop_assert!(run.best_fitness <= solve_exhaustive(&table).best_fitness);
        prop_assert_eq!(run.trace.len(), 5);
        for w in run.trace.generations.windows(2) {
            prop_assert!(w[0].best_so_far <= w[1].best_so_far);
        }
        prop_assert!(run.trace.generations.iter().all(|g| g.injected == Some(3)));
    }

    #[test]
    fn injection_preserves_population_size(
        encodings in prop::collection::vec(0u16..1024, 1..40),
        k_frac in 0.0f64..=1.0,
        seed in any::<u64>(),
    ) {
        let population: Vec<SelectionVector> =
            encodings.iter().map(|&e| SelectionVector::from_encoding(e).unwrap()).collect();
        let k = (k_frac * population.len() as f64).floor() as usize;
        let nn = vec![SelectionVector::FULL; k];
        let fitnesses: Vec<f64> = encodings.iter().map(|&e| f64::from(e % 7)).collect();

        let mut a = population.clone();
        inject_random(&mut a, &nn, &mut rng_from_seed(seed));
        prop_assert_eq!(a.len(), population.len());
        let changed = a.iter().zip(&population).filter(|(x, y)| x != y).count();
        prop_assert!(changed <= k);

        let mut b = population.clone();
        inject_worst(&mut b, &fitnesses, &nn);
        prop_assert_eq!(b.len(), population.len());
        let worst = worst_positions(&fitnesses, k);
        prop_assert_eq!(worst.len(), k);
        for i in 0..b.len() {
            if worst.contains(&i) {
                prop_assert_eq!(b[i], SelectionVector::FULL);
            } else {
                prop_assert_eq!(b[i], population[i]);
                // Every untouched member is at least as fit as every replaced one.
                for &j in &worst {
                    prop_assert!(fitnesses[j] <= fitnesses[i]);
                }
            }
        }
    }
}

#[test]
fn full_injection_never_loses_to_the_thresholded_prediction() {
    let table = CandidateTable::from_normalized(4.0, std::array::from_fn(|i| (i as f64 / 9.0, 0.5, 0.2)));
    let model = Arc::new(MlpModel::new(&[8, 4], &mut rng_from_seed(1)));
    let threshold = evac_core::mlp::sample_individuals(&model, &table, 1, &mut rng_from_seed(0))[0];
    let mut cfg = HybridConfig::new(GaConfig::new(10, 4, 3), Approach::RandomReplace, model);
    cfg.injection_fraction = 1.0;
    let run = run_hybrid(&table, &cfg).unwrap();
    assert!(run.best_fitness >= fitness(threshold, &table).score);
}

//! Exhaustive search over all 1024 selections.

use serde::{Deserialize, Serialize};

use crate::data::CandidateTable;
use crate::fitness::{fitness, SelectionVector};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub best_selection: SelectionVector,
    pub best_fitness: f64,
    pub evaluations: u32,
}

/// Returns the maximum-fitness selection. Among equal scores the smallest
/// integer encoding wins.
pub fn solve_exhaustive(table: &CandidateTable) -> OracleResult {
    let mut best_selection = SelectionVector::EMPTY;
    let mut best_fitness = f64::NEG_INFINITY;
    let mut evaluations = 0;
    for sel in SelectionVector::all() {
        let f = fitness(sel, table).score;
        evaluations += 1;
        if f > best_fitness {
            best_fitness = f;
            best_selection = sel;
        }
    }
    OracleResult {
        best_selection,
        best_fitness,
        evaluations,
    }
}

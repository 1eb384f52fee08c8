//! The 10-bit selection chromosome and its fitness against a candidate table.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::data::CandidateTable;
use crate::NUM_DESTINATIONS;

const MASK: u16 = (1 << NUM_DESTINATIONS) - 1;

/// Which of the ten candidate destinations receive a flight this hour.
///
/// Bit `i` selects `rows[i]` of the table. The integer encoding puts bit 0 in
/// the least significant position; the text form lists bit 0 first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct SelectionVector(u16);

impl SelectionVector {
    pub const EMPTY: SelectionVector = SelectionVector(0);
    pub const FULL: SelectionVector = SelectionVector(MASK);
    /// Number of distinct selection vectors.
    pub const COUNT: u16 = 1 << NUM_DESTINATIONS;

    /// Returns `None` if `encoding` has bits above bit 9.
    pub fn from_encoding(encoding: u16) -> Option<Self> {
        (encoding & !MASK == 0).then_some(SelectionVector(encoding))
    }

    pub fn from_bits(bits: [bool; NUM_DESTINATIONS]) -> Self {
        let enc = bits
            .iter()
            .enumerate()
            .fold(0u16, |acc, (i, &b)| acc | (u16::from(b) << i));
        SelectionVector(enc)
    }

    pub fn encoding(self) -> u16 {
        self.0
    }

    pub fn bit(self, i: usize) -> bool {
        debug_assert!(i < NUM_DESTINATIONS);
        self.0 >> i & 1 == 1
    }

    pub fn with_bit(self, i: usize, value: bool) -> Self {
        debug_assert!(i < NUM_DESTINATIONS);
        if value {
            SelectionVector(self.0 | 1 << i)
        } else {
            SelectionVector(self.0 & !(1 << i))
        }
    }

    pub fn flip(self, i: usize) -> Self {
        debug_assert!(i < NUM_DESTINATIONS);
        SelectionVector(self.0 ^ 1 << i)
    }

    pub fn complement(self) -> Self {
        SelectionVector(!self.0 & MASK)
    }

    pub fn bits(self) -> [bool; NUM_DESTINATIONS] {
        std::array::from_fn(|i| self.bit(i))
    }

    /// Indices of the selected rows, ascending.
    pub fn selected(self) -> impl Iterator<Item = usize> {
        (0..NUM_DESTINATIONS).filter(move |&i| self.bit(i))
    }

    pub fn count_ones(self) -> u32 {
        self.0.count_ones()
    }

    pub fn hamming(self, other: SelectionVector) -> u32 {
        (self.0 ^ other.0).count_ones()
    }

    /// All 1024 vectors in ascending encoding order.
    pub fn all() -> impl Iterator<Item = SelectionVector> {
        (0..Self::COUNT).map(SelectionVector)
    }
}

impl fmt::Display for SelectionVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..NUM_DESTINATIONS {
            f.write_str(if self.bit(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for SelectionVector {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.len() != NUM_DESTINATIONS {
            return Err(format!("selection {s:?} must have {NUM_DESTINATIONS} characters"));
        }
        let mut bits = [false; NUM_DESTINATIONS];
        for (slot, ch) in bits.iter_mut().zip(s.chars()) {
            *slot = match ch {
                '0' => false,
                '1' => true,
                _ => return Err(format!("selection {s:?} may only contain '0' and '1'")),
            };
        }
        Ok(SelectionVector::from_bits(bits))
    }
}

impl Serialize for SelectionVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SelectionVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Weights of the fitness terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitnessWeights {
    pub popularity: f64,
    pub capability: f64,
    pub deviation: f64,
    pub penalty: f64,
}

impl Default for FitnessWeights {
    fn default() -> Self {
        FitnessWeights {
            popularity: 0.5,
            capability: 0.2,
            deviation: 0.3,
            penalty: 1.0,
        }
    }
}

/// A fitness score together with the sums it was assembled from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitnessBreakdown {
    pub score: f64,
    /// Sum of normalized popularity over selected rows.
    pub p_term: f64,
    /// Sum of normalized destination capability over selected rows.
    pub c_term: f64,
    /// Sum of normalized capability deviation over selected rows.
    pub s_term: f64,
    pub penalty: f64,
    pub n_selected: u32,
}

/// Number of flights scheduled by `selection`.
pub fn popcount(selection: SelectionVector) -> u32 {
    selection.count_ones()
}

/// Scores `selection` against `table` using the table's weights:
///
/// `score = Σ_selected (wp·p + wc·c − ws·s) − penalty`
///
/// where the penalty applies once when the number of selected flights
/// strictly exceeds the evacuating airport's capability.
pub fn fitness(selection: SelectionVector, table: &CandidateTable) -> FitnessBreakdown {
    let w = &table.weights;
    let (mut p_term, mut c_term, mut s_term) = (0.0, 0.0, 0.0);
    let mut score = 0.0;
    for i in selection.selected() {
        let r = &table.rows[i];
        p_term += r.p;
        c_term += r.c;
        s_term += r.s;
        score += w.popularity * r.p + w.capability * r.c - w.deviation * r.s;
    }
    let n_selected = popcount(selection);
    let penalty = if f64::from(n_selected) > table.capability {
        w.penalty
    } else {
        0.0
    };
    FitnessBreakdown {
        score: score - penalty,
        p_term,
        c_term,
        s_term,
        penalty,
        n_selected,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(capability: f64, rows: [(f64, f64, f64); 10]) -> CandidateTable {
        CandidateTable::from_normalized(capability, rows)
    }

    #[test]
    fn popcount_examples() {
        assert_eq!(popcount("0000000000".parse().unwrap()), 0);
        assert_eq!(popcount("1111111111".parse().unwrap()), 10);
        assert_eq!(popcount("1010000001".parse().unwrap()), 3);
    }

    #[test]
    fn text_form_lists_bit_zero_first() {
        let s: SelectionVector = "1000000001".parse().unwrap();
        assert_eq!(s.encoding(), 0b10_0000_0001);
        let s: SelectionVector = "0100000000".parse().unwrap();
        assert_eq!(s.encoding(), 2);
        assert_eq!(s.to_string(), "0100000000");
        assert!("01".parse::<SelectionVector>().is_err());
        assert!("012000000x".parse::<SelectionVector>().is_err());
        assert!(SelectionVector::from_encoding(1024).is_none());
    }

    #[test]
    fn empty_selection_scores_zero() {
        let f = fitness(SelectionVector::EMPTY, &table(0.0, [(1.0, 1.0, 1.0); 10]));
        assert_eq!(f.score, 0.0);
        assert_eq!(f.penalty, 0.0);
    }

    #[test]
    fn single_full_row() {
        let mut rows = [(0.0, 0.0, 0.0); 10];
        rows[4] = (1.0, 1.0, 1.0);
        let f = fitness(SelectionVector::EMPTY.with_bit(4, true), &table(1.0, rows));
        assert!((f.score - 0.4).abs() < 1e-15);
        assert_eq!(f.penalty, 0.0);
    }

    #[test]
    fn penalty_fires_above_capability() {
        let t = table(2.0, [(0.0, 0.0, 0.0); 10]);
        let three: SelectionVector = "1110000000".parse().unwrap();
        let two: SelectionVector = "1100000000".parse().unwrap();
        assert_eq!(fitness(three, &t).score, -1.0);
        assert_eq!(fitness(two, &t).score, 0.0);
        // Fractional capability: 2 flights exceed 1.5.
        let t = table(1.5, [(0.0, 0.0, 0.0); 10]);
        assert_eq!(fitness(two, &t).penalty, 1.0);
    }

    #[test]
    fn serde_uses_text_form() {
        #[derive(Serialize, Deserialize)]
        struct W {
            s: SelectionVector,
        }
        let w = W {
            s: "0011000000".parse().unwrap(),
        };
        let mut out = Vec::new();
        csv::Writer::from_writer(&mut out).serialize(&w).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "s\n0011000000\n");
    }
}

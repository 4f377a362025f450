//! Formal integer combinations of triple classes.

use plocal::{TripleKey, TripleLevel};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Finitely supported integer combination of classes of a triple space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThetaVector {
    pub level: TripleLevel,
    terms: Vec<(TripleKey, i64)>,
}

impl ThetaVector {
    pub fn zero(level: TripleLevel) -> Self {
        Self { level, terms: Vec::new() }
    }

    /// Collects terms, merging repeated keys and dropping zeros.
    pub fn from_terms(level: TripleLevel, terms: impl IntoIterator<Item = (TripleKey, i64)>) -> Self {
        let mut map: BTreeMap<TripleKey, i64> = BTreeMap::new();
        for (k, c) in terms {
            *map.entry(k).or_insert(0) += c;
        }
        Self { level, terms: map.into_iter().filter(|&(_, c)| c != 0).collect() }
    }

    pub fn terms(&self) -> &[(TripleKey, i64)] {
        &self.terms
    }

    pub fn coefficient(&self, key: &TripleKey) -> i64 {
        self.terms.binary_search_by(|(k, _)| k.cmp(key)).map_or(0, |i| self.terms[i].1)
    }

    /// Number of classes with a nonzero coefficient.
    pub fn support(&self) -> usize {
        self.terms.len()
    }

    /// Sum of all coefficients.
    pub fn mass(&self) -> i64 {
        self.terms.iter().map(|&(_, c)| c).sum()
    }

    pub fn max_coefficient(&self) -> i64 {
        self.terms.iter().map(|&(_, c)| c.abs()).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, s: i64) -> Self {
        Self::from_terms(self.level, self.terms.iter().map(|&(k, c)| (k, c * s)))
    }

    pub fn add(&self, rhs: &Self) -> Self {
        Self::from_terms(self.level, self.terms.iter().chain(&rhs.terms).copied())
    }
}

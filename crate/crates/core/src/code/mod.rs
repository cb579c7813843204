//! Linear codes given by generator matrices, their locality assignments, and
//! the checks built on them: minimum distance, the optimality bounds,
//! (r, δ)-locality and erasure repair.
//!
//! Symbols are 1-indexed in every public API of this module.

mod bounds;
mod distance;
mod locality;
mod repair;

use std::collections::BTreeSet;
use std::sync::OnceLock;

pub use bounds::{
    classify, d_opt, d_opt_vector, label_for_gap, sphere_volume, Classification, Label,
};
pub use distance::{
    affine_min_weight, coset_weight_at_least, distance_at_least, distance_by_rank, exact_distance,
    min_distance, projective_count, sampled_weight_bound, Budget, DistanceMethod, Measured,
    DEFAULT_BUDGET,
};
pub use locality::{
    discover_locality, projected_distance, verify_locality, LocalityEntry, LocalityReport,
};
pub use repair::{repair, RepairOutcome, RepairStep};

use crate::error::{Error, Result};
use crate::gf::Field;
use crate::linalg::{in_span, Matrix};

/// A `k`-dimensional subspace of `F_q^n` given by a full-rank `k x n`
/// generator matrix.
#[derive(Clone, Debug)]
pub struct LinearCode {
    g: Matrix,
    distance: OnceLock<usize>,
}

impl PartialEq for LinearCode {
    fn eq(&self, other: &Self) -> bool {
        self.g == other.g
    }
}

impl Eq for LinearCode {}

impl LinearCode {
    pub fn new(g: Matrix) -> Result<LinearCode> {
        let (k, n) = (g.rows(), g.cols());
        if k == 0 || k >= n {
            return Err(Error::BadParams(format!(
                "a code needs 1 <= k < n, got k = {k}, n = {n}"
            )));
        }
        let rank = g.rank();
        if rank != k {
            return Err(Error::NotFullRank { rank, k });
        }
        Ok(LinearCode {
            g,
            distance: OnceLock::new(),
        })
    }

    pub fn generator(&self) -> &Matrix {
        &self.g
    }

    pub fn field(&self) -> &Field {
        self.g.field()
    }

    pub fn n(&self) -> usize {
        self.g.cols()
    }

    pub fn k(&self) -> usize {
        self.g.rows()
    }

    pub fn encode(&self, message: &[u32]) -> Result<Vec<u32>> {
        self.g.left_mul(message)
    }

    /// The message that encodes to `word`, if `word` is a codeword.
    pub fn message_of(&self, word: &[u32]) -> Option<Vec<u32>> {
        if word.len() != self.n() {
            return None;
        }
        let gt = self.g.transpose();
        let all: Vec<usize> = (0..self.k()).collect();
        in_span(&gt, &all, word).ok().flatten()
    }

    pub fn is_codeword(&self, word: &[u32]) -> bool {
        self.message_of(word).is_some()
    }

    /// Distance recorded by an earlier exact computation.
    pub fn cached_distance(&self) -> Option<usize> {
        self.distance.get().copied()
    }

    pub(crate) fn remember_distance(&self, d: usize) {
        let _ = self.distance.set(d);
    }
}

/// Per-symbol repair sets `S_j`, stored 1-indexed and sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalityAssignment {
    sets: Vec<Vec<usize>>,
}

impl LocalityAssignment {
    /// `sets[j - 1]` is the repair set of symbol `j`.
    pub fn new(sets: Vec<Vec<usize>>) -> Result<LocalityAssignment> {
        let n = sets.len();
        let mut normalized = Vec::with_capacity(n);
        for (idx, set) in sets.into_iter().enumerate() {
            let j = idx + 1;
            let s: BTreeSet<usize> = set.into_iter().collect();
            if let Some(&bad) = s.iter().find(|&&i| i == 0 || i > n) {
                return Err(Error::InvalidLocality(format!(
                    "symbol {j}: index {bad} outside 1..={n}"
                )));
            }
            if !s.contains(&j) {
                return Err(Error::InvalidLocality(format!(
                    "symbol {j} is not in its own repair set"
                )));
            }
            normalized.push(s.into_iter().collect());
        }
        Ok(LocalityAssignment { sets: normalized })
    }

    /// Every symbol of a block gets the whole block as its repair set.
    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Result<LocalityAssignment> {
        let mut sets = vec![Vec::new(); n];
        for block in blocks {
            for &j in block {
                if j == 0 || j > n {
                    return Err(Error::InvalidLocality(format!(
                        "block member {j} outside 1..={n}"
                    )));
                }
                if !sets[j - 1].is_empty() {
                    return Err(Error::InvalidLocality(format!(
                        "symbol {j} appears in two blocks"
                    )));
                }
                sets[j - 1] = block.clone();
            }
        }
        if let Some(j) = sets.iter().position(Vec::is_empty) {
            return Err(Error::InvalidLocality(format!(
                "symbol {} is not covered by any block",
                j + 1
            )));
        }
        LocalityAssignment::new(sets)
    }

    pub fn n(&self) -> usize {
        self.sets.len()
    }

    /// Repair set of 1-based symbol `j`.
    pub fn set(&self, j: usize) -> &[usize] {
        &self.sets[j - 1]
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    pub fn max_set_size(&self) -> usize {
        self.sets.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Distinct repair sets in order of first appearance.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut seen = BTreeSet::new();
        self.sets
            .iter()
            .filter(|s| seen.insert((*s).clone()))
            .cloned()
            .collect()
    }

    pub fn check_sizes(&self, r: usize, delta: usize) -> Result<()> {
        let limit = r + delta - 1;
        match self.sets.iter().position(|s| s.len() > limit) {
            Some(j) => Err(Error::InvalidLocality(format!(
                "symbol {} has a repair set of size {} > r + δ - 1 = {limit}",
                j + 1,
                self.sets[j].len()
            ))),
            None => Ok(()),
        }
    }
}

/// Validates `1 <= r <= k < n` and `δ >= 2`.
pub(crate) fn check_params(n: usize, k: usize, r: usize, delta: usize) -> Result<()> {
    if delta < 2 {
        return Err(Error::BadParams(format!(
            "δ must be at least 2, got {delta}"
        )));
    }
    if r == 0 || r > k {
        return Err(Error::BadParams(format!(
            "need 1 <= r <= k, got r = {r}, k = {k}"
        )));
    }
    if k >= n {
        return Err(Error::BadParams(format!(
            "need k < n, got k = {k}, n = {n}"
        )));
    }
    Ok(())
}

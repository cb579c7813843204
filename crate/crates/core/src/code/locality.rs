use itertools::Itertools;
use serde::Serialize;

use super::distance::distance_by_rank;
use super::{LinearCode, LocalityAssignment};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalityEntry {
    pub symbol: usize,
    pub set: Vec<usize>,
    /// Minimum distance of the code restricted to `set`; `None` when the
    /// restriction is the zero code (every symbol in the set is constant).
    pub projected_distance: Option<usize>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalityReport {
    pub r: usize,
    pub delta: usize,
    pub entries: Vec<LocalityEntry>,
}

impl LocalityReport {
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn failing_symbols(&self) -> Vec<usize> {
        self.entries
            .iter()
            .filter(|e| !e.pass)
            .map(|e| e.symbol)
            .collect()
    }
}

/// Minimum distance of the code punctured to the 1-based symbols in `set`.
/// The projection keeps its own dimension, which may be below `k`.
pub fn projected_distance(code: &LinearCode, set: &[usize]) -> Option<usize> {
    let cols: Vec<usize> = set.iter().map(|&j| j - 1).collect();
    let sub = code.generator().select_columns(&cols);
    match distance_by_rank(&sub) {
        0 => None,
        d => Some(d),
    }
}

/// Checks every symbol's repair set: `j ∈ S_j`, `|S_j| <= r + δ - 1` and the
/// restricted code has distance at least `δ`. Failures are report entries.
pub fn verify_locality(
    code: &LinearCode,
    assignment: &LocalityAssignment,
    r: usize,
    delta: usize,
) -> LocalityReport {
    let limit = (r + delta).saturating_sub(1);
    let entries = (1..=code.n())
        .map(|j| {
            if j > assignment.n() {
                return LocalityEntry {
                    symbol: j,
                    set: Vec::new(),
                    projected_distance: None,
                    pass: false,
                };
            }
            let set = assignment.set(j).to_vec();
            let in_range = set.iter().all(|&i| i >= 1 && i <= code.n());
            let projected = if in_range {
                projected_distance(code, &set)
            } else {
                None
            };
            let pass = in_range
                && set.contains(&j)
                && set.len() <= limit
                && projected.is_none_or(|d| d >= delta);
            LocalityEntry {
                symbol: j,
                set,
                projected_distance: projected,
                pass,
            }
        })
        .collect();
    LocalityReport { r, delta, entries }
}

/// Searches, per symbol, for the smallest repair set of size at most
/// `r + δ - 1` whose restriction has distance at least `δ`. Sets are tried in
/// size order, then lexicographically. `work_cap` bounds the number of
/// candidate sets examined overall.
pub fn discover_locality(
    code: &LinearCode,
    r: usize,
    delta: usize,
    work_cap: u64,
) -> Result<LocalityAssignment> {
    let n = code.n();
    let limit = r + delta - 1;
    let mut work = 0u64;
    let mut sets = Vec::with_capacity(n);
    for j in 1..=n {
        let others: Vec<usize> = (1..=n).filter(|&i| i != j).collect();
        let mut found = None;
        'sizes: for size in 0..limit.min(n) {
            for rest in others.iter().copied().combinations(size) {
                work += 1;
                if work > work_cap {
                    return Err(Error::TooLarge(format!(
                        "locality discovery exceeded {work_cap} candidate sets"
                    )));
                }
                let mut set = rest;
                set.push(j);
                set.sort_unstable();
                if projected_distance(code, &set).is_none_or(|d| d >= delta) {
                    found = Some(set);
                    break 'sizes;
                }
            }
        }
        match found {
            Some(set) => sets.push(set),
            None => {
                return Err(Error::InvalidLocality(format!(
                    "symbol {j} has no repair set of size <= {limit}"
                )))
            }
        }
    }
    LocalityAssignment::new(sets)
}

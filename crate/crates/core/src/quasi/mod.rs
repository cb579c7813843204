//! Quasi-uniform codes `C = {(gG_1, …, gG_n) : g ∈ G}` over
//! `G = (Z_2^2)^k`, built from lists of subgroups.
//!
//! Every quantity of interest comes from intersections `G_X = ∩_{i∈X} G_i`:
//! `|C_X| = |G| / |G_X|` and two codewords agree on `X` exactly when their
//! difference lies in `G_X`. Intersections are handled through annihilators,
//! `G_X^⊥ = Σ G_i^⊥`, so `log2 |C_X|` is the rank of the stacked parity-check
//! rows of the coordinates in `X`.

mod family;
mod subgroup;

use std::collections::HashMap;

use itertools::Itertools;
use serde::Serialize;

pub use family::{family_build, Family, FamilyInstance};
pub use subgroup::{
    format_bitstring, parse_bitstring, subgroup_intersect, BinarySubgroup, MAX_BITS,
};

use crate::code::LocalityAssignment;
use crate::error::{Error, Result};
use subgroup::label_with;

/// Largest `k` for which [`code_from_groups`] enumerates `G`.
pub const MAX_ENUMERATION_K: usize = 8;

/// `k` and the subgroups `G_1, …, G_n` of `(Z_2^2)^k`. Coordinate `i` is
/// labelled by the parity-check basis of `G_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiUniformSpec {
    k: usize,
    groups: Vec<BinarySubgroup>,
}

impl QuasiUniformSpec {
    pub fn new(k: usize, groups: Vec<BinarySubgroup>) -> Result<QuasiUniformSpec> {
        if k == 0 || 2 * k > MAX_BITS {
            return Err(Error::TooLarge(format!(
                "k = {k}, supported 1..={}",
                MAX_BITS / 2
            )));
        }
        if groups.is_empty() {
            return Err(Error::BadParams(
                "a code needs at least one coordinate".into(),
            ));
        }
        if let Some((i, g)) = groups.iter().enumerate().find(|(_, g)| g.bits() != 2 * k) {
            return Err(Error::DimensionMismatch(format!(
                "G{} lives in {} bits, expected 2k = {}",
                i + 1,
                g.bits(),
                2 * k
            )));
        }
        Ok(QuasiUniformSpec { k, groups })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.groups.len()
    }

    pub fn bits(&self) -> usize {
        2 * self.k
    }

    pub fn groups(&self) -> &[BinarySubgroup] {
        &self.groups
    }

    /// `G_i` for 1-based `i`.
    pub fn group(&self, i: usize) -> &BinarySubgroup {
        &self.groups[i - 1]
    }

    /// `G_X` for 1-based indices; the whole group for empty `X`.
    pub fn intersection(&self, x: &[usize]) -> Result<BinarySubgroup> {
        if x.is_empty() {
            return BinarySubgroup::ambient(self.bits());
        }
        let gs: Vec<BinarySubgroup> = x.iter().map(|&i| self.group(i).clone()).collect();
        subgroup_intersect(&gs)
    }

    /// `log2 |C_X| = log2 (|G| / |G_X|)`.
    pub fn projection_log2(&self, x: &[usize]) -> usize {
        let mut dual = DualSpan::new();
        for &i in x {
            dual.extend(&self.group(i).parity_check());
        }
        dual.dim()
    }

    /// Alphabet sizes `log2 |G / G_i|` per coordinate.
    pub fn symbol_bits(&self) -> Vec<usize> {
        self.groups.iter().map(BinarySubgroup::codim).collect()
    }

    /// 1-based coordinates whose symbol never varies (`G_i = G`).
    pub fn constant_coordinates(&self) -> Vec<usize> {
        (1..=self.n())
            .filter(|&i| self.group(i).is_ambient())
            .collect()
    }

    fn checks(&self) -> Vec<Vec<u128>> {
        self.groups
            .iter()
            .map(BinarySubgroup::parity_check)
            .collect()
    }
}

/// Incrementally grown GF(2) span with pivots at distinct top bits.
#[derive(Clone, Default)]
struct DualSpan {
    rows: Vec<u128>,
}

impl DualSpan {
    fn new() -> DualSpan {
        DualSpan::default()
    }

    fn dim(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, mut v: u128) -> u128 {
        for &r in &self.rows {
            let top = 1u128 << (127 - r.leading_zeros());
            if v & top != 0 {
                v ^= r;
            }
        }
        v
    }

    fn push(&mut self, v: u128) {
        let v = self.reduce(v);
        if v != 0 {
            let pos = self.rows.partition_point(|&r| r > v);
            self.rows.insert(pos, v);
        }
    }

    fn extend(&mut self, vs: &[u128]) {
        for &v in vs {
            self.push(v);
        }
    }
}

/// A group code over the alphabets `G/G_i`; codewords are bit-packed, symbol
/// 1 leftmost, each symbol `symbol_bits[i]` wide.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorLinearCode {
    symbol_bits: Vec<usize>,
    words: Vec<u128>,
}

impl VectorLinearCode {
    pub fn n(&self) -> usize {
        self.symbol_bits.len()
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[u128] {
        &self.words
    }

    pub fn symbol_bits(&self) -> &[usize] {
        &self.symbol_bits
    }

    /// `log_4 |C|`.
    pub fn k_eff(&self) -> f64 {
        (self.words.len() as f64).log2() / 2.0
    }

    fn offsets(&self) -> Vec<usize> {
        let total: usize = self.symbol_bits.iter().sum();
        let mut acc = total;
        self.symbol_bits
            .iter()
            .map(|&w| {
                acc -= w;
                acc
            })
            .collect()
    }

    /// Symbol `i` (1-based) of a packed word.
    pub fn symbol(&self, word: u128, i: usize) -> u128 {
        let w = self.symbol_bits[i - 1];
        let off = self.offsets()[i - 1];
        (word >> off) & ((1u128 << w) - 1)
    }

    /// Symbols of `word` in order.
    pub fn symbols(&self, word: u128) -> Vec<u128> {
        (1..=self.n()).map(|i| self.symbol(word, i)).collect()
    }

    /// The words form a group under XOR: they are distinct and as many as
    /// the size of their GF(2) span.
    pub fn is_xor_closed(&self) -> bool {
        let mut span = DualSpan::new();
        span.extend(&self.words);
        span.dim() < 128 && self.words.len() as u128 == 1u128 << span.dim()
    }

    /// Number of nonzero symbols.
    pub fn weight(&self, word: u128) -> usize {
        (1..=self.n())
            .filter(|&i| self.symbol(word, i) != 0)
            .count()
    }

    /// Minimum symbol weight over nonzero codewords; 0 for `|C| = 1`.
    pub fn min_distance(&self) -> usize {
        self.words
            .iter()
            .filter(|&&w| w != 0)
            .map(|&w| self.weight(w))
            .min()
            .unwrap_or(0)
    }

    fn projection_mask(&self, x: &[usize]) -> u128 {
        let offs = self.offsets();
        x.iter().fold(0u128, |m, &i| {
            m | (((1u128 << self.symbol_bits[i - 1]) - 1) << offs[i - 1])
        })
    }

    /// How many codewords take each attained value on `X`.
    pub fn fibers(&self, x: &[usize]) -> HashMap<u128, usize> {
        let m = self.projection_mask(x);
        let mut counts = HashMap::new();
        for &w in &self.words {
            *counts.entry(w & m).or_insert(0) += 1;
        }
        counts
    }

    /// `|C_X|` by projecting the codewords.
    pub fn projection_size(&self, x: &[usize]) -> usize {
        self.fibers(x).len()
    }

    /// Every attained value on `X` is taken by exactly `|C| / |C_X|` words.
    pub fn is_quasi_uniform_on(&self, x: &[usize]) -> bool {
        let fibers = self.fibers(x);
        let expected = self.words.len() / fibers.len();
        fibers.len() * expected == self.words.len() && fibers.values().all(|&c| c == expected)
    }
}

/// Enumerates `g ∈ G` and labels each coordinate by `H_i · g`.
pub fn code_from_groups(spec: &QuasiUniformSpec) -> Result<VectorLinearCode> {
    if spec.k() > MAX_ENUMERATION_K {
        return Err(Error::TooLarge(format!(
            "enumerating (Z_2^2)^{} exceeds the limit k <= {MAX_ENUMERATION_K}",
            spec.k()
        )));
    }
    let symbol_bits = spec.symbol_bits();
    let total: usize = symbol_bits.iter().sum();
    if total > 128 {
        return Err(Error::TooLarge(format!("codewords of {total} bits")));
    }
    let checks = spec.checks();
    // the labelling is linear, so the image of each ambient basis vector suffices
    let image = |g: u128| {
        checks
            .iter()
            .zip(&symbol_bits)
            .fold(0u128, |acc, (h, &w)| (acc << w) | label_with(h, g))
    };
    let bits = spec.bits();
    let unit_images: Vec<u128> = (0..bits).map(|b| image(1u128 << b)).collect();
    let size = 1usize << bits;
    let mut words = Vec::with_capacity(size);
    let mut word = 0u128;
    words.push(word);
    // Gray-code walk: step s flips ambient bit trailing_zeros(s)
    for s in 1..size {
        word ^= unit_images[s.trailing_zeros() as usize];
        words.push(word);
    }
    words.sort_unstable();
    words.dedup();
    Ok(VectorLinearCode { symbol_bits, words })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuasiParams {
    pub n: usize,
    /// `log2 |C|`.
    pub size_log2: usize,
    /// `log_4 |C|`, which is an integer when every symbol is 2 bits wide.
    pub k_eff: f64,
    /// Minimum distance; 0 when `|C| = 1`.
    pub d: usize,
    /// Some coordinate is constant.
    pub degenerate: bool,
    pub constant_coordinates: Vec<usize>,
}

/// `|C| = |G| / |G_[n]|` and `d = n - max{|X| : |G_X| > |G_[n]|}`.
///
/// Two codewords differ by some `g`, and they agree exactly on the
/// coordinates `X` with `g ∈ G_X`; a nonzero difference needs `g ∉ G_[n]`.
/// The largest such `X` is found by depth-first search with a size bound,
/// pruning any branch where `G_X` has already shrunk to `G_[n]`.
pub fn quasi_params(spec: &QuasiUniformSpec) -> QuasiParams {
    let n = spec.n();
    let checks = spec.checks();
    let mut full = DualSpan::new();
    for h in &checks {
        full.extend(h);
    }
    let size_log2 = full.dim();
    let constant_coordinates = spec.constant_coordinates();
    let d = if size_log2 == 0 {
        0
    } else {
        let mut best = 0;
        largest_proper(&checks, size_log2, 0, &DualSpan::new(), 0, &mut best);
        n - best
    };
    QuasiParams {
        n,
        size_log2,
        k_eff: size_log2 as f64 / 2.0,
        d,
        degenerate: !constant_coordinates.is_empty(),
        constant_coordinates,
    }
}

fn largest_proper(
    checks: &[Vec<u128>],
    full_dim: usize,
    idx: usize,
    span: &DualSpan,
    size: usize,
    best: &mut usize,
) {
    if size > *best {
        *best = size;
    }
    if idx == checks.len() || size + (checks.len() - idx) <= *best {
        return;
    }
    let mut with = span.clone();
    with.extend(&checks[idx]);
    if with.dim() < full_dim {
        largest_proper(checks, full_dim, idx + 1, &with, size + 1, best);
    }
    largest_proper(checks, full_dim, idx + 1, span, size, best);
}

/// `log2 |C_X|` for every `X ⊆ [n]` with `|X| <= max_size`, smallest first.
pub fn projection_table(spec: &QuasiUniformSpec, max_size: usize) -> Vec<(Vec<usize>, usize)> {
    (0..=max_size.min(spec.n()))
        .flat_map(|s| (1..=spec.n()).combinations(s))
        .map(|x| {
            let p = spec.projection_log2(&x);
            (x, p)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VectorLocalityEntry {
    pub symbol: usize,
    pub set: Vec<usize>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VectorLocalityReport {
    pub r: usize,
    pub entries: Vec<VectorLocalityEntry>,
}

impl VectorLocalityReport {
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

/// The projection onto `set` has distance at least 2 iff dropping any one
/// member keeps `|C_X|` unchanged.
fn repairs(spec: &QuasiUniformSpec, set: &[usize]) -> bool {
    let full = spec.projection_log2(set);
    set.iter().all(|&x| {
        let rest: Vec<usize> = set.iter().copied().filter(|&i| i != x).collect();
        spec.projection_log2(&rest) == full
    })
}

/// Checks `j ∈ S_j`, `|S_j| <= r + 1` and that `S_j` repairs any one erasure.
pub fn verify_vector_locality(
    spec: &QuasiUniformSpec,
    assignment: &LocalityAssignment,
    r: usize,
) -> VectorLocalityReport {
    let entries = (1..=spec.n())
        .map(|j| {
            if j > assignment.n() {
                return VectorLocalityEntry {
                    symbol: j,
                    set: Vec::new(),
                    pass: false,
                };
            }
            let set = assignment.set(j).to_vec();
            let pass = set.contains(&j)
                && set.len() <= r + 1
                && set.iter().all(|&i| i <= spec.n())
                && repairs(spec, &set);
            VectorLocalityEntry {
                symbol: j,
                set,
                pass,
            }
        })
        .collect();
    VectorLocalityReport { r, entries }
}

/// Repair sets of size at most `r + 1`: `known` sets are checked and kept,
/// every other symbol gets the smallest (then lexicographically first) set
/// that repairs it. Fails with `InvalidLocality` if some symbol has none.
pub fn discover_vector_locality(
    spec: &QuasiUniformSpec,
    r: usize,
    known: &[Vec<usize>],
) -> Result<LocalityAssignment> {
    let n = spec.n();
    let mut sets: Vec<Option<Vec<usize>>> = vec![None; n];
    for block in known {
        if !repairs(spec, block) || block.len() > r + 1 {
            return Err(Error::InvalidLocality(format!(
                "block {block:?} does not give locality {r}"
            )));
        }
        for &j in block {
            sets[j - 1] = Some(block.clone());
        }
    }
    for j in 1..=n {
        if sets[j - 1].is_some() {
            continue;
        }
        let others: Vec<usize> = (1..=n).filter(|&i| i != j).collect();
        let found = (0..=r.min(n - 1)).find_map(|s| {
            others.iter().copied().combinations(s).find_map(|rest| {
                let mut set = rest;
                set.push(j);
                set.sort_unstable();
                repairs(spec, &set).then_some(set)
            })
        });
        match found {
            Some(set) => sets[j - 1] = Some(set),
            None => {
                return Err(Error::InvalidLocality(format!(
                    "symbol {j} has no repair set of size <= {}",
                    r + 1
                )))
            }
        }
    }
    LocalityAssignment::new(sets.into_iter().map(Option::unwrap).collect())
}

//! Exact minimum distance.
//!
//! Two independent exact routes:
//!
//! * projective enumeration: one message per scalar class, i.e. messages whose
//!   first nonzero coordinate is 1. The last coordinate is never enumerated;
//!   for a fixed prefix the weights of all `q` words on the line
//!   `base + c·row_last` come from a histogram of the `c` that zero each symbol.
//! * subset rank: `d = n - max{|X| : rank(G_X) < k}`, the matroid view.
//!
//! [`min_distance`] is the enumeration route under an explicit budget.

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::LinearCode;
use crate::error::{Error, Result};
use crate::gf::Field;
use crate::linalg::Matrix;

pub const DEFAULT_BUDGET: u64 = 1 << 26;

/// Largest number of column subsets the subset-rank route will visit.
const SUBSET_LIMIT: u64 = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Maximum number of projective messages `(q^k - 1)/(q - 1)`.
    pub enumeration: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            enumeration: DEFAULT_BUDGET,
        }
    }
}

impl Budget {
    /// Default budget, overridden by the `LRC_BUDGET` environment variable.
    pub fn from_env() -> Budget {
        let enumeration = std::env::var("LRC_BUDGET")
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_BUDGET);
        Budget { enumeration }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DistanceMethod {
    Projective,
    SubsetRank,
    /// Minimum weight over random codewords: an upper bound on `d`, not exact.
    SampledUpperBound,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Measured {
    pub value: usize,
    pub method: DistanceMethod,
    pub exact: bool,
}

/// `(q^k - 1) / (q - 1)`
pub fn projective_count(q: u32, k: usize) -> u128 {
    let q = q as u128;
    let mut total: u128 = 0;
    let mut pow: u128 = 1;
    for _ in 0..k {
        total = total.saturating_add(pow);
        pow = pow.saturating_mul(q);
    }
    total
}

/// Exact minimum distance by projective enumeration.
pub fn min_distance(code: &LinearCode, budget: Budget) -> Result<usize> {
    if let Some(d) = code.cached_distance() {
        return Ok(d);
    }
    let needed = projective_count(code.field().order(), code.k());
    if needed > budget.enumeration as u128 {
        return Err(Error::BudgetExceeded {
            needed,
            budget: budget.enumeration,
        });
    }
    let d = projective_min_weight(code.generator());
    code.remember_distance(d);
    Ok(d)
}

/// Exact distance by whichever exact route is affordable: projective
/// enumeration within the budget, otherwise subset ranks.
pub fn exact_distance(code: &LinearCode, budget: Budget) -> Result<Measured> {
    match min_distance(code, budget) {
        Ok(value) => Ok(Measured {
            value,
            method: DistanceMethod::Projective,
            exact: true,
        }),
        Err(err @ Error::BudgetExceeded { .. }) => {
            if subset_route_feasible(code.n()) {
                let value = distance_by_rank(code.generator());
                code.remember_distance(value);
                Ok(Measured {
                    value,
                    method: DistanceMethod::SubsetRank,
                    exact: true,
                })
            } else {
                Err(err)
            }
        }
        Err(e) => Err(e),
    }
}

fn subset_route_feasible(n: usize) -> bool {
    n < 64 && (1u64 << n) <= SUBSET_LIMIT
}

fn weight(v: &[u32]) -> usize {
    v.iter().filter(|&&x| x != 0).count()
}

fn add_scaled(f: &Field, acc: &mut [u32], coef: u32, row: &[u32]) {
    if coef == 0 {
        return;
    }
    for (a, &r) in acc.iter_mut().zip(row) {
        if r != 0 {
            *a = f.add(*a, f.mul(coef, r));
        }
    }
}

fn projective_min_weight(g: &Matrix) -> usize {
    let rows = g.to_rows();
    let f = g.field();
    (0..rows.len())
        .into_par_iter()
        .map(|lead| affine_min_weight(f, &rows[lead], &rows[lead + 1..]))
        .min()
        .unwrap_or(0)
}

/// Minimum weight over the affine space `base + span(rows)`, enumerating every
/// coefficient vector (`q^len(rows)` words).
pub fn affine_min_weight(f: &Field, base: &[u32], rows: &[Vec<u32>]) -> usize {
    match rows.len() {
        0 => weight(base),
        1 => LineScan::new(f, &rows[0]).min_weight(base),
        _ => {
            let (first, rest) = rows.split_first().unwrap();
            let (last, middle) = rest.split_last().unwrap();
            let q = f.order();
            (0..q)
                .into_par_iter()
                .map_init(
                    || LineScan::new(f, last),
                    |scan, c| {
                        let mut start = base.to_vec();
                        add_scaled(f, &mut start, c, first);
                        odometer_min(f, scan, start, middle)
                    },
                )
                .min()
                .unwrap()
        }
    }
}

/// Walks every coefficient vector for `middle`, scanning one line per vector.
fn odometer_min(f: &Field, scan: &mut LineScan, start: Vec<u32>, middle: &[Vec<u32>]) -> usize {
    let q = f.order();
    let depth = middle.len();
    // levels[t] = start + Σ_{u<t} digits[u] · middle[u]
    let mut levels = vec![start; depth + 1];
    let mut digits = vec![0u32; depth];
    let mut best = usize::MAX;
    loop {
        best = best.min(scan.min_weight(&levels[depth]));
        if best == 0 {
            return 0;
        }
        let Some(t) = (0..depth).rev().find(|&t| digits[t] + 1 < q) else {
            return best;
        };
        digits[t] += 1;
        for d in &mut digits[t + 1..] {
            *d = 0;
        }
        for u in t..depth {
            let (lo, hi) = levels.split_at_mut(u + 1);
            hi[0].copy_from_slice(&lo[u]);
            add_scaled(f, &mut hi[0], digits[u], &middle[u]);
        }
    }
}

/// Minimum weight over the line `base + c·dir`, `c` ranging over the field.
struct LineScan<'a> {
    f: &'a Field,
    dir: &'a [u32],
    // -1/dir[j] for the nonzero entries of dir
    neg_inv: Vec<u32>,
    counts: Vec<u32>,
    touched: Vec<u32>,
}

impl<'a> LineScan<'a> {
    fn new(f: &'a Field, dir: &'a [u32]) -> Self {
        let neg_inv = dir
            .iter()
            .map(|&x| if x == 0 { 0 } else { f.neg(f.inv(x)) })
            .collect();
        LineScan {
            f,
            dir,
            neg_inv,
            counts: vec![0; f.order() as usize],
            touched: Vec::with_capacity(dir.len()),
        }
    }

    fn min_weight(&mut self, base: &[u32]) -> usize {
        let n = base.len();
        let mut zero_always = 0;
        let mut most = 0;
        #[allow(clippy::needless_range_loop)]
        for j in 0..n {
            if self.dir[j] == 0 {
                if base[j] == 0 {
                    zero_always += 1;
                }
            } else {
                // base[j] + c·dir[j] = 0 exactly when c = -base[j]/dir[j]
                let c = self.f.mul(base[j], self.neg_inv[j]) as usize;
                if self.counts[c] == 0 {
                    self.touched.push(c as u32);
                }
                self.counts[c] += 1;
                most = most.max(self.counts[c]);
            }
        }
        for &c in &self.touched {
            self.counts[c as usize] = 0;
        }
        self.touched.clear();
        n - zero_always - most as usize
    }
}

/// `d = n - max{|X| : rank(G_X) < rank(G)}`. Works for any matrix: the result
/// is the minimum distance of its row space (0 for the zero space).
pub fn distance_by_rank(g: &Matrix) -> usize {
    let n = g.cols();
    let rho = g.rank();
    if rho == 0 {
        return 0;
    }
    for s in (rho - 1..n).rev() {
        if s < rho || (0..n).combinations(s).any(|x| g.rank_of_columns(&x) < rho) {
            return n - s;
        }
    }
    unreachable!("subsets smaller than the rank are always deficient")
}

/// Whether the row space of `g` has minimum distance at least `t`, by
/// checking that every `n - t + 1` columns carry the full rank.
pub fn distance_at_least(g: &Matrix, t: usize) -> bool {
    let n = g.cols();
    let rho = g.rank();
    if t == 0 || (t == 1 && rho > 0) {
        return true;
    }
    if rho == 0 || t > n {
        return false;
    }
    let s = n + 1 - t;
    if s < rho {
        return false;
    }
    (0..n).combinations(s).all(|x| g.rank_of_columns(&x) == rho)
}

/// Whether every word of the coset `a + C` has weight at least `d`, by the
/// enumeration route when `q^k` fits the budget and by subset ranks otherwise.
pub fn coset_weight_at_least(
    code: &LinearCode,
    a: &[u32],
    d: usize,
    budget: Budget,
) -> Result<(bool, DistanceMethod)> {
    let g = code.generator();
    let n = code.n();
    if a.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} for a code of length {n}",
            a.len()
        )));
    }
    let words = (code.field().order() as u128).saturating_pow(code.k() as u32);
    if words <= budget.enumeration as u128 {
        let w = affine_min_weight(code.field(), a, &g.to_rows());
        return Ok((w >= d, DistanceMethod::Projective));
    }
    if !subset_route_feasible(n) {
        return Err(Error::BudgetExceeded {
            needed: words,
            budget: budget.enumeration,
        });
    }
    if d == 0 {
        return Ok((true, DistanceMethod::SubsetRank));
    }
    if d > n {
        return Ok((false, DistanceMethod::SubsetRank));
    }
    // a word of a + C vanishes on X iff a_X lies in the row space of G_X
    let stacked = Matrix::new(
        code.field(),
        code.k() + 1,
        n,
        [g.to_rows().concat(), a.to_vec()].concat(),
    )?;
    let ok = (0..n)
        .combinations(n + 1 - d)
        .all(|x| stacked.rank_of_columns(&x) > g.rank_of_columns(&x));
    Ok((ok, DistanceMethod::SubsetRank))
}

/// Minimum weight over `samples` random nonzero codewords. Never below the
/// true distance; equal to it only by luck.
pub fn sampled_weight_bound(code: &LinearCode, samples: usize, seed: u64) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = code.field().order();
    let mut best = code.n();
    for _ in 0..samples {
        let msg: Vec<u32> = (0..code.k()).map(|_| rng.gen_range(0..q)).collect();
        if msg.iter().all(|&x| x == 0) {
            continue;
        }
        let w = weight(&code.encode(&msg).expect("message length matches"));
        best = best.min(w);
    }
    best
}

use num_bigint::BigUint;
use serde::{Serialize, Serializer};

use super::distance::{exact_distance, Budget, Measured};
use super::locality::verify_locality;
use super::{check_params, LinearCode, LocalityAssignment};
use crate::error::{Error, Result};

/// Singleton-like bound for (r, δ) locality:
/// `n - k - (⌈k/r⌉ - 1)(δ - 1) + 1`.
pub fn d_opt(n: usize, k: usize, r: usize, delta: usize) -> Result<i64> {
    check_params(n, k, r, delta)?;
    let (n, k, r, delta) = (n as i64, k as i64, r as i64, delta as i64);
    let groups = (k + r - 1) / r;
    Ok(n - k - (groups - 1) * (delta - 1) + 1)
}

/// The bound for δ = 2, which also holds for vector-linear codes:
/// `n - k - ⌈k/r⌉ + 2`.
pub fn d_opt_vector(n: usize, k: usize, r: usize) -> Result<i64> {
    check_params(n, k, r, 2)?;
    let (n, k, r) = (n as i64, k as i64, r as i64);
    Ok(n - k - (k + r - 1) / r + 2)
}

/// Number of words of `F_q^n` within Hamming distance `s` of a fixed word.
pub fn sphere_volume(q: u32, n: usize, s: usize) -> BigUint {
    let s = s.min(n);
    let base = BigUint::from(q.saturating_sub(1));
    let mut binom = BigUint::from(1u32);
    let mut pow = BigUint::from(1u32);
    let mut total = BigUint::from(0u32);
    for i in 0..=s {
        total += &binom * &pow;
        binom = binom * (n - i) / (i + 1);
        pow *= &base;
    }
    total
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Label {
    Optimal,
    AlmostOptimal,
    Gap(i64),
}

impl std::fmt::Display for Label {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Label::Optimal => write!(f, "optimal"),
            Label::AlmostOptimal => write!(f, "almost-optimal"),
            Label::Gap(g) => write!(f, "gap {g}"),
        }
    }
}

impl Serialize for Label {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Optimal at gap 0, almost optimal when `0 < gap <= δ - 1`.
pub fn label_for_gap(gap: i64, delta: usize) -> Label {
    if gap == 0 {
        Label::Optimal
    } else if gap > 0 && gap < delta as i64 {
        Label::AlmostOptimal
    } else {
        Label::Gap(gap)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub d: Measured,
    pub d_opt: i64,
    pub gap: i64,
    pub label: Label,
}

/// Measures `d` exactly and places the code against [`d_opt`]. The supplied
/// assignment must pass [`verify_locality`].
pub fn classify(
    code: &LinearCode,
    assignment: &LocalityAssignment,
    r: usize,
    delta: usize,
    budget: Budget,
) -> Result<Classification> {
    let bound = d_opt(code.n(), code.k(), r, delta)?;
    let report = verify_locality(code, assignment, r, delta);
    if !report.all_pass() {
        return Err(Error::LocalityNotVerified(report.failing_symbols()));
    }
    let d = exact_distance(code, budget)?;
    let gap = bound - d.value as i64;
    Ok(Classification {
        d,
        d_opt: bound,
        gap,
        label: label_for_gap(gap, delta),
    })
}

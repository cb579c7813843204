//! Block-structured LRCs `G = (E | F)` with local blocks `(I | B_j)`.
//!
//! Symbols are partitioned into blocks of sizes `s_1 <= ... <= s_a`. Block `j`
//! carries `t_j = s_j - δ + 1` columns of a random `k x Σt` matrix `E` and
//! `δ - 1` columns `E_j B_j`, where `B_j` is a `t_j x (δ - 1)` Cauchy matrix.
//! Every block is then an MDS code of distance `δ` on its own, and the global
//! distance is at least `n - (k - 1) - z(δ - 1)` for generic `E`.
//!
//! Draws are verified rather than trusted: [`construct_almost_optimal`]
//! redraws until rank, locality and the distance floor all hold.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::code::{
    check_params, d_opt, exact_distance, label_for_gap, verify_locality, Budget, Label, LinearCode,
    LocalityAssignment, Measured,
};
use crate::error::{Error, Result};
use crate::gf::Field;
use crate::linalg::{cauchy_block_with, Matrix};

pub const DEFAULT_RETRIES: u32 = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LrcParams {
    pub n: usize,
    pub k: usize,
    pub r: usize,
    pub delta: usize,
}

impl LrcParams {
    pub fn new(n: usize, k: usize, r: usize, delta: usize) -> Result<LrcParams> {
        check_params(n, k, r, delta)?;
        Ok(LrcParams { n, k, r, delta })
    }

    /// Largest allowed repair-set size `r + δ - 1`.
    pub fn local_length(&self) -> usize {
        self.r + self.delta - 1
    }
}

/// Block sizes in ascending order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct PartitionSpec {
    sizes: Vec<usize>,
}

impl PartitionSpec {
    /// Sorts `sizes` and checks them against `params`: every block in
    /// `[δ, r + δ - 1]`, sizes summing to `n`, and `Σ t_j >= k`.
    pub fn new(mut sizes: Vec<usize>, params: &LrcParams) -> Result<PartitionSpec> {
        sizes.sort_unstable();
        let LrcParams { n, k, delta, .. } = *params;
        let max = params.local_length();
        if let Some(&s) = sizes.iter().find(|&&s| s < delta || s > max) {
            return Err(Error::BadParams(format!(
                "block size {s} outside [{delta}, {max}]"
            )));
        }
        let total: usize = sizes.iter().sum();
        if total != n {
            return Err(Error::BadParams(format!(
                "block sizes sum to {total}, expected n = {n}"
            )));
        }
        let spec = PartitionSpec { sizes };
        let free = spec.free_columns(delta);
        if free < k {
            return Err(Error::BadParams(format!(
                "blocks leave {free} information columns, fewer than k = {k}"
            )));
        }
        Ok(spec)
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn blocks(&self) -> usize {
        self.sizes.len()
    }

    pub fn n(&self) -> usize {
        self.sizes.iter().sum()
    }

    /// `t_j = s_j - δ + 1`.
    pub fn t(&self, delta: usize) -> Vec<usize> {
        self.sizes.iter().map(|&s| s + 1 - delta).collect()
    }

    /// `Σ t_j = n - a(δ - 1)`, the number of columns of `E`.
    pub fn free_columns(&self, delta: usize) -> usize {
        self.t(delta).iter().sum()
    }

    /// 1-based symbol ranges of the blocks, in emitted order.
    pub fn block_symbols(&self) -> Vec<Vec<usize>> {
        let mut next = 1;
        self.sizes
            .iter()
            .map(|&s| {
                let block = (next..next + s).collect();
                next += s;
                block
            })
            .collect()
    }
}

/// `a = ⌈n / (r + δ - 1)⌉` blocks, as many of full size as possible, the
/// shortfall taken from the last blocks without going below `δ`.
pub fn default_partition(params: &LrcParams) -> Result<PartitionSpec> {
    let LrcParams { n, k, delta, .. } = *params;
    let len = params.local_length();
    let a = n.div_ceil(len);
    let mut sizes = vec![len; a];
    let mut deficit = a * len - n;
    for s in sizes.iter_mut().rev() {
        let cut = deficit.min(*s - delta);
        *s -= cut;
        deficit -= cut;
    }
    if deficit > 0 {
        return Err(Error::Infeasible(format!(
            "n = {n} cannot be split into {a} blocks of size at least δ = {delta}"
        )));
    }
    if n - a * (delta - 1) < k {
        return Err(Error::Infeasible(format!(
            "n - a(δ - 1) = {} < k = {k}",
            n - a * (delta - 1)
        )));
    }
    PartitionSpec::new(sizes, params)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DistanceFloor {
    pub z: usize,
    pub value: usize,
}

/// `z` is the largest count with `t_1 + ... + t_z <= k - 1`; the floor is
/// `n - (k - 1) - z(δ - 1)`.
pub fn distance_floor(partition: &PartitionSpec, k: usize, delta: usize) -> DistanceFloor {
    let mut z = 0;
    let mut acc = 0;
    for t in partition.t(delta) {
        if acc + t > k - 1 {
            break;
        }
        acc += t;
        z += 1;
    }
    let value = (partition.n() + 1).saturating_sub(k + z * (delta - 1));
    DistanceFloor { z, value }
}

/// One unverified draw. Columns are block-contiguous; `permutation[i]` is the
/// 1-based position in `(E | F)` order of emitted column `i + 1`.
#[derive(Clone, Debug)]
pub struct RandomDraw {
    pub generator: Matrix,
    pub assignment: LocalityAssignment,
    pub partition: PartitionSpec,
    pub floor: DistanceFloor,
    pub blocks: Vec<Matrix>,
    pub permutation: Vec<usize>,
}

impl RandomDraw {
    /// Fails with `NotFullRank` when the draw is degenerate.
    pub fn code(&self) -> Result<LinearCode> {
        LinearCode::new(self.generator.clone())
    }
}

/// Draws a code for `params` with stream 0 of the seeded generator.
pub fn random_lrc(
    params: &LrcParams,
    field: &Field,
    partition: &PartitionSpec,
    seed: u64,
) -> Result<RandomDraw> {
    random_lrc_attempt(params, field, partition, seed, 0)
}

/// As [`random_lrc`], on stream `attempt`, so retries are reproducible.
pub fn random_lrc_attempt(
    params: &LrcParams,
    field: &Field,
    partition: &PartitionSpec,
    seed: u64,
    attempt: u64,
) -> Result<RandomDraw> {
    let LrcParams { n, k, r, delta } = *params;
    if r >= k {
        return Err(Error::BadParams(format!(
            "need r < k, got r = {r}, k = {k}"
        )));
    }
    let partition = PartitionSpec::new(partition.sizes.clone(), params)?;
    let q = field.order() as usize;
    if q < params.local_length() {
        return Err(Error::FieldTooSmall {
            q: field.order(),
            needed: params.local_length(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(attempt);

    let ts = partition.t(delta);
    let free: usize = ts.iter().sum();
    let e = Matrix::random(field, k, free, &mut rng);
    let mut blocks = Vec::with_capacity(ts.len());
    for &t in &ts {
        // distinct random nodes; y_j = -v keeps every x_i + y_j nonzero
        let nodes: Vec<u32> = sample(&mut rng, q, t + delta - 1)
            .into_iter()
            .map(|v| v as u32)
            .collect();
        let xs = &nodes[..t];
        let ys: Vec<u32> = nodes[t..].iter().map(|&v| field.neg(v)).collect();
        blocks.push(cauchy_block_with(field, xs, &ys)?);
    }

    let mut columns: Vec<Vec<u32>> = Vec::with_capacity(n);
    let mut permutation = Vec::with_capacity(n);
    let mut offset = 0;
    for (j, (&t, b)) in ts.iter().zip(&blocks).enumerate() {
        let idx: Vec<usize> = (offset..offset + t).collect();
        let ej = e.select_columns(&idx);
        let fj = ej.mul(b)?;
        for (i, &c) in idx.iter().enumerate() {
            columns.push(e.column(c));
            permutation.push(offset + i + 1);
        }
        for c in 0..delta - 1 {
            columns.push(fj.column(c));
            permutation.push(free + j * (delta - 1) + c + 1);
        }
        offset += t;
    }
    let data = (0..k)
        .flat_map(|row| columns.iter().map(move |col| col[row]))
        .collect();
    let generator = Matrix::new(field, k, n, data)?;
    let assignment = LocalityAssignment::from_blocks(n, &partition.block_symbols())?;
    let floor = distance_floor(&partition, k, delta);
    Ok(RandomDraw {
        generator,
        assignment,
        partition,
        floor,
        blocks,
        permutation,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ConstructReport {
    pub params: LrcParams,
    pub q: u32,
    pub partition: PartitionSpec,
    pub z: usize,
    pub floor: usize,
    pub measured_d: Measured,
    pub d_opt: i64,
    pub gap: i64,
    pub label: Label,
    pub attempts: u32,
    pub seed: u64,
    pub permutation: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct Constructed {
    pub code: LinearCode,
    pub assignment: LocalityAssignment,
    pub report: ConstructReport,
}

/// Draw-and-verify: attempt `i` uses stream `i` of the seed. A draw is
/// accepted once `rank(G) = k`, every block passes the locality check and the
/// exact distance reaches the floor.
pub fn construct_almost_optimal(
    params: &LrcParams,
    field: &Field,
    partition: Option<&PartitionSpec>,
    seed: u64,
    max_retries: u32,
    budget: Budget,
) -> Result<Constructed> {
    let partition = match partition {
        Some(p) => p.clone(),
        None => default_partition(params)?,
    };
    let bound = d_opt(params.n, params.k, params.r, params.delta)?;
    let floor = distance_floor(&partition, params.k, params.delta);
    let mut best_d = None;
    for attempt in 0..max_retries {
        let draw = random_lrc_attempt(params, field, &partition, seed, attempt as u64)?;
        let Ok(code) = draw.code() else {
            continue;
        };
        if !verify_locality(&code, &draw.assignment, params.r, params.delta).all_pass() {
            continue;
        }
        let measured = exact_distance(&code, budget)?;
        best_d = best_d.max(Some(measured.value));
        if measured.value < floor.value {
            continue;
        }
        let gap = bound - measured.value as i64;
        return Ok(Constructed {
            code,
            assignment: draw.assignment,
            report: ConstructReport {
                params: *params,
                q: field.order(),
                partition,
                z: floor.z,
                floor: floor.value,
                measured_d: measured,
                d_opt: bound,
                gap,
                label: label_for_gap(gap, params.delta),
                attempts: attempt + 1,
                seed,
                permutation: draw.permutation,
            },
        });
    }
    Err(Error::RetriesExhausted {
        attempts: max_retries,
        best_d,
        floor: floor.value,
    })
}

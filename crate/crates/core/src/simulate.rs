//! Monte Carlo repair experiments: random codewords, random erasure patterns,
//! local repair, and read counts against the `k` reads of a plain MDS code.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::code::{repair, LinearCode, LocalityAssignment};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ErasureModel {
    /// Each repair group independently loses between 0 and `δ - 1` symbols.
    Uniform,
    /// Each repair group loses exactly `δ - 1` symbols where possible.
    Adversarial,
    /// One repair group loses `δ` symbols; never repairable locally.
    Overload,
}

impl std::str::FromStr for ErasureModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<ErasureModel> {
        match s {
            "uniform" => Ok(ErasureModel::Uniform),
            "adversarial" => Ok(ErasureModel::Adversarial),
            "overload" => Ok(ErasureModel::Overload),
            _ => Err(Error::BadParams(format!(
                "unknown erasure model {s:?} (uniform, adversarial, overload)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimulationStats {
    pub model: ErasureModel,
    pub trials: usize,
    pub seed: u64,
    pub successes: usize,
    pub repair_impossible: usize,
    pub other_failures: usize,
    pub success_rate: f64,
    pub erased_symbols: usize,
    pub symbols_read: usize,
    /// Largest number of reads used by one local solve.
    pub max_reads_per_repair: usize,
    /// Reads needed to rebuild any one symbol from an MDS code of the same
    /// dimension.
    pub mds_baseline_reads: usize,
}

/// Every repair set touching an erasure keeps at most `δ - 1` erasures.
pub fn admissible(assignment: &LocalityAssignment, erased: &[usize], delta: usize) -> bool {
    assignment.sets().iter().all(|s| {
        let hit = s.iter().filter(|i| erased.contains(i)).count();
        hit == 0 || hit < delta
    })
}

/// Draws an erasure pattern (sorted, 1-based) under `model`.
pub fn erasure_pattern<R: Rng>(
    assignment: &LocalityAssignment,
    delta: usize,
    model: ErasureModel,
    rng: &mut R,
) -> Vec<usize> {
    let mut blocks = assignment.blocks();
    blocks.shuffle(rng);
    let mut erased: Vec<usize> = Vec::new();
    match model {
        ErasureModel::Overload => {
            if let Some(block) = blocks.iter().find(|b| b.len() >= delta) {
                erased = block.choose_multiple(rng, delta).copied().collect();
            }
        }
        ErasureModel::Uniform | ErasureModel::Adversarial => {
            for block in &blocks {
                let want = match model {
                    ErasureModel::Uniform => rng.gen_range(0..delta),
                    _ => delta - 1,
                };
                let mut members = block.clone();
                members.shuffle(rng);
                let mut taken = 0;
                for j in members {
                    if taken == want {
                        break;
                    }
                    if erased.contains(&j) {
                        continue;
                    }
                    erased.push(j);
                    if admissible(assignment, &erased, delta) {
                        taken += 1;
                    } else {
                        erased.pop();
                    }
                }
            }
        }
    }
    erased.sort_unstable();
    erased
}

/// Runs `trials` rounds: encode a uniform random message, erase, repair and
/// compare with the original.
pub fn simulate_repair(
    code: &LinearCode,
    assignment: &LocalityAssignment,
    delta: usize,
    trials: usize,
    model: ErasureModel,
    seed: u64,
) -> Result<SimulationStats> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = code.field().order();
    let mut stats = SimulationStats {
        model,
        trials,
        seed,
        successes: 0,
        repair_impossible: 0,
        other_failures: 0,
        success_rate: 0.0,
        erased_symbols: 0,
        symbols_read: 0,
        max_reads_per_repair: 0,
        mds_baseline_reads: code.k(),
    };
    for _ in 0..trials {
        let msg: Vec<u32> = (0..code.k()).map(|_| rng.gen_range(0..q)).collect();
        let word = code.encode(&msg)?;
        let erased = erasure_pattern(assignment, delta, model, &mut rng);
        stats.erased_symbols += erased.len();
        let received: Vec<Option<u32>> = word
            .iter()
            .enumerate()
            .map(|(i, &v)| (!erased.contains(&(i + 1))).then_some(v))
            .collect();
        match repair(code, assignment, &received, delta) {
            Ok(out) if out.word == word => {
                stats.successes += 1;
                stats.symbols_read += out.steps.iter().map(|s| s.read.len()).sum::<usize>();
                stats.max_reads_per_repair = stats.max_reads_per_repair.max(out.max_reads());
            }
            Err(Error::RepairImpossible { .. }) => stats.repair_impossible += 1,
            _ => stats.other_failures += 1,
        }
    }
    if trials > 0 {
        stats.success_rate = stats.successes as f64 / trials as f64;
    }
    Ok(stats)
}

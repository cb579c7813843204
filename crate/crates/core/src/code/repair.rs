use serde::Serialize;

use super::{LinearCode, LocalityAssignment};
use crate::error::{Error, Result};
use crate::linalg::in_span;

/// One local solve: `read` symbols of `set` were used to restore `restored`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RepairStep {
    pub set: Vec<usize>,
    pub read: Vec<usize>,
    pub restored: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RepairOutcome {
    pub word: Vec<u32>,
    pub steps: Vec<RepairStep>,
}

impl RepairOutcome {
    /// Largest number of symbols read by a single local solve.
    pub fn max_reads(&self) -> usize {
        self.steps.iter().map(|s| s.read.len()).max().unwrap_or(0)
    }
}

/// Fills the erasures (`None`) of `received` using only local repair sets.
///
/// A symbol is restored from its set `S_j` once at most `δ - 1` members of
/// `S_j` are still missing; exactly `|S_j| - δ + 1` known members are read.
/// Repairs repeat until no erasure is left or no set can make progress.
pub fn repair(
    code: &LinearCode,
    assignment: &LocalityAssignment,
    received: &[Option<u32>],
    delta: usize,
) -> Result<RepairOutcome> {
    let n = code.n();
    if received.len() != n || assignment.n() != n {
        return Err(Error::DimensionMismatch(format!(
            "word of length {} and {} repair sets for a code of length {n}",
            received.len(),
            assignment.n()
        )));
    }
    if delta < 2 {
        return Err(Error::BadParams(format!(
            "δ must be at least 2, got {delta}"
        )));
    }
    let f = code.field();
    let g = code.generator();
    let mut word = received.to_vec();
    let mut steps = Vec::new();

    loop {
        let erased: Vec<usize> = (1..=n).filter(|&j| word[j - 1].is_none()).collect();
        let Some(&first) = erased.first() else {
            break;
        };
        let mut progress = false;
        for &j in &erased {
            if word[j - 1].is_some() {
                continue;
            }
            let set = assignment.set(j);
            let missing: Vec<usize> = set
                .iter()
                .copied()
                .filter(|&i| word[i - 1].is_none())
                .collect();
            if missing.len() > delta - 1 || set.len() < delta {
                continue;
            }
            let need = set.len() - delta + 1;
            let read: Vec<usize> = set
                .iter()
                .copied()
                .filter(|&i| word[i - 1].is_some())
                .take(need)
                .collect();
            // message x with x · G[:, i] = w_i for every read symbol i
            let cols: Vec<usize> = read.iter().map(|&i| i - 1).collect();
            let system = g.select_columns(&cols).transpose();
            let values: Vec<u32> = read.iter().map(|&i| word[i - 1].unwrap()).collect();
            let all: Vec<usize> = (0..code.k()).collect();
            let x = in_span(&system, &all, &values)?.ok_or(Error::NotACodeword)?;
            for &i in &missing {
                let v = (0..code.k()).fold(0, |acc, t| f.add(acc, f.mul(x[t], g.get(t, i - 1))));
                word[i - 1] = Some(v);
            }
            steps.push(RepairStep {
                set: set.to_vec(),
                read,
                restored: missing,
            });
            progress = true;
        }
        if !progress {
            let set = assignment.set(first);
            let erased_in_set = set.iter().filter(|&&i| word[i - 1].is_none()).count();
            return Err(Error::RepairImpossible {
                symbol: first,
                erased: erased_in_set,
                limit: delta - 1,
            });
        }
    }

    let word: Vec<u32> = word.into_iter().map(Option::unwrap).collect();
    if !code.is_codeword(&word) {
        return Err(Error::NotACodeword);
    }
    Ok(RepairOutcome { word, steps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Field;
    use crate::linalg::Matrix;

    /// Two blocks of (I_2 | B) over GF(5) with δ = 3: block size 4, t = 2.
    fn block_code() -> (LinearCode, LocalityAssignment) {
        let f = Field::with_order(5, None).unwrap();
        let g = Matrix::from_rows(
            &f,
            &[
                vec![1, 0, 1, 3, 0, 0, 0, 0],
                vec![0, 1, 3, 2, 0, 0, 0, 0],
                vec![0, 0, 0, 0, 1, 0, 1, 3],
                vec![0, 0, 0, 0, 0, 1, 3, 2],
            ],
        )
        .unwrap();
        let code = LinearCode::new(g).unwrap();
        let a = LocalityAssignment::from_blocks(8, &[vec![1, 2, 3, 4], vec![5, 6, 7, 8]]).unwrap();
        (code, a)
    }

    fn erase(word: &[u32], positions: &[usize]) -> Vec<Option<u32>> {
        word.iter()
            .enumerate()
            .map(|(i, &v)| {
                if positions.contains(&(i + 1)) {
                    None
                } else {
                    Some(v)
                }
            })
            .collect()
    }

    #[test]
    fn single_erasure_round_trip() {
        let (c, a) = block_code();
        let w = c.encode(&[1, 2, 3, 4]).unwrap();
        let out = repair(&c, &a, &erase(&w, &[3]), 3).unwrap();
        assert_eq!(out.word, w);
        assert_eq!(out.steps.len(), 1);
        assert_eq!(out.steps[0].read.len(), 2);
    }

    #[test]
    fn delta_minus_one_erasures_in_one_block() {
        let (c, a) = block_code();
        let w = c.encode(&[4, 0, 2, 1]).unwrap();
        let out = repair(&c, &a, &erase(&w, &[2, 3, 5, 8]), 3).unwrap();
        assert_eq!(out.word, w);
        assert!(out.max_reads() <= 2);
    }

    #[test]
    fn delta_erasures_in_one_block_is_impossible() {
        let (c, a) = block_code();
        let w = c.encode(&[1, 1, 1, 1]).unwrap();
        assert_eq!(
            repair(&c, &a, &erase(&w, &[1, 2, 4]), 3).unwrap_err(),
            Error::RepairImpossible {
                symbol: 1,
                erased: 3,
                limit: 2
            }
        );
    }

    #[test]
    fn inconsistent_word_detected() {
        let (c, a) = block_code();
        let mut w = c.encode(&[1, 2, 3, 4]).unwrap();
        w[3] = (w[3] + 1) % 5;
        assert_eq!(
            repair(&c, &a, &erase(&w, &[1]), 3).unwrap_err(),
            Error::NotACodeword
        );
    }
}

//! Enlarging `(n, k, d, r, δ) → (n+1, k+1, d, r+1, δ)` and puncturing
//! `(n, k, d, r, δ) → (n-1, k-1, d' ≥ d, r, δ)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::code::{
    coset_weight_at_least, exact_distance, verify_locality, Budget, DistanceMethod, LinearCode,
    LocalityAssignment, Measured,
};
use crate::error::{Error, Result};
use crate::linalg::{circuits, Circuit, Matrix};

pub const DEFAULT_ENLARGE_SAMPLES: u64 = 100_000;

#[derive(Clone, Copy, Debug)]
pub struct EnlargeOptions {
    pub seed: u64,
    /// Maximum number of candidate vectors drawn.
    pub max_samples: u64,
    pub budget: Budget,
}

impl EnlargeOptions {
    pub fn with_seed(seed: u64) -> EnlargeOptions {
        EnlargeOptions {
            seed,
            max_samples: DEFAULT_ENLARGE_SAMPLES,
            budget: Budget::default(),
        }
    }
}

/// The appended row and how it was found.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EnlargeWitness {
    pub a: Vec<u32>,
    pub circuits_checked: usize,
    pub samples: u64,
    /// Route used to check that every word of `a + C` has weight `>= d`.
    pub coset_check: DistanceMethod,
    /// Exact distance of the enlarged code.
    pub output_distance: Measured,
}

#[derive(Clone, Debug)]
pub struct Enlarged {
    pub code: LinearCode,
    pub assignment: LocalityAssignment,
    pub witness: EnlargeWitness,
}

/// Appends a row `a` and a new symbol so that the generator becomes
/// `[[G, 0], [a, 1]]`.
///
/// `a` is drawn uniformly (candidate `i` uses stream `i` of a ChaCha8 generator
/// keyed by the seed) until `Σ b_t·a_{i_t} ≠ 0` for every column circuit of
/// size at most `r + 1` and every word of `a + C` has weight at least `d`. The
/// result is then verified: distance exactly `d` and `(r + 1, δ)`-locality
/// with repair sets `S_j ∪ {n+1}`. When `d` is `None` it is measured.
pub fn enlarge(
    code: &LinearCode,
    assignment: &LocalityAssignment,
    r: usize,
    delta: usize,
    d: Option<usize>,
    opts: EnlargeOptions,
) -> Result<Enlarged> {
    let (n, k) = (code.n(), code.k());
    if r >= k {
        return Err(Error::RNoLessThanK { r, k });
    }
    let report = verify_locality(code, assignment, r, delta);
    if !report.all_pass() {
        return Err(Error::InputNotVerified(format!(
            "({r}, {delta})-locality fails for symbols {:?}",
            report.failing_symbols()
        )));
    }
    let measured = exact_distance(code, opts.budget)?.value;
    let d = match d {
        Some(d) if d != measured => {
            return Err(Error::InputNotVerified(format!(
                "claimed distance {d}, measured {measured}"
            )))
        }
        _ => measured,
    };

    let g = code.generator();
    let f = code.field();
    let q = f.order();
    let found_circuits = circuits(g, r + 1);
    let satisfies_circuits = |a: &[u32]| {
        found_circuits.iter().all(|c: &Circuit| {
            c.columns
                .iter()
                .zip(&c.coefficients)
                .fold(0, |acc, (&i, &b)| f.add(acc, f.mul(b, a[i])))
                != 0
        })
    };
    let candidate = |i: u64| -> Vec<u32> {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        rng.set_stream(i);
        (0..n).map(|_| rng.gen_range(0..q)).collect()
    };

    let mut start = 0;
    while start < opts.max_samples {
        let hit = (start..opts.max_samples)
            .into_par_iter()
            .find_map_first(|i| {
                let a = candidate(i);
                if !satisfies_circuits(&a) {
                    return None;
                }
                match coset_weight_at_least(code, &a, d, opts.budget) {
                    Ok((true, method)) => Some(Ok((i, a, method))),
                    Ok((false, _)) => None,
                    Err(e) => Some(Err(e)),
                }
            });
        let Some(hit) = hit else {
            break;
        };
        let (i, a, method) = hit?;
        start = i + 1;
        let (out_code, out_assignment) = append_row(code, assignment, &a)?;
        let out_d = exact_distance(&out_code, opts.budget)?;
        let ok = out_d.value == d
            && verify_locality(&out_code, &out_assignment, r + 1, delta).all_pass();
        if ok {
            return Ok(Enlarged {
                code: out_code,
                assignment: out_assignment,
                witness: EnlargeWitness {
                    a,
                    circuits_checked: found_circuits.len(),
                    samples: i + 1,
                    coset_check: method,
                    output_distance: out_d,
                },
            });
        }
    }
    Err(Error::NoWitnessFound {
        samples: opts.max_samples,
    })
}

/// `[[G, 0], [a, 1]]` with sets `S_j ∪ {n+1}`; the new symbol takes the
/// smallest of the extended sets.
fn append_row(
    code: &LinearCode,
    assignment: &LocalityAssignment,
    a: &[u32],
) -> Result<(LinearCode, LocalityAssignment)> {
    let (n, k) = (code.n(), code.k());
    let g = code.generator();
    let mut data = Vec::with_capacity((k + 1) * (n + 1));
    for row in 0..k {
        data.extend_from_slice(g.row(row));
        data.push(0);
    }
    data.extend_from_slice(a);
    data.push(1);
    let g2 = Matrix::new(code.field(), k + 1, n + 1, data)?;
    let mut sets: Vec<Vec<usize>> = assignment
        .sets()
        .iter()
        .map(|s| {
            let mut s = s.clone();
            s.push(n + 1);
            s
        })
        .collect();
    let smallest = sets
        .iter()
        .min_by_key(|s| s.len())
        .cloned()
        .expect("code has at least one symbol");
    sets.push(smallest);
    Ok((LinearCode::new(g2)?, LocalityAssignment::new(sets)?))
}

/// Keeps the codewords that vanish at `coord` (1-based, default 1) and
/// deletes that symbol. Repair sets lose `coord` and are renumbered.
///
/// If column `coord` is zero the dimension would not drop, so the last row of
/// the generator is also removed.
pub fn puncture(
    code: &LinearCode,
    assignment: &LocalityAssignment,
    coord: Option<usize>,
) -> Result<(LinearCode, LocalityAssignment)> {
    let (n, k) = (code.n(), code.k());
    if k < 2 {
        return Err(Error::DimensionTooSmall(k));
    }
    if assignment.n() != n {
        return Err(Error::DimensionMismatch(format!(
            "{} repair sets for a code of length {n}",
            assignment.n()
        )));
    }
    let coord = coord.unwrap_or(1);
    if coord == 0 || coord > n {
        return Err(Error::BadParams(format!(
            "coordinate {coord} outside 1..={n}"
        )));
    }
    let c = coord - 1;
    let f = code.field();
    let mut rows = code.generator().to_rows();
    match (0..k).find(|&i| rows[i][c] != 0) {
        Some(p) => {
            let pivot = rows.remove(p);
            let inv = f.inv(pivot[c]);
            for row in rows.iter_mut() {
                let factor = f.mul(row[c], inv);
                if factor != 0 {
                    for (x, &y) in row.iter_mut().zip(&pivot) {
                        *x = f.sub(*x, f.mul(factor, y));
                    }
                }
            }
        }
        None => {
            rows.pop();
        }
    }
    for row in rows.iter_mut() {
        row.remove(c);
    }
    let g = Matrix::from_rows(f, &rows)?;
    let sets = (1..=n)
        .filter(|&j| j != coord)
        .map(|j| {
            assignment
                .set(j)
                .iter()
                .filter(|&&i| i != coord)
                .map(|&i| if i > coord { i - 1 } else { i })
                .collect()
        })
        .collect();
    Ok((LinearCode::new(g)?, LocalityAssignment::new(sets)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{classify, d_opt, min_distance, Label};
    use crate::gf::Field;
    use crate::linalg::cauchy_block;

    fn gf(q: u32) -> Field {
        Field::with_order(q, None).unwrap()
    }

    /// Two local [4, 2, 3] MDS blocks over GF(q): (8, 4, 3, 2, 3), optimal.
    fn two_blocks(q: u32) -> (LinearCode, LocalityAssignment) {
        let f = gf(q);
        let b = cauchy_block(&f, 2, 2).unwrap();
        let mut g = Matrix::zeros(&f, 4, 8);
        for blk in 0..2 {
            for i in 0..2 {
                g.set(2 * blk + i, 4 * blk + i, 1);
                for j in 0..2 {
                    g.set(2 * blk + i, 4 * blk + 2 + j, b.get(i, j));
                }
            }
        }
        let code = LinearCode::new(g).unwrap();
        let a = LocalityAssignment::from_blocks(8, &[vec![1, 2, 3, 4], vec![5, 6, 7, 8]]).unwrap();
        (code, a)
    }

    #[test]
    fn enlarge_requires_r_below_k() {
        let (c, a) = two_blocks(16);
        assert_eq!(
            enlarge(&c, &a, 4, 3, None, EnlargeOptions::with_seed(1)).unwrap_err(),
            Error::RNoLessThanK { r: 4, k: 4 }
        );
    }

    #[test]
    fn enlarge_rejects_wrong_claimed_distance() {
        let (c, a) = two_blocks(16);
        assert!(matches!(
            enlarge(&c, &a, 2, 3, Some(4), EnlargeOptions::with_seed(1)),
            Err(Error::InputNotVerified(_))
        ));
    }

    #[test]
    fn enlarge_keeps_distance_and_optimality() {
        let (c, a) = two_blocks(64);
        assert_eq!(
            classify(&c, &a, 2, 3, Budget::default()).unwrap().label,
            Label::Optimal
        );
        let out = enlarge(&c, &a, 2, 3, Some(3), EnlargeOptions::with_seed(7)).unwrap();
        assert_eq!((out.code.n(), out.code.k()), (9, 5));
        assert_eq!(min_distance(&out.code, Budget::default()).unwrap(), 3);
        assert_eq!(out.assignment.set(9).len(), 5);
        assert!(out.assignment.set(1).contains(&9));
        let cls = classify(&out.code, &out.assignment, 3, 3, Budget::default()).unwrap();
        assert_eq!(cls.d_opt, d_opt(9, 5, 3, 3).unwrap());
        assert_eq!(cls.label, Label::Optimal);
        // the generator really is [[G, 0], [a, 1]]
        let g2 = out.code.generator();
        for i in 0..4 {
            assert_eq!(&g2.row(i)[..8], c.generator().row(i));
            assert_eq!(g2.get(i, 8), 0);
        }
        assert_eq!(&g2.row(4)[..8], &out.witness.a[..]);
        assert_eq!(g2.get(4, 8), 1);
    }

    #[test]
    fn enlarge_is_reproducible() {
        let (c, a) = two_blocks(64);
        let x = enlarge(&c, &a, 2, 3, None, EnlargeOptions::with_seed(3)).unwrap();
        let y = enlarge(&c, &a, 2, 3, None, EnlargeOptions::with_seed(3)).unwrap();
        assert_eq!(x.witness, y.witness);
    }

    #[test]
    fn puncture_small_example() {
        let f = gf(2);
        let g = Matrix::from_rows(&f, &[vec![1, 0, 0], vec![0, 1, 1]]).unwrap();
        let c = LinearCode::new(g).unwrap();
        let a = LocalityAssignment::new(vec![vec![1], vec![2, 3], vec![2, 3]]).unwrap();
        let (p, pa) = puncture(&c, &a, Some(1)).unwrap();
        assert_eq!((p.n(), p.k()), (2, 1));
        assert_eq!(p.generator().to_rows(), vec![vec![1, 1]]);
        assert_eq!(min_distance(&p, Budget::default()).unwrap(), 2);
        assert_eq!(pa.sets(), &[vec![1, 2], vec![1, 2]]);
    }

    #[test]
    fn puncture_zero_column_drops_a_row() {
        let f = gf(2);
        let g = Matrix::from_rows(&f, &[vec![0, 1, 0, 1], vec![0, 0, 1, 1]]).unwrap();
        let c = LinearCode::new(g).unwrap();
        let a = LocalityAssignment::new(vec![vec![1], vec![2, 3, 4], vec![2, 3, 4], vec![2, 3, 4]])
            .unwrap();
        let (p, _) = puncture(&c, &a, Some(1)).unwrap();
        assert_eq!((p.n(), p.k()), (3, 1));
    }

    #[test]
    fn puncture_needs_dimension_two() {
        let f = gf(2);
        let c = LinearCode::new(Matrix::from_rows(&f, &[vec![1, 1, 1]]).unwrap()).unwrap();
        let a = LocalityAssignment::new(vec![vec![1, 2, 3]; 3]).unwrap();
        assert_eq!(
            puncture(&c, &a, None).unwrap_err(),
            Error::DimensionTooSmall(1)
        );
    }

    #[test]
    fn puncture_keeps_locality() {
        let (c, a) = two_blocks(16);
        let (p, pa) = puncture(&c, &a, None).unwrap();
        assert_eq!((p.n(), p.k()), (7, 3));
        assert_eq!(pa.set(1), &[1, 2, 3]);
        assert!(verify_locality(&p, &pa, 2, 3).all_pass());
        assert!(min_distance(&p, Budget::default()).unwrap() >= 3);
    }
}

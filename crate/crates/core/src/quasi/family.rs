//! Three infinite families of optimal vector-linear LRCs over `F_2^2` with
//! locality `r = 3`, given as subgroup lists of `(Z_2^2)^k`.
//!
//! Each family repeats a block of four subgroups of `A = (Z_2^2)^3` for every
//! `0 <= j < i` and closes with three or four tail subgroups tying the blocks
//! to the last one or two factors of `G`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::{BinarySubgroup, QuasiUniformSpec, MAX_BITS};
use crate::error::{Error, Result};

/// `A_4 = <111100, 110011, 010100, 010001>` inside `(Z_2^2)^3`.
pub const A4: [&str; 4] = ["111100", "110011", "010100", "010001"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    /// `(n, k, d, r) = (4i + 3, 3i + 1, 3, 3)`
    #[serde(rename = "c1-33")]
    C1_33,
    /// `(n, k, d, r) = (4i + 4, 3i + 2, 3, 3)`
    #[serde(rename = "c2-33")]
    C2_33,
    /// `(n, k, d, r) = (4i + 4, 3i + 1, 4, 3)`
    #[serde(rename = "c1-43")]
    C1_43,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::C1_33, Family::C2_33, Family::C1_43];

    /// `(n, k, d, r)` claimed for index `i`.
    pub fn parameters(self, i: usize) -> (usize, usize, usize, usize) {
        match self {
            Family::C1_33 => (4 * i + 3, 3 * i + 1, 3, 3),
            Family::C2_33 => (4 * i + 4, 3 * i + 2, 3, 3),
            Family::C1_43 => (4 * i + 4, 3 * i + 1, 4, 3),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::C1_33 => "c1-33",
            Family::C2_33 => "c2-33",
            Family::C1_43 => "c1-43",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Family> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "c1-33" => Ok(Family::C1_33),
            "c2-33" => Ok(Family::C2_33),
            "c1-43" => Ok(Family::C1_43),
            _ => Err(Error::BadFamily(s.to_string())),
        }
    }
}

#[derive(Clone, Debug)]
pub struct FamilyInstance {
    pub family: Family,
    pub i: usize,
    pub spec: QuasiUniformSpec,
    /// `{4j+1, …, 4j+4}` for `0 <= j < i`, 1-based.
    pub blocks: Vec<Vec<usize>>,
}

/// Builds elements of `(Z_2^2)^k` factor by factor.
struct Layout {
    k: usize,
}

impl Layout {
    fn bits(&self) -> usize {
        2 * self.k
    }

    /// `pattern` (bit string) placed so that its first pair is factor `start`.
    fn at(&self, start: usize, pattern: &str) -> u128 {
        let width = pattern.len();
        debug_assert!(width.is_multiple_of(2) && 2 * start + width <= self.bits());
        let v = pattern
            .bytes()
            .fold(0u128, |acc, b| (acc << 1) | (b - b'0') as u128);
        v << (self.bits() - 2 * start - width)
    }

    /// `O^j × block × O^{i-j-1} × tail`, with block pattern at factors
    /// `3j..3j+3` and the tail pattern at factor `3i`.
    fn lifted(&self, i: usize, j: usize, block: &str, tail: &str) -> u128 {
        self.at(3 * j, block) | self.at(3 * i, tail)
    }

    /// Both unit vectors of each listed factor.
    fn units(&self, factors: &[usize]) -> Vec<u128> {
        factors
            .iter()
            .flat_map(|&c| [self.at(c, "10"), self.at(c, "01")])
            .collect()
    }

    /// Both unit vectors of every factor not in `skip`.
    fn full_factors_except(&self, skip: &[usize]) -> Vec<u128> {
        let keep: Vec<usize> = (0..self.k).filter(|c| !skip.contains(c)).collect();
        self.units(&keep)
    }
}

/// All 16 elements of `(Z_2^2)^3` whose factor `fixed` equals `value`.
fn coset(fixed: usize, value: &str) -> Vec<String> {
    (0..16u32)
        .map(|free| {
            let mut parts = Vec::with_capacity(3);
            let mut rest = free;
            for f in 0..3 {
                if f == fixed {
                    parts.push(value.to_string());
                } else {
                    parts.push(format!("{:02b}", rest & 3));
                    rest >>= 2;
                }
            }
            parts.concat()
        })
        .collect()
}

const SHARED_33: [&str; 4] = ["011000", "110100", "110010", "100001"];

pub fn family_build(family: Family, i: usize) -> Result<FamilyInstance> {
    if i == 0 {
        return Err(Error::BadParams("family index i must be at least 1".into()));
    }
    let k = family.parameters(i).1;
    if 2 * k > MAX_BITS {
        return Err(Error::TooLarge(format!(
            "{family} with i = {i} needs k = {k} > {}",
            MAX_BITS / 2
        )));
    }
    let lay = Layout { k };
    let bits = lay.bits();
    let mut groups = Vec::with_capacity(family.parameters(i).0);

    // block subgroups A^j × A_m × A^{i-j-1} × (Z_2^2)^tail
    for j in 0..i {
        let own = [3 * j, 3 * j + 1, 3 * j + 2];
        let outside = lay.full_factors_except(&own);
        let local: [Vec<u128>; 4] = [
            // A_1 = 00 × Z × Z, A_2 = Z × 00 × Z, A_3 = Z × Z × 00
            lay.units(&[own[1], own[2]]),
            lay.units(&[own[0], own[2]]),
            lay.units(&[own[0], own[1]]),
            A4.iter().map(|p| lay.at(3 * j, p)).collect(),
        ];
        for gens in local {
            groups.push(BinarySubgroup::new(
                bits,
                outside.iter().copied().chain(gens),
            )?);
        }
    }

    let tail = 3 * i;
    let per_block = |pairs: &[(&str, &str)]| -> Vec<u128> {
        (0..i)
            .flat_map(|j| pairs.iter().map(move |&(b, t)| (j, b, t)))
            .map(|(j, b, t)| lay.lifted(i, j, b, t))
            .collect()
    };
    let shared = |last: [(&'static str, &'static str); 2]| -> Vec<(&'static str, &'static str)> {
        SHARED_33.iter().map(|&b| (b, "00")).chain(last).collect()
    };
    let tails: Vec<Vec<u128>> = match family {
        Family::C1_33 => vec![
            lay.full_factors_except(&[tail]),
            per_block(&shared([("010000", "10"), ("110000", "01")])),
            per_block(&shared([("110000", "10"), ("100000", "01")])),
        ],
        Family::C2_33 => {
            let wide = |last: [(&'static str, &'static str); 2], extra: [&str; 2]| {
                let pairs: Vec<(&str, &str)> =
                    SHARED_33.iter().map(|&b| (b, "0000")).chain(last).collect();
                let mut gens = per_block(&pairs);
                gens.extend(extra.iter().map(|t| lay.at(tail, t)));
                gens
            };
            vec![
                lay.full_factors_except(&[tail]),
                lay.full_factors_except(&[tail + 1]),
                wide([("100000", "1000"), ("010000", "0100")], ["1011", "0110"]),
                wide([("100000", "0010"), ("010000", "0001")], ["1110", "1001"]),
            ]
        }
        Family::C1_43 => {
            let from_sets = |b_factor: usize, b_tail: &str, c_tail: &str| {
                let b = coset(b_factor, "11");
                let c = coset(b_factor, "01");
                let pairs: Vec<(&str, &str)> = b
                    .iter()
                    .map(|s| (s.as_str(), b_tail))
                    .chain(c.iter().map(|s| (s.as_str(), c_tail)))
                    .collect();
                per_block(&pairs)
            };
            vec![
                from_sets(0, "01", "11"),
                from_sets(1, "01", "11"),
                from_sets(2, "11", "01"),
                per_block(&[
                    ("111100", "00"),
                    ("110011", "00"),
                    ("110000", "11"),
                    ("010100", "00"),
                    ("010001", "00"),
                    ("010000", "01"),
                ]),
            ]
        }
    };
    for gens in tails {
        groups.push(BinarySubgroup::new(bits, gens)?);
    }

    let blocks = (0..i).map(|j| (4 * j + 1..=4 * j + 4).collect()).collect();
    Ok(FamilyInstance {
        family,
        i,
        spec: QuasiUniformSpec::new(k, groups)?,
        blocks,
    })
}

#[cfg(test)]
mod tests {
    use super::super::{
        code_from_groups, discover_vector_locality, quasi_params, subgroup_intersect,
        verify_vector_locality,
    };
    use super::*;
    use crate::code::{d_opt_vector, LocalityAssignment};
    use itertools::Itertools;

    fn sub6(gens: &[&str]) -> BinarySubgroup {
        BinarySubgroup::from_bitstrings(6, gens).unwrap()
    }

    fn a_groups() -> [BinarySubgroup; 4] {
        [
            sub6(&["001000", "000100", "000010", "000001"]),
            sub6(&["100000", "010000", "000010", "000001"]),
            sub6(&["100000", "010000", "001000", "000100"]),
            sub6(&A4),
        ]
    }

    #[test]
    fn pairwise_and_triple_intersections() {
        let [a1, a2, a3, a4] = a_groups();
        assert_eq!(a1.intersect(&a2).unwrap(), sub6(&["000010", "000001"]));
        assert_eq!(a1.intersect(&a3).unwrap(), sub6(&["001000", "000100"]));
        assert_eq!(a2.intersect(&a3).unwrap(), sub6(&["100000", "010000"]));
        for triple in [
            [&a1, &a2, &a3],
            [&a1, &a2, &a4],
            [&a1, &a3, &a4],
            [&a2, &a3, &a4],
        ] {
            let gs: Vec<BinarySubgroup> = triple.iter().map(|&g| g.clone()).collect();
            assert!(subgroup_intersect(&gs).unwrap().is_trivial());
        }
    }

    #[test]
    fn names_parse() {
        assert_eq!("c1-33".parse::<Family>().unwrap(), Family::C1_33);
        assert_eq!("C2_33".parse::<Family>().unwrap(), Family::C2_33);
        assert_eq!(
            "c3-33".parse::<Family>().unwrap_err(),
            Error::BadFamily("c3-33".into())
        );
        assert!(family_build(Family::C1_43, 0).is_err());
    }

    /// `f(00) = 00, f(01) = 11, f(10) = 10, f(11) = 01`.
    fn f(x: u128) -> u128 {
        [0b00, 0b11, 0b10, 0b01][x as usize]
    }

    /// Factor `c` (0-based) of an element of `(Z_2^2)^k`.
    fn factor(x: u128, k: usize, c: usize) -> u128 {
        (x >> (2 * (k - 1 - c))) & 3
    }

    #[test]
    fn tail_subgroups_match_their_characterizations() {
        for i in [1, 2] {
            let inst = family_build(Family::C1_43, i).unwrap();
            let k = inst.spec.k();
            let fold = |g: &dyn Fn(usize) -> u128| (0..i).fold(0, |acc, j| acc ^ g(j));
            let chars: [Box<dyn Fn(u128) -> bool>; 4] = [
                Box::new(move |x| factor(x, k, 3 * i) == fold(&|j| f(factor(x, k, 3 * j)))),
                Box::new(move |x| factor(x, k, 3 * i) == fold(&|j| f(factor(x, k, 3 * j + 1)))),
                Box::new(move |x| factor(x, k, 3 * i) == fold(&|j| factor(x, k, 3 * j + 2))),
                Box::new(move |x| {
                    factor(x, k, 3 * i)
                        == fold(&|j| {
                            factor(x, k, 3 * j) ^ factor(x, k, 3 * j + 1) ^ factor(x, k, 3 * j + 2)
                        })
                }),
            ];
            for (t, ch) in chars.iter().enumerate() {
                let g = inst.spec.group(4 * i + 1 + t);
                for x in 0..1u128 << (2 * k) {
                    assert_eq!(g.contains(x), ch(x), "i = {i}, tail {t}, x = {x:b}");
                }
            }
        }
    }

    #[test]
    fn f_sums_agree_iff_plain_sums_agree() {
        // two blocks: (a.0, a.1) and (b.0, b.1) are the first two factors of each
        for x in 0..1u128 << 8 {
            let parts: Vec<u128> = (0..4).map(|c| (x >> (2 * c)) & 3).collect();
            let (a, b) = ((parts[0], parts[1]), (parts[2], parts[3]));
            let lhs = f(a.0) ^ f(b.0) == f(a.1) ^ f(b.1);
            let rhs = a.0 ^ b.0 == a.1 ^ b.1;
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn every_coordinate_has_alphabet_four() {
        for fam in Family::ALL {
            for i in [1, 2, 3] {
                let inst = family_build(fam, i).unwrap();
                let (n, k, _, _) = fam.parameters(i);
                assert_eq!(inst.spec.n(), n);
                assert_eq!(inst.spec.k(), k);
                assert!(
                    inst.spec.symbol_bits().iter().all(|&b| b == 2),
                    "{fam} i = {i}"
                );
            }
        }
    }

    #[test]
    fn parameters_and_optimality() {
        for fam in Family::ALL {
            for i in [1, 2, 3, 4] {
                let inst = family_build(fam, i).unwrap();
                let (n, k, d, r) = fam.parameters(i);
                let p = quasi_params(&inst.spec);
                assert_eq!((p.n, p.size_log2, p.d), (n, 2 * k, d), "{fam} i = {i}");
                assert_eq!(d_opt_vector(n, k, r).unwrap(), d as i64, "{fam} i = {i}");
                let a = discover_vector_locality(&inst.spec, r, &inst.blocks).unwrap();
                assert!(verify_vector_locality(&inst.spec, &a, r).all_pass());
            }
        }
    }

    #[test]
    fn block_triples_give_the_block_intersection() {
        let inst = family_build(Family::C1_43, 2).unwrap();
        for j in 0..=2 {
            let block: Vec<usize> = (4 * j + 1..=4 * j + 4).collect();
            let whole = inst.spec.intersection(&block).unwrap();
            for x in block.iter().copied().combinations(3) {
                assert_eq!(inst.spec.intersection(&x).unwrap(), whole);
            }
        }
        let first = inst
            .spec
            .intersection(&(1..=8).collect::<Vec<_>>())
            .unwrap();
        assert_eq!(
            first.to_bitstrings(),
            vec!["00000000000010", "00000000000001"]
        );
    }

    #[test]
    fn codes_match_subgroup_formulas() {
        for fam in Family::ALL {
            let inst = family_build(fam, 1).unwrap();
            let c = code_from_groups(&inst.spec).unwrap();
            let p = quasi_params(&inst.spec);
            assert!(c.is_xor_closed());
            assert_eq!(c.len(), 1 << p.size_log2);
            assert_eq!(c.min_distance(), p.d);
            let n = inst.spec.n();
            for s in 0..=n {
                for x in (1..=n).combinations(s) {
                    assert_eq!(c.projection_size(&x), 1 << inst.spec.projection_log2(&x));
                    assert!(c.is_quasi_uniform_on(&x), "{fam} X = {x:?}");
                }
            }
        }
        let big = family_build(Family::C1_43, 1).unwrap();
        assert_eq!(code_from_groups(&big.spec).unwrap().len(), 256);
    }

    #[test]
    fn block_assignment_passes_for_blocks() {
        let inst = family_build(Family::C1_43, 1).unwrap();
        let a = LocalityAssignment::from_blocks(8, &[vec![1, 2, 3, 4], vec![5, 6, 7, 8]]).unwrap();
        assert!(verify_vector_locality(&inst.spec, &a, 3).all_pass());
    }
}

use std::fmt;

use crate::error::{Error, Result};

/// Widest ambient space supported: `(Z_2^2)^64`.
pub const MAX_BITS: usize = 128;

/// A subgroup of `Z_2^bits`, i.e. a GF(2) subspace, stored as a reduced
/// row-echelon basis.
///
/// Bit strings are read left to right: the first character is the most
/// significant of the `bits` low bits of a `u128`. With `bits = 2k` the
/// characters pair up into the `k` factors of `(Z_2^2)^k`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinarySubgroup {
    bits: usize,
    basis: Vec<u128>,
}

fn mask(bits: usize) -> u128 {
    if bits == 128 {
        u128::MAX
    } else {
        (1u128 << bits) - 1
    }
}

fn top_bit(v: u128) -> u32 {
    127 - v.leading_zeros()
}

/// Reduced row-echelon form, pivots descending.
fn echelon(vectors: impl IntoIterator<Item = u128>) -> Vec<u128> {
    let mut basis: Vec<u128> = Vec::new();
    for mut v in vectors {
        for &b in &basis {
            if v & (1u128 << top_bit(b)) != 0 {
                v ^= b;
            }
        }
        if v == 0 {
            continue;
        }
        let p = 1u128 << top_bit(v);
        for b in basis.iter_mut() {
            if *b & p != 0 {
                *b ^= v;
            }
        }
        basis.push(v);
    }
    basis.sort_unstable_by(|a, b| b.cmp(a));
    basis
}

fn parity(v: u128) -> u128 {
    (v.count_ones() & 1) as u128
}

impl BinarySubgroup {
    pub fn new(bits: usize, generators: impl IntoIterator<Item = u128>) -> Result<BinarySubgroup> {
        if bits == 0 || bits > MAX_BITS {
            return Err(Error::TooLarge(format!(
                "ambient width {bits} bits, supported 1..={MAX_BITS}"
            )));
        }
        let gens: Vec<u128> = generators.into_iter().collect();
        if let Some(g) = gens.iter().find(|&&g| g & !mask(bits) != 0) {
            return Err(Error::DimensionMismatch(format!(
                "generator {g:#x} does not fit in {bits} bits"
            )));
        }
        Ok(BinarySubgroup {
            bits,
            basis: echelon(gens),
        })
    }

    pub fn trivial(bits: usize) -> Result<BinarySubgroup> {
        BinarySubgroup::new(bits, [])
    }

    pub fn ambient(bits: usize) -> Result<BinarySubgroup> {
        BinarySubgroup::new(bits, (0..bits).map(|b| 1u128 << b))
    }

    /// Generators given as bit strings of length exactly `bits`.
    pub fn from_bitstrings<S: AsRef<str>>(bits: usize, gens: &[S]) -> Result<BinarySubgroup> {
        let parsed = gens
            .iter()
            .map(|s| parse_bitstring(s.as_ref(), bits))
            .collect::<Result<Vec<_>>>()?;
        BinarySubgroup::new(bits, parsed)
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[u128] {
        &self.basis
    }

    pub fn is_trivial(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_ambient(&self) -> bool {
        self.dim() == self.bits
    }

    pub fn contains(&self, x: u128) -> bool {
        if x & !mask(self.bits) != 0 {
            return false;
        }
        let mut v = x;
        for &b in &self.basis {
            if v & (1u128 << top_bit(b)) != 0 {
                v ^= b;
            }
        }
        v == 0
    }

    pub fn is_subgroup_of(&self, other: &BinarySubgroup) -> bool {
        self.bits == other.bits && self.basis.iter().all(|&b| other.contains(b))
    }

    /// All `2^dim` elements, ascending. Refuses above `2^24`.
    pub fn elements(&self) -> Result<Vec<u128>> {
        if self.dim() > 24 {
            return Err(Error::TooLarge(format!(
                "subgroup of order 2^{}",
                self.dim()
            )));
        }
        let mut out = vec![0u128];
        for &b in &self.basis {
            let more: Vec<u128> = out.iter().map(|&x| x ^ b).collect();
            out.extend(more);
        }
        out.sort_unstable();
        Ok(out)
    }

    /// Basis of the annihilator `{h : h·g = 0 for all g}`, in echelon form.
    /// Its rows label the cosets: `g ↦ (h_1·g, …, h_m·g)`.
    pub fn parity_check(&self) -> Vec<u128> {
        let pivots: u128 = self
            .basis
            .iter()
            .fold(0, |acc, &b| acc | (1u128 << top_bit(b)));
        let free = (0..self.bits).filter(|&c| pivots & (1u128 << c) == 0);
        echelon(free.map(|c| {
            let bit = 1u128 << c;
            self.basis
                .iter()
                .filter(|&&b| b & bit != 0)
                .fold(bit, |h, &b| h | (1u128 << top_bit(b)))
        }))
    }

    /// `log2 |G / self|`.
    pub fn codim(&self) -> usize {
        self.bits - self.dim()
    }

    /// Coset label of `g`: bit `t` (from the left, `codim` bits) is the
    /// parity of row `t` of the parity-check basis against `g`.
    pub fn label(&self, g: u128) -> u128 {
        label_with(&self.parity_check(), g)
    }

    pub fn intersect(&self, other: &BinarySubgroup) -> Result<BinarySubgroup> {
        subgroup_intersect(&[self.clone(), other.clone()])
    }

    pub fn to_bitstrings(&self) -> Vec<String> {
        self.basis
            .iter()
            .map(|&b| format_bitstring(b, self.bits))
            .collect()
    }
}

pub(crate) fn label_with(checks: &[u128], g: u128) -> u128 {
    let m = checks.len();
    checks
        .iter()
        .enumerate()
        .fold(0, |acc, (t, &h)| acc | (parity(h & g) << (m - 1 - t)))
}

impl fmt::Debug for BinarySubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.to_bitstrings().join(","))
    }
}

/// Intersection of subgroups of a common ambient space: the annihilator of
/// the sum of their annihilators.
pub fn subgroup_intersect(groups: &[BinarySubgroup]) -> Result<BinarySubgroup> {
    let Some(first) = groups.first() else {
        return Err(Error::DimensionMismatch(
            "intersection of an empty list".into(),
        ));
    };
    let bits = first.bits;
    if let Some(g) = groups.iter().find(|g| g.bits != bits) {
        return Err(Error::DimensionMismatch(format!(
            "ambient widths {bits} and {}",
            g.bits
        )));
    }
    let dual = BinarySubgroup::new(bits, groups.iter().flat_map(|g| g.parity_check()))?;
    BinarySubgroup::new(bits, dual.parity_check())
}

pub fn parse_bitstring(s: &str, bits: usize) -> Result<u128> {
    if s.len() != bits || !s.bytes().all(|b| b == b'0' || b == b'1') {
        return Err(Error::DimensionMismatch(format!(
            "generator {s:?} is not a {bits}-bit string"
        )));
    }
    Ok(s.bytes()
        .fold(0u128, |acc, b| (acc << 1) | (b - b'0') as u128))
}

pub fn format_bitstring(v: u128, bits: usize) -> String {
    (0..bits)
        .rev()
        .map(|i| if v >> i & 1 == 1 { '1' } else { '0' })
        .collect()
}

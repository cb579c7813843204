//! Text formats.
//!
//! Code file:
//! ```text
//! LRC1 q=256 poly=285 n=8 k=4
//! 1 0 17 ...
//! ```
//! followed by `k` rows of `n` field encodings. `poly` is present for
//! extension fields only.
//!
//! Locality file: one line `j: i1 i2 ...` per symbol.
//!
//! Quasi-uniform spec:
//! ```text
//! QUC1 k=4 n=7
//! G1: 00100000 00010000 ...
//! ```
//! with one line per coordinate listing bit-string generators (possibly none).
//!
//! Received word: `n` whitespace-separated entries, `?` marking an erasure.
//!
//! Blank lines and lines starting with `#` are ignored by every parser.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::code::{LinearCode, LocalityAssignment};
use crate::error::{Error, Result};
use crate::gf::Field;
use crate::linalg::Matrix;
use crate::quasi::{parse_bitstring, BinarySubgroup, QuasiUniformSpec};

/// Content lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// Parses `key=value` tokens after a magic word.
fn header(line: usize, text: &str, magic: &str) -> Result<BTreeMap<String, u64>> {
    let mut tokens = text.split_whitespace();
    if tokens.next() != Some(magic) {
        return Err(Error::parse(
            line,
            format!("expected header starting with {magic}"),
        ));
    }
    let mut out = BTreeMap::new();
    for tok in tokens {
        let (key, value) = tok
            .split_once('=')
            .ok_or_else(|| Error::parse(line, format!("malformed header field {tok:?}")))?;
        let value = value
            .parse()
            .map_err(|_| Error::parse(line, format!("non-numeric value in {tok:?}")))?;
        if out.insert(key.to_string(), value).is_some() {
            return Err(Error::parse(line, format!("duplicate header field {key}")));
        }
    }
    Ok(out)
}

fn required(fields: &BTreeMap<String, u64>, key: &str, line: usize) -> Result<u64> {
    fields
        .get(key)
        .copied()
        .ok_or_else(|| Error::parse(line, format!("missing header field {key}")))
}

fn to_u32(v: u64, what: &str, line: usize) -> Result<u32> {
    u32::try_from(v).map_err(|_| Error::parse(line, format!("{what} = {v} out of range")))
}

pub fn write_code(code: &LinearCode) -> String {
    let f = code.field();
    let mut out = format!("LRC1 q={}", f.order());
    if f.degree() > 1 {
        write!(
            out,
            " poly={}",
            f.modulus().expect("extension fields carry a modulus")
        )
        .unwrap();
    }
    writeln!(out, " n={} k={}", code.n(), code.k()).unwrap();
    for row in code.generator().to_rows() {
        let line: Vec<String> = row.iter().map(u32::to_string).collect();
        writeln!(out, "{}", line.join(" ")).unwrap();
    }
    out
}

pub fn parse_code(text: &str) -> Result<LinearCode> {
    let mut lines = content_lines(text);
    let (hl, h) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "empty code file"))?;
    let fields = header(hl, h, "LRC1")?;
    if let Some(key) = fields
        .keys()
        .find(|k| !["q", "poly", "n", "k"].contains(&k.as_str()))
    {
        return Err(Error::parse(hl, format!("unknown header field {key}")));
    }
    let q = to_u32(required(&fields, "q", hl)?, "q", hl)?;
    let poly = fields
        .get("poly")
        .map(|&p| to_u32(p, "poly", hl))
        .transpose()?;
    let n = required(&fields, "n", hl)? as usize;
    let k = required(&fields, "k", hl)? as usize;
    let field = Field::with_order(q, poly)?;
    let mut rows = Vec::with_capacity(k);
    for (ln, l) in lines {
        if rows.len() == k {
            return Err(Error::parse(ln, format!("more than k = {k} rows")));
        }
        let row = l
            .split_whitespace()
            .map(|t| {
                t.parse::<u32>()
                    .ok()
                    .filter(|&v| field.contains(v))
                    .ok_or_else(|| Error::parse(ln, format!("{t:?} is not an element of GF({q})")))
            })
            .collect::<Result<Vec<u32>>>()?;
        if row.len() != n {
            return Err(Error::parse(
                ln,
                format!("expected {n} entries, found {}", row.len()),
            ));
        }
        rows.push(row);
    }
    if rows.len() != k {
        return Err(Error::parse(
            hl,
            format!("expected {k} rows, found {}", rows.len()),
        ));
    }
    LinearCode::new(Matrix::from_rows(&field, &rows)?)
}

pub fn write_locality(assignment: &LocalityAssignment) -> String {
    let mut out = String::new();
    for (j, set) in assignment.sets().iter().enumerate() {
        let members: Vec<String> = set.iter().map(usize::to_string).collect();
        writeln!(out, "{}: {}", j + 1, members.join(" ")).unwrap();
    }
    out
}

/// Lines may come in any order but must cover `1..=n` exactly once.
pub fn parse_locality(text: &str) -> Result<LocalityAssignment> {
    let mut sets: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (ln, l) in content_lines(text) {
        let (head, rest) = l
            .split_once(':')
            .ok_or_else(|| Error::parse(ln, "expected `j: i1 i2 ...`"))?;
        let j: usize = head
            .trim()
            .parse()
            .map_err(|_| Error::parse(ln, format!("bad symbol index {head:?}")))?;
        let set = rest
            .split_whitespace()
            .map(|t| {
                t.parse()
                    .map_err(|_| Error::parse(ln, format!("bad index {t:?}")))
            })
            .collect::<Result<Vec<usize>>>()?;
        if sets.insert(j, set).is_some() {
            return Err(Error::parse(ln, format!("symbol {j} listed twice")));
        }
    }
    let n = sets.len();
    if let Some(j) = (1..=n).find(|j| !sets.contains_key(j)) {
        return Err(Error::parse(0, format!("no repair set for symbol {j}")));
    }
    LocalityAssignment::new(sets.into_values().collect())
}

pub fn write_quasi_spec(spec: &QuasiUniformSpec) -> String {
    let mut out = format!("QUC1 k={} n={}\n", spec.k(), spec.n());
    for (i, g) in spec.groups().iter().enumerate() {
        let gens = g.to_bitstrings();
        if gens.is_empty() {
            writeln!(out, "G{}:", i + 1).unwrap();
        } else {
            writeln!(out, "G{}: {}", i + 1, gens.join(" ")).unwrap();
        }
    }
    out
}

pub fn parse_quasi_spec(text: &str) -> Result<QuasiUniformSpec> {
    let mut lines = content_lines(text);
    let (hl, h) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "empty spec file"))?;
    let fields = header(hl, h, "QUC1")?;
    let k = required(&fields, "k", hl)? as usize;
    let n = required(&fields, "n", hl)? as usize;
    if k == 0 || 2 * k > crate::quasi::MAX_BITS {
        return Err(Error::parse(hl, format!("k = {k} unsupported")));
    }
    let mut groups = Vec::with_capacity(n);
    for (ln, l) in lines {
        let (head, rest) = l
            .split_once(':')
            .ok_or_else(|| Error::parse(ln, "expected `G<i>: gens...`"))?;
        let expected = format!("G{}", groups.len() + 1);
        if head.trim() != expected {
            return Err(Error::parse(
                ln,
                format!("expected {expected}, found {:?}", head.trim()),
            ));
        }
        let gens = rest
            .split_whitespace()
            .map(|t| parse_bitstring(t, 2 * k).map_err(|e| Error::parse(ln, e.to_string())))
            .collect::<Result<Vec<u128>>>()?;
        groups.push(BinarySubgroup::new(2 * k, gens)?);
    }
    if groups.len() != n {
        return Err(Error::parse(
            hl,
            format!("expected {n} subgroups, found {}", groups.len()),
        ));
    }
    QuasiUniformSpec::new(k, groups)
}

pub fn write_word(word: &[Option<u32>]) -> String {
    let parts: Vec<String> = word
        .iter()
        .map(|s| s.map_or_else(|| "?".to_string(), |v| v.to_string()))
        .collect();
    parts.join(" ")
}

pub fn parse_word(text: &str) -> Result<Vec<Option<u32>>> {
    let mut out = Vec::new();
    for (ln, l) in content_lines(text) {
        for t in l.split_whitespace() {
            if t == "?" {
                out.push(None);
            } else {
                let v = t
                    .parse()
                    .map_err(|_| Error::parse(ln, format!("bad symbol {t:?}")))?;
                out.push(Some(v));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quasi::{family_build, Family};

    fn sample_code() -> LinearCode {
        let f = Field::with_order(16, None).unwrap();
        let g = Matrix::from_rows(&f, &[vec![1, 0, 7, 15], vec![0, 1, 3, 9]]).unwrap();
        LinearCode::new(g).unwrap()
    }

    #[test]
    fn code_round_trip() {
        let c = sample_code();
        let text = write_code(&c);
        assert!(text.starts_with("LRC1 q=16 poly=19 n=4 k=2\n"));
        assert_eq!(parse_code(&text).unwrap(), c);
    }

    #[test]
    fn prime_field_header_has_no_poly() {
        let f = Field::with_order(7, None).unwrap();
        let c = LinearCode::new(Matrix::from_rows(&f, &[vec![1, 2, 3]]).unwrap()).unwrap();
        let text = write_code(&c);
        assert_eq!(text, "LRC1 q=7 n=3 k=1\n1 2 3\n");
        assert_eq!(parse_code(&text).unwrap(), c);
    }

    #[test]
    fn code_parse_errors() {
        assert!(matches!(parse_code(""), Err(Error::Parse { .. })));
        assert!(matches!(
            parse_code("LRC1 q=7 n=3 k=1\n1 2\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_code("LRC1 q=7 n=3 k=1\n1 2 9\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_code("LRC1 q=7 n=3 k=2\n1 2 3\n"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_code("LRC2 q=7 n=3 k=1\n1 2 3\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert_eq!(
            parse_code("LRC1 q=6 n=3 k=1\n1 2 3\n").unwrap_err(),
            Error::NotPrime(6)
        );
    }

    #[test]
    fn locality_round_trip() {
        let a = LocalityAssignment::from_blocks(4, &[vec![1, 3], vec![2, 4]]).unwrap();
        let text = write_locality(&a);
        assert_eq!(text, "1: 1 3\n2: 2 4\n3: 1 3\n4: 2 4\n");
        assert_eq!(parse_locality(&text).unwrap(), a);
        assert_eq!(
            parse_locality("2: 2 4\n1: 3 1\n3: 1 3\n4: 4 2\n").unwrap(),
            a
        );
        assert!(parse_locality("1: 1\n3: 3\n").is_err());
        assert!(parse_locality("1: x\n").is_err());
    }

    #[test]
    fn quasi_spec_round_trip() {
        let inst = family_build(Family::C1_43, 1).unwrap();
        let text = write_quasi_spec(&inst.spec);
        assert!(text.starts_with("QUC1 k=4 n=8\nG1: "));
        assert_eq!(parse_quasi_spec(&text).unwrap(), inst.spec);
        let trivial = "QUC1 k=1 n=2\nG1:\nG2:\n";
        let s = parse_quasi_spec(trivial).unwrap();
        assert_eq!(write_quasi_spec(&s), trivial);
        assert!(parse_quasi_spec("QUC1 k=1 n=2\nG1: 101\nG2:\n").is_err());
        assert!(parse_quasi_spec("QUC1 k=1 n=2\nG2:\nG1:\n").is_err());
    }

    #[test]
    fn word_round_trip() {
        let w = vec![Some(3), None, Some(0), None];
        assert_eq!(write_word(&w), "3 ? 0 ?");
        assert_eq!(parse_word("3 ? 0 ?\n").unwrap(), w);
        assert!(parse_word("3 x").is_err());
    }
}

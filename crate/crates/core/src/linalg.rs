//! Dense matrices over a [`Field`].
//!
//! Column and row indices in this module are 0-based. The code-level APIs
//! (`code`, `transforms`, `construct`) speak in 1-based symbols.

use itertools::Itertools;
use rand::Rng;

use crate::error::{Error, Result};
use crate::gf::Field;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl Matrix {
    pub fn new(field: &Field, rows: usize, cols: usize, data: Vec<u32>) -> Result<Matrix> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(bad) = data.iter().find(|&&v| !field.contains(v)) {
            return Err(Error::BadParams(format!(
                "entry {bad} is not an element of a field of order {}",
                field.order()
            )));
        }
        Ok(Matrix {
            field: field.clone(),
            rows,
            cols,
            data,
        })
    }

    pub fn from_rows(field: &Field, rows: &[Vec<u32>]) -> Result<Matrix> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Matrix::new(field, rows.len(), cols, rows.concat())
    }

    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: &Field, size: usize) -> Matrix {
        let mut m = Matrix::zeros(field, size, size);
        for i in 0..size {
            m.set(i, i, 1);
        }
        m
    }

    /// Matrix with i.i.d. uniform entries.
    pub fn random<R: Rng + ?Sized>(field: &Field, rows: usize, cols: usize, rng: &mut R) -> Matrix {
        let q = field.order();
        let data = (0..rows * cols).map(|_| rng.gen_range(0..q)).collect();
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        debug_assert!(self.field.contains(v));
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    /// Submatrix keeping the given columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(self.rows * cols.len());
        for r in 0..self.rows {
            data.extend(cols.iter().map(|&c| self.get(r, c)));
        }
        Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: cols.len(),
            data,
        }
    }

    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &r in rows {
            data.extend_from_slice(self.row(r));
        }
        Matrix {
            field: self.field.clone(),
            rows: rows.len(),
            cols: self.cols,
            data,
        }
    }

    /// Horizontal concatenation `(self | other)`.
    pub fn hstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows || self.field != other.field {
            return Err(Error::DimensionMismatch(format!(
                "cannot place {}x{} beside {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut data = Vec::with_capacity(self.rows * (self.cols + other.cols));
        for r in 0..self.rows {
            data.extend_from_slice(self.row(r));
            data.extend_from_slice(other.row(r));
        }
        Ok(Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols + other.cols,
            data,
        })
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows || self.field != other.field {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    let v = f.add(out.get(r, c), f.mul(a, other.get(k, c)));
                    out.set(r, c, v);
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix: the codeword of `message` when `self` is a
    /// generator matrix.
    pub fn left_mul(&self, message: &[u32]) -> Result<Vec<u32>> {
        if message.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "message of length {} for {} rows",
                message.len(),
                self.rows
            )));
        }
        let f = &self.field;
        let mut out = vec![0u32; self.cols];
        for (r, &coef) in message.iter().enumerate() {
            if coef == 0 {
                continue;
            }
            for (o, &g) in out.iter_mut().zip(self.row(r)) {
                *o = f.add(*o, f.mul(coef, g));
            }
        }
        Ok(out)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// `row[target] -= factor * row[source]`
    fn eliminate(&mut self, target: usize, source: usize, factor: u32, from_col: usize) {
        let f = self.field.clone();
        for c in from_col..self.cols {
            let s = self.get(source, c);
            if s != 0 {
                let v = f.sub(self.get(target, c), f.mul(factor, s));
                self.set(target, c, v);
            }
        }
    }

    fn scale_row(&mut self, r: usize, factor: u32) {
        let f = self.field.clone();
        for c in 0..self.cols {
            let v = f.mul(factor, self.get(r, c));
            self.set(r, c, v);
        }
    }

    /// Reduced row echelon form and pivot columns. Pivots are taken as the
    /// first nonzero entry in column order, so results are deterministic.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let f = self.field.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            m.swap_rows(r, pr);
            let inv = f.inv(m.get(r, c));
            m.scale_row(r, inv);
            for i in 0..m.rows {
                if i != r {
                    let factor = m.get(i, c);
                    if factor != 0 {
                        m.eliminate(i, r, factor, c);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let f = self.field.clone();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            m.swap_rows(r, pr);
            let inv = f.inv(m.get(r, c));
            for i in r + 1..m.rows {
                let x = m.get(i, c);
                if x != 0 {
                    m.eliminate(i, r, f.mul(x, inv), c);
                }
            }
            r += 1;
        }
        r
    }

    /// Rank of the submatrix on the given columns.
    pub fn rank_of_columns(&self, cols: &[usize]) -> usize {
        self.select_columns(cols).rank()
    }

    pub fn is_square_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }
}

/// Solves `Σ x_t · M[:, cols[t]] = v`. Returns one coefficient vector when `v`
/// lies in the span of the chosen columns (free variables set to zero).
pub fn in_span(m: &Matrix, cols: &[usize], v: &[u32]) -> Result<Option<Vec<u32>>> {
    if v.len() != m.rows() {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} against columns of length {}",
            v.len(),
            m.rows()
        )));
    }
    if let Some(&bad) = cols.iter().find(|&&c| c >= m.cols()) {
        return Err(Error::DimensionMismatch(format!(
            "column {bad} out of range for {} columns",
            m.cols()
        )));
    }
    let target = Matrix::new(m.field(), m.rows(), 1, v.to_vec())?;
    let augmented = m.select_columns(cols).hstack(&target)?;
    let (reduced, pivots) = augmented.rref();
    if pivots.last() == Some(&cols.len()) {
        return Ok(None);
    }
    let mut x = vec![0u32; cols.len()];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = reduced.get(row, cols.len());
    }
    Ok(Some(x))
}

/// A minimally dependent set of columns with its (normalized) relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    /// Sorted 0-based column indices.
    pub columns: Vec<usize>,
    /// `Σ coefficients[t] · col(columns[t]) = 0`, all nonzero, first one is 1.
    pub coefficients: Vec<u32>,
}

impl Circuit {
    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn contains(&self, col: usize) -> bool {
        self.columns.binary_search(&col).is_ok()
    }

    /// Re-checks the relation and the minimality of the set against `m`.
    pub fn verify(&self, m: &Matrix) -> bool {
        let f = m.field();
        if self.coefficients.contains(&0) {
            return false;
        }
        for r in 0..m.rows() {
            let s = self
                .columns
                .iter()
                .zip(&self.coefficients)
                .fold(0, |acc, (&c, &b)| f.add(acc, f.mul(b, m.get(r, c))));
            if s != 0 {
                return false;
            }
        }
        let s = self.columns.len();
        self.columns
            .iter()
            .copied()
            .combinations(s - 1)
            .all(|sub| m.rank_of_columns(&sub) == s - 1)
    }
}

/// All circuits of `m` with at most `max_size` columns, each reported once,
/// ordered by their column sets in depth-first lexicographic order.
pub fn circuits(m: &Matrix, max_size: usize) -> Vec<Circuit> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    extend_independent(m, max_size, 0, &mut current, &mut out);
    out
}

/// Circuits of size at most `max_size` that contain column `j`.
pub fn circuits_through(m: &Matrix, j: usize, max_size: usize) -> Vec<Circuit> {
    circuits(m, max_size)
        .into_iter()
        .filter(|c| c.contains(j))
        .collect()
}

fn extend_independent(
    m: &Matrix,
    max_size: usize,
    start: usize,
    current: &mut Vec<usize>,
    out: &mut Vec<Circuit>,
) {
    if current.len() >= max_size {
        return;
    }
    let f = m.field();
    for c in start..m.cols() {
        let col = m.column(c);
        // `current` is independent, so a dependency involving `c` is unique up to scale
        match in_span(m, current, &col).expect("indices in range") {
            Some(lambda) => {
                if lambda.iter().all(|&x| x != 0) {
                    let mut columns = current.clone();
                    columns.push(c);
                    let mut coefficients = lambda;
                    coefficients.push(f.neg(1));
                    let norm = f.inv(coefficients[0]);
                    for b in coefficients.iter_mut() {
                        *b = f.mul(*b, norm);
                    }
                    out.push(Circuit {
                        columns,
                        coefficients,
                    });
                }
            }
            None => {
                current.push(c);
                extend_independent(m, max_size, c + 1, current, out);
                current.pop();
            }
        }
    }
}

/// A `t x w` Cauchy matrix `B[i][j] = 1 / (x_i + y_j)` from the first `t + w`
/// field elements: `x_i = e_i` and `y_j = -e_{t+j}`.
pub fn cauchy_block(field: &Field, t: usize, w: usize) -> Result<Matrix> {
    if (field.order() as usize) < t + w {
        return Err(Error::FieldTooSmall {
            q: field.order(),
            needed: t + w,
        });
    }
    let xs: Vec<u32> = (0..t as u32).collect();
    let ys: Vec<u32> = (t as u32..(t + w) as u32).map(|e| field.neg(e)).collect();
    cauchy_block_with(field, &xs, &ys)
}

/// Cauchy matrix `B[i][j] = 1 / (xs[i] + ys[j])`. The `xs` must be distinct,
/// the `ys` must be distinct and no sum may vanish; then every square
/// submatrix is invertible.
pub fn cauchy_block_with(field: &Field, xs: &[u32], ys: &[u32]) -> Result<Matrix> {
    if !xs.iter().all_unique() || !ys.iter().all_unique() {
        return Err(Error::BadParams("Cauchy nodes must be distinct".into()));
    }
    let mut data = Vec::with_capacity(xs.len() * ys.len());
    for &x in xs {
        for &y in ys {
            let s = field.add(x, y);
            if s == 0 {
                return Err(Error::BadParams(format!(
                    "Cauchy nodes {x} and {y} sum to zero"
                )));
            }
            data.push(field.inv(s));
        }
    }
    Matrix::new(field, xs.len(), ys.len(), data)
}

/// True iff every square submatrix of every size is invertible.
pub fn all_submatrices_invertible(b: &Matrix) -> Result<bool> {
    let side = b.rows().min(b.cols());
    if side > 6 {
        return Err(Error::TooLargeToCheck(side));
    }
    for size in 1..=side {
        for rows in (0..b.rows()).combinations(size) {
            let sub = b.select_rows(&rows);
            for cols in (0..b.cols()).combinations(size) {
                if !sub.select_columns(&cols).is_square_invertible() {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(q: u32) -> Field {
        Field::with_order(q, None).unwrap()
    }

    #[test]
    fn rank_examples() {
        let f = gf(2);
        assert_eq!(Matrix::identity(&f, 3).rank(), 3);
        assert_eq!(Matrix::zeros(&f, 3, 4).rank(), 0);
        let m = Matrix::from_rows(&f, &[vec![1, 0, 1], vec![0, 1, 1], vec![1, 1, 0]]).unwrap();
        assert_eq!(m.rank(), 2);
        assert_eq!(m.rref().1.len(), 2);
    }

    #[test]
    fn in_span_examples() {
        let f = gf(2);
        let m = Matrix::identity(&f, 3);
        assert_eq!(in_span(&m, &[0, 1], &[1, 1, 0]).unwrap(), Some(vec![1, 1]));
        assert_eq!(in_span(&m, &[0, 1], &[0, 0, 1]).unwrap(), None);
        assert!(matches!(
            in_span(&m, &[0, 1], &[1, 1]),
            Err(Error::DimensionMismatch(_))
        ));

        let f3 = gf(3);
        let m = Matrix::from_rows(&f3, &[vec![1], vec![2]]).unwrap();
        assert_eq!(in_span(&m, &[0], &[2, 1]).unwrap(), Some(vec![2]));
    }

    #[test]
    fn circuit_examples() {
        let f = gf(2);
        // columns e1, e2, e1 + e2
        let m = Matrix::from_rows(&f, &[vec![1, 0, 1], vec![0, 1, 1]]).unwrap();
        let cs = circuits_through(&m, 2, 3);
        assert_eq!(
            cs,
            vec![Circuit {
                columns: vec![0, 1, 2],
                coefficients: vec![1, 1, 1]
            }]
        );
        assert!(cs[0].verify(&m));

        assert!(circuits(&Matrix::identity(&f, 4), 4).is_empty());

        // duplicate column
        let m = Matrix::from_rows(&f, &[vec![1, 1], vec![0, 0]]).unwrap();
        let cs = circuits_through(&m, 1, 2);
        assert_eq!(cs.len(), 1);
        assert_eq!(cs[0].columns, vec![0, 1]);
        assert_eq!(cs[0].coefficients, vec![1, 1]);
    }

    #[test]
    fn zero_column_is_a_singleton_circuit() {
        let f = gf(5);
        let m = Matrix::from_rows(&f, &[vec![1, 0], vec![2, 0]]).unwrap();
        let cs = circuits(&m, 2);
        assert_eq!(cs.len(), 1);
        assert_eq!(cs[0].columns, vec![1]);
    }

    #[test]
    fn circuits_respect_max_size() {
        let f = gf(2);
        let m = Matrix::from_rows(&f, &[vec![1, 0, 1], vec![0, 1, 1]]).unwrap();
        assert!(circuits(&m, 2).is_empty());
    }

    #[test]
    fn cauchy_gf5_explicit_nodes() {
        let f = gf(5);
        let b = cauchy_block_with(&f, &[0, 1], &[1, 2]).unwrap();
        assert_eq!(b.to_rows(), vec![vec![1, 3], vec![3, 2]]);
        // det = 1*2 - 3*3 = -7 = 3 mod 5
        assert!(b.is_square_invertible());
        assert!(all_submatrices_invertible(&b).unwrap());
    }

    #[test]
    fn cauchy_small_cases() {
        let b = cauchy_block(&gf(2), 1, 1).unwrap();
        assert_ne!(b.get(0, 0), 0);
        assert_eq!(
            cauchy_block(&gf(2), 2, 2).unwrap_err(),
            Error::FieldTooSmall { q: 2, needed: 4 }
        );
    }

    #[test]
    fn cauchy_blocks_are_superregular() {
        for q in [4, 5, 7, 8, 9, 16] {
            let f = gf(q);
            for t in 1..=4 {
                for w in 1..=4 {
                    if t + w > q as usize {
                        continue;
                    }
                    let b = cauchy_block(&f, t, w).unwrap();
                    assert!(all_submatrices_invertible(&b).unwrap(), "q={q} t={t} w={w}");
                }
            }
        }
    }

    #[test]
    fn minor_check_rejects_singular() {
        let f = gf(2);
        let with_zero = Matrix::from_rows(&f, &[vec![1, 0], vec![1, 1]]).unwrap();
        assert!(!all_submatrices_invertible(&with_zero).unwrap());
        let ones = Matrix::from_rows(&f, &[vec![1, 1], vec![1, 1]]).unwrap();
        assert!(!all_submatrices_invertible(&ones).unwrap());
        let big = Matrix::zeros(&f, 7, 7);
        assert_eq!(
            all_submatrices_invertible(&big).unwrap_err(),
            Error::TooLargeToCheck(7)
        );
    }
}

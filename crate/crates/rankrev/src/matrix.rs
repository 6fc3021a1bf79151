//! Dense matrix storage and elementary operations.
//!
//! `DenseMatrix` stores 64-bit IEEE values in **row-major** order; every
//! routine in this crate assumes that layout. Indices are 0-based
//! throughout.

use crate::error::{Error, Result};

/// Machine epsilon for `f64`.
pub const EPS: f64 = f64::EPSILON;

/// A dense real matrix with row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    /// Zero matrix of the given shape.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    /// Identity matrix, possibly rectangular (ones on the main diagonal).
    pub fn identity(rows: usize, cols: usize) -> Self {
        let mut a = Self::zeros(rows, cols);
        for i in 0..rows.min(cols) {
            a[(i, i)] = 1.0;
        }
        a
    }

    /// Build from a row-major data vector. Panics if the length disagrees
    /// with the shape.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(
            data.len(),
            rows * cols,
            "data length {} does not match {rows}x{cols}",
            data.len()
        );
        Self { rows, cols, data }
    }

    /// Build from nested row slices. Panics on ragged input.
    pub fn from_rows(rows: &[&[f64]]) -> Self {
        let m = rows.len();
        let n = if m == 0 { 0 } else { rows[0].len() };
        let mut data = Vec::with_capacity(m * n);
        for r in rows {
            assert_eq!(r.len(), n, "ragged rows");
            data.extend_from_slice(r);
        }
        Self { rows: m, cols: n, data }
    }

    /// Build entrywise from a function of (row, col).
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Square diagonal matrix from a slice.
    pub fn diag(values: &[f64]) -> Self {
        let n = values.len();
        let mut a = Self::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            a[(i, i)] = v;
        }
        a
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Raw row-major data.
    pub fn data(&self) -> &[f64] {
        &self.data
    }

    /// Row `i` as a slice.
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// True when every entry is finite (no NaN or infinity).
    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// Largest absolute entry; 0 for an empty matrix.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    /// Frobenius norm.
    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    /// Matrix product `self * rhs`.
    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "inner dimensions must agree");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a_il = self[(i, l)];
                if a_il == 0.0 {
                    continue;
                }
                let rhs_row = rhs.row(l);
                let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (o, r) in out_row.iter_mut().zip(rhs_row) {
                    *o += a_il * r;
                }
            }
        }
        out
    }

    /// Entrywise difference `self - rhs`.
    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| a - b)
            .collect();
        Self {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    /// Entrywise scaling.
    pub fn scale(&self, factor: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * factor).collect(),
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// Copy of column `j`.
    pub fn col(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// Submatrix addressed by a selection; indices may repeat positions in
    /// any order and are validated against the shape.
    pub fn extract(&self, sel: &Selection) -> Result<Self> {
        for &i in &sel.row_idx {
            if i >= self.rows {
                return Err(Error::IndexOutOfRange { index: i, dim: self.rows });
            }
        }
        for &j in &sel.col_idx {
            if j >= self.cols {
                return Err(Error::IndexOutOfRange { index: j, dim: self.cols });
            }
        }
        let mut out = Self::zeros(sel.row_idx.len(), sel.col_idx.len());
        for (p, &i) in sel.row_idx.iter().enumerate() {
            for (q, &j) in sel.col_idx.iter().enumerate() {
                out[(p, q)] = self[(i, j)];
            }
        }
        Ok(out)
    }

    /// Rows and columns gathered by position lists (no validation; used on
    /// permutation vectors built internally).
    pub(crate) fn gather(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut out = Self::zeros(rows.len(), cols.len());
        for (p, &i) in rows.iter().enumerate() {
            for (q, &j) in cols.iter().enumerate() {
                out[(p, q)] = self[(i, j)];
            }
        }
        out
    }
}

impl std::ops::Index<(usize, usize)> for DenseMatrix {
    type Output = f64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for DenseMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Ordered row/column index lists identifying a submatrix of some host
/// matrix. Indices must be distinct and in range for the host.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Selection {
    pub row_idx: Vec<usize>,
    pub col_idx: Vec<usize>,
}

impl Selection {
    pub fn new(row_idx: Vec<usize>, col_idx: Vec<usize>) -> Self {
        Self { row_idx, col_idx }
    }

    /// Column subset with all rows selected, as used by QR-mode searches.
    pub fn columns(m: usize, col_idx: Vec<usize>) -> Self {
        Self {
            row_idx: (0..m).collect(),
            col_idx,
        }
    }

    /// Validate distinctness and range against an `m x n` host.
    pub fn validate(&self, m: usize, n: usize) -> Result<()> {
        check_distinct_in_range(&self.row_idx, m)?;
        check_distinct_in_range(&self.col_idx, n)
    }

    /// Same index sets with both lists sorted ascending.
    pub fn canonical(&self) -> Self {
        let mut rows = self.row_idx.clone();
        let mut cols = self.col_idx.clone();
        rows.sort_unstable();
        cols.sort_unstable();
        Self { row_idx: rows, col_idx: cols }
    }
}

fn check_distinct_in_range(idx: &[usize], dim: usize) -> Result<()> {
    let mut seen = vec![false; dim];
    for &i in idx {
        if i >= dim {
            return Err(Error::IndexOutOfRange { index: i, dim });
        }
        if seen[i] {
            return Err(Error::InvalidArgument(format!("duplicate index {i}")));
        }
        seen[i] = true;
    }
    Ok(())
}

/// Which side of the equation the triangular matrix sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// Solve `T * X = B`.
    Left,
    /// Solve `X * T = B`.
    Right,
}

/// Triangle shape of the coefficient matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Triangle {
    Upper,
    Lower,
}

/// Solve a triangular system by substitution.
///
/// `T` must be square with nonzero diagonal; a zero diagonal entry yields
/// [`Error::SingularDiagonal`] naming the offending index. Entries of `T`
/// on the wrong side of the diagonal are ignored.
pub fn solve_triangular(
    t: &DenseMatrix,
    b: &DenseMatrix,
    side: Side,
    triangle: Triangle,
) -> Result<DenseMatrix> {
    let n = t.rows();
    assert_eq!(n, t.cols(), "T must be square");
    for i in 0..n {
        if t[(i, i)] == 0.0 {
            return Err(Error::SingularDiagonal { index: i });
        }
    }
    match side {
        Side::Left => {
            assert_eq!(b.rows(), n, "shape mismatch in T * X = B");
            let mut x = b.clone();
            let nrhs = b.cols();
            match triangle {
                Triangle::Lower => {
                    for i in 0..n {
                        for l in 0..i {
                            let t_il = t[(i, l)];
                            for j in 0..nrhs {
                                let v = x[(l, j)];
                                x[(i, j)] -= t_il * v;
                            }
                        }
                        let d = t[(i, i)];
                        for j in 0..nrhs {
                            x[(i, j)] /= d;
                        }
                    }
                }
                Triangle::Upper => {
                    for i in (0..n).rev() {
                        for l in i + 1..n {
                            let t_il = t[(i, l)];
                            for j in 0..nrhs {
                                let v = x[(l, j)];
                                x[(i, j)] -= t_il * v;
                            }
                        }
                        let d = t[(i, i)];
                        for j in 0..nrhs {
                            x[(i, j)] /= d;
                        }
                    }
                }
            }
            Ok(x)
        }
        Side::Right => {
            // X * T = B  <=>  T' * X' = B' with the opposite triangle.
            let flipped = match triangle {
                Triangle::Upper => Triangle::Lower,
                Triangle::Lower => Triangle::Upper,
            };
            let xt = solve_triangular(&t.transpose(), &b.transpose(), Side::Left, flipped)?;
            Ok(xt.transpose())
        }
    }
}

/// Identity permutation, `perm[position] = original index`.
pub(crate) fn identity_perm(n: usize) -> Vec<usize> {
    (0..n).collect()
}

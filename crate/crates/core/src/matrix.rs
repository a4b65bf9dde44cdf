//! Small dense row-major matrices and the linear algebra the merge needs.

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::{Error, Result};

#[derive(Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(DenseMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let data = rows.iter().flatten().copied().collect();
        Ok(DenseMatrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &v) in diag.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Two distinct rows borrowed mutably at once.
    pub fn row_pair_mut(&mut self, i: usize, j: usize) -> (&mut [f64], &mut [f64]) {
        assert!(
            i != j && i < self.rows && j < self.rows,
            "rows {i} and {j} of {}",
            self.rows
        );
        let c = self.cols;
        let (lo, hi) = (i.min(j), i.max(j));
        let (head, tail) = self.data.split_at_mut(hi * c);
        let a = &mut head[lo * c..(lo + 1) * c];
        let b = &mut tail[..c];
        if i < j {
            (a, b)
        } else {
            (b, a)
        }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
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

    pub fn mul(&self, rhs: &DenseMatrix) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                let src = rhs.row(k);
                for (o, &b) in out.row_mut(i).iter_mut().zip(src) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// `self^T * rhs` without forming the transpose.
    pub fn tr_mul(&self, rhs: &DenseMatrix) -> Result<Self> {
        if self.rows != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "({}x{})^T times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.cols, rhs.cols);
        for k in 0..self.rows {
            let lhs_row = self.row(k);
            let rhs_row = rhs.row(k);
            for (i, &a) in lhs_row.iter().enumerate() {
                if a == 0.0 {
                    continue;
                }
                for (o, &b) in out.row_mut(i).iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), v)).collect())
    }

    /// `self * v` with compensated dot products.
    pub fn mul_vec_compensated(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| dot_compensated(self.row(i), v))
            .collect())
    }

    /// `self^T * v`.
    pub fn tr_mul_vec(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "({}x{})^T times vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let mut out = vec![0.0; self.cols];
        for (i, &s) in v.iter().enumerate() {
            for (o, &a) in out.iter_mut().zip(self.row(i)) {
                *o += s * a;
            }
        }
        Ok(out)
    }

    pub fn scale(&mut self, s: f64) {
        self.data.iter_mut().for_each(|v| *v *= s);
    }

    pub fn add_scaled(&mut self, other: &DenseMatrix, s: f64) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch("matrix sum".into()));
        }
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a += s * b;
        }
        Ok(())
    }

    /// The submatrix formed by the given rows and columns, both strictly ascending.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Result<Self> {
        check_index_set(rows, self.rows)?;
        check_index_set(cols, self.cols)?;
        let mut out = Self::zeros(rows.len(), cols.len());
        for (oi, &i) in rows.iter().enumerate() {
            for (oj, &j) in cols.iter().enumerate() {
                out[(oi, oj)] = self[(i, j)];
            }
        }
        Ok(out)
    }

    pub fn max_abs_diff(&self, other: &DenseMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Largest absolute row sum, an upper bound on the spectral radius.
    pub fn norm_inf(&self) -> f64 {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn is_symmetric(&self, rel_tol: f64) -> bool {
        if !self.is_square() {
            return false;
        }
        let scale = self
            .data
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()))
            .max(f64::MIN_POSITIVE);
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                if (self[(i, j)] - self[(j, i)]).abs() > rel_tol * scale {
                    return false;
                }
            }
        }
        true
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = f64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

fn check_index_set(indices: &[usize], extent: usize) -> Result<()> {
    if let Some(&bad) = indices.iter().find(|&&i| i >= extent) {
        return Err(Error::IndexOutOfRange { index: bad, extent });
    }
    if indices.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::NonAscendingIndices);
    }
    Ok(())
}

/// The entries of `v` at the given strictly ascending indices.
pub fn subvector(v: &[f64], indices: &[usize]) -> Result<Vec<f64>> {
    check_index_set(indices, v.len())?;
    Ok(indices.iter().map(|&i| v[i]).collect())
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Sum of products carried in two doubles (error-free transformations), good
/// to about twice the working precision before the final rounding.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    err: f64,
}

impl CompensatedSum {
    pub fn new(start: f64) -> Self {
        CompensatedSum {
            sum: start,
            err: 0.0,
        }
    }

    pub fn add(&mut self, v: f64) {
        let s = self.sum + v;
        let z = s - self.sum;
        self.err += (self.sum - (s - z)) + (v - z);
        self.sum = s;
    }

    pub fn add_product(&mut self, a: f64, b: f64) {
        let p = a * b;
        self.err += a.mul_add(b, -p);
        self.add(p);
    }

    pub fn value(&self) -> f64 {
        self.sum + self.err
    }
}

pub fn dot_compensated(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = CompensatedSum::default();
    for (x, y) in a.iter().zip(b) {
        acc.add_product(*x, *y);
    }
    acc.value()
}

pub fn norm_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

const REFINEMENT_STEPS: usize = 4;

/// Lower-triangular Cholesky factor `L` with `A = L L^T`.
#[derive(Debug, Clone)]
pub struct Cholesky {
    factor: DenseMatrix,
}

impl Cholesky {
    pub fn factor(a: &DenseMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::DimensionMismatch(
                "cholesky of a non-square matrix".into(),
            ));
        }
        let n = a.rows();
        let mut l = DenseMatrix::zeros(n, n);
        for j in 0..n {
            let mut diag = a[(j, j)];
            for k in 0..j {
                diag -= l[(j, k)] * l[(j, k)];
            }
            if diag.is_nan() || diag <= 0.0 || !diag.is_finite() {
                return Err(Error::NotPositiveDefinite {
                    pivot: j,
                    value: diag,
                });
            }
            let ljj = diag.sqrt();
            l[(j, j)] = ljj;
            for i in (j + 1)..n {
                let mut s = a[(i, j)];
                for k in 0..j {
                    s -= l[(i, k)] * l[(j, k)];
                }
                l[(i, j)] = s / ljj;
            }
        }
        Ok(Cholesky { factor: l })
    }

    pub fn dim(&self) -> usize {
        self.factor.rows()
    }

    /// Squared diagonal of the factor, i.e. the pivots of `A = L D L^T`.
    pub fn pivots(&self) -> Vec<f64> {
        (0..self.dim())
            .map(|i| self.factor[(i, i)].powi(2))
            .collect()
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.dim();
        assert_eq!(b.len(), n);
        let l = &self.factor;
        let mut y = b.to_vec();
        for i in 0..n {
            let mut s = y[i];
            for k in 0..i {
                s -= l[(i, k)] * y[k];
            }
            y[i] = s / l[(i, i)];
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in (i + 1)..n {
                s -= l[(k, i)] * y[k];
            }
            y[i] = s / l[(i, i)];
        }
        y
    }

    /// Solve with iterative refinement against the original matrix.
    ///
    /// Residuals are accumulated in compensated arithmetic, so the forward
    /// error approaches working precision even when `a` is ill-conditioned
    /// (Bernstein Gramians lose about one digit per degree).
    pub fn solve_refined(&self, a: &DenseMatrix, b: &[f64]) -> Vec<f64> {
        let mut x = self.solve(b);
        for _ in 0..REFINEMENT_STEPS {
            let residual: Vec<f64> = (0..a.rows())
                .map(|i| {
                    let mut acc = CompensatedSum::new(b[i]);
                    for (aij, xj) in a.row(i).iter().zip(&x) {
                        acc.add_product(-aij, *xj);
                    }
                    acc.value()
                })
                .collect();
            let correction = self.solve(&residual);
            x.iter_mut().zip(&correction).for_each(|(xi, ci)| *xi += ci);
            if norm_inf(&correction) <= f64::EPSILON * norm_inf(&x) {
                break;
            }
        }
        x
    }
}

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Range;

use crate::math::*;
use crate::{Error, Result};

/// Dense real matrix stored column-major.
///
/// Every entry is finite. Zero-column matrices are allowed (they arise as the
/// orthogonal complement of a square orthogonal matrix); zero-row ones are not.
#[derive(Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    /// Builds a matrix from column-major entries.
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 {
            return Err(Error::DimensionMismatch { expected: 1, found: 0 });
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, found: data.len() });
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(DenseMatrix { rows, cols, data })
    }

    /// Builds a matrix from row-major entries.
    pub fn from_row_major(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, found: data.len() });
        }
        let mut out = Vec::with_capacity(data.len());
        for j in 0..cols {
            out.extend((0..rows).map(|i| data[i * cols + j]));
        }
        Self::new(rows, cols, out)
    }

    pub fn from_columns<C: AsRef<[f64]>>(columns: &[C]) -> Result<Self> {
        let rows = columns.first().map_or(0, |c| c.as_ref().len());
        let mut data = Vec::with_capacity(rows * columns.len());
        for c in columns {
            let c = c.as_ref();
            if c.len() != rows {
                return Err(Error::DimensionMismatch { expected: rows, found: c.len() });
            }
            data.extend_from_slice(c);
        }
        Self::new(rows, columns.len(), data)
    }

    /// A single-column matrix.
    pub fn column_vector(v: &[f64]) -> Result<Self> {
        Self::new(v.len(), 1, v.to_vec())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0, "DenseMatrix needs at least one row");
        DenseMatrix { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![1.0; n])
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            m.data[i * n + i] = v;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[j * self.rows + i]
    }

    pub(crate) fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[j * self.rows + i] = v;
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub(crate) fn column_mut(&mut self, j: usize) -> &mut [f64] {
        &mut self.data[j * self.rows..(j + 1) * self.rows]
    }

    /// Column-major storage of columns `start..end`.
    pub(crate) fn column_mut_range(&mut self, start: usize, end: usize) -> &mut [f64] {
        &mut self.data[start * self.rows..end * self.rows]
    }

    pub fn columns(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.rows).take(self.cols)
    }

    /// Column-major entries.
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Copy of the columns in `range`.
    pub fn column_range(&self, range: Range<usize>) -> DenseMatrix {
        assert!(range.end <= self.cols);
        DenseMatrix {
            rows: self.rows,
            cols: range.len(),
            data: self.data[range.start * self.rows..range.end * self.rows].to_vec(),
        }
    }

    pub fn transpose(&self) -> DenseMatrix {
        if self.cols == 0 {
            // no 0-row matrices; a transposed empty block is meaningless
            panic!("cannot transpose a matrix without columns");
        }
        let mut t = DenseMatrix::zeros(self.cols, self.rows);
        for j in 0..self.cols {
            for i in 0..self.rows {
                t.data[i * self.cols + j] = self.get(i, j);
            }
        }
        t
    }

    pub fn matmul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let mut out = DenseMatrix::zeros(self.rows, other.cols);
        for j in 0..other.cols {
            let oc = other.column(j);
            let dst = &mut out.data[j * self.rows..(j + 1) * self.rows];
            for (k, &s) in oc.iter().enumerate() {
                if s != 0.0 {
                    axpy(s, self.column(k), dst);
                }
            }
        }
        Ok(out)
    }

    /// `A v`.
    pub fn mul_vec(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: v.len() });
        }
        let mut out = vec![0.0; self.rows];
        for (j, &s) in v.iter().enumerate() {
            axpy(s, self.column(j), &mut out);
        }
        Ok(out)
    }

    /// `Aᵀ v`.
    pub fn tr_mul_vec(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.rows {
            return Err(Error::DimensionMismatch { expected: self.rows, found: v.len() });
        }
        Ok(self.columns().map(|c| dot(c, v)).collect())
    }

    pub fn frobenius_norm(&self) -> f64 {
        norm2(&self.data)
    }

    /// Largest absolute entry of `self - other`.
    pub fn max_abs_diff(&self, other: &DenseMatrix) -> Result<f64> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        Ok(self.data.iter().zip(&other.data).fold(0.0, |m, (a, b)| m.max(abs(a - b))))
    }

    pub fn sub(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(DenseMatrix { rows: self.rows, cols: self.cols, data })
    }

    /// `[self, other]`.
    pub fn hstack(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch { expected: self.rows, found: other.rows });
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(DenseMatrix { rows: self.rows, cols: self.cols + other.cols, data })
    }

    pub(crate) fn push_column(&mut self, c: &[f64]) {
        debug_assert_eq!(c.len(), self.rows);
        self.data.extend_from_slice(c);
        self.cols += 1;
    }
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, " ")?;
            for j in 0..self.cols {
                write!(f, " {:>12.6e}", self.get(i, j))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// `[B, γ c]`.
pub fn append_column(b: &DenseMatrix, c: &[f64], gamma: f64) -> Result<DenseMatrix> {
    if c.len() != b.rows() {
        return Err(Error::DimensionMismatch { expected: b.rows(), found: c.len() });
    }
    if !gamma.is_finite() {
        return Err(Error::NonFinite);
    }
    let mut out = b.clone();
    let scaled: Vec<f64> = c.iter().map(|x| gamma * x).collect();
    if scaled.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    out.push_column(&scaled);
    Ok(out)
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm2(v: &[f64]) -> f64 {
    sqrt(dot(v, v))
}

/// `y += a x`.
pub fn axpy(a: f64, x: &[f64], y: &mut [f64]) {
    debug_assert_eq!(x.len(), y.len());
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

//! Compressed sparse row storage used for incidence matrices and Hodge Laplacians.

use std::ops::{Add, Mul};

use ndarray::{Array2, ArrayView2};

use crate::error::{Error, Result};

/// Element type of a [`CsrMatrix`].
pub trait Scalar: Copy + PartialEq + Add<Output = Self> + Mul<Output = Self> + std::fmt::Debug {
    const ZERO: Self;
    fn to_f64(self) -> f64;
    fn abs_f64(self) -> f64 {
        self.to_f64().abs()
    }
}

impl Scalar for i64 {
    const ZERO: Self = 0;
    fn to_f64(self) -> f64 {
        self as f64
    }
}

impl Scalar for f64 {
    const ZERO: Self = 0.0;
    fn to_f64(self) -> f64 {
        self
    }
}

/// A sparse matrix in CSR layout. Column indices are sorted within each row
/// and explicit zeros are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct CsrMatrix<T> {
    rows: usize,
    cols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<T>,
}

/// Signed integer incidence matrix.
pub type SparseSignedMatrix = CsrMatrix<i64>;

impl<T: Scalar> CsrMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            indptr: vec![0; rows + 1],
            indices: Vec::new(),
            values: Vec::new(),
        }
    }

    /// Builds a matrix from `(row, col, value)` triplets. Duplicate positions
    /// are summed and resulting zeros dropped.
    pub fn from_triplets(rows: usize, cols: usize, triplets: &[(usize, usize, T)]) -> Result<Self> {
        let mut sorted: Vec<(usize, usize, T)> = Vec::with_capacity(triplets.len());
        for &(r, c, v) in triplets {
            if r >= rows || c >= cols {
                return Err(Error::dims(format!(
                    "entry ({r}, {c}) outside a {rows}x{cols} matrix"
                )));
            }
            sorted.push((r, c, v));
        }
        sorted.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));

        let mut indptr = vec![0usize; rows + 1];
        let mut indices = Vec::with_capacity(sorted.len());
        let mut values = Vec::with_capacity(sorted.len());
        let mut i = 0;
        while i < sorted.len() {
            let (r, c, mut v) = sorted[i];
            i += 1;
            while i < sorted.len() && sorted[i].0 == r && sorted[i].1 == c {
                v = v + sorted[i].2;
                i += 1;
            }
            if v != T::ZERO {
                indices.push(c);
                values.push(v);
                indptr[r + 1] += 1;
            }
        }
        for r in 0..rows {
            indptr[r + 1] += indptr[r];
        }
        Ok(Self {
            rows,
            cols,
            indptr,
            indices,
            values,
        })
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Iterates `(col, value)` over the stored entries of one row.
    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, T)> + '_ {
        let span = self.indptr[r]..self.indptr[r + 1];
        self.indices[span.clone()]
            .iter()
            .copied()
            .zip(self.values[span].iter().copied())
    }

    pub fn get(&self, r: usize, c: usize) -> T {
        let span = self.indptr[r]..self.indptr[r + 1];
        match self.indices[span.clone()].binary_search(&c) {
            Ok(pos) => self.values[span.start + pos],
            Err(_) => T::ZERO,
        }
    }

    pub fn triplets(&self) -> Vec<(usize, usize, T)> {
        (0..self.rows)
            .flat_map(|r| self.row(r).map(move |(c, v)| (r, c, v)))
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let t: Vec<_> = self.triplets().into_iter().map(|(r, c, v)| (c, r, v)).collect();
        Self::from_triplets(self.cols, self.rows, &t).expect("transpose keeps indices in range")
    }

    /// Sparse product `self * rhs`.
    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::dims(format!(
                "cannot multiply {:?} by {:?}",
                self.shape(),
                rhs.shape()
            )));
        }
        let mut triplets = Vec::new();
        let mut acc: Vec<Option<T>> = vec![None; rhs.cols];
        let mut touched = Vec::new();
        for r in 0..self.rows {
            for (k, a) in self.row(r) {
                for (c, b) in rhs.row(k) {
                    match &mut acc[c] {
                        Some(v) => *v = *v + a * b,
                        slot @ None => {
                            *slot = Some(a * b);
                            touched.push(c);
                        }
                    }
                }
            }
            for c in touched.drain(..) {
                if let Some(v) = acc[c].take() {
                    triplets.push((r, c, v));
                }
            }
        }
        Self::from_triplets(self.rows, rhs.cols, &triplets)
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        if self.shape() != rhs.shape() {
            return Err(Error::dims(format!(
                "cannot add {:?} and {:?}",
                self.shape(),
                rhs.shape()
            )));
        }
        let mut t = self.triplets();
        t.extend(rhs.triplets());
        Self::from_triplets(self.rows, self.cols, &t)
    }

    /// Largest absolute stored value, 0 for an empty matrix.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.abs_f64()).fold(0.0, f64::max)
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && *self == self.transpose()
    }

    pub fn to_f64(&self) -> CsrMatrix<f64> {
        CsrMatrix {
            rows: self.rows,
            cols: self.cols,
            indptr: self.indptr.clone(),
            indices: self.indices.clone(),
            values: self.values.iter().map(|v| v.to_f64()).collect(),
        }
    }

    pub fn to_dense(&self) -> Array2<f64> {
        let mut out = Array2::zeros((self.rows, self.cols));
        for r in 0..self.rows {
            for (c, v) in self.row(r) {
                out[[r, c]] = v.to_f64();
            }
        }
        out
    }

    /// Dense product `self * rhs`.
    pub fn mul_dense(&self, rhs: &ArrayView2<f64>) -> Result<Array2<f64>> {
        if self.cols != rhs.nrows() {
            return Err(Error::dims(format!(
                "cannot multiply sparse {:?} by dense {:?}",
                self.shape(),
                rhs.dim()
            )));
        }
        let d = rhs.ncols();
        let rhs = rhs.as_standard_layout();
        let src = rhs.as_slice().expect("standard layout");
        let mut out = vec![0.0; self.rows * d];
        for (r, dst) in out.chunks_mut(d.max(1)).enumerate().take(self.rows) {
            let span = self.indptr[r]..self.indptr[r + 1];
            for (&c, v) in self.indices[span.clone()].iter().zip(&self.values[span]) {
                let v = v.to_f64();
                dst.iter_mut().zip(&src[c * d..(c + 1) * d]).for_each(|(o, s)| *o += v * s);
            }
        }
        Ok(Array2::from_shape_vec((self.rows, d), out).expect("shape matches buffer"))
    }

    /// Dense product `selfᵀ * rhs` without materializing the transpose.
    pub fn tr_mul_dense(&self, rhs: &ArrayView2<f64>) -> Result<Array2<f64>> {
        if self.rows != rhs.nrows() {
            return Err(Error::dims(format!(
                "cannot multiply transposed sparse {:?} by dense {:?}",
                self.shape(),
                rhs.dim()
            )));
        }
        let d = rhs.ncols();
        let mut out = Array2::<f64>::zeros((self.cols, d));
        for r in 0..self.rows {
            let src = rhs.row(r);
            for (c, v) in self.row(r) {
                let v = v.to_f64();
                let mut dst = out.row_mut(c);
                dst.iter_mut().zip(src.iter()).for_each(|(o, s)| *o += v * s);
            }
        }
        Ok(out)
    }
}

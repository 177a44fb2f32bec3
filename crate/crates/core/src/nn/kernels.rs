//! Matrix products specialized for inputs whose entries are mostly exactly ±1.
//!
//! A [`SignMatrix`] stores the sign of every entry as one bit plus a sparse
//! residual for entries that are not exactly ±1. Right products `S W` use
//! per-byte lookup tables of signed partial row sums, so each row costs
//! `ceil(d/8)` table lookups instead of `d` multiply-adds. Transposed products
//! `Sᵀ G` only accumulate rows for set bits.

use ndarray::{Array2, ArrayView2};

#[derive(Clone, Debug)]
pub struct SignMatrix {
    rows: usize,
    cols: usize,
    chunks: usize,
    /// Row-major, `chunks` bytes per row; bit set means `+1`.
    bits: Vec<u8>,
    /// `(row, col, value - sign)` for entries that are not exactly ±1.
    residual: Vec<(usize, usize, f64)>,
}

impl SignMatrix {
    pub fn pack(x: &ArrayView2<f64>) -> Self {
        let (rows, cols) = x.dim();
        let chunks = cols.div_ceil(8);
        let mut bits = vec![0u8; rows * chunks];
        let mut residual = Vec::new();
        let x = x.as_standard_layout();
        let xs = x.as_slice().expect("standard layout");
        for (r, (row, dst)) in xs.chunks(cols.max(1)).zip(bits.chunks_mut(chunks.max(1))).enumerate() {
            for (c8, (vals, byte)) in row.chunks(8).zip(dst.iter_mut()).enumerate() {
                let mut b = 0u8;
                for (i, &v) in vals.iter().enumerate() {
                    b |= ((v >= 0.0) as u8) << i;
                }
                *byte = b;
                if vals.iter().any(|v| v.abs() != 1.0) {
                    for (i, &v) in vals.iter().enumerate() {
                        let base = if v >= 0.0 { 1.0 } else { -1.0 };
                        if v != base {
                            residual.push((r, c8 * 8 + i, v - base));
                        }
                    }
                }
            }
        }
        Self {
            rows,
            cols,
            chunks,
            bits,
            residual,
        }
    }

    pub fn dim(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    /// Fraction of entries that are exactly ±1.
    pub fn saturated_fraction(&self) -> f64 {
        let total = self.rows * self.cols;
        if total == 0 {
            return 1.0;
        }
        1.0 - self.residual.len() as f64 / total as f64
    }

    /// `S W` for `W` of shape `cols x f`.
    pub fn mul(&self, w: &ArrayView2<f64>) -> Array2<f64> {
        assert_eq!(w.nrows(), self.cols, "sign product shape mismatch");
        let f = w.ncols();
        let w = w.as_standard_layout();
        let ws = w.as_slice().expect("standard layout");
        let mut out = vec![0.0; self.rows * f];

        // table[chunk][byte] = Σ_i ±W_{8 chunk + i}, sign taken from bit i
        let stride = (1usize << self.cols.min(8)) * f;
        let mut table = vec![0.0; self.chunks * stride];
        for chunk in 0..self.chunks {
            let first = chunk * 8;
            let width = (self.cols - first).min(8);
            let t = &mut table[chunk * stride..(chunk + 1) * stride];
            for i in 0..width {
                for (o, &v) in t[..f].iter_mut().zip(&ws[(first + i) * f..(first + i + 1) * f]) {
                    *o -= v;
                }
            }
            for b in 1..1usize << width {
                let low = b.trailing_zeros() as usize;
                let prev = b & (b - 1);
                let wrow = &ws[(first + low) * f..(first + low + 1) * f];
                let (head, tail) = t.split_at_mut(b * f);
                let src = &head[prev * f..(prev + 1) * f];
                for ((o, &s), &v) in tail[..f].iter_mut().zip(src).zip(wrow) {
                    *o = s + 2.0 * v;
                }
            }
        }
        let rows = self.bits.chunks(self.chunks.max(1)).take(self.rows);
        if f == 1 {
            for (o, row) in out.iter_mut().zip(rows) {
                *o = row
                    .iter()
                    .enumerate()
                    .map(|(chunk, &byte)| table[chunk * stride + byte as usize])
                    .sum();
            }
        } else {
            for (dst, row) in out.chunks_mut(f).zip(rows) {
                for (chunk, &byte) in row.iter().enumerate() {
                    let src = &table[chunk * stride + byte as usize * f..][..f];
                    dst.iter_mut().zip(src).for_each(|(o, &s)| *o += s);
                }
            }
        }
        for &(r, c, v) in &self.residual {
            let wrow = &ws[c * f..(c + 1) * f];
            for (o, &s) in out[r * f..(r + 1) * f].iter_mut().zip(wrow) {
                *o += v * s;
            }
        }
        Array2::from_shape_vec((self.rows, f), out).expect("shape matches buffer")
    }

    /// `Sᵀ G` for `G` of shape `rows x f`.
    pub fn tr_mul(&self, g: &ArrayView2<f64>) -> Array2<f64> {
        assert_eq!(g.nrows(), self.rows, "sign product shape mismatch");
        let f = g.ncols();
        let g = g.as_standard_layout();
        let gs = g.as_slice().expect("standard layout");
        let mut acc = vec![0.0; self.cols * f];
        let mut total = vec![0.0; f];
        for r in 0..self.rows {
            let grow = &gs[r * f..(r + 1) * f];
            for (t, &v) in total.iter_mut().zip(grow) {
                *t += v;
            }
            for chunk in 0..self.chunks {
                let mut byte = self.bits[r * self.chunks + chunk];
                while byte != 0 {
                    let c = chunk * 8 + byte.trailing_zeros() as usize;
                    byte &= byte - 1;
                    for (a, &v) in acc[c * f..(c + 1) * f].iter_mut().zip(grow) {
                        *a += v;
                    }
                }
            }
        }
        // Σ_i s_ic G_i = 2 Σ_{s=+1} G_i - Σ_i G_i
        for c in 0..self.cols {
            for (a, &t) in acc[c * f..(c + 1) * f].iter_mut().zip(&total) {
                *a = 2.0 * *a - t;
            }
        }
        for &(r, c, v) in &self.residual {
            let grow = &gs[r * f..(r + 1) * f];
            for (a, &s) in acc[c * f..(c + 1) * f].iter_mut().zip(grow) {
                *a += v * s;
            }
        }
        Array2::from_shape_vec((self.cols, f), acc).expect("shape matches buffer")
    }
}

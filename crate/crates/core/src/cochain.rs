use ndarray::Array2;

use crate::error::{Error, Result};

/// Real-valued features attached to the simplices of one order: `N_k` rows,
/// `d` columns. Row `i` belongs to the i-th k-simplex in lexicographic order,
/// and the sign of an entry is relative to that simplex's canonical orientation.
#[derive(Clone, Debug, PartialEq)]
pub struct Cochain {
    pub order: usize,
    pub values: Array2<f64>,
}

impl Cochain {
    pub fn new(order: usize, values: Array2<f64>) -> Self {
        Self { order, values }
    }

    /// Single-column signal.
    pub fn from_signal(order: usize, signal: &[f64]) -> Self {
        let values = Array2::from_shape_vec((signal.len(), 1), signal.to_vec())
            .expect("a column vector always has a valid shape");
        Self { order, values }
    }

    pub fn zeros(order: usize, rows: usize, cols: usize) -> Self {
        Self::new(order, Array2::zeros((rows, cols)))
    }

    pub fn rows(&self) -> usize {
        self.values.nrows()
    }

    pub fn cols(&self) -> usize {
        self.values.ncols()
    }

    pub(crate) fn expect_rows(&self, rows: usize) -> Result<()> {
        if self.rows() != rows {
            return Err(Error::dims(format!(
                "cochain of order {} has {} rows, operator expects {rows}",
                self.order,
                self.rows()
            )));
        }
        Ok(())
    }
}

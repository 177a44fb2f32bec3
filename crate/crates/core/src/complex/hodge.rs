//! Incidence matrices and Hodge Laplacians.
//!
//! `B_k` has one row per (k-1)-simplex and one column per k-simplex. The entry
//! for face `f` of simplex `s` is `(-1)^i` where `i` is the position of the
//! vertex dropped from `s` (vertices ascending). With this convention
//! `B_k * B_{k+1} = 0` holds exactly.

use super::simplex::SimplicialComplex;
use ndarray::{Array2, ArrayView2};

use super::sparse::{CsrMatrix, SparseSignedMatrix};
use crate::error::{Error, Result};

/// Lower, upper and full Hodge Laplacians of one simplicial order.
#[derive(Clone, Debug, PartialEq)]
pub struct HodgeTriple {
    pub order: usize,
    /// `B_kᵀ B_k`; absent at `k = 0`.
    pub lower: Option<CsrMatrix<f64>>,
    /// `B_{k+1} B_{k+1}ᵀ`; absent at `k = K`.
    pub upper: Option<CsrMatrix<f64>>,
    pub full: CsrMatrix<f64>,
    /// `(B, Bᵀ)` for a part whose factored form touches fewer entries than
    /// the assembled matrix.
    lower_factor: Option<Factor>,
    upper_factor: Option<Factor>,
}

#[derive(Clone, Debug, PartialEq)]
struct Factor {
    left: CsrMatrix<f64>,
    right: CsrMatrix<f64>,
}

impl Factor {
    /// `left * right` when that beats `assembled`, else `None`.
    fn if_cheaper(left: CsrMatrix<f64>, right: CsrMatrix<f64>, assembled: &CsrMatrix<f64>) -> Option<Self> {
        (left.nnz() + right.nnz() < assembled.nnz()).then_some(Self { left, right })
    }
}

impl HodgeTriple {
    pub fn size(&self) -> usize {
        self.full.rows()
    }

    /// `L_{k,l} X`.
    pub fn apply_lower(&self, x: &ArrayView2<f64>) -> Result<Array2<f64>> {
        apply_part(self.lower.as_ref(), self.lower_factor.as_ref(), x, "lower", self.order)
    }

    /// `L_{k,u} X`.
    pub fn apply_upper(&self, x: &ArrayView2<f64>) -> Result<Array2<f64>> {
        apply_part(self.upper.as_ref(), self.upper_factor.as_ref(), x, "upper", self.order)
    }
}

fn apply_part(
    part: Option<&CsrMatrix<f64>>,
    factor: Option<&Factor>,
    x: &ArrayView2<f64>,
    name: &str,
    k: usize,
) -> Result<Array2<f64>> {
    match (part, factor) {
        (_, Some(f)) => {
            x.nrows()
                .eq(&f.right.cols())
                .then_some(())
                .ok_or_else(|| Error::dims(format!("input has {} rows, expected {}", x.nrows(), f.right.cols())))?;
            f.left.mul_dense(&f.right.mul_dense(x)?.view())
        }
        (Some(m), None) => m.mul_dense(x),
        (None, _) => Err(Error::dims(format!("order {k} has no {name} adjacency"))),
    }
}

/// Boundary operator `B_k` for `1 <= k <= K`.
pub fn incidence_matrix(complex: &SimplicialComplex, k: usize) -> Result<SparseSignedMatrix> {
    complex.check_order(k, 1)?;
    let mut triplets = Vec::with_capacity(complex.count(k) * (k + 1));
    for (col, s) in complex.simplices(k).iter().enumerate() {
        for (i, face) in s.faces() {
            let row = complex
                .index_of(&face)
                .expect("closure guarantees every face is present");
            let sign = if i % 2 == 0 { 1 } else { -1 };
            triplets.push((row, col, sign));
        }
    }
    SparseSignedMatrix::from_triplets(complex.count(k - 1), complex.count(k), &triplets)
}

/// `L_k = B_kᵀ B_k + B_{k+1} B_{k+1}ᵀ` with the two parts kept separately.
/// Products are formed in integer arithmetic and converted afterwards.
pub fn hodge_laplacians(complex: &SimplicialComplex, k: usize) -> Result<HodgeTriple> {
    complex.check_order(k, 0)?;
    let n = complex.count(k);
    let mut lower_factor = None;
    let mut upper_factor = None;
    let lower = if k > 0 {
        let b = incidence_matrix(complex, k)?;
        let l = b.transpose().matmul(&b)?;
        lower_factor = Factor::if_cheaper(b.transpose().to_f64(), b.to_f64(), &l.to_f64());
        Some(l)
    } else {
        None
    };
    let upper = if k < complex.order() {
        let b = incidence_matrix(complex, k + 1)?;
        let u = b.matmul(&b.transpose())?;
        upper_factor = Factor::if_cheaper(b.to_f64(), b.transpose().to_f64(), &u.to_f64());
        Some(u)
    } else {
        None
    };
    let full = match (&lower, &upper) {
        (Some(l), Some(u)) => l.add(u)?,
        (Some(l), None) => l.clone(),
        (None, Some(u)) => u.clone(),
        (None, None) => SparseSignedMatrix::zeros(n, n),
    };
    Ok(HodgeTriple {
        order: k,
        lower: lower.map(|m| m.to_f64()),
        upper: upper.map(|m| m.to_f64()),
        full: full.to_f64(),
        lower_factor,
        upper_factor,
    })
}

/// Maximum absolute entry of `B_k B_{k+1}` for one `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainCheck {
    pub k: usize,
    pub max_abs: i64,
}

/// Checks `B_k B_{k+1} = 0` for every `1 <= k < K`. Empty when `K < 2`.
pub fn verify_chain_property(complex: &SimplicialComplex) -> Result<Vec<ChainCheck>> {
    let mut report = Vec::new();
    for k in 1..complex.order() {
        let product = incidence_matrix(complex, k)?.matmul(&incidence_matrix(complex, k + 1)?)?;
        let max_abs = product.triplets().iter().map(|t| t.2.abs()).max().unwrap_or(0);
        report.push(ChainCheck { k, max_abs });
    }
    Ok(report)
}

/// Incidence matrices and Laplacians for one order, as consumed by the layers.
#[derive(Clone, Debug)]
pub struct OrderOperators {
    pub triple: HodgeTriple,
    /// `B_k`, absent at `k = 0`.
    pub boundary: Option<SparseSignedMatrix>,
    /// `B_{k+1}`, absent at `k = K`.
    pub coboundary: Option<SparseSignedMatrix>,
}

impl OrderOperators {
    pub fn new(complex: &SimplicialComplex, k: usize) -> Result<Self> {
        let triple = hodge_laplacians(complex, k)?;
        let boundary = if k > 0 {
            Some(incidence_matrix(complex, k)?)
        } else {
            None
        };
        let coboundary = if k < complex.order() {
            Some(incidence_matrix(complex, k + 1)?)
        } else {
            None
        };
        Ok(Self {
            triple,
            boundary,
            coboundary,
        })
    }

    pub fn order(&self) -> usize {
        self.triple.order
    }

    pub fn size(&self) -> usize {
        self.triple.size()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use ndarray::array;

    fn filled() -> SimplicialComplex {
        SimplicialComplex::build(&[vec![], vec![], vec![vec![0, 1, 2]]]).unwrap()
    }

    #[test]
    fn triangle_incidence() {
        let c = filled();
        let b1 = incidence_matrix(&c, 1).unwrap().to_dense();
        assert_eq!(
            b1,
            array![[-1.0, -1.0, 0.0], [1.0, 0.0, -1.0], [0.0, 1.0, 1.0]]
        );
        let b2 = incidence_matrix(&c, 2).unwrap().to_dense();
        assert_eq!(b2, array![[1.0], [-1.0], [1.0]]);
        assert!(matches!(
            incidence_matrix(&c, 0),
            Err(Error::OrderOutOfRange { .. })
        ));
        assert!(matches!(
            incidence_matrix(&c, 3),
            Err(Error::OrderOutOfRange { .. })
        ));
    }

    #[test]
    fn triangle_laplacians() {
        let c = filled();
        let t = hodge_laplacians(&c, 1).unwrap();
        assert_eq!(
            t.lower.as_ref().unwrap().to_dense(),
            array![[2.0, 1.0, -1.0], [1.0, 2.0, 1.0], [-1.0, 1.0, 2.0]]
        );
        assert_eq!(
            t.upper.as_ref().unwrap().to_dense(),
            array![[1.0, -1.0, 1.0], [-1.0, 1.0, -1.0], [1.0, -1.0, 1.0]]
        );
        assert_eq!(t.full.to_dense(), 3.0 * ndarray::Array2::<f64>::eye(3));

        let t0 = hodge_laplacians(&c, 0).unwrap();
        assert!(t0.lower.is_none());
        assert_eq!(
            t0.full.to_dense(),
            array![[2.0, -1.0, -1.0], [-1.0, 2.0, -1.0], [-1.0, -1.0, 2.0]]
        );
        let t2 = hodge_laplacians(&c, 2).unwrap();
        assert!(t2.upper.is_none());
        assert_eq!(t2.full.to_dense(), array![[3.0]]);
    }

    #[test]
    fn single_node_laplacian_is_zero() {
        let c = SimplicialComplex::build(&[vec![vec![7]]]).unwrap();
        let t = hodge_laplacians(&c, 0).unwrap();
        assert_eq!(t.full.to_dense(), array![[0.0]]);
        assert!(t.lower.is_none() && t.upper.is_none());
    }

    #[test]
    fn chain_property_on_triangle() {
        let report = verify_chain_property(&filled()).unwrap();
        assert_eq!(report, vec![ChainCheck { k: 1, max_abs: 0 }]);
    }

    #[test]
    fn chain_report_empty_below_order_two() {
        let path = SimplicialComplex::build(&[vec![], vec![vec![0, 1], vec![1, 2]]]).unwrap();
        assert!(verify_chain_property(&path).unwrap().is_empty());
    }
}

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An oriented simplex: a strictly ascending list of vertex ids. Order `k`
/// is `vertices.len() - 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Simplex(Vec<usize>);

impl Simplex {
    /// Sorts `vertices` into canonical orientation. Fails on repeated vertices.
    pub fn new(mut vertices: Vec<usize>) -> Result<Self> {
        vertices.sort_unstable();
        if vertices.windows(2).any(|w| w[0] == w[1]) || vertices.is_empty() {
            return Err(Error::DuplicateVertex { vertices });
        }
        Ok(Self(vertices))
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn order(&self) -> usize {
        self.0.len() - 1
    }

    /// The `i`-th face, obtained by dropping vertex `i`. Its boundary sign is `(-1)^i`.
    pub fn face(&self, i: usize) -> Simplex {
        let mut v = self.0.clone();
        v.remove(i);
        Simplex(v)
    }

    pub fn faces(&self) -> impl Iterator<Item = (usize, Simplex)> + '_ {
        (0..self.0.len()).map(move |i| (i, self.face(i)))
    }
}

/// A face-closed collection of simplices up to order `K`, each order sorted
/// lexicographically so row/column indices are reproducible.
#[derive(Clone, Debug, PartialEq)]
pub struct SimplicialComplex {
    simplices: Vec<Vec<Simplex>>,
    index: Vec<HashMap<Simplex, usize>>,
    inserted_faces: usize,
}

impl SimplicialComplex {
    /// Builds and validates a complex from per-order vertex lists
    /// (`lists[k]` holds the k-simplices). Missing faces are inserted and
    /// counted in [`inserted_faces`](Self::inserted_faces).
    pub fn build(lists: &[Vec<Vec<usize>>]) -> Result<Self> {
        let mut sets: Vec<BTreeSet<Simplex>> = Vec::new();
        for (order, list) in lists.iter().enumerate() {
            if sets.len() <= order {
                sets.resize_with(order + 1, BTreeSet::new);
            }
            for raw in list {
                let s = Simplex::new(raw.clone())?;
                if s.order() != order {
                    return Err(Error::WrongCardinality {
                        order,
                        vertices: raw.clone(),
                    });
                }
                let vertices = s.0.clone();
                if !sets[order].insert(s) {
                    return Err(Error::DuplicateSimplex { order, vertices });
                }
            }
        }
        while sets.last().is_some_and(|s| s.is_empty()) {
            sets.pop();
        }
        if sets.is_empty() {
            return Err(Error::EmptyComplex);
        }

        let mut inserted = 0;
        for order in (1..sets.len()).rev() {
            let faces: Vec<Simplex> = sets[order]
                .iter()
                .flat_map(|s| s.faces().map(|(_, f)| f).collect::<Vec<_>>())
                .collect();
            for f in faces {
                if sets[order - 1].insert(f) {
                    inserted += 1;
                }
            }
        }

        let simplices: Vec<Vec<Simplex>> = sets.into_iter().map(|s| s.into_iter().collect()).collect();
        let index = simplices
            .iter()
            .map(|list| list.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect())
            .collect();
        Ok(Self {
            simplices,
            index,
            inserted_faces: inserted,
        })
    }

    /// Highest simplex order `K`.
    pub fn order(&self) -> usize {
        self.simplices.len() - 1
    }

    /// Number of k-simplices, 0 when `k > K`.
    pub fn count(&self, k: usize) -> usize {
        self.simplices.get(k).map_or(0, Vec::len)
    }

    pub fn counts(&self) -> Vec<usize> {
        self.simplices.iter().map(Vec::len).collect()
    }

    pub fn simplices(&self, k: usize) -> &[Simplex] {
        self.simplices.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn index_of(&self, s: &Simplex) -> Option<usize> {
        self.index.get(s.order())?.get(s).copied()
    }

    /// Faces added during construction to enforce closure.
    pub fn inserted_faces(&self) -> usize {
        self.inserted_faces
    }

    /// Per-order vertex lists in canonical order, suitable for [`build`](Self::build).
    pub fn to_lists(&self) -> Vec<Vec<Vec<usize>>> {
        self.simplices
            .iter()
            .map(|list| list.iter().map(|s| s.0.clone()).collect())
            .collect()
    }

    pub(crate) fn check_order(&self, k: usize, min: usize) -> Result<()> {
        if k < min || k > self.order() {
            return Err(Error::OrderOutOfRange {
                order: k,
                min,
                max: self.order(),
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn filled_triangle() -> Vec<Vec<Vec<usize>>> {
        vec![
            vec![vec![0], vec![1], vec![2]],
            vec![vec![0, 1], vec![0, 2], vec![1, 2]],
            vec![vec![0, 1, 2]],
        ]
    }

    #[test]
    fn filled_triangle_counts() {
        let c = SimplicialComplex::build(&filled_triangle()).unwrap();
        assert_eq!(c.counts(), vec![3, 3, 1]);
        assert_eq!(c.order(), 2);
        assert_eq!(c.inserted_faces(), 0);
    }

    #[test]
    fn closure_inserts_all_faces() {
        let c = SimplicialComplex::build(&[vec![], vec![], vec![vec![2, 0, 1]]]).unwrap();
        assert_eq!(c.inserted_faces(), 6);
        let full = SimplicialComplex::build(&filled_triangle()).unwrap();
        assert_eq!(c.to_lists(), full.to_lists());
    }

    #[test]
    fn degenerate_simplex_is_rejected() {
        let err = SimplicialComplex::build(&[vec![vec![0]], vec![vec![0, 0]]]).unwrap_err();
        assert!(matches!(err, Error::DuplicateVertex { .. }));
    }

    #[test]
    fn duplicate_simplex_is_rejected() {
        let err = SimplicialComplex::build(&[vec![vec![0], vec![1]], vec![vec![0, 1], vec![1, 0]]])
            .unwrap_err();
        assert!(matches!(err, Error::DuplicateSimplex { order: 1, .. }));
    }

    #[test]
    fn empty_complex_is_rejected() {
        assert!(matches!(
            SimplicialComplex::build(&[]).unwrap_err(),
            Error::EmptyComplex
        ));
        assert!(matches!(
            SimplicialComplex::build(&[vec![], vec![]]).unwrap_err(),
            Error::EmptyComplex
        ));
    }

    #[test]
    fn wrong_cardinality_is_rejected() {
        let err = SimplicialComplex::build(&[vec![vec![0, 1]]]).unwrap_err();
        assert!(matches!(err, Error::WrongCardinality { .. }));
    }

    #[test]
    fn lexicographic_indexing() {
        let c = SimplicialComplex::build(&[vec![], vec![vec![1, 2], vec![0, 2], vec![0, 1]]]).unwrap();
        let edges: Vec<_> = c.simplices(1).iter().map(|s| s.vertices().to_vec()).collect();
        assert_eq!(edges, vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(c.index_of(&Simplex::new(vec![2, 0]).unwrap()), Some(1));
    }
}

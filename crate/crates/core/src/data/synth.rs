//! Seeded synthetic datasets shaped like the citation and trajectory experiments.

use std::collections::{BTreeSet, HashMap};

use ndarray::{Array1, Array2};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, LogNormal, StandardNormal};
use serde::{Deserialize, Serialize};

use super::format::TrajectoryDataset;
use crate::cochain::Cochain;
use crate::complex::{incidence_matrix, Simplex, SimplicialComplex};
use crate::error::Result;
use crate::tsp::harmonic_basis;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    Tiny,
    Small,
    Paper,
}

impl std::str::FromStr for Scale {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "tiny" => Ok(Scale::Tiny),
            "small" => Ok(Scale::Small),
            "paper" => Ok(Scale::Paper),
            other => Err(format!("unknown scale '{other}' (expected tiny, small, paper)")),
        }
    }
}

struct CitationShape {
    authors: usize,
    /// `(count, min size, max size)` groups of co-authored papers.
    papers: &'static [(usize, usize, usize)],
    max_order: usize,
}

impl Scale {
    fn shape(self) -> CitationShape {
        match self {
            Scale::Tiny => CitationShape {
                authors: 24,
                papers: &[(14, 2, 3)],
                max_order: 2,
            },
            Scale::Small => CitationShape {
                authors: 80,
                papers: &[(4, 7, 8), (50, 2, 4)],
                max_order: 5,
            },
            Scale::Paper => CitationShape {
                authors: 352,
                papers: &[(22, 10, 10), (30, 4, 6), (100, 2, 3)],
                max_order: 5,
            },
        }
    }
}

/// Sum of `(vertex set) -> value` over every subset of `members` with at most
/// `max_len` elements.
fn add_subsets(members: &[usize], max_len: usize, value: f64, out: &mut HashMap<Vec<usize>, f64>) {
    fn rec(members: &[usize], start: usize, max_len: usize, cur: &mut Vec<usize>, value: f64, out: &mut HashMap<Vec<usize>, f64>) {
        for i in start..members.len() {
            cur.push(members[i]);
            *out.entry(cur.clone()).or_insert(0.0) += value;
            if cur.len() < max_len {
                rec(members, i + 1, max_len, cur, value, out);
            }
            cur.pop();
        }
    }
    rec(members, 0, max_len, &mut Vec::new(), value, out);
}

/// All cliques of `adj` with at most `max_order + 1` vertices, grouped by order.
fn flag_simplices(adj: &[BTreeSet<usize>], max_order: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = vec![Vec::new(); max_order + 1];
    fn extend(adj: &[BTreeSet<usize>], clique: &mut Vec<usize>, candidates: Vec<usize>, max_order: usize, out: &mut Vec<Vec<Vec<usize>>>) {
        out[clique.len() - 1].push(clique.clone());
        if clique.len() > max_order {
            return;
        }
        for (i, &v) in candidates.iter().enumerate() {
            let next: Vec<usize> = candidates[i + 1..].iter().copied().filter(|u| adj[v].contains(u)).collect();
            clique.push(v);
            extend(adj, clique, next, max_order, out);
            clique.pop();
        }
    }
    for v in 0..adj.len() {
        let higher: Vec<usize> = adj[v].range(v + 1..).copied().collect();
        extend(adj, &mut vec![v], higher, max_order, &mut out);
    }
    out
}

/// A co-authorship style complex with citation-count features.
///
/// Papers are random author sets with log-normal integer citation counts. The
/// complex is the flag complex of the co-authorship graph truncated at the
/// scale's maximum order, and a simplex's feature is the total citation count
/// of the papers written by all of its authors together. Cliques not covered by
/// any single paper get their own draw.
pub fn synth_citation_like(seed: u64, scale: Scale) -> Result<(SimplicialComplex, Vec<Cochain>)> {
    let shape = scale.shape();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let citations = LogNormal::<f64>::new(2.0, 1.2).expect("valid log-normal parameters");
    let draw = |rng: &mut ChaCha8Rng| citations.sample(rng).round().max(1.0);

    let authors: Vec<usize> = (0..shape.authors).collect();
    let mut adj = vec![BTreeSet::new(); shape.authors];
    let mut totals: HashMap<Vec<usize>, f64> = HashMap::new();
    for &(count, lo, hi) in shape.papers {
        for _ in 0..count {
            let size = rng.random_range(lo..=hi);
            let mut members: Vec<usize> = authors.choose_multiple(&mut rng, size).copied().collect();
            members.sort_unstable();
            let cites = draw(&mut rng);
            add_subsets(&members, shape.max_order + 1, cites, &mut totals);
            for &a in &members {
                for &b in &members {
                    if a != b {
                        adj[a].insert(b);
                    }
                }
            }
        }
    }

    let lists = flag_simplices(&adj, shape.max_order);
    let complex = SimplicialComplex::build(&lists)?;
    let features = (0..=complex.order())
        .map(|k| {
            let values: Vec<f64> = complex
                .simplices(k)
                .iter()
                .map(|s| match totals.get(s.vertices()) {
                    Some(&v) => v,
                    None => draw(&mut rng),
                })
                .collect();
            Cochain::from_signal(k, &values)
        })
        .collect();
    Ok((complex, features))
}

/// Flag complex of an Erdős–Rényi graph `G(n, p)`, truncated at `max_order`.
pub fn random_flag_complex(seed: u64, n: usize, p: f64, max_order: usize) -> Result<SimplicialComplex> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut adj = vec![BTreeSet::new(); n.max(1)];
    for a in 0..n {
        for b in a + 1..n {
            if rng.random_bool(p) {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
    }
    SimplicialComplex::build(&flag_simplices(&adj, max_order))
}

fn grid_vertex(cols: usize, r: usize, c: usize) -> usize {
    r * cols + c
}

/// Edge flow of the counter-clockwise boundary of grid square `(r, c)`.
fn square_loop(complex: &SimplicialComplex, cols: usize, r: usize, c: usize) -> Array1<f64> {
    let corners = [
        grid_vertex(cols, r, c),
        grid_vertex(cols, r, c + 1),
        grid_vertex(cols, r + 1, c + 1),
        grid_vertex(cols, r + 1, c),
    ];
    let mut flow = Array1::zeros(complex.count(1));
    for i in 0..4 {
        let (a, b) = (corners[i], corners[(i + 1) % 4]);
        let edge = Simplex::new(vec![a, b]).expect("distinct corners");
        let idx = complex.index_of(&edge).expect("hole boundary edges exist");
        flow[idx] = if a < b { 1.0 } else { -1.0 };
    }
    flow
}

/// Triangulated `rows x cols` vertex grid with the two grid squares in `holes`
/// left open.
pub fn punctured_mesh(rows: usize, cols: usize, holes: &[(usize, usize)]) -> Result<SimplicialComplex> {
    let mut triangles = Vec::new();
    for r in 0..rows - 1 {
        for c in 0..cols - 1 {
            if holes.contains(&(r, c)) {
                continue;
            }
            let v00 = grid_vertex(cols, r, c);
            let v01 = grid_vertex(cols, r, c + 1);
            let v10 = grid_vertex(cols, r + 1, c);
            let v11 = grid_vertex(cols, r + 1, c + 1);
            triangles.push(vec![v00, v01, v11]);
            triangles.push(vec![v00, v10, v11]);
        }
    }
    SimplicialComplex::build(&[vec![], vec![], triangles])
}

pub const MESH_ROWS: usize = 6;
pub const MESH_COLS: usize = 8;
pub const MESH_HOLES: [(usize, usize); 2] = [(2, 1), (2, 5)];

/// Ratio of gradient-noise norm to harmonic-signal norm before normalization.
pub const TRAJECTORY_NOISE: f64 = 1.0;

/// Orthonormal harmonic flows circulating each hole of `mesh`: the harmonic
/// projections of the two hole boundaries, Gram-Schmidt orthogonalized.
pub fn hole_flows(mesh: &SimplicialComplex) -> Result<[Array1<f64>; 2]> {
    let h = harmonic_basis(mesh, 1)?;
    let project = |x: Array1<f64>| h.dot(&h.t().dot(&x));
    let [(r0, c0), (r1, c1)] = MESH_HOLES;
    let mut a = project(square_loop(mesh, MESH_COLS, r0, c0));
    let mut b = project(square_loop(mesh, MESH_COLS, r1, c1));
    a /= a.dot(&a).sqrt();
    b = &b - &(&a * a.dot(&b));
    b /= b.dot(&b).sqrt();
    Ok([a, b])
}

/// Two-class edge flows on a mesh with two holes. Class `c` circulates hole
/// `c`; every sample adds an independent gradient flow `B_1ᵀφ` and is scaled to
/// unit norm. The first `n_train` samples form the training split.
pub fn synth_trajectories(seed: u64, n_train: usize, n_test: usize) -> Result<(SimplicialComplex, TrajectoryDataset)> {
    synth_trajectories_with_noise(seed, n_train, n_test, TRAJECTORY_NOISE)
}

pub fn synth_trajectories_with_noise(
    seed: u64,
    n_train: usize,
    n_test: usize,
    noise: f64,
) -> Result<(SimplicialComplex, TrajectoryDataset)> {
    let mesh = punctured_mesh(MESH_ROWS, MESH_COLS, &MESH_HOLES)?;
    let bases = hole_flows(&mesh)?;
    let b1 = incidence_matrix(&mesh, 1)?.to_f64();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = n_train + n_test;
    let mut labels: Vec<usize> = (0..n).map(|i| i % 2).collect();
    labels.shuffle(&mut rng);
    let mut flows = Array2::zeros((n, mesh.count(1)));
    for (i, &label) in labels.iter().enumerate() {
        let phi = Array2::from_shape_simple_fn((mesh.count(0), 1), || StandardNormal.sample(&mut rng));
        let grad = b1.tr_mul_dense(&phi.view())?.column(0).to_owned();
        let norm = grad.dot(&grad).sqrt();
        let mut flow = bases[label].clone();
        if norm > 0.0 {
            flow = flow + grad * (noise / norm);
        }
        let total = flow.dot(&flow).sqrt();
        flows.row_mut(i).assign(&(flow / total));
    }
    let data = TrajectoryDataset {
        flows,
        labels,
        train: (0..n_train).collect(),
        test: (n_train..n).collect(),
    };
    Ok((mesh, data))
}

/// A 4 x 6 grid graph with two diagonals swapped in and filled:
/// 24 nodes, 38 edges and 2 triangles.
pub fn fig1_complex() -> SimplicialComplex {
    let (rows, cols) = (4, 6);
    let v = |r, c| grid_vertex(cols, r, c);
    let removed = [(v(1, 0), v(1, 1)), (v(3, 4), v(3, 5))];
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                edges.push((v(r, c), v(r, c + 1)));
            }
            if r + 1 < rows {
                edges.push((v(r, c), v(r + 1, c)));
            }
        }
    }
    edges.retain(|e| !removed.contains(e));
    edges.push((v(0, 0), v(1, 1)));
    edges.push((v(2, 4), v(3, 5)));
    let triangles = vec![vec![v(0, 0), v(0, 1), v(1, 1)], vec![v(2, 4), v(2, 5), v(3, 5)]];
    let nodes = (0..rows * cols).map(|i| vec![i]).collect();
    SimplicialComplex::build(&[nodes, edges.into_iter().map(|(a, b)| vec![a, b]).collect(), triangles])
        .expect("fixed construction is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::verify_chain_property;
    use crate::tsp::hodge_decompose;

    #[test]
    fn tiny_scale_bounds() {
        let (c, x) = synth_citation_like(3, Scale::Tiny).unwrap();
        assert!(c.order() <= 2);
        assert!(c.count(0) <= 30);
        assert_eq!(x.len(), c.order() + 1);
        for (k, f) in x.iter().enumerate() {
            assert_eq!(f.rows(), c.count(k));
            assert!(f.values.iter().all(|v| *v >= 1.0 && v.fract() == 0.0));
        }
    }

    #[test]
    fn deterministic_and_valid() {
        let a = synth_citation_like(11, Scale::Small).unwrap();
        let b = synth_citation_like(11, Scale::Small).unwrap();
        assert_eq!(a.0, b.0);
        assert_eq!(a.1, b.1);
        assert!(verify_chain_property(&a.0).unwrap().iter().all(|c| c.max_abs == 0));
    }

    #[test]
    fn upper_faces_carry_at_least_coface_citations() {
        // a face is written by every paper that wrote its coface
        let (c, x) = synth_citation_like(5, Scale::Small).unwrap();
        let k = 1;
        for (j, s) in c.simplices(k + 1).iter().enumerate() {
            for (_, f) in s.faces() {
                let i = c.index_of(&f).unwrap();
                if x[k + 1].values[[j, 0]] > 0.0 {
                    assert!(x[k].values[[i, 0]] >= 1.0);
                }
            }
        }
    }

    #[test]
    fn mesh_has_two_holes() {
        let mesh = punctured_mesh(MESH_ROWS, MESH_COLS, &MESH_HOLES).unwrap();
        assert_eq!(harmonic_basis(&mesh, 1).unwrap().ncols(), 2);
    }

    #[test]
    fn noiseless_classes_are_orthogonal_harmonic_flows() {
        let (mesh, data) = synth_trajectories_with_noise(1, 6, 2, 0.0).unwrap();
        let a = data.labels.iter().position(|&l| l == 0).unwrap();
        let b = data.labels.iter().position(|&l| l == 1).unwrap();
        let pa = hodge_decompose(&mesh, 1, &Cochain::new(1, data.sample(a))).unwrap().harmonic.values;
        let pb = hodge_decompose(&mesh, 1, &Cochain::new(1, data.sample(b))).unwrap().harmonic.values;
        assert!((&pa * &pb).sum().abs() < 1e-8);
    }

    #[test]
    fn class_means_project_onto_their_hole() {
        let (mesh, data) = synth_trajectories(4, 160, 40).unwrap();
        assert_eq!((data.train.len(), data.test.len()), (160, 40));
        let bases = hole_flows(&mesh).unwrap();
        for class in 0..2 {
            let rows: Vec<usize> = (0..data.len()).filter(|&i| data.labels[i] == class).collect();
            let mean = rows.iter().fold(Array1::zeros(data.edges()), |acc, &i| acc + data.flows.row(i)) / rows.len() as f64;
            let h = hodge_decompose(&mesh, 1, &Cochain::new(1, mean.insert_axis(ndarray::Axis(1)))).unwrap();
            let hv = h.harmonic.values.column(0).to_owned();
            let own = hv.dot(&bases[class]).abs();
            let other = hv.dot(&bases[1 - class]).abs();
            assert!(own > 10.0 * other, "class {class}: {own} vs {other}");
        }
    }

    #[test]
    fn paper_scale_matches_published_sizes() {
        let target = [352.0, 1474.0, 3285.0, 5019.0, 5559.0, 4547.0];
        let (c, _) = synth_citation_like(0, Scale::Paper).unwrap();
        for (n, t) in c.counts().iter().zip(target) {
            assert!((*n as f64 - t).abs() <= 0.2 * t, "{:?}", c.counts());
        }
    }

    #[test]
    fn fig1_counts() {
        assert_eq!(fig1_complex().counts(), vec![24, 38, 2]);
    }
}

//! Undirected weighted graphs and the matrices derived from them.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

use crate::error::{Error, Result};
use crate::Matrix;

const SYMMETRY_TOL: f64 = 1e-12;

/// An undirected, simple, nonnegatively weighted graph with optional class labels.
///
/// The adjacency matrix is validated on construction and never mutated afterwards.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    adjacency: Matrix,
    labels: Option<Vec<usize>>,
    weighted: bool,
}

/// Degree vector, its diagonal matrix and the graph volume.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeData {
    pub degrees: Vec<f64>,
    pub volume: f64,
}

impl DegreeData {
    pub fn matrix(&self) -> Matrix {
        Matrix::from_diagonal(&nalgebra::DVector::from_column_slice(&self.degrees))
    }
}

/// Combinatorial Laplacian `L = D - A`.
#[derive(Debug, Clone, PartialEq)]
pub struct Laplacian(pub Matrix);

impl Laplacian {
    pub fn matrix(&self) -> &Matrix {
        &self.0
    }
}

/// Builds a validated graph from a symmetric adjacency matrix.
pub fn build_graph(adjacency: Matrix, labels: Option<Vec<usize>>) -> Result<Graph> {
    Graph::new(adjacency, labels)
}

impl Graph {
    pub fn new(adjacency: Matrix, labels: Option<Vec<usize>>) -> Result<Self> {
        let (rows, cols) = adjacency.shape();
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        let n = rows;
        for i in 0..n {
            for j in 0..n {
                let a = adjacency[(i, j)];
                if !a.is_finite() {
                    return Err(Error::NonFiniteInput { i, j });
                }
                if a < 0.0 {
                    return Err(Error::NegativeWeight { i, j, value: a });
                }
            }
        }
        for i in 0..n {
            if adjacency[(i, i)] != 0.0 {
                return Err(Error::NonzeroDiagonal {
                    i,
                    value: adjacency[(i, i)],
                });
            }
            for j in (i + 1)..n {
                let (a, b) = (adjacency[(i, j)], adjacency[(j, i)]);
                if (a - b).abs() > SYMMETRY_TOL {
                    return Err(Error::AsymmetricInput { i, j, a, b });
                }
            }
        }
        if let Some(labels) = &labels {
            validate_labels(labels, n)?;
        }
        let adjacency = (&adjacency + adjacency.transpose()) * 0.5;
        let weighted = adjacency.iter().any(|&w| w != 0.0 && w != 1.0);
        Ok(Graph {
            adjacency,
            labels,
            weighted,
        })
    }

    /// Builds an unweighted graph on `n` nodes from an edge list.
    pub fn from_edges(n: usize, edges: &[(usize, usize)], labels: Option<Vec<usize>>) -> Result<Self> {
        let mut a = Matrix::zeros(n, n);
        for &(u, v) in edges {
            a[(u, v)] = 1.0;
            a[(v, u)] = 1.0;
        }
        Graph::new(a, labels)
    }

    pub fn n(&self) -> usize {
        self.adjacency.nrows()
    }

    pub fn adjacency(&self) -> &Matrix {
        &self.adjacency
    }

    pub fn labels(&self) -> Option<&[usize]> {
        self.labels.as_deref()
    }

    /// Number of distinct classes, or 0 for an unlabeled graph.
    pub fn num_classes(&self) -> usize {
        self.labels
            .as_ref()
            .map_or(0, |l| l.iter().max().map_or(0, |&m| m + 1))
    }

    pub fn is_weighted(&self) -> bool {
        self.weighted
    }

    pub fn with_labels(self, labels: Vec<usize>) -> Result<Self> {
        validate_labels(&labels, self.n())?;
        Ok(Graph {
            labels: Some(labels),
            ..self
        })
    }

    pub fn edge_count(&self) -> usize {
        let n = self.n();
        (0..n)
            .map(|i| ((i + 1)..n).filter(|&j| self.adjacency[(i, j)] > 0.0).count())
            .sum()
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.adjacency
            .row(i)
            .iter()
            .copied()
            .enumerate()
            .filter(|&(_, w)| w > 0.0)
            .collect::<Vec<_>>()
            .into_iter()
    }

    pub fn degrees(&self) -> DegreeData {
        let degrees: Vec<f64> = self.adjacency.row_iter().map(|r| r.sum()).collect();
        let volume = degrees.iter().sum();
        DegreeData { degrees, volume }
    }

    pub fn laplacian(&self) -> Laplacian {
        let mut l = -self.adjacency.clone();
        for i in 0..self.n() {
            // Sum the off-diagonal entries directly so that L e = 0 holds to rounding.
            let d: f64 = self.adjacency.row(i).sum();
            l[(i, i)] = d;
        }
        Laplacian(l)
    }

    /// Relabels nodes: node `i` of the result is node `perm[i]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let n = self.n();
        let a = Matrix::from_fn(n, n, |i, j| self.adjacency[(perm[i], perm[j])]);
        let labels = self
            .labels
            .as_ref()
            .map(|l| perm.iter().map(|&p| l[p]).collect());
        Graph::new(a, labels)
    }
}

fn validate_labels(labels: &[usize], n: usize) -> Result<()> {
    if labels.len() != n {
        return Err(Error::LabelCount {
            n,
            got: labels.len(),
        });
    }
    let classes = labels.iter().max().map_or(0, |&m| m + 1);
    let mut seen = vec![false; classes];
    for &l in labels {
        seen[l] = true;
    }
    if let Some(missing) = seen.iter().position(|s| !s) {
        return Err(Error::LabelOutOfRange { classes, missing });
    }
    Ok(())
}

/// True iff the graph has exactly one connected component.
pub fn is_connected(g: &Graph) -> bool {
    let n = g.n();
    if n == 0 {
        return false;
    }
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    let mut count = 1;
    while let Some(u) = queue.pop_front() {
        for (v, _) in g.neighbors(u) {
            if !seen[v] {
                seen[v] = true;
                count += 1;
                queue.push_back(v);
            }
        }
    }
    count == n
}

#[derive(PartialEq)]
struct HeapEntry(f64, usize);

impl Eq for HeapEntry {}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .0
            .total_cmp(&self.0)
            .then_with(|| other.1.cmp(&self.1))
    }
}

/// All-pairs shortest path lengths.
///
/// Unweighted graphs use hop counts (BFS). Weighted graphs use Dijkstra with
/// edge length `1 / w`, so that strong ties are short.
pub fn shortest_path_matrix(g: &Graph) -> Result<Matrix> {
    let n = g.n();
    let adj: Vec<Vec<(usize, f64)>> = (0..n).map(|i| g.neighbors(i).collect()).collect();
    let mut out = Matrix::zeros(n, n);
    for s in 0..n {
        let dist = if g.is_weighted() {
            dijkstra(&adj, s)
        } else {
            bfs(&adj, s)
        };
        for (t, d) in dist.into_iter().enumerate() {
            if d.is_infinite() {
                return Err(Error::Disconnected);
            }
            out[(s, t)] = d;
        }
    }
    // Dijkstra sums in different orders from each end; enforce exact symmetry.
    Ok((&out + out.transpose()) * 0.5)
}

fn bfs(adj: &[Vec<(usize, f64)>], s: usize) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; adj.len()];
    dist[s] = 0.0;
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        for &(v, _) in &adj[u] {
            if dist[v].is_infinite() {
                dist[v] = dist[u] + 1.0;
                queue.push_back(v);
            }
        }
    }
    dist
}

fn dijkstra(adj: &[Vec<(usize, f64)>], s: usize) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; adj.len()];
    dist[s] = 0.0;
    let mut heap = BinaryHeap::from([HeapEntry(0.0, s)]);
    while let Some(HeapEntry(d, u)) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for &(v, w) in &adj[u] {
            let nd = d + 1.0 / w;
            if nd < dist[v] {
                dist[v] = nd;
                heap.push(HeapEntry(nd, v));
            }
        }
    }
    dist
}

/// Small fixed graphs used throughout the test suites.
pub mod named {
    use super::Graph;

    pub fn path(n: usize) -> Graph {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &edges, None).expect("valid path")
    }

    pub fn cycle(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges, None).expect("valid cycle")
    }

    pub fn complete(n: usize) -> Graph {
        let edges: Vec<_> = (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .collect();
        Graph::from_edges(n, &edges, None).expect("valid complete graph")
    }
}

#[cfg(test)]
mod tests {
    use super::named::*;
    use super::*;

    #[test]
    fn smallest_edge() {
        let g = build_graph(Matrix::from_row_slice(2, 2, &[0., 1., 1., 0.]), None).unwrap();
        assert_eq!(g.n(), 2);
        assert_eq!(g.edge_count(), 1);
        assert!(!g.is_weighted());
    }

    #[test]
    fn empty_graph_is_valid_but_disconnected() {
        let g = build_graph(Matrix::zeros(3, 3), None).unwrap();
        assert_eq!(g.edge_count(), 0);
        assert!(!is_connected(&g));
        assert_eq!(shortest_path_matrix(&g), Err(Error::Disconnected));
    }

    #[test]
    fn rejects_contract_violations() {
        let mut m = Matrix::from_row_slice(2, 2, &[0., 1., 1., 0.]);
        m[(0, 1)] = -1.0;
        m[(1, 0)] = -1.0;
        assert!(matches!(build_graph(m, None), Err(Error::NegativeWeight { .. })));

        let m = Matrix::from_row_slice(2, 2, &[0., 1., 0.5, 0.]);
        assert!(matches!(build_graph(m, None), Err(Error::AsymmetricInput { .. })));

        let m = Matrix::from_row_slice(2, 2, &[1., 1., 1., 0.]);
        assert!(matches!(build_graph(m, None), Err(Error::NonzeroDiagonal { .. })));

        let m = Matrix::from_row_slice(2, 2, &[0., 1., 1., 0.]);
        assert!(matches!(
            build_graph(m.clone(), Some(vec![0, 2])),
            Err(Error::LabelOutOfRange { missing: 1, .. })
        ));
        assert!(matches!(
            build_graph(m, Some(vec![0])),
            Err(Error::LabelCount { .. })
        ));
    }

    #[test]
    fn tiny_asymmetry_is_symmetrized() {
        let m = Matrix::from_row_slice(2, 2, &[0., 1.0, 1.0 + 1e-13, 0.]);
        let g = build_graph(m, None).unwrap();
        assert_eq!(g.adjacency()[(0, 1)], g.adjacency()[(1, 0)]);
    }

    #[test]
    fn connectivity() {
        assert!(is_connected(&path(3)));
        assert!(is_connected(&complete(5)));
        assert!(!is_connected(&Graph::new(Matrix::zeros(2, 2), None).unwrap()));
    }

    #[test]
    fn shortest_paths_on_named_graphs() {
        let d = shortest_path_matrix(&path(3)).unwrap();
        assert_eq!(d[(0, 2)], 2.0);
        let d = shortest_path_matrix(&complete(3)).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(d[(i, j)], if i == j { 0.0 } else { 1.0 });
            }
        }
    }

    /// Enumerates all simple paths to get the 4-cycle distances.
    #[test]
    fn four_cycle_matches_path_enumeration() {
        let g = cycle(4);
        let d = shortest_path_matrix(&g).unwrap();
        fn shortest(g: &Graph, at: usize, target: usize, visited: &mut Vec<usize>) -> usize {
            if at == target {
                return 0;
            }
            let mut best = usize::MAX;
            for (v, _) in g.neighbors(at) {
                if !visited.contains(&v) {
                    visited.push(v);
                    let rest = shortest(g, v, target, visited);
                    if rest != usize::MAX {
                        best = best.min(rest + 1);
                    }
                    visited.pop();
                }
            }
            best
        }
        for s in 0..4 {
            for t in 0..4 {
                let brute = shortest(&g, s, t, &mut vec![s]);
                assert_eq!(d[(s, t)], brute as f64);
            }
        }
        assert_eq!(d[(0, 2)], 2.0);
    }

    #[test]
    fn weighted_paths_use_reciprocal_weights() {
        let m = Matrix::from_row_slice(3, 3, &[0., 2., 0., 2., 0., 4., 0., 4., 0.]);
        let g = build_graph(m, None).unwrap();
        assert!(g.is_weighted());
        let d = shortest_path_matrix(&g).unwrap();
        assert!((d[(0, 2)] - 0.75).abs() < 1e-15);
    }

    #[test]
    fn laplacian_rows_sum_to_zero() {
        let l = complete(5).laplacian();
        for r in l.matrix().row_iter() {
            assert_eq!(r.sum(), 0.0);
        }
        let dd = path(3).degrees();
        assert_eq!(dd.degrees, vec![1.0, 2.0, 1.0]);
        assert_eq!(dd.volume, 4.0);
    }
}

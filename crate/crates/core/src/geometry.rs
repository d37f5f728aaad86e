//! Point sets, distance matrices and the metrics that connect them.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ranking::sorted_neighbors;

/// `n` points in `dim` dimensions, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    n: usize,
    dim: usize,
    coords: Vec<f64>,
}

impl PointSet {
    /// Builds a point set from row-major coordinates.
    ///
    /// Requires at least two points, at least one dimension and finite
    /// coordinates.
    pub fn new(n: usize, dim: usize, coords: Vec<f64>) -> Result<Self> {
        if n < 2 {
            return Err(Error::input(format!("need at least 2 points, got {n}")));
        }
        if dim < 1 {
            return Err(Error::input("points must have at least one coordinate"));
        }
        if coords.len() != n * dim {
            return Err(Error::Mismatch(format!(
                "{} coordinates given for {n} points in {dim} dimensions",
                coords.len()
            )));
        }
        if let Some(pos) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::input(format!(
                "non-finite coordinate {} of point {}",
                pos % dim,
                pos / dim
            )));
        }
        Ok(PointSet { n, dim, coords })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let dim = rows.first().map_or(0, |r| r.as_ref().len());
        if let Some(i) = rows.iter().position(|r| r.as_ref().len() != dim) {
            return Err(Error::input(format!(
                "point {i} has {} coordinates, expected {dim}",
                rows[i].as_ref().len()
            )));
        }
        let coords = rows.iter().flat_map(|r| r.as_ref().iter().copied()).collect();
        PointSet::new(rows.len(), dim, coords)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.coords
    }
}

/// Symmetric `n × n` matrix of nonnegative finite distances with a zero
/// diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DistanceMatrix {
    /// Validates a row-major matrix. Symmetry and the zero diagonal are
    /// checked exactly; use [`crate::io::read_distance_matrix`] for tolerant
    /// ingestion of externally computed matrices.
    pub fn new(n: usize, data: Vec<f64>) -> Result<Self> {
        if n < 2 {
            return Err(Error::input(format!("need at least 2 points, got {n}")));
        }
        if data.len() != n * n {
            return Err(Error::Mismatch(format!("{} entries for a {n}x{n} distance matrix", data.len())));
        }
        for i in 0..n {
            if data[i * n + i] != 0.0 {
                return Err(Error::input(format!("nonzero diagonal entry at ({i}, {i})")));
            }
            for j in 0..n {
                let v = data[i * n + j];
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::input(format!("invalid distance {v} at ({i}, {j})")));
                }
                if v != data[j * n + i] {
                    return Err(Error::input(format!("asymmetric entries at ({i}, {j})")));
                }
            }
        }
        Ok(DistanceMatrix { n, data })
    }

    pub(crate) fn from_raw(n: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), n * n);
        DistanceMatrix { n, data }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Distances between the points `perm[i]` and `perm[j]`, i.e. the matrix
    /// of the same geometry with positions reassigned to indices.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::Mismatch(format!("permutation of length {} for {} points", perm.len(), self.n)));
        }
        let n = self.n;
        let mut data = vec![0.0; n * n];
        data.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
            let src = self.row(perm[i]);
            for (j, v) in row.iter_mut().enumerate() {
                *v = src[perm[j]];
            }
        });
        Ok(DistanceMatrix { n, data })
    }
}

/// How a side of the mapping is turned into distances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Metric {
    #[default]
    Euclidean,
    /// The input already is a distance matrix.
    Precomputed,
    /// Shortest paths in the symmetrized `k`-nearest-neighbor graph.
    Geodesic { k: usize },
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Metric::Euclidean => f.write_str("euclidean"),
            Metric::Precomputed => f.write_str("precomputed"),
            Metric::Geodesic { k } => write!(f, "geodesic:{k}"),
        }
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "euclidean" => Ok(Metric::Euclidean),
            "precomputed" => Ok(Metric::Precomputed),
            _ => {
                let k = s
                    .strip_prefix("geodesic:")
                    .and_then(|k| k.parse::<usize>().ok())
                    .ok_or_else(|| {
                        Error::input(format!("unknown metric '{s}' (expected euclidean, precomputed or geodesic:K)"))
                    })?;
                if k == 0 {
                    return Err(Error::input("geodesic neighbor count must be at least 1"));
                }
                Ok(Metric::Geodesic { k })
            }
        }
    }
}

/// Distance matrix of `points` under `metric`.
///
/// `Metric::Precomputed` is rejected here: a point set carries no
/// precomputed distances.
pub fn pairwise_distances(points: &PointSet, metric: Metric) -> Result<DistanceMatrix> {
    match metric {
        Metric::Euclidean => Ok(euclidean(points)),
        Metric::Geodesic { k } => geodesic_distances(points, k),
        Metric::Precomputed => Err(Error::input("precomputed metric requires a distance-matrix input")),
    }
}

fn euclidean(points: &PointSet) -> DistanceMatrix {
    let n = points.len();
    let mut data = vec![0.0; n * n];
    // (a - b)^2 == (b - a)^2 exactly, so rows computed independently are
    // bitwise symmetric.
    data.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
        let p = points.point(i);
        for (j, v) in row.iter_mut().enumerate() {
            if j != i {
                *v = p
                    .iter()
                    .zip(points.point(j))
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt();
            }
        }
    });
    DistanceMatrix::from_raw(n, data)
}

/// Undirected weighted graph stored as sorted adjacency lists.
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborGraph {
    adjacency: Vec<Vec<(usize, f64)>>,
}

impl NeighborGraph {
    pub fn len(&self) -> usize {
        self.adjacency.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    pub fn neighbors(&self, i: usize) -> &[(usize, f64)] {
        &self.adjacency[i]
    }

    /// Every edge once, as `(i, j, weight)` with `i < j`, in lexicographic
    /// order.
    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(i, adj)| adj.iter().filter(move |&&(j, _)| j > i).map(move |&(j, w)| (i, j, w)))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Number of connected components.
    pub fn component_count(&self) -> usize {
        let mut uf = UnionFind::new(self.len());
        for (i, adj) in self.adjacency.iter().enumerate() {
            for &(j, _) in adj {
                uf.union(i, j);
            }
        }
        uf.components
    }
}

/// Symmetrized union of every point's `k` nearest neighbors. Neighbors are
/// chosen by rank, so ties go to the lower index exactly as in
/// [`crate::rank_matrix`].
pub fn knn_graph(d: &DistanceMatrix, k: usize) -> Result<NeighborGraph> {
    let n = d.len();
    Error::check_range("k", k, 1, n - 1)?;
    let orders: Vec<Vec<usize>> = (0..n).into_par_iter().map(|i| sorted_neighbors(d.row(i), i)).collect();
    let mut adjacency: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for (i, order) in orders.iter().enumerate() {
        for &j in &order[..k] {
            adjacency[i].push((j, d.get(i, j)));
            adjacency[j].push((i, d.get(j, i)));
        }
    }
    for adj in &mut adjacency {
        adj.sort_unstable_by_key(|&(j, _)| j);
        adj.dedup_by_key(|&mut (j, _)| j);
    }
    Ok(NeighborGraph { adjacency })
}

/// Shortest-path distances in the kNN graph over Euclidean distances.
///
/// Fails with [`Error::Disconnected`] if the graph falls apart; the error
/// carries the smallest `k` for which it would be connected.
pub fn geodesic_distances(points: &PointSet, k: usize) -> Result<DistanceMatrix> {
    let n = points.len();
    Error::check_range("k", k, 1, n - 1)?;
    let direct = euclidean(points);
    let graph = knn_graph(&direct, k)?;
    let components = graph.component_count();
    if components > 1 {
        return Err(Error::Disconnected { k, components, connecting_k: smallest_connecting_k(&direct, k) });
    }

    let mut data = vec![0.0; n * n];
    data.par_chunks_mut(n).enumerate().for_each(|(source, row)| dijkstra(&graph, source, row));

    // Paths are sums of Euclidean edges, so no path is shorter than the
    // straight line; clamping removes last-ulp rounding below it. The upper
    // triangle is mirrored so the result is exactly symmetric.
    for i in 0..n {
        data[i * n + i] = 0.0;
        for j in i + 1..n {
            let v = data[i * n + j].max(direct.get(i, j));
            data[i * n + j] = v;
            data[j * n + i] = v;
        }
    }
    Ok(DistanceMatrix::from_raw(n, data))
}

fn smallest_connecting_k(d: &DistanceMatrix, k: usize) -> usize {
    let n = d.len();
    let orders: Vec<Vec<usize>> = (0..n).into_par_iter().map(|i| sorted_neighbors(d.row(i), i)).collect();
    let mut uf = UnionFind::new(n);
    for (i, order) in orders.iter().enumerate() {
        for &j in &order[..k] {
            uf.union(i, j);
        }
    }
    let mut kk = k;
    while uf.components > 1 {
        for (i, order) in orders.iter().enumerate() {
            uf.union(i, order[kk]);
        }
        kk += 1;
    }
    kk
}

#[derive(Clone, Copy, PartialEq)]
struct HeapEntry {
    dist: f64,
    node: usize,
}

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.dist.total_cmp(&other.dist).then(self.node.cmp(&other.node))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn dijkstra(graph: &NeighborGraph, source: usize, dist: &mut [f64]) {
    dist.fill(f64::INFINITY);
    dist[source] = 0.0;
    let mut heap = BinaryHeap::new();
    heap.push(Reverse(HeapEntry { dist: 0.0, node: source }));
    while let Some(Reverse(HeapEntry { dist: du, node: u })) = heap.pop() {
        if du > dist[u] {
            continue;
        }
        for &(v, w) in graph.neighbors(u) {
            let alt = du + w;
            if alt < dist[v] {
                dist[v] = alt;
                heap.push(Reverse(HeapEntry { dist: alt, node: v }));
            }
        }
    }
}

struct UnionFind {
    parent: Vec<usize>,
    components: usize,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), components: n }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
            self.components -= 1;
        }
    }
}

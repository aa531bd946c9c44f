//! KNN affinity graphs, graph Laplacians and connected components.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{knn_all, PointSet};
use crate::partition::Partition;

/// Rows at or above this size are processed in parallel.
const PAR_ROWS: usize = 4096;

/// The 0/1 symmetric adjacency matrix `W` of an undirected simple graph,
/// stored in compressed-row form without values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseAffinity {
    row_offsets: Vec<usize>,
    column_indices: Vec<usize>,
}

impl SparseAffinity {
    /// Builds a graph on `n` vertices from undirected edges. Duplicates are
    /// merged; self-loops and out-of-range endpoints are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut rows = vec![Vec::new(); n];
        for &(i, j) in edges {
            if i >= n || j >= n {
                return Err(Error::input(format!("edge ({i}, {j}) out of range for {n} vertices")));
            }
            if i == j {
                return Err(Error::input(format!("self-loop at vertex {i}")));
            }
            rows[i].push(j);
            rows[j].push(i);
        }
        Ok(Self::from_rows(rows))
    }

    fn from_rows(mut rows: Vec<Vec<usize>>) -> Self {
        let sort = |r: &mut Vec<usize>| {
            r.sort_unstable();
            r.dedup();
        };
        if rows.len() >= PAR_ROWS {
            rows.par_iter_mut().for_each(sort);
        } else {
            rows.iter_mut().for_each(sort);
        }
        let mut row_offsets = Vec::with_capacity(rows.len() + 1);
        row_offsets.push(0);
        let mut column_indices = Vec::with_capacity(rows.iter().map(Vec::len).sum());
        for r in rows {
            column_indices.extend_from_slice(&r);
            row_offsets.push(column_indices.len());
        }
        Self {
            row_offsets,
            column_indices,
        }
    }

    /// Vertex count.
    pub fn n(&self) -> usize {
        self.row_offsets.len() - 1
    }

    /// Neighbors of `i` in increasing order.
    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.column_indices[self.row_offsets[i]..self.row_offsets[i + 1]]
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.neighbors(i).binary_search(&j).is_ok()
    }

    pub fn row_offsets(&self) -> &[usize] {
        &self.row_offsets
    }

    pub fn column_indices(&self) -> &[usize] {
        &self.column_indices
    }

    /// Number of undirected edges.
    pub fn edge_count(&self) -> usize {
        self.column_indices.len() / 2
    }

    /// Undirected edges `(i, j)` with `i < j`, in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |i| self.neighbors(i).iter().filter(move |&&j| j > i).map(move |&j| (i, j)))
    }
}

/// `W_ij = 1` iff `i` is among the `K` nearest neighbors of `j` or vice versa.
pub fn build_knn_affinity(points: &PointSet, k: usize) -> Result<SparseAffinity> {
    let lists = knn_all(points, k)?;
    let mut rows: Vec<Vec<usize>> = lists
        .iter()
        .map(|l| {
            let mut r = Vec::with_capacity(2 * k);
            r.extend(l.indices());
            r
        })
        .collect();
    for l in &lists {
        for j in l.indices() {
            rows[j].push(l.owner);
        }
    }
    Ok(SparseAffinity::from_rows(rows))
}

/// Row entry counts of `W`.
pub fn degrees(w: &SparseAffinity) -> Vec<usize> {
    (0..w.n()).map(|i| w.neighbors(i).len()).collect()
}

/// Which Laplacian to form from `W`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum LaplacianKind {
    /// `D - W`.
    #[default]
    Unnormalized,
    /// `I - D^{-1} W`.
    RandomWalk,
    /// `I - D^{-1/2} W D^{-1/2}`.
    Symmetric,
}

impl LaplacianKind {
    pub fn short_name(self) -> &'static str {
        match self {
            LaplacianKind::Unnormalized => "unnorm",
            LaplacianKind::RandomWalk => "rw",
            LaplacianKind::Symmetric => "sym",
        }
    }
}

impl fmt::Display for LaplacianKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for LaplacianKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unnorm" | "unnormalized" => Ok(LaplacianKind::Unnormalized),
            "rw" | "random_walk" => Ok(LaplacianKind::RandomWalk),
            "sym" | "symmetric" => Ok(LaplacianKind::Symmetric),
            other => Err(Error::input(format!(
                "unknown Laplacian kind '{other}' (expected unnorm, rw or sym)"
            ))),
        }
    }
}

/// A graph Laplacian in compressed-row form. Every row stores its diagonal
/// entry, and column indices are increasing within a row.
///
/// For the normalized kinds an isolated vertex gets `D^{-1} = 0`, which makes
/// its row identically zero: the vertex is its own component and contributes
/// one zero eigenvalue, exactly as under the unnormalized kind.
#[derive(Debug, Clone, PartialEq)]
pub struct Laplacian {
    kind: LaplacianKind,
    /// Built from a graph, so the kernel is spanned by component indicators.
    from_graph: bool,
    degrees: Vec<usize>,
    row_offsets: Vec<usize>,
    column_indices: Vec<usize>,
    values: Vec<f64>,
}

/// Forms the Laplacian of `w` of the given kind.
pub fn build_laplacian(w: &SparseAffinity, kind: LaplacianKind) -> Laplacian {
    let n = w.n();
    let deg = degrees(w);
    let inv_sqrt: Vec<f64> = deg
        .iter()
        .map(|&d| if d == 0 { 0.0 } else { 1.0 / (d as f64).sqrt() })
        .collect();
    let mut row_offsets = Vec::with_capacity(n + 1);
    row_offsets.push(0);
    let mut column_indices = Vec::with_capacity(w.column_indices.len() + n);
    let mut values = Vec::with_capacity(w.column_indices.len() + n);
    for i in 0..n {
        let d = deg[i];
        let diag = match kind {
            LaplacianKind::Unnormalized => d as f64,
            _ if d == 0 => 0.0,
            _ => 1.0,
        };
        let mut diag_pending = true;
        for &j in w.neighbors(i) {
            if diag_pending && j > i {
                column_indices.push(i);
                values.push(diag);
                diag_pending = false;
            }
            column_indices.push(j);
            values.push(match kind {
                LaplacianKind::Unnormalized => -1.0,
                LaplacianKind::RandomWalk => -1.0 / d as f64,
                LaplacianKind::Symmetric => -(inv_sqrt[i] * inv_sqrt[j]),
            });
        }
        if diag_pending {
            column_indices.push(i);
            values.push(diag);
        }
        row_offsets.push(column_indices.len());
    }
    Laplacian {
        kind,
        from_graph: true,
        degrees: deg,
        row_offsets,
        column_indices,
        values,
    }
}

impl Laplacian {
    /// A Laplacian of the given kind from explicit symmetric rows. Intended for
    /// operators that do not come from a graph, such as diagonal test matrices.
    /// `degrees` are taken as the diagonal rounded to integers.
    pub fn from_dense(kind: LaplacianKind, n: usize, dense: &[f64]) -> Result<Self> {
        if dense.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                actual: dense.len(),
            });
        }
        let mut row_offsets = vec![0];
        let mut column_indices = Vec::new();
        let mut values = Vec::new();
        let mut degrees = Vec::with_capacity(n);
        for i in 0..n {
            for j in 0..n {
                let v = dense[i * n + j];
                if !v.is_finite() {
                    return Err(Error::input("matrix has non-finite entries"));
                }
                if (v - dense[j * n + i]).abs() > 1e-12 * (1.0 + v.abs()) {
                    return Err(Error::input(format!("matrix is not symmetric at ({i}, {j})")));
                }
                if v != 0.0 || i == j {
                    column_indices.push(j);
                    values.push(v);
                }
            }
            row_offsets.push(column_indices.len());
            degrees.push(dense[i * n + i].max(0.0).round() as usize);
        }
        Ok(Self {
            kind,
            from_graph: false,
            degrees,
            row_offsets,
            column_indices,
            values,
        })
    }

    pub fn kind(&self) -> LaplacianKind {
        self.kind
    }

    /// Whether this operator was built from a graph by [`build_laplacian`].
    pub fn is_graph_laplacian(&self) -> bool {
        self.from_graph
    }

    /// Connected components of the graph behind a graph Laplacian, read off
    /// the off-diagonal sparsity pattern.
    pub fn components(&self) -> Option<Partition> {
        if !self.from_graph {
            return None;
        }
        let n = self.n();
        let mut labels = vec![usize::MAX; n];
        let mut next = 0;
        let mut stack = Vec::new();
        for start in 0..n {
            if labels[start] != usize::MAX {
                continue;
            }
            labels[start] = next;
            stack.push(start);
            while let Some(v) = stack.pop() {
                for &u in &self.column_indices[self.row_offsets[v]..self.row_offsets[v + 1]] {
                    if labels[u] == usize::MAX {
                        labels[u] = next;
                        stack.push(u);
                    }
                }
            }
            next += 1;
        }
        Some(Partition::new(labels, next.max(1)).expect("component labels are in range"))
    }

    pub fn n(&self) -> usize {
        self.degrees.len()
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    /// Stored `(column, value)` pairs of row `i`, diagonal included.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let span = self.row_offsets[i]..self.row_offsets[i + 1];
        self.column_indices[span.clone()]
            .iter()
            .copied()
            .zip(self.values[span].iter().copied())
    }

    /// Entry `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let span = self.row_offsets[i]..self.row_offsets[i + 1];
        match self.column_indices[span.clone()].binary_search(&j) {
            Ok(p) => self.values[span.start + p],
            Err(_) => 0.0,
        }
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.n();
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for (j, v) in self.row(i) {
                out[i * n + j] = v;
            }
        }
        out
    }

    /// `y = L x`.
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        let row = |(i, yi): (usize, &mut f64)| {
            let span = self.row_offsets[i]..self.row_offsets[i + 1];
            *yi = self.column_indices[span.clone()]
                .iter()
                .zip(&self.values[span])
                .map(|(&j, &v)| v * x[j])
                .sum();
        };
        if self.n() >= PAR_ROWS {
            y.par_iter_mut().enumerate().for_each(row);
        } else {
            y.iter_mut().enumerate().for_each(row);
        }
    }

    /// The symmetric matrix sharing this operator's spectrum. For the
    /// random-walk kind this is `D^{1/2} L D^{-1/2}`, the symmetric Laplacian;
    /// the other kinds are already symmetric and are returned unchanged.
    pub fn symmetrized(&self) -> Laplacian {
        if self.kind != LaplacianKind::RandomWalk {
            return self.clone();
        }
        let sqrt_d: Vec<f64> = self.degrees.iter().map(|&d| (d as f64).sqrt()).collect();
        let mut out = self.clone();
        out.kind = LaplacianKind::Symmetric;
        for i in 0..self.n() {
            for p in self.row_offsets[i]..self.row_offsets[i + 1] {
                let j = self.column_indices[p];
                if j != i {
                    out.values[p] = -1.0 / (sqrt_d[i] * sqrt_d[j]);
                }
            }
        }
        out
    }
}

/// Connected components, labelled `0..c` in order of each component's
/// smallest vertex.
pub fn connected_components(w: &SparseAffinity) -> Partition {
    let n = w.n();
    let mut labels = vec![usize::MAX; n];
    let mut next = 0;
    let mut stack = Vec::new();
    for start in 0..n {
        if labels[start] != usize::MAX {
            continue;
        }
        labels[start] = next;
        stack.push(start);
        while let Some(v) = stack.pop() {
            for &u in w.neighbors(v) {
                if labels[u] == usize::MAX {
                    labels[u] = next;
                    stack.push(u);
                }
            }
        }
        next += 1;
    }
    Partition::new(labels, next.max(1)).expect("component labels are in range")
}

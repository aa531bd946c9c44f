//! Point storage, Euclidean distances and exact nearest-neighbor queries.
//!
//! All searches are brute force. Candidates are ranked by the pair
//! `(squared distance, index)`, so ties always go to the smaller index and
//! the output is identical to a full sort of the distance row.

use std::cmp::Ordering;

use rayon::prelude::*;

use crate::error::{Error, Result};

/// `n` points in `R^d`, stored row-major, with optional integer labels.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    coords: Vec<f64>,
    dim: usize,
    labels: Option<Vec<usize>>,
}

impl PointSet {
    /// Builds a point set from row-major coordinates.
    pub fn new(coords: Vec<f64>, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::input("point dimension must be at least 1"));
        }
        if coords.is_empty() {
            return Err(Error::input("point set must contain at least one point"));
        }
        if coords.len() % dim != 0 {
            return Err(Error::input(format!(
                "{} coordinates do not form rows of dimension {dim}",
                coords.len()
            )));
        }
        if let Some(pos) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::input(format!(
                "non-finite coordinate in point {} (component {})",
                pos / dim,
                pos % dim
            )));
        }
        Ok(Self {
            coords,
            dim,
            labels: None,
        })
    }

    /// Builds a point set from individual rows, which must share a length.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let dim = rows
            .first()
            .map(|r| r.as_ref().len())
            .ok_or_else(|| Error::input("point set must contain at least one point"))?;
        let mut coords = Vec::with_capacity(rows.len() * dim);
        for row in rows {
            let row = row.as_ref();
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    actual: row.len(),
                });
            }
            coords.extend_from_slice(row);
        }
        Self::new(coords, dim)
    }

    /// Attaches ground-truth labels, one per point.
    pub fn with_labels(mut self, labels: Vec<usize>) -> Result<Self> {
        if labels.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                actual: labels.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn labels(&self) -> Option<&[usize]> {
        self.labels.as_deref()
    }

    /// Labels, or an error naming the operation that needed them.
    pub fn require_labels(&self, op: &str) -> Result<&[usize]> {
        self.labels()
            .ok_or_else(|| Error::input(format!("{op} requires ground-truth labels")))
    }

    /// Number of distinct label values `L` (labels lie in `[0, L)`).
    pub fn label_count(&self) -> Option<usize> {
        self.labels().map(|l| l.iter().max().map_or(0, |m| m + 1))
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    /// The points at `indices`, in that order, carrying their labels along.
    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::input("subset must select at least one point"));
        }
        let n = self.len();
        let mut coords = Vec::with_capacity(indices.len() * self.dim);
        for &i in indices {
            if i >= n {
                return Err(Error::input(format!("index {i} out of range for {n} points")));
            }
            coords.extend_from_slice(self.point(i));
        }
        Ok(Self {
            coords,
            dim: self.dim,
            labels: self.labels.as_ref().map(|l| indices.iter().map(|&i| l[i]).collect()),
        })
    }
}

/// One neighbor of a query point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Neighbor {
    pub index: usize,
    pub distance: f64,
}

/// The `K` nearest neighbors of `owner`, ascending by distance.
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborList {
    pub owner: usize,
    pub neighbors: Vec<Neighbor>,
    pub k: usize,
}

impl NeighborList {
    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.neighbors.iter().map(|nb| nb.index)
    }
}

/// Euclidean distance between two points of equal dimension.
pub fn euclidean_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            actual: b.len(),
        });
    }
    Ok(squared_distance(a, b).sqrt())
}

#[inline]
pub(crate) fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Selection candidate ordered by `(squared distance, index)`.
#[derive(Clone, Copy)]
struct Candidate {
    dist2: f64,
    index: usize,
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Candidate {}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.dist2.total_cmp(&other.dist2).then(self.index.cmp(&other.index))
    }
}

/// The `k` nearest points to point `query`, excluding `query` itself.
pub fn knn(points: &PointSet, query: usize, k: usize) -> Result<NeighborList> {
    let n = points.len();
    if query >= n {
        return Err(Error::input(format!("query index {query} out of range for {n} points")));
    }
    check_neighbor_count(k, n)?;
    Ok(knn_unchecked(points, query, k, &mut Vec::new()))
}

/// Neighbor lists for every point, computed in parallel. The result does not
/// depend on the number of threads.
pub fn knn_all(points: &PointSet, k: usize) -> Result<Vec<NeighborList>> {
    check_neighbor_count(k, points.len())?;
    Ok((0..points.len())
        .into_par_iter()
        .map_init(Vec::new, |scratch, i| knn_unchecked(points, i, k, scratch))
        .collect())
}

fn check_neighbor_count(k: usize, n: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::input("neighbor count K must be at least 1"));
    }
    if k >= n {
        return Err(Error::input(format!(
            "neighbor count K = {k} must be smaller than the number of points ({n})"
        )));
    }
    Ok(())
}

fn knn_unchecked(points: &PointSet, query: usize, k: usize, scratch: &mut Vec<Candidate>) -> NeighborList {
    let selected = match points.dim() {
        1 => scan_fixed::<1>(points, query, k, scratch),
        2 => scan_fixed::<2>(points, query, k, scratch),
        3 => scan_fixed::<3>(points, query, k, scratch),
        _ => {
            let q = points.point(query);
            scan(
                points.len(),
                |j| squared_distance(q, points.point(j)),
                query,
                k,
                scratch,
            )
        }
    };
    let neighbors = selected
        .iter()
        .map(|c| Neighbor {
            index: c.index,
            distance: c.dist2.sqrt(),
        })
        .collect();
    NeighborList {
        owner: query,
        neighbors,
        k,
    }
}

fn scan_fixed<'a, const D: usize>(
    points: &PointSet,
    query: usize,
    k: usize,
    scratch: &'a mut Vec<Candidate>,
) -> &'a [Candidate] {
    let coords = points.coords();
    let q: [f64; D] = points.point(query).try_into().expect("row has D coordinates");
    scan(
        points.len(),
        |j| {
            let r = &coords[j * D..j * D + D];
            (0..D).map(|t| (q[t] - r[t]) * (q[t] - r[t])).sum()
        },
        query,
        k,
        scratch,
    )
}

const BLOCK: usize = 64;

/// Bounded selection over rows in index order.
///
/// Every row is written to a buffer, but the buffer length only advances
/// when the row beats the current threshold, so the scan has no
/// data-dependent branches. After the first block, and after any later block
/// that fills the buffer, it is trimmed back to the best `k` by a
/// linear-time selection, which tightens the threshold. Because indices
/// arrive in increasing order, a later row with a distance equal to the
/// threshold ranks after every kept candidate, which is exactly the
/// `(distance, index)` order.
fn scan(n: usize, dist2: impl Fn(usize) -> f64, query: usize, k: usize, buf: &mut Vec<Candidate>) -> &[Candidate] {
    let cap = (2 * k).max(k + BLOCK);
    buf.resize(cap + BLOCK, Candidate { dist2: 0.0, index: 0 });
    let mut len = 0;
    let mut worst = f64::INFINITY;
    for start in (0..n).step_by(BLOCK) {
        for index in start..(start + BLOCK).min(n) {
            let d = if index == query { f64::INFINITY } else { dist2(index) };
            buf[len] = Candidate { dist2: d, index };
            len += usize::from(d < worst);
        }
        if len >= cap || (len > k && worst == f64::INFINITY) {
            buf[..len].select_nth_unstable(k - 1);
            len = k;
            worst = buf[k - 1].dist2;
        }
    }
    if len > k {
        buf[..len].select_nth_unstable(k - 1);
        len = k;
    }
    let best = &mut buf[..len];
    best.sort_unstable();
    best
}

/// Index of and distance to the anchor nearest to `query`.
pub fn nearest_anchor(anchors: &PointSet, query: &[f64]) -> Result<(usize, f64)> {
    if anchors.is_empty() {
        return Err(Error::input("anchor set is empty"));
    }
    if query.len() != anchors.dim() {
        return Err(Error::DimensionMismatch {
            expected: anchors.dim(),
            actual: query.len(),
        });
    }
    if query.iter().any(|c| !c.is_finite()) {
        return Err(Error::input("query point has non-finite coordinates"));
    }
    let (index, dist2) = nearest_unchecked(anchors, query);
    Ok((index, dist2.sqrt()))
}

/// Squared distance variant without validation; strict `<` keeps the
/// smaller index on ties.
pub(crate) fn nearest_unchecked(anchors: &PointSet, query: &[f64]) -> (usize, f64) {
    match anchors.dim() {
        1 => nearest_fixed::<1>(anchors, query),
        2 => nearest_fixed::<2>(anchors, query),
        3 => nearest_fixed::<3>(anchors, query),
        _ => nearest_in(anchors.iter(), query),
    }
}

fn nearest_fixed<const D: usize>(anchors: &PointSet, query: &[f64]) -> (usize, f64) {
    let q: [f64; D] = query.try_into().expect("query has D coordinates");
    let rows = anchors
        .coords()
        .chunks_exact(D)
        .map(|r| <[f64; D]>::try_from(r).expect("row has D coordinates"));
    nearest_in(rows, &q)
}

fn nearest_in<R: AsRef<[f64]>>(rows: impl Iterator<Item = R>, query: &[f64]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (i, a) in rows.enumerate() {
        let d2 = squared_distance(a.as_ref(), query);
        if d2 < best.1 {
            best = (i, d2);
        }
    }
    best
}

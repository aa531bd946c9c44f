//! Full spectral clustering and AnchorNN spectral clustering.

use std::time::{Duration, Instant};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eigen::{smallest_eigenpairs, EigenOptions};
use crate::error::{Error, Result};
use crate::geometry::{nearest_unchecked, PointSet};
use crate::graph::{build_knn_affinity, build_laplacian, LaplacianKind};
use crate::kmeans::{kmeans, KMeansOptions};
use crate::partition::Partition;
use crate::rng::{stream, Purpose};

/// Parameters shared by both algorithms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClusterConfig {
    /// Number of clusters `k`.
    pub clusters: usize,
    /// Nearest-neighbor count `K` of the affinity graph.
    pub neighbors: usize,
    /// Anchor count `m` (AnchorNN only).
    pub anchors: Option<usize>,
    pub kind: LaplacianKind,
    pub seed: u64,
    pub eigen_tol: f64,
    /// Matrix-vector budget of the eigensolver; `None` means `10 n`.
    pub eigen_max_matvecs: Option<usize>,
    pub kmeans_restarts: usize,
    pub kmeans_max_iter: usize,
}

impl ClusterConfig {
    pub fn new(clusters: usize, neighbors: usize) -> Self {
        let km = KMeansOptions::default();
        Self {
            clusters,
            neighbors,
            anchors: None,
            kind: LaplacianKind::Unnormalized,
            seed: 0,
            eigen_tol: EigenOptions::default().tol,
            eigen_max_matvecs: None,
            kmeans_restarts: km.restarts,
            kmeans_max_iter: km.max_iter,
        }
    }

    pub fn with_anchors(mut self, m: usize) -> Self {
        self.anchors = Some(m);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_kind(mut self, kind: LaplacianKind) -> Self {
        self.kind = kind;
        self
    }

    fn validate(&self, sample: usize) -> Result<()> {
        if self.clusters == 0 {
            return Err(Error::input("cluster count k must be at least 1"));
        }
        if self.clusters > sample {
            return Err(Error::input(format!(
                "cluster count k = {} exceeds the {sample} points being clustered",
                self.clusters
            )));
        }
        if self.neighbors == 0 || self.neighbors >= sample {
            return Err(Error::input(format!(
                "neighbor count K = {} must lie in [1, {}]",
                self.neighbors,
                sample.saturating_sub(1)
            )));
        }
        Ok(())
    }
}

/// Wall time spent in each phase.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct PhaseTimings {
    pub affinity: Duration,
    pub eigen: Duration,
    pub kmeans: Duration,
    pub propagate: Duration,
}

impl PhaseTimings {
    pub fn total(&self) -> Duration {
        self.affinity + self.eigen + self.kmeans + self.propagate
    }
}

/// Output of one clustering run with its by-products.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterRun {
    pub partition: Partition,
    /// Sorted indices of the anchor sample (AnchorNN only).
    pub anchors: Option<Vec<usize>>,
    /// The `k` smallest Laplacian eigenvalues of the clustered graph.
    pub eigenvalues: Vec<f64>,
    pub eigen_matvecs: usize,
    pub timings: PhaseTimings,
}

/// Spectral clustering of all points: KNN graph, Laplacian, `k` lowest
/// eigenvectors, k-means on their rows.
pub fn spectral_cluster(points: &PointSet, cfg: &ClusterConfig) -> Result<Partition> {
    spectral_run(points, cfg).map(|r| r.partition)
}

/// [`spectral_cluster`] with eigenvalues and phase timings.
pub fn spectral_run(points: &PointSet, cfg: &ClusterConfig) -> Result<ClusterRun> {
    cfg.validate(points.len())?;
    let mut timings = PhaseTimings::default();

    let t = Instant::now();
    let w = build_knn_affinity(points, cfg.neighbors)?;
    let l = build_laplacian(&w, cfg.kind);
    timings.affinity = t.elapsed();

    let t = Instant::now();
    let eig_opts = EigenOptions {
        tol: cfg.eigen_tol,
        max_matvecs: cfg.eigen_max_matvecs,
        seed: cfg.seed,
        ..EigenOptions::default()
    };
    let emb = smallest_eigenpairs(&l, cfg.clusters, &eig_opts)?;
    timings.eigen = t.elapsed();

    let t = Instant::now();
    let km_opts = KMeansOptions {
        restarts: cfg.kmeans_restarts,
        max_iter: cfg.kmeans_max_iter,
        seed: cfg.seed,
    };
    let km = kmeans(&emb.vectors, cfg.clusters, cfg.clusters, &km_opts)?;
    timings.kmeans = t.elapsed();

    Ok(ClusterRun {
        partition: km.assignment,
        anchors: None,
        eigenvalues: emb.eigenvalues,
        eigen_matvecs: emb.matvecs,
        timings,
    })
}

/// Draws `m` distinct indices from `0..n` uniformly, returned sorted.
///
/// The draw is the first `m` steps of a Fisher–Yates shuffle, so for a fixed
/// seed the sample for `m` is contained in the sample for any larger `m`.
pub fn sample_anchors(n: usize, m: usize, seed: u64) -> Result<Vec<usize>> {
    if m == 0 || m > n {
        return Err(Error::input(format!("anchor count m = {m} must lie in [1, {n}]")));
    }
    let mut rng = stream(seed, Purpose::Anchors, 0);
    let mut perm: Vec<usize> = (0..n).collect();
    for i in 0..m {
        let j = rng.random_range(i..n);
        perm.swap(i, j);
    }
    perm.truncate(m);
    perm.sort_unstable();
    Ok(perm)
}

/// AnchorNN: spectral clustering of `m` random anchors, then every other
/// point takes the label of its nearest anchor. Returns the partition and
/// the anchor indices.
pub fn anchornn_cluster(points: &PointSet, cfg: &ClusterConfig) -> Result<(Partition, Vec<usize>)> {
    let run = anchornn_run(points, cfg)?;
    Ok((run.partition, run.anchors.expect("anchor runs record anchors")))
}

/// [`anchornn_cluster`] with eigenvalues and phase timings.
pub fn anchornn_run(points: &PointSet, cfg: &ClusterConfig) -> Result<ClusterRun> {
    let n = points.len();
    let m = cfg
        .anchors
        .ok_or_else(|| Error::input("AnchorNN requires an anchor count m"))?;
    let anchors = sample_anchors(n, m, cfg.seed)?;
    cfg.validate(m)?;
    let anchor_points = points.subset(&anchors)?;
    let mut run = spectral_run(&anchor_points, cfg)?;

    let t = Instant::now();
    let anchor_labels = run.partition.labels();
    let mut is_anchor = vec![usize::MAX; n];
    for (a, &i) in anchors.iter().enumerate() {
        is_anchor[i] = a;
    }
    let labels: Vec<usize> = (0..n)
        .into_par_iter()
        .map(|i| match is_anchor[i] {
            usize::MAX => anchor_labels[nearest_unchecked(&anchor_points, points.point(i)).0],
            a => anchor_labels[a],
        })
        .collect();
    run.timings.propagate = t.elapsed();

    run.partition = Partition::new(labels, cfg.clusters)?.canonicalize();
    run.anchors = Some(anchors);
    Ok(run)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::nearest_anchor;

    fn line(xs: &[f64]) -> PointSet {
        PointSet::new(xs.to_vec(), 1).unwrap()
    }

    #[test]
    fn two_far_triples() {
        let p = line(&[0.0, 0.1, 0.2, 100.0, 100.1, 100.2]);
        let part = spectral_cluster(&p, &ClusterConfig::new(2, 1)).unwrap();
        assert_eq!(part.labels(), &[0, 0, 0, 1, 1, 1]);
    }

    #[test]
    fn two_points_two_clusters() {
        let part = spectral_cluster(&line(&[0.0, 1.0]), &ClusterConfig::new(2, 1)).unwrap();
        assert_eq!(part.labels(), &[0, 1]);
    }

    #[test]
    fn config_errors() {
        let p = line(&[0.0, 1.0, 2.0]);
        assert!(spectral_cluster(&p, &ClusterConfig::new(2, 3)).is_err());
        assert!(spectral_cluster(&p, &ClusterConfig::new(0, 1)).is_err());
        assert!(spectral_cluster(&p, &ClusterConfig::new(4, 1)).is_err());
        assert!(anchornn_cluster(&p, &ClusterConfig::new(2, 1)).is_err());
        assert!(anchornn_cluster(&p, &ClusterConfig::new(2, 1).with_anchors(4)).is_err());
        assert!(anchornn_cluster(&p, &ClusterConfig::new(2, 2).with_anchors(2)).is_err());
    }

    #[test]
    fn anchor_samples_are_nested_and_sorted() {
        let small = sample_anchors(100, 10, 3).unwrap();
        let large = sample_anchors(100, 40, 3).unwrap();
        assert!(small.windows(2).all(|w| w[0] < w[1]));
        assert!(small.iter().all(|i| large.contains(i)));
        assert_eq!(sample_anchors(5, 5, 9).unwrap(), vec![0, 1, 2, 3, 4]);
        assert!(sample_anchors(5, 0, 9).is_err());
    }

    #[test]
    fn full_anchor_set_reduces_to_spectral() {
        let xs: Vec<f64> = (0..30)
            .map(|i| (i / 10) as f64 * 50.0 + (i % 10) as f64 * 0.3)
            .collect();
        let p = line(&xs);
        let cfg = ClusterConfig::new(3, 2).with_seed(4);
        let full = spectral_cluster(&p, &cfg).unwrap();
        let (anchored, anchors) = anchornn_cluster(&p, &cfg.with_anchors(30)).unwrap();
        assert_eq!(anchors.len(), 30);
        assert_eq!(full, anchored);
    }

    #[test]
    fn far_clusters_with_few_anchors() {
        let xs: Vec<f64> = (0..20)
            .map(|i| if i < 10 { i as f64 * 0.1 } else { 100.0 + i as f64 * 0.1 })
            .collect();
        let p = line(&xs);
        let mut hits = 0;
        for seed in 0..40 {
            let cfg = ClusterConfig::new(2, 1).with_anchors(4).with_seed(seed);
            let (part, anchors) = anchornn_cluster(&p, &cfg).unwrap();
            // With K = 1 a lone anchor would link to the other cluster, so
            // exact recovery needs two anchors on each side.
            let left = anchors.iter().filter(|&&a| a < 10).count();
            if left >= 2 && anchors.len() - left >= 2 {
                hits += 1;
                let expected: Vec<usize> = (0..20).map(|i| usize::from(i >= 10)).collect();
                assert_eq!(part.labels(), &expected[..]);
            }
        }
        assert!(hits > 0);
    }

    #[test]
    fn non_anchors_copy_nearest_anchor() {
        let xs: Vec<f64> = (0..50)
            .map(|i| ((i * 37) % 50) as f64 + if i % 2 == 0 { 0.0 } else { 200.0 })
            .collect();
        let p = line(&xs);
        let cfg = ClusterConfig::new(2, 3).with_anchors(12).with_seed(1);
        let (part, anchors) = anchornn_cluster(&p, &cfg).unwrap();
        let anchor_set = p.subset(&anchors).unwrap();
        for i in 0..50 {
            if anchors.contains(&i) {
                continue;
            }
            let (a, _) = nearest_anchor(&anchor_set, p.point(i)).unwrap();
            assert_eq!(part.labels()[i], part.labels()[anchors[a]]);
        }
    }
}

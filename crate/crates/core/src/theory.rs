//! Quantities from the consistency analysis: the neighbor-count scaling
//! `K >= C ln n`, the KNN/ball-graph bandwidth relation, the Chernoff rate
//! function, and empirical checks of the covering and connectivity
//! conditions on a concrete sample.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{nearest_unchecked, PointSet};
use crate::graph::{build_knn_affinity, connected_components};

/// Constants of the scaling conditions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingConfig {
    /// The constant `C` in `K >= C ln n`.
    pub c: f64,
    /// Lower bound of the sampling density.
    pub q_min: f64,
    /// Ambient dimension.
    pub d: usize,
}

impl Default for ScalingConfig {
    fn default() -> Self {
        Self {
            c: 2.0,
            q_min: 1.0,
            d: 2,
        }
    }
}

impl ScalingConfig {
    fn validate(&self) -> Result<()> {
        if !(self.c > 0.0 && self.q_min > 0.0 && self.d > 0) || !self.c.is_finite() || !self.q_min.is_finite() {
            return Err(Error::input("scaling constants C, q_min and d must be positive"));
        }
        Ok(())
    }
}

/// `H(x) = 1 - x + x ln x`, with `H(0) = 1`.
pub fn chernoff_h(x: f64) -> Result<f64> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::input(format!("H(x) is defined for finite x >= 0, got {x}")));
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    Ok(1.0 - x + x * x.ln())
}

/// `clamp(ceil(C ln s), 1, s - 1)` for sample size `s`.
pub fn recommended_k(sample_size: usize, cfg: &ScalingConfig) -> Result<usize> {
    cfg.validate()?;
    if sample_size < 2 {
        return Err(Error::input("a KNN graph needs at least two points"));
    }
    let raw = (cfg.c * (sample_size as f64).ln()).ceil();
    let raw = if raw.is_finite() && raw >= 1.0 {
        raw.min(usize::MAX as f64) as usize
    } else {
        1
    };
    Ok(raw.clamp(1, sample_size - 1))
}

/// Volume of the unit ball in `R^d`, `π^{d/2} / Γ(d/2 + 1)`, via the
/// recursion `ω_d = 2π ω_{d-2} / d`.
pub fn unit_ball_volume(d: usize) -> f64 {
    let mut w = if d % 2 == 0 { 1.0 } else { 2.0 };
    let mut i = if d % 2 == 0 { 2 } else { 3 };
    while i <= d {
        w *= 2.0 * std::f64::consts::PI / i as f64;
        i += 2;
    }
    w
}

/// The radius `r` with `(s / 2) q_min ω_d r^d = K`.
pub fn bandwidth_from_k(k: usize, sample_size: usize, cfg: &ScalingConfig) -> Result<f64> {
    cfg.validate()?;
    if k == 0 || sample_size == 0 {
        return Err(Error::input("K and the sample size must be positive"));
    }
    let base = 2.0 * k as f64 / (sample_size as f64 * cfg.q_min * unit_ball_volume(cfg.d));
    Ok(base.powf(1.0 / cfg.d as f64))
}

/// Largest distance from a point to its nearest anchor.
pub fn covering_radius(anchors: &PointSet, points: &PointSet) -> Result<f64> {
    if anchors.dim() != points.dim() {
        return Err(Error::DimensionMismatch {
            expected: anchors.dim(),
            actual: points.dim(),
        });
    }
    let worst = (0..points.len())
        .into_par_iter()
        .map(|i| nearest_unchecked(anchors, points.point(i)).1)
        .reduce(|| 0.0, f64::max);
    Ok(worst.sqrt())
}

/// For each label `0..L`, the number of connected components of the KNN
/// graph built on that label's points alone. `K` is capped at the label's
/// size minus one; an empty label has 0 components.
pub fn per_cluster_connectivity(points: &PointSet, k: usize) -> Result<Vec<usize>> {
    let labels = points.require_labels("per-cluster connectivity")?;
    if k == 0 {
        return Err(Error::input("neighbor count K must be at least 1"));
    }
    let count = points.label_count().unwrap_or(0);
    let mut members = vec![Vec::new(); count];
    for (i, &l) in labels.iter().enumerate() {
        members[l].push(i);
    }
    members
        .par_iter()
        .map(|idx| match idx.len() {
            0 => Ok(0),
            1 => Ok(1),
            s => {
                let sub = points.subset(idx)?;
                let w = build_knn_affinity(&sub, k.min(s - 1))?;
                Ok(connected_components(&w).k())
            }
        })
        .collect()
}

/// Edges of the KNN graph whose endpoints carry different labels.
pub fn cross_cluster_edge_count(points: &PointSet, k: usize) -> Result<usize> {
    let labels = points.require_labels("cross-cluster edge count")?;
    let w = build_knn_affinity(points, k)?;
    Ok(w.edges().filter(|&(i, j)| labels[i] != labels[j]).count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, PI};

    fn cfg(c: f64) -> ScalingConfig {
        ScalingConfig {
            c,
            ..ScalingConfig::default()
        }
    }

    fn labelled(xs: &[f64], labels: &[usize]) -> PointSet {
        PointSet::new(xs.to_vec(), 1)
            .unwrap()
            .with_labels(labels.to_vec())
            .unwrap()
    }

    #[test]
    fn h_examples() {
        assert_eq!(chernoff_h(1.0).unwrap(), 0.0);
        assert_eq!(chernoff_h(0.0).unwrap(), 1.0);
        assert!((chernoff_h(E).unwrap() - 1.0).abs() < 1e-15);
        assert!(chernoff_h(-0.1).is_err());
        let h = chernoff_h(1e-12).unwrap();
        assert!((1.0 - 1e-10..=1.0).contains(&h));
    }

    #[test]
    fn recommended_k_examples() {
        assert_eq!(recommended_k(2000, &cfg(2.0)).unwrap(), 16);
        assert_eq!(recommended_k(200, &cfg(2.0)).unwrap(), 11);
        assert_eq!(recommended_k(2000, &cfg(1e-9)).unwrap(), 1);
        assert_eq!(recommended_k(3, &cfg(100.0)).unwrap(), 2);
        assert!(recommended_k(1, &cfg(2.0)).is_err());
        assert!(recommended_k(10, &cfg(0.0)).is_err());
    }

    #[test]
    fn ball_volumes() {
        assert_eq!(unit_ball_volume(1), 2.0);
        assert!((unit_ball_volume(2) - PI).abs() < 1e-15);
        assert!((unit_ball_volume(3) - 4.0 * PI / 3.0).abs() < 1e-14);
        assert!((unit_ball_volume(4) - PI * PI / 2.0).abs() < 1e-14);
    }

    #[test]
    fn bandwidth_examples() {
        let m = 1000;
        let c = ScalingConfig {
            c: 2.0,
            q_min: 1.0 / PI,
            d: 2,
        };
        assert!((bandwidth_from_k(m / 2, m, &c).unwrap() - 1.0).abs() < 1e-12);
        let c1 = ScalingConfig {
            c: 2.0,
            q_min: 0.25,
            d: 1,
        };
        assert!((bandwidth_from_k(100, 400, &c1).unwrap() - 1.0).abs() < 1e-12);
        let r1 = bandwidth_from_k(10, 500, &c).unwrap();
        let r2 = bandwidth_from_k(20, 500, &c).unwrap();
        assert!((r2 / r1 - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn covering_examples() {
        let pts = PointSet::new(vec![0.0, 3.0], 1).unwrap();
        let anchors = PointSet::new(vec![0.0], 1).unwrap();
        assert_eq!(covering_radius(&anchors, &pts).unwrap(), 3.0);
        assert_eq!(covering_radius(&pts, &pts).unwrap(), 0.0);
    }

    #[test]
    fn connectivity_examples() {
        let p = labelled(&[0.0, 0.1, 0.2], &[0, 0, 0]);
        assert_eq!(per_cluster_connectivity(&p, 1).unwrap(), vec![1]);
        let p = labelled(&[0.0, 0.1, 10.0, 10.1], &[0, 0, 0, 0]);
        assert_eq!(per_cluster_connectivity(&p, 1).unwrap(), vec![2]);
        assert_eq!(per_cluster_connectivity(&p, 3).unwrap(), vec![1]);
        assert!(per_cluster_connectivity(&PointSet::new(vec![0.0], 1).unwrap(), 1).is_err());
    }

    #[test]
    fn cross_edge_examples() {
        let p = labelled(&[0.0, 0.1, 100.0, 100.1], &[0, 0, 1, 1]);
        assert_eq!(cross_cluster_edge_count(&p, 1).unwrap(), 0);
        let p = labelled(&[0.0, 1.0, 5.0], &[0, 0, 0]);
        assert_eq!(cross_cluster_edge_count(&p, 2).unwrap(), 0);
        let p = labelled(&[0.0, 1.0, 2.0, 3.0], &[0, 1, 0, 1]);
        assert!(cross_cluster_edge_count(&p, 1).unwrap() > 0);
    }
}

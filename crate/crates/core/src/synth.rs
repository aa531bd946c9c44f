//! Synthetic 2-D datasets with ground-truth labels and a guaranteed
//! separation between clusters.
//!
//! Six families are provided. Cluster sizes are a deterministic split of `n`
//! (one point per cluster first, the rest by share with largest-remainder
//! rounding). Each candidate point is accepted only if it lies at least
//! `delta_min` from every accepted point of another cluster; after `100 n`
//! candidates the spec is declared infeasible. The returned points are
//! shuffled, so labels are not sorted.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{squared_distance, PointSet};
use crate::rng::{stream, Purpose};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    TwoSpirals,
    ClusterInCluster,
    Corners,
    HalfKernel,
    CrescentFullMoon,
    Outlier,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::TwoSpirals,
        Family::ClusterInCluster,
        Family::Corners,
        Family::HalfKernel,
        Family::CrescentFullMoon,
        Family::Outlier,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::TwoSpirals => "two_spirals",
            Family::ClusterInCluster => "cluster_in_cluster",
            Family::Corners => "corners",
            Family::HalfKernel => "half_kernel",
            Family::CrescentFullMoon => "crescent_full_moon",
            Family::Outlier => "outlier",
        }
    }

    pub fn cluster_count(self) -> usize {
        match self {
            Family::Corners | Family::Outlier => 4,
            _ => 2,
        }
    }

    /// Separation enforced when none is given; below the gap the default
    /// geometry already guarantees.
    pub fn default_delta_min(self) -> f64 {
        1.0
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s || f.name().replace('_', "-") == s)
            .ok_or_else(|| {
                let names: Vec<_> = Family::ALL.iter().map(|f| f.name()).collect();
                Error::input(format!("unknown family '{s}' (expected one of {})", names.join(", ")))
            })
    }
}

/// Shape parameters of a family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Geometry {
    /// Two Archimedean arms `r = θ`, the second rotated by π, with uniform
    /// radial noise in `[-noise, noise]`.
    TwoSpirals {
        theta_start: f64,
        theta_end: f64,
        noise: f64,
    },
    /// A truncated Gaussian core surrounded by clumps placed on a polar grid
    /// of `rays x rings` sites. Neighbouring sites on the innermost ring are
    /// `spacing` apart; clumps are Gaussian with standard deviation
    /// `jitter * spacing`, truncated at three deviations. The core has
    /// radius `r0 - gap`, where `r0` is the innermost ring radius.
    ClusterInCluster {
        rays: usize,
        rings: usize,
        spacing: f64,
        jitter: f64,
        gap: f64,
        inner_share: f64,
    },
    /// Four L-shaped bars, one per quadrant, each `offset` away from both
    /// axes with arms of the given length and width.
    Corners { offset: f64, length: f64, width: f64 },
    /// Two concentric upper half-annuli.
    HalfKernel {
        inner_min: f64,
        inner_max: f64,
        outer_min: f64,
        outer_max: f64,
        inner_share: f64,
    },
    /// A disc inside an annulus segment opening to the left.
    CrescentFullMoon {
        disc_radius: f64,
        crescent_min: f64,
        crescent_max: f64,
        half_angle: f64,
        disc_share: f64,
    },
    /// Two dense discs at `(±lateral_offset, 0)` and two sparse, larger
    /// discs at `(0, ±far_offset)`.
    Outlier {
        lateral_offset: f64,
        lateral_radius: f64,
        far_offset: f64,
        far_radius: f64,
        lateral_share: f64,
    },
}

impl Geometry {
    pub fn default_for(family: Family) -> Self {
        match family {
            Family::TwoSpirals => Geometry::TwoSpirals {
                theta_start: 0.5 * PI,
                theta_end: 1.75 * PI,
                noise: 0.15,
            },
            Family::ClusterInCluster => Geometry::ClusterInCluster {
                rays: 32,
                rings: 5,
                spacing: 1.0,
                jitter: 0.14,
                gap: 2.9,
                inner_share: 0.12,
            },
            Family::Corners => Geometry::Corners {
                offset: 1.5,
                length: 4.0,
                width: 0.8,
            },
            Family::HalfKernel => Geometry::HalfKernel {
                inner_min: 2.0,
                inner_max: 3.0,
                outer_min: 6.0,
                outer_max: 7.0,
                inner_share: 0.4,
            },
            Family::CrescentFullMoon => Geometry::CrescentFullMoon {
                disc_radius: 1.0,
                crescent_min: 3.0,
                crescent_max: 4.0,
                half_angle: 0.6 * PI,
                disc_share: 0.4,
            },
            Family::Outlier => Geometry::Outlier {
                lateral_offset: 3.0,
                lateral_radius: 1.0,
                far_offset: 6.0,
                far_radius: 2.0,
                lateral_share: 0.35,
            },
        }
    }

    pub fn family(&self) -> Family {
        match self {
            Geometry::TwoSpirals { .. } => Family::TwoSpirals,
            Geometry::ClusterInCluster { .. } => Family::ClusterInCluster,
            Geometry::Corners { .. } => Family::Corners,
            Geometry::HalfKernel { .. } => Family::HalfKernel,
            Geometry::CrescentFullMoon { .. } => Family::CrescentFullMoon,
            Geometry::Outlier { .. } => Family::Outlier,
        }
    }

    /// Sets one named parameter (the field names above).
    pub fn set(&mut self, key: &str, value: f64) -> Result<()> {
        let slot: &mut f64 = match (self, key) {
            (Geometry::TwoSpirals { theta_start, .. }, "theta_start") => theta_start,
            (Geometry::TwoSpirals { theta_end, .. }, "theta_end") => theta_end,
            (Geometry::TwoSpirals { noise, .. }, "noise") => noise,
            (Geometry::ClusterInCluster { rays, .. }, "rays") => return set_count(rays, key, value),
            (Geometry::ClusterInCluster { rings, .. }, "rings") => return set_count(rings, key, value),
            (Geometry::ClusterInCluster { spacing, .. }, "spacing") => spacing,
            (Geometry::ClusterInCluster { jitter, .. }, "jitter") => jitter,
            (Geometry::ClusterInCluster { gap, .. }, "gap") => gap,
            (Geometry::ClusterInCluster { inner_share, .. }, "inner_share") => inner_share,
            (Geometry::Corners { offset, .. }, "offset") => offset,
            (Geometry::Corners { length, .. }, "length") => length,
            (Geometry::Corners { width, .. }, "width") => width,
            (Geometry::HalfKernel { inner_min, .. }, "inner_min") => inner_min,
            (Geometry::HalfKernel { inner_max, .. }, "inner_max") => inner_max,
            (Geometry::HalfKernel { outer_min, .. }, "outer_min") => outer_min,
            (Geometry::HalfKernel { outer_max, .. }, "outer_max") => outer_max,
            (Geometry::HalfKernel { inner_share, .. }, "inner_share") => inner_share,
            (Geometry::CrescentFullMoon { disc_radius, .. }, "disc_radius") => disc_radius,
            (Geometry::CrescentFullMoon { crescent_min, .. }, "crescent_min") => crescent_min,
            (Geometry::CrescentFullMoon { crescent_max, .. }, "crescent_max") => crescent_max,
            (Geometry::CrescentFullMoon { half_angle, .. }, "half_angle") => half_angle,
            (Geometry::CrescentFullMoon { disc_share, .. }, "disc_share") => disc_share,
            (Geometry::Outlier { lateral_offset, .. }, "lateral_offset") => lateral_offset,
            (Geometry::Outlier { lateral_radius, .. }, "lateral_radius") => lateral_radius,
            (Geometry::Outlier { far_offset, .. }, "far_offset") => far_offset,
            (Geometry::Outlier { far_radius, .. }, "far_radius") => far_radius,
            (Geometry::Outlier { lateral_share, .. }, "lateral_share") => lateral_share,
            (g, _) => return Err(Error::input(format!("family {} has no parameter '{key}'", g.family()))),
        };
        if !value.is_finite() {
            return Err(Error::input(format!("parameter {key} must be finite")));
        }
        *slot = value;
        Ok(())
    }

    /// Per-cluster shares of `n`, summing to 1.
    fn shares(&self) -> Vec<f64> {
        match *self {
            Geometry::TwoSpirals { .. } => vec![0.5, 0.5],
            Geometry::ClusterInCluster { inner_share, .. } => vec![inner_share, 1.0 - inner_share],
            Geometry::Corners { .. } => vec![0.25; 4],
            Geometry::HalfKernel { inner_share, .. } => vec![inner_share, 1.0 - inner_share],
            Geometry::CrescentFullMoon { disc_share, .. } => vec![disc_share, 1.0 - disc_share],
            Geometry::Outlier { lateral_share, .. } => {
                let far = 0.5 - lateral_share;
                vec![lateral_share, lateral_share, far, far]
            }
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::input(format!("{}: {msg}", self.family())));
        if self.shares().iter().any(|&s| !(s > 0.0 && s < 1.0)) {
            return bad("cluster shares must lie strictly between 0 and 1");
        }
        match *self {
            Geometry::TwoSpirals {
                theta_start,
                theta_end,
                noise,
            } => {
                if !(theta_start >= 0.0 && theta_end > theta_start && noise >= 0.0) {
                    return bad("need 0 <= theta_start < theta_end and noise >= 0");
                }
            }
            Geometry::ClusterInCluster {
                rays,
                rings,
                spacing,
                jitter,
                gap,
                ..
            } => {
                if rays < 3 || rings == 0 || !(spacing > 0.0) || !(jitter >= 0.0) {
                    return bad("need rays >= 3, rings >= 1, spacing > 0, jitter >= 0");
                }
                let r0 = rays as f64 * spacing / (2.0 * PI);
                if !(gap > 0.0 && gap < r0) {
                    return bad("gap must be positive and smaller than the innermost ring radius");
                }
            }
            Geometry::Corners { offset, length, width } => {
                if !(offset > 0.0 && width > 0.0 && length > width) {
                    return bad("need offset > 0 and length > width > 0");
                }
            }
            Geometry::HalfKernel {
                inner_min,
                inner_max,
                outer_min,
                outer_max,
                ..
            } => {
                if !(0.0 <= inner_min && inner_min < inner_max && inner_max < outer_min && outer_min < outer_max) {
                    return bad("need 0 <= inner_min < inner_max < outer_min < outer_max");
                }
            }
            Geometry::CrescentFullMoon {
                disc_radius,
                crescent_min,
                crescent_max,
                half_angle,
                ..
            } => {
                if !(disc_radius > 0.0 && disc_radius < crescent_min && crescent_min < crescent_max)
                    || !(half_angle > 0.0 && half_angle <= PI)
                {
                    return bad("need 0 < disc_radius < crescent_min < crescent_max and 0 < half_angle <= pi");
                }
            }
            Geometry::Outlier {
                lateral_offset,
                lateral_radius,
                far_offset,
                far_radius,
                ..
            } => {
                if !(lateral_radius > 0.0 && far_radius > 0.0 && lateral_offset > 0.0 && far_offset > 0.0) {
                    return bad("offsets and radii must be positive");
                }
            }
        }
        Ok(())
    }

    /// One candidate point of cluster `label`; `slot` is the point's index
    /// within its cluster.
    fn sample(&self, label: usize, slot: usize, rng: &mut ChaCha8Rng) -> [f64; 2] {
        match *self {
            Geometry::TwoSpirals {
                theta_start,
                theta_end,
                noise,
            } => {
                // Arc length of r = θ grows like θ², so this is roughly
                // uniform along the arm.
                let u: f64 = rng.random();
                let t = (theta_start * theta_start + u * (theta_end * theta_end - theta_start * theta_start)).sqrt();
                let r = t + uniform(rng, -noise, noise);
                let sign = if label == 0 { 1.0 } else { -1.0 };
                [sign * r * t.cos(), sign * r * t.sin()]
            }
            Geometry::ClusterInCluster {
                rays,
                rings,
                spacing,
                jitter,
                gap,
                ..
            } => {
                let r0 = rays as f64 * spacing / (2.0 * PI);
                if label == 0 {
                    let r1 = r0 - gap;
                    let sigma = r1 / 2.0;
                    loop {
                        let p = gaussian2(rng, sigma);
                        if p[0].hypot(p[1]) < r1 {
                            return p;
                        }
                    }
                }
                let site = slot % (rays * rings);
                let (ray, ring) = (site % rays, site / rays);
                let angle = 2.0 * PI * ray as f64 / rays as f64;
                let radius = r0 + ring as f64 * spacing;
                let sigma = jitter * spacing;
                let offset = loop {
                    let p = gaussian2(rng, sigma);
                    if p[0].hypot(p[1]) <= 3.0 * sigma {
                        break p;
                    }
                };
                [radius * angle.cos() + offset[0], radius * angle.sin() + offset[1]]
            }
            Geometry::Corners { offset, length, width } => {
                let (far, near) = (offset + length, offset + length - width);
                let p = if rng.random::<bool>() {
                    [uniform(rng, offset, far), uniform(rng, near, far)]
                } else {
                    [uniform(rng, near, far), uniform(rng, offset, near)]
                };
                let (sx, sy) = [(1.0, 1.0), (-1.0, 1.0), (-1.0, -1.0), (1.0, -1.0)][label];
                [sx * p[0], sy * p[1]]
            }
            Geometry::HalfKernel {
                inner_min,
                inner_max,
                outer_min,
                outer_max,
                ..
            } => {
                let (lo, hi) = if label == 0 {
                    (inner_min, inner_max)
                } else {
                    (outer_min, outer_max)
                };
                annulus(rng, lo, hi, 0.0, PI)
            }
            Geometry::CrescentFullMoon {
                disc_radius,
                crescent_min,
                crescent_max,
                half_angle,
                ..
            } => {
                if label == 0 {
                    annulus(rng, 0.0, disc_radius, -PI, PI)
                } else {
                    annulus(rng, crescent_min, crescent_max, -half_angle, half_angle)
                }
            }
            Geometry::Outlier {
                lateral_offset,
                lateral_radius,
                far_offset,
                far_radius,
                ..
            } => {
                let (center, radius) = match label {
                    0 => ([-lateral_offset, 0.0], lateral_radius),
                    1 => ([lateral_offset, 0.0], lateral_radius),
                    2 => ([0.0, far_offset], far_radius),
                    _ => ([0.0, -far_offset], far_radius),
                };
                let p = annulus(rng, 0.0, radius, -PI, PI);
                [center[0] + p[0], center[1] + p[1]]
            }
        }
    }
}

fn set_count(slot: &mut usize, key: &str, value: f64) -> Result<()> {
    if !(value >= 1.0 && value.fract() == 0.0 && value < 1e6) {
        return Err(Error::input(format!("parameter {key} must be a positive integer")));
    }
    *slot = value as usize;
    Ok(())
}

fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}

fn gaussian2(rng: &mut ChaCha8Rng, sigma: f64) -> [f64; 2] {
    let x: f64 = StandardNormal.sample(rng);
    let y: f64 = StandardNormal.sample(rng);
    [sigma * x, sigma * y]
}

/// Area-uniform point of the annulus sector `lo <= r <= hi`, `a0 <= angle <= a1`.
fn annulus(rng: &mut ChaCha8Rng, lo: f64, hi: f64, a0: f64, a1: f64) -> [f64; 2] {
    let r = (lo * lo + rng.random::<f64>() * (hi * hi - lo * lo)).sqrt();
    let a = uniform(rng, a0, a1);
    [r * a.cos(), r * a.sin()]
}

/// What to generate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    pub n: usize,
    pub seed: u64,
    pub delta_min: f64,
    pub geometry: Geometry,
}

impl SynthSpec {
    /// Default geometry and separation for `family`.
    pub fn new(family: Family, n: usize, seed: u64) -> Self {
        Self {
            n,
            seed,
            delta_min: family.default_delta_min(),
            geometry: Geometry::default_for(family),
        }
    }

    pub fn family(&self) -> Family {
        self.geometry.family()
    }

    /// Exact cluster sizes: one point each, then the remaining `n - k` split
    /// by share with largest-remainder rounding (ties to the lower label).
    pub fn cluster_sizes(&self) -> Result<Vec<usize>> {
        let shares = self.geometry.shares();
        let k = shares.len();
        if self.n < k {
            return Err(Error::input(format!(
                "family {} needs n >= {k}, got {}",
                self.family(),
                self.n
            )));
        }
        let rest = (self.n - k) as f64;
        let mut sizes: Vec<usize> = shares.iter().map(|s| 1 + (rest * s).floor() as usize).collect();
        let mut order: Vec<usize> = (0..k).collect();
        let frac = |i: usize| rest * shares[i] - (rest * shares[i]).floor();
        order.sort_by(|&a, &b| frac(b).total_cmp(&frac(a)).then(a.cmp(&b)));
        let mut missing = self.n - sizes.iter().sum::<usize>();
        for &i in order.iter().cycle() {
            if missing == 0 {
                break;
            }
            sizes[i] += 1;
            missing -= 1;
        }
        Ok(sizes)
    }
}

/// Accepted points bucketed on a grid of cell size `delta`.
struct SeparationIndex {
    delta: f64,
    cells: HashMap<(i64, i64), Vec<(usize, [f64; 2])>>,
}

impl SeparationIndex {
    fn cell(&self, p: [f64; 2]) -> (i64, i64) {
        ((p[0] / self.delta).floor() as i64, (p[1] / self.delta).floor() as i64)
    }

    fn admits(&self, label: usize, p: [f64; 2]) -> bool {
        if self.delta <= 0.0 {
            return true;
        }
        let (cx, cy) = self.cell(p);
        let d2 = self.delta * self.delta;
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(bucket) = self.cells.get(&(cx + dx, cy + dy)) {
                    if bucket.iter().any(|(l, q)| *l != label && squared_distance(&p, q) < d2) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn insert(&mut self, label: usize, p: [f64; 2]) {
        if self.delta > 0.0 {
            let c = self.cell(p);
            self.cells.entry(c).or_default().push((label, p));
        }
    }
}

/// Samples a labelled dataset from `spec`.
pub fn generate(spec: &SynthSpec) -> Result<PointSet> {
    spec.geometry.validate()?;
    if !(spec.delta_min >= 0.0 && spec.delta_min.is_finite()) {
        return Err(Error::input("delta_min must be a finite nonnegative number"));
    }
    let sizes = spec.cluster_sizes()?;
    let mut rng = stream(spec.seed, Purpose::Synth, 0);
    let mut index = SeparationIndex {
        delta: spec.delta_min,
        cells: HashMap::new(),
    };
    let budget = 100 * spec.n;
    let mut attempts = 0;
    let mut coords = Vec::with_capacity(2 * spec.n);
    let mut labels = Vec::with_capacity(spec.n);
    // Interleave clusters so that no cluster can claim space before the
    // others have started.
    let mut filled = vec![0usize; sizes.len()];
    let mut remaining = spec.n;
    while remaining > 0 {
        for label in 0..sizes.len() {
            if filled[label] == sizes[label] {
                continue;
            }
            loop {
                attempts += 1;
                if attempts > budget {
                    return Err(Error::Infeasible(format!(
                        "{} with n = {} could not keep clusters {} apart within {budget} draws",
                        spec.family(),
                        spec.n,
                        spec.delta_min
                    )));
                }
                let p = spec.geometry.sample(label, filled[label], &mut rng);
                if index.admits(label, p) {
                    index.insert(label, p);
                    coords.extend_from_slice(&p);
                    labels.push(label);
                    break;
                }
            }
            filled[label] += 1;
            remaining -= 1;
        }
    }
    // Shuffle rows so the file order carries no label information.
    let n = spec.n;
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        labels.swap(i, j);
        coords.swap(2 * i, 2 * j);
        coords.swap(2 * i + 1, 2 * j + 1);
    }
    PointSet::new(coords, 2)?.with_labels(labels)
}

/// Smallest distance between two points with different labels, by brute
/// force. `f64::INFINITY` if only one label occurs.
pub fn verify_separation(points: &PointSet) -> Result<f64> {
    let labels = points.require_labels("separation check")?;
    let n = points.len();
    let best = (0..n)
        .into_par_iter()
        .map(|i| {
            let p = points.point(i);
            (i + 1..n)
                .filter(|&j| labels[j] != labels[i])
                .map(|j| squared_distance(p, points.point(j)))
                .fold(f64::INFINITY, f64::min)
        })
        .reduce(|| f64::INFINITY, f64::min);
    Ok(best.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_names_parse() {
        for f in Family::ALL {
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
        }
        assert_eq!("two-spirals".parse::<Family>().unwrap(), Family::TwoSpirals);
        assert!("moons".parse::<Family>().is_err());
    }

    #[test]
    fn sizes_split_exactly() {
        let spec = SynthSpec::new(Family::ClusterInCluster, 2000, 0);
        // 1998 * 0.12 = 239.76: the larger remainder goes to the core.
        assert_eq!(spec.cluster_sizes().unwrap(), vec![241, 1759]);
        let spec = SynthSpec::new(Family::Outlier, 1001, 0);
        let sizes = spec.cluster_sizes().unwrap();
        assert_eq!(sizes.iter().sum::<usize>(), 1001);
        assert_eq!(sizes[0], sizes[1]);
        assert_eq!(
            SynthSpec::new(Family::Corners, 4, 0).cluster_sizes().unwrap(),
            vec![1; 4]
        );
        assert!(SynthSpec::new(Family::Corners, 3, 0).cluster_sizes().is_err());
    }

    #[test]
    fn cluster_in_cluster_layout() {
        let spec = SynthSpec::new(Family::ClusterInCluster, 2000, 5);
        let p = generate(&spec).unwrap();
        let r0 = 32.0 / (2.0 * PI);
        let r1 = r0 - 2.9;
        let labels = p.labels().unwrap();
        assert_eq!(p.label_count(), Some(2));
        for (x, &l) in p.iter().zip(labels) {
            let r = x[0].hypot(x[1]);
            if l == 0 {
                assert!(r < r1);
            } else {
                assert!(r >= r0 - 3.0 * 0.14);
            }
        }
    }

    #[test]
    fn every_family_is_separated() {
        for f in Family::ALL {
            let spec = SynthSpec::new(f, 600, 2);
            let p = generate(&spec).unwrap();
            assert_eq!(p.len(), 600);
            assert_eq!(p.label_count(), Some(f.cluster_count()));
            assert!(verify_separation(&p).unwrap() >= spec.delta_min, "{f}");
            let mut counts = vec![0; f.cluster_count()];
            for &l in p.labels().unwrap() {
                counts[l] += 1;
            }
            assert_eq!(counts, spec.cluster_sizes().unwrap());
        }
    }

    #[test]
    fn minimal_instances() {
        for f in Family::ALL {
            let k = f.cluster_count();
            let spec = SynthSpec::new(f, k, 1);
            let p = generate(&spec).unwrap();
            let mut labels = p.labels().unwrap().to_vec();
            labels.sort_unstable();
            assert_eq!(labels, (0..k).collect::<Vec<_>>());
            assert!(verify_separation(&p).unwrap() >= spec.delta_min);
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let spec = SynthSpec::new(Family::TwoSpirals, 500, 42);
        assert_eq!(generate(&spec).unwrap(), generate(&spec).unwrap());
        let other = SynthSpec {
            seed: 43,
            ..spec.clone()
        };
        assert_ne!(generate(&spec).unwrap(), generate(&other).unwrap());
    }

    #[test]
    fn infeasible_separation_is_reported() {
        let spec = SynthSpec {
            delta_min: 50.0,
            ..SynthSpec::new(Family::HalfKernel, 200, 0)
        };
        assert!(matches!(generate(&spec), Err(Error::Infeasible(_))));
    }

    #[test]
    fn parameters_by_name() {
        let mut g = Geometry::default_for(Family::ClusterInCluster);
        g.set("gap", 2.0).unwrap();
        g.set("rays", 24.0).unwrap();
        assert!(g.set("rays", 2.5).is_err());
        assert!(g.set("noise", 1.0).is_err());
        assert!(matches!(g, Geometry::ClusterInCluster { rays: 24, gap, .. } if gap == 2.0));
    }

    #[test]
    fn separation_examples() {
        let p = PointSet::from_rows(&[[0.0, 0.0], [3.0, 4.0]])
            .unwrap()
            .with_labels(vec![0, 1])
            .unwrap();
        assert_eq!(verify_separation(&p).unwrap(), 5.0);
        let p = PointSet::from_rows(&[[1.0, 1.0], [1.0, 1.0], [9.0, 9.0]])
            .unwrap()
            .with_labels(vec![0, 1, 1])
            .unwrap();
        assert_eq!(verify_separation(&p).unwrap(), 0.0);
        let p = PointSet::from_rows(&[[1.0, 1.0]]).unwrap();
        assert!(verify_separation(&p).is_err());
    }
}

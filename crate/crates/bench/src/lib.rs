//! Shared inputs for the benchmarks in `benches/`.

use anchornn::{generate, Family, PointSet, SynthSpec};

/// The outlier dataset (four clusters in the plane) with `n` points.
pub fn outlier(n: usize) -> PointSet {
    generate(&SynthSpec::new(Family::Outlier, n, 1)).expect("default outlier spec is feasible")
}

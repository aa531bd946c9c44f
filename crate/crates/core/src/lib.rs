//! Spectral clustering on K-nearest-neighbor graphs, and AnchorNN: spectral
//! clustering of a random anchor subsample followed by nearest-anchor label
//! propagation.
//!
//! ```
//! use anchornn::{generate, spectral_cluster, adjusted_rand_index, ClusterConfig, Family, Partition, SynthSpec};
//!
//! let points = generate(&SynthSpec::new(Family::Outlier, 400, 7)).unwrap();
//! let part = spectral_cluster(&points, &ClusterConfig::new(4, 12)).unwrap();
//! let truth = Partition::from_labels(points.labels().unwrap().to_vec()).unwrap();
//! assert_eq!(adjusted_rand_index(&part, &truth).unwrap(), 1.0);
//! ```

pub mod cluster;
pub mod eigen;
pub mod error;
pub mod geometry;
pub mod graph;
pub mod kmeans;
pub mod metrics;
pub mod partition;
pub mod rng;
pub mod synth;
pub mod theory;

pub use cluster::{
    anchornn_cluster, anchornn_run, sample_anchors, spectral_cluster, spectral_run, ClusterConfig, ClusterRun,
    PhaseTimings,
};
pub use eigen::{dense_reference_eigen, smallest_eigenpairs, DenseEigen, EigenOptions, SpectralEmbedding};
pub use error::{Error, Result};
pub use geometry::{euclidean_distance, knn, knn_all, nearest_anchor, Neighbor, NeighborList, PointSet};
pub use graph::{
    build_knn_affinity, build_laplacian, connected_components, degrees, Laplacian, LaplacianKind, SparseAffinity,
};
pub use kmeans::{kmeans, KMeansOptions, KMeansResult};
pub use metrics::{adjusted_rand_index, contingency, rand_index, ContingencyTable, PairCounts};
pub use partition::Partition;
pub use synth::{generate, verify_separation, Family, Geometry, SynthSpec};
pub use theory::{
    bandwidth_from_k, chernoff_h, covering_radius, cross_cluster_edge_count, per_cluster_connectivity, recommended_k,
    unit_ball_volume, ScalingConfig,
};

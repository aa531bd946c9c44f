//! JSON experiment reports.

use serde::{Deserialize, Serialize};

use anchornn::{LaplacianKind, PhaseTimings};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Spectral,
    Anchornn,
}

/// Parameters shared by every seed of a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportConfig {
    pub n: usize,
    pub d: usize,
    pub m: Option<usize>,
    #[serde(rename = "K")]
    pub neighbors: usize,
    pub k: usize,
    pub kind: LaplacianKind,
    pub seeds: Vec<u64>,
}

/// Wall time of one run, in seconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseSeconds {
    pub affinity: f64,
    pub eigen: f64,
    pub kmeans: f64,
    pub propagate: f64,
    pub total: f64,
}

impl From<PhaseTimings> for PhaseSeconds {
    fn from(t: PhaseTimings) -> Self {
        Self {
            affinity: t.affinity.as_secs_f64(),
            eigen: t.eigen.as_secs_f64(),
            kmeans: t.kmeans.as_secs_f64(),
            propagate: t.propagate.as_secs_f64(),
            total: t.total().as_secs_f64(),
        }
    }
}

/// Checks of the separation, covering and connectivity conditions.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Smallest distance between points with different labels.
    pub realized_delta: Option<f64>,
    /// Per seed: largest distance from a point to its nearest anchor.
    pub covering_radius: Option<Vec<f64>>,
    /// Per seed: components of the KNN graph on each label's clustered points.
    pub cluster_components: Option<Vec<Vec<usize>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema: u32,
    pub method: Method,
    pub config: ReportConfig,
    /// Per-seed ARI against the ground truth, when labels are known.
    pub ari: Option<Vec<f64>>,
    pub mean_ari: Option<f64>,
    pub std_ari: Option<f64>,
    pub eigenvalues: Vec<Vec<f64>>,
    pub eigen_matvecs: Vec<usize>,
    pub timings: Vec<PhaseSeconds>,
    pub degenerate: Vec<bool>,
    pub diagnostics: Diagnostics,
    /// Seconds since the Unix epoch when the report was written.
    pub created_unix: u64,
}

impl ExperimentReport {
    pub fn mean_time(&self) -> f64 {
        mean(&self.timings.iter().map(|t| t.total).collect::<Vec<_>>()).unwrap_or(0.0)
    }
}

pub fn mean(xs: &[f64]) -> Option<f64> {
    (!xs.is_empty()).then(|| xs.iter().sum::<f64>() / xs.len() as f64)
}

/// Population standard deviation.
pub fn std_dev(xs: &[f64]) -> Option<f64> {
    let mu = mean(xs)?;
    Some((xs.iter().map(|x| (x - mu) * (x - mu)).sum::<f64>() / xs.len() as f64).sqrt())
}

pub fn unix_now() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map_or(0, |d| d.as_secs())
}

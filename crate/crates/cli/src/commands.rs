use std::fs;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use anchornn::{
    adjusted_rand_index, anchornn_run, covering_radius, cross_cluster_edge_count, generate, per_cluster_connectivity,
    recommended_k, sample_anchors, spectral_run, verify_separation, ClusterConfig, ClusterRun, Partition, PointSet,
    ScalingConfig, SynthSpec,
};

use crate::args::{ClusterArgs, DiagArgs, GenerateArgs, MethodArgs, SweepArgs};
use crate::error::{CliError, CliResult};
use crate::io::{load_points, write_labels, write_points};
use crate::report::{mean, std_dev, unix_now, Diagnostics, ExperimentReport, Method, ReportConfig, SCHEMA_VERSION};

/// Builds the dataset described by `generate` flags and returns it with its
/// realized separation.
pub fn generate_points(args: &GenerateArgs) -> CliResult<(PointSet, f64)> {
    let mut spec = SynthSpec::new(args.family, args.n, args.seed);
    if let Some(d) = args.delta_min {
        spec.delta_min = d;
    }
    for p in &args.params {
        let (key, value) = p
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("--param expects KEY=VALUE, got '{p}'")))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("--param {key}: '{value}' is not a number")))?;
        spec.geometry.set(key.trim(), value)?;
    }
    let points = generate(&spec)?;
    let delta = verify_separation(&points)?;
    Ok((points, delta))
}

pub fn cmd_generate(args: &GenerateArgs) -> CliResult<()> {
    let (points, delta) = generate_points(args)?;
    write_points(&args.out, &points)?;
    println!("realized delta {delta:.6}");
    Ok(())
}

fn scaling(c: f64) -> ScalingConfig {
    ScalingConfig {
        c,
        ..ScalingConfig::default()
    }
}

/// The neighbor count to use for a clustered sample of `size` points.
fn resolve_neighbors(explicit: Option<usize>, size: usize, c: f64) -> CliResult<usize> {
    match explicit {
        Some(k) => Ok(k),
        None => Ok(recommended_k(size, &scaling(c))?),
    }
}

fn base_config(method: &MethodArgs, neighbors: usize, m: Option<usize>) -> CliResult<ClusterConfig> {
    let mut cfg = ClusterConfig::new(method.clusters, neighbors).with_kind(method.kind);
    cfg.eigen_tol = method.eigen_tol;
    cfg.eigen_max_matvecs = method.eigen_max_matvecs;
    cfg.kmeans_restarts = method.restarts;
    match (method.method, m) {
        (Method::Anchornn, Some(m)) => cfg = cfg.with_anchors(m),
        (Method::Anchornn, None) => return Err(CliError::Usage("--method anchornn requires --m".into())),
        (Method::Spectral, Some(_)) => return Err(CliError::Usage("--m applies to --method anchornn only".into())),
        (Method::Spectral, None) => {}
    }
    Ok(cfg)
}

/// Runs one configuration for every seed (in parallel) and assembles the
/// report. Also returns the partitions, in seed order.
pub fn run_experiment(
    points: &PointSet,
    method: Method,
    cfg: &ClusterConfig,
    seeds: &[u64],
    diagnostics: bool,
) -> CliResult<(ExperimentReport, Vec<Partition>)> {
    let runs: Vec<ClusterRun> = seeds
        .par_iter()
        .map(|&seed| {
            let c = cfg.with_seed(seed);
            match method {
                Method::Spectral => spectral_run(points, &c),
                Method::Anchornn => anchornn_run(points, &c),
            }
        })
        .collect::<Result<_, _>>()?;

    let ari = match points.labels() {
        Some(l) => {
            let truth = Partition::from_labels(l.to_vec())?;
            Some(
                runs.iter()
                    .map(|r| adjusted_rand_index(&truth, &r.partition))
                    .collect::<Result<Vec<_>, _>>()?,
            )
        }
        None => None,
    };
    let diagnostics = if diagnostics {
        run_diagnostics(points, cfg.neighbors, &runs)?
    } else {
        Diagnostics::default()
    };

    let report = ExperimentReport {
        schema: SCHEMA_VERSION,
        method,
        config: ReportConfig {
            n: points.len(),
            d: points.dim(),
            m: cfg.anchors,
            neighbors: cfg.neighbors,
            k: cfg.clusters,
            kind: cfg.kind,
            seeds: seeds.to_vec(),
        },
        mean_ari: ari.as_deref().and_then(mean),
        std_ari: ari.as_deref().and_then(std_dev),
        ari,
        eigenvalues: runs.iter().map(|r| r.eigenvalues.clone()).collect(),
        eigen_matvecs: runs.iter().map(|r| r.eigen_matvecs).collect(),
        timings: runs.iter().map(|r| r.timings.into()).collect(),
        degenerate: runs.iter().map(|r| r.partition.is_degenerate()).collect(),
        diagnostics,
        created_unix: unix_now(),
    };
    Ok((report, runs.into_iter().map(|r| r.partition).collect()))
}

/// Separation of the ground truth, plus per seed the anchor covering radius
/// and the per-label components of the graph that was clustered.
fn run_diagnostics(points: &PointSet, neighbors: usize, runs: &[ClusterRun]) -> CliResult<Diagnostics> {
    if points.labels().is_none() {
        return Ok(Diagnostics::default());
    }
    let delta = verify_separation(points)?;
    let mut diag = Diagnostics {
        realized_delta: delta.is_finite().then_some(delta),
        ..Diagnostics::default()
    };
    match runs.first().and_then(|r| r.anchors.as_ref()) {
        None => {
            let comps = per_cluster_connectivity(points, neighbors)?;
            diag.cluster_components = Some(vec![comps; runs.len()]);
        }
        Some(_) => {
            let per_seed = runs
                .par_iter()
                .map(|r| {
                    let anchors = points.subset(r.anchors.as_deref().unwrap_or_default())?;
                    Ok((
                        covering_radius(&anchors, points)?,
                        per_cluster_connectivity(&anchors, neighbors)?,
                    ))
                })
                .collect::<anchornn::Result<Vec<_>>>()?;
            let (radii, comps) = per_seed.into_iter().unzip();
            diag.covering_radius = Some(radii);
            diag.cluster_components = Some(comps);
        }
    }
    Ok(diag)
}

pub fn cmd_cluster(args: &ClusterArgs) -> CliResult<()> {
    let points = load_points(&args.input, args.has_labels)?;
    let sample = args.m.unwrap_or(points.len());
    let neighbors = resolve_neighbors(args.neighbors, sample, args.method.scaling_c)?;
    let cfg = base_config(&args.method, neighbors, args.m)?;
    let (report, partitions) = run_experiment(
        &points,
        args.method.method,
        &cfg,
        &[args.seed],
        !args.method.no_diagnostics,
    )?;
    let labels = partitions[0].labels();
    match &args.out {
        Some(path) => write_labels(path, labels)?,
        None => {
            let mut out = std::io::stdout().lock();
            for l in labels {
                writeln!(out, "{l}")?;
            }
        }
    }
    let json = serde_json::to_string_pretty(&report)?;
    match &args.report {
        Some(path) => fs::write(path, json + "\n")?,
        None => eprintln!("{json}"),
    }
    Ok(())
}

/// One row of the sweep summary CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub method: Method,
    pub m: Option<usize>,
    #[serde(rename = "K")]
    pub neighbors: usize,
    pub mean_ari: f64,
    pub std_ari: f64,
    pub mean_time: f64,
}

/// Runs every grid cell over `seeds` replicates. Cells are ordered by `m`,
/// then `K`.
pub fn run_sweep(points: &PointSet, args: &SweepArgs) -> CliResult<Vec<ExperimentReport>> {
    points
        .require_labels("sweep")
        .map_err(|_| CliError::Data("sweep needs a labelled input".into()))?;
    if args.seeds == 0 {
        return Err(CliError::Usage("--seeds must be at least 1".into()));
    }
    let ms: Vec<Option<usize>> = match args.method.method {
        Method::Spectral if !args.grid_m.is_empty() => {
            return Err(CliError::Usage("--grid-m applies to --method anchornn only".into()))
        }
        Method::Spectral => vec![None],
        Method::Anchornn if args.grid_m.is_empty() => {
            return Err(CliError::Usage("--method anchornn requires --grid-m".into()))
        }
        Method::Anchornn => args.grid_m.iter().copied().map(Some).collect(),
    };
    let seeds: Vec<u64> = (0..args.seeds as u64).map(|i| args.seed + i).collect();
    let cells: Vec<ClusterConfig> = ms
        .iter()
        .flat_map(|&m| args.grid_neighbors.iter().map(move |&k| (m, k)))
        .map(|(m, k)| base_config(&args.method, k, m))
        .collect::<CliResult<_>>()?;
    cells
        .par_iter()
        .map(|cfg| run_experiment(points, args.method.method, cfg, &seeds, !args.method.no_diagnostics).map(|r| r.0))
        .collect()
}

pub fn summary_rows(reports: &[ExperimentReport]) -> Vec<SweepRow> {
    reports
        .iter()
        .map(|r| SweepRow {
            method: r.method,
            m: r.config.m,
            neighbors: r.config.neighbors,
            mean_ari: r.mean_ari.unwrap_or(f64::NAN),
            std_ari: r.std_ari.unwrap_or(f64::NAN),
            mean_time: r.mean_time(),
        })
        .collect()
}

pub fn cmd_sweep(args: &SweepArgs) -> CliResult<()> {
    let points = load_points(&args.input, true)?;
    let reports = run_sweep(&points, args)?;
    fs::create_dir_all(&args.out)?;
    fs::write(
        args.out.join("reports.json"),
        serde_json::to_string_pretty(&reports)? + "\n",
    )?;
    write_summary(&args.out.join("summary.csv"), &summary_rows(&reports))?;
    for row in summary_rows(&reports) {
        println!(
            "{} m={} K={} mean_ari={:.4} std_ari={:.4} mean_time={:.4}s",
            serde_json::to_value(row.method)?.as_str().unwrap_or_default(),
            row.m.map_or("-".into(), |m| m.to_string()),
            row.neighbors,
            row.mean_ari,
            row.std_ari,
            row.mean_time
        );
    }
    Ok(())
}

fn write_summary(path: &Path, rows: &[SweepRow]) -> CliResult<()> {
    let mut w = csv::Writer::from_path(path)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

/// Output of `diag`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagReport {
    pub schema: u32,
    pub n: usize,
    pub m: usize,
    #[serde(rename = "K")]
    pub neighbors: usize,
    pub seed: u64,
    pub realized_delta: Option<f64>,
    pub covering_radius: f64,
    /// Components of the KNN graph on each label's anchors.
    pub anchor_components: Vec<usize>,
    /// Components of the KNN graph on each label's points.
    pub cluster_components: Vec<usize>,
    /// Edges of the anchor KNN graph joining different labels.
    pub anchor_cross_edges: usize,
    pub recommended_k_n: usize,
    pub recommended_k_m: usize,
}

pub fn run_diag(points: &PointSet, args: &DiagArgs) -> CliResult<DiagReport> {
    points
        .require_labels("diag")
        .map_err(|_| CliError::Data("diag needs a labelled input".into()))?;
    let cfg = scaling(args.scaling_c);
    let neighbors = resolve_neighbors(args.neighbors, args.m, args.scaling_c)?;
    let anchors = points.subset(&sample_anchors(points.len(), args.m, args.seed)?)?;
    let delta = verify_separation(points)?;
    Ok(DiagReport {
        schema: SCHEMA_VERSION,
        n: points.len(),
        m: args.m,
        neighbors,
        seed: args.seed,
        realized_delta: delta.is_finite().then_some(delta),
        covering_radius: covering_radius(&anchors, points)?,
        anchor_components: per_cluster_connectivity(&anchors, neighbors)?,
        cluster_components: per_cluster_connectivity(points, neighbors)?,
        anchor_cross_edges: cross_cluster_edge_count(&anchors, neighbors)?,
        recommended_k_n: recommended_k(points.len(), &cfg)?,
        recommended_k_m: recommended_k(args.m, &cfg)?,
    })
}

pub fn cmd_diag(args: &DiagArgs) -> CliResult<()> {
    let points = load_points(&args.input, true)?;
    let json = serde_json::to_string_pretty(&run_diag(&points, args)?)? + "\n";
    match &args.out {
        Some(path) => fs::write(path, json)?,
        None => print!("{json}"),
    }
    Ok(())
}

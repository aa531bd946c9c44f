use std::path::Path;
use std::process::Command;

use clap::Parser;

use anchornn::{Family, LaplacianKind, PointSet};
use anchornn_cli::args::{Cli, Command as Sub, DiagArgs, GenerateArgs, MethodArgs, SweepArgs};
use anchornn_cli::commands::{generate_points, run_diag, run_experiment, run_sweep};
use anchornn_cli::io::{load_points, write_points};
use anchornn_cli::report::{mean, std_dev, ExperimentReport, Method};

fn gen_args(family: Family, n: usize, seed: u64, out: &Path) -> GenerateArgs {
    GenerateArgs {
        family,
        n,
        seed,
        delta_min: None,
        params: Vec::new(),
        out: out.to_path_buf(),
    }
}

fn method_args(method: Method, k: usize) -> MethodArgs {
    MethodArgs {
        method,
        clusters: k,
        kind: LaplacianKind::Unnormalized,
        scaling_c: 2.0,
        eigen_tol: 1e-8,
        eigen_max_matvecs: None,
        restarts: 10,
        no_diagnostics: false,
    }
}

fn dataset(family: Family, n: usize, seed: u64) -> PointSet {
    let dir = tempfile::tempdir().unwrap();
    generate_points(&gen_args(family, n, seed, &dir.path().join("x.csv")))
        .unwrap()
        .0
}

#[test]
fn generate_then_load_is_bit_exact() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("spirals.csv");
    let (points, delta) = generate_points(&gen_args(Family::TwoSpirals, 300, 5, &path)).unwrap();
    assert!(delta >= 1.0);
    write_points(&path, &points).unwrap();
    let back = load_points(&path, true).unwrap();
    assert_eq!(back.dim(), points.dim());
    assert_eq!(back.labels(), points.labels());
    for (a, b) in back.coords().iter().zip(points.coords()) {
        assert_eq!(a.to_bits(), b.to_bits());
    }
}

#[test]
fn awkward_values_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.csv");
    let xs = vec![
        0.1,
        -1.0 / 3.0,
        1e-300,
        5e-324,
        -0.0,
        1.7976931348623157e308,
        123_456_789.123_456_79,
        2.0f64.sqrt(),
    ];
    let p = PointSet::new(xs.clone(), 2).unwrap();
    write_points(&path, &p).unwrap();
    let back = load_points(&path, false).unwrap();
    for (a, b) in back.coords().iter().zip(&xs) {
        assert_eq!(a.to_bits(), b.to_bits());
    }
}

#[test]
fn param_overrides_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = gen_args(Family::ClusterInCluster, 400, 1, &dir.path().join("x.csv"));
    args.params = vec!["gap=3.5".into(), "rays=24".into()];
    assert!(generate_points(&args).is_ok());
    args.params = vec!["gap".into()];
    assert_eq!(generate_points(&args).unwrap_err().exit_code(), 2);
    args.params = vec!["bogus=1".into()];
    assert_eq!(generate_points(&args).unwrap_err().exit_code(), 2);
    args.params.clear();
    args.delta_min = Some(1e3);
    assert_eq!(generate_points(&args).unwrap_err().exit_code(), 3);
}

#[test]
fn spectral_on_corners_is_exact() {
    let points = dataset(Family::Corners, 2000, 2);
    let cfg = anchornn::ClusterConfig::new(4, 15);
    let (report, _) = run_experiment(&points, Method::Spectral, &cfg, &[0], true).unwrap();
    assert_eq!(report.ari.as_deref(), Some(&[1.0][..]));
    assert_eq!(report.diagnostics.cluster_components.as_ref().unwrap()[0], vec![1; 4]);
    assert!(report.diagnostics.realized_delta.unwrap() >= 1.0);
}

#[test]
fn anchornn_with_all_points_matches_spectral() {
    let points = dataset(Family::HalfKernel, 300, 4);
    let cfg = anchornn::ClusterConfig::new(2, 8);
    let (_, sp) = run_experiment(&points, Method::Spectral, &cfg, &[7], false).unwrap();
    let (rep, an) = run_experiment(&points, Method::Anchornn, &cfg.with_anchors(300), &[7], false).unwrap();
    assert_eq!(sp, an);
    assert_eq!(rep.config.m, Some(300));
}

fn strip_volatile(mut r: ExperimentReport) -> ExperimentReport {
    r.created_unix = 0;
    for t in &mut r.timings {
        *t = anchornn::PhaseTimings::default().into();
    }
    r
}

#[test]
fn reports_are_deterministic_and_consistent() {
    let points = dataset(Family::Outlier, 800, 9);
    let cfg = anchornn::ClusterConfig::new(4, 10).with_anchors(120);
    let seeds = [3, 4, 5, 6];
    let (a, _) = run_experiment(&points, Method::Anchornn, &cfg, &seeds, true).unwrap();
    let (b, _) = run_experiment(&points, Method::Anchornn, &cfg, &seeds, true).unwrap();
    let (a, b) = (strip_volatile(a), strip_volatile(b));
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());

    let ari = a.ari.as_ref().unwrap();
    for len in [
        ari.len(),
        a.timings.len(),
        a.degenerate.len(),
        a.eigenvalues.len(),
        a.eigen_matvecs.len(),
        a.diagnostics.covering_radius.as_ref().unwrap().len(),
        a.diagnostics.cluster_components.as_ref().unwrap().len(),
    ] {
        assert_eq!(len, seeds.len());
    }
    assert!((a.mean_ari.unwrap() - mean(ari).unwrap()).abs() <= 1e-12);
    assert!((a.std_ari.unwrap() - std_dev(ari).unwrap()).abs() <= 1e-12);
    assert_eq!(a.schema, 1);
}

#[test]
fn one_cell_sweep_matches_single_run() {
    let dir = tempfile::tempdir().unwrap();
    let points = dataset(Family::CrescentFullMoon, 500, 1);
    let args = SweepArgs {
        input: dir.path().join("unused.csv"),
        method: method_args(Method::Anchornn, 2),
        grid_neighbors: vec![9],
        grid_m: vec![100],
        seeds: 1,
        seed: 11,
        out: dir.path().to_path_buf(),
    };
    let reports = run_sweep(&points, &args).unwrap();
    assert_eq!(reports.len(), 1);
    let cfg = anchornn::ClusterConfig::new(2, 9).with_anchors(100);
    let (single, _) = run_experiment(&points, Method::Anchornn, &cfg, &[11], true).unwrap();
    assert_eq!(strip_volatile(reports[0].clone()), strip_volatile(single));
}

#[test]
fn sweep_grid_order_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    let points = dataset(Family::Corners, 400, 1);
    let mut args = SweepArgs {
        input: dir.path().join("unused.csv"),
        method: method_args(Method::Anchornn, 4),
        grid_neighbors: vec![6, 9],
        grid_m: vec![80, 120],
        seeds: 2,
        seed: 0,
        out: dir.path().to_path_buf(),
    };
    let cells: Vec<_> = run_sweep(&points, &args)
        .unwrap()
        .iter()
        .map(|r| (r.config.m, r.config.neighbors, r.config.seeds.clone()))
        .collect();
    assert_eq!(
        cells,
        vec![
            (Some(80), 6, vec![0, 1]),
            (Some(80), 9, vec![0, 1]),
            (Some(120), 6, vec![0, 1]),
            (Some(120), 9, vec![0, 1])
        ]
    );
    args.method.method = Method::Spectral;
    assert_eq!(run_sweep(&points, &args).unwrap_err().exit_code(), 2);
    args.grid_m.clear();
    assert_eq!(run_sweep(&points, &args).unwrap().len(), 2);
    let unlabelled = PointSet::new(points.coords().to_vec(), 2).unwrap();
    assert_eq!(run_sweep(&unlabelled, &args).unwrap_err().exit_code(), 3);
}

fn diag_args(m: usize, k: Option<usize>) -> DiagArgs {
    DiagArgs {
        input: "unused.csv".into(),
        neighbors: k,
        m,
        seed: 0,
        scaling_c: 2.0,
        out: None,
    }
}

#[test]
fn diag_examples() {
    let coords: Vec<f64> = (0..20)
        .map(|i| if i < 10 { i as f64 * 0.1 } else { 100.0 + i as f64 * 0.1 })
        .collect();
    let labels: Vec<usize> = (0..20).map(|i| usize::from(i >= 10)).collect();
    let p = PointSet::new(coords, 1).unwrap().with_labels(labels).unwrap();

    let full = run_diag(&p, &diag_args(20, Some(2))).unwrap();
    assert_eq!(full.covering_radius, 0.0);
    assert_eq!(full.anchor_cross_edges, 0);
    assert_eq!(full.cluster_components, vec![1, 1]);

    let wide = run_diag(&p, &diag_args(20, Some(15))).unwrap();
    assert_eq!(wide.cluster_components, vec![1, 1]);
    assert!(wide.anchor_cross_edges > 0);
    assert_eq!(wide.recommended_k_n, 6);
}

#[test]
fn flag_parsing() {
    let cli = Cli::try_parse_from([
        "anchornn", "cluster", "x.csv", "--method", "anchornn", "--k", "3", "--K", "7", "--m", "50", "--kind", "rw",
    ])
    .unwrap();
    let Sub::Cluster(c) = cli.command else {
        panic!("expected cluster")
    };
    assert_eq!((c.method.clusters, c.neighbors, c.m), (3, Some(7), Some(50)));
    assert_eq!(c.method.kind, LaplacianKind::RandomWalk);

    let err = Cli::try_parse_from(["anchornn", "cluster", "x.csv", "--method", "spectral", "--K", "7"]).unwrap_err();
    assert_eq!(err.exit_code(), 2);
    let err = Cli::try_parse_from([
        "anchornn", "cluster", "x.csv", "--method", "spectral", "--k", "2", "--kind", "bad",
    ])
    .unwrap_err();
    assert_eq!(err.exit_code(), 2);

    let cli = Cli::try_parse_from([
        "anchornn", "sweep", "x.csv", "--method", "anchornn", "--k", "2", "--grid-K", "8,15,23", "--grid-m", "200",
        "--out", "o",
    ])
    .unwrap();
    let Sub::Sweep(s) = cli.command else {
        panic!("expected sweep")
    };
    assert_eq!(s.grid_neighbors, vec![8, 15, 23]);
    assert_eq!(s.seeds, 20);
}

fn run_bin(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_anchornn"))
        .args(args)
        .output()
        .unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn binary_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("d.csv");
    let labels = dir.path().join("l.csv");
    let report = dir.path().join("r.json");
    let s = |p: &Path| p.to_str().unwrap().to_owned();

    let (code, stdout, _) = run_bin(&[
        "generate",
        "--family",
        "half-kernel",
        "--n",
        "400",
        "--seed",
        "2",
        "--out",
        &s(&data),
    ]);
    assert_eq!(code, 0);
    assert!(stdout.starts_with("realized delta"));

    let (code, _, _) = run_bin(&[
        "cluster",
        &s(&data),
        "--has-labels",
        "--method",
        "anchornn",
        "--k",
        "2",
        "--m",
        "100",
        "--seed",
        "3",
        "--out",
        &s(&labels),
        "--report",
        &s(&report),
    ]);
    assert_eq!(code, 0);
    let written = std::fs::read_to_string(&labels).unwrap();
    assert_eq!(written.lines().count(), 400);
    let rep: ExperimentReport = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(rep.config.neighbors, 10);
    assert_eq!(rep.config.m, Some(100));

    let (code, _, _) = run_bin(&["cluster", &s(&data), "--method", "spectral"]);
    assert_eq!(code, 2);
    let ragged = dir.path().join("bad.csv");
    std::fs::write(&ragged, "1,2\n1,2,3\n").unwrap();
    let (code, _, stderr) = run_bin(&["cluster", &s(&ragged), "--method", "spectral", "--k", "2", "--K", "1"]);
    assert_eq!(code, 3);
    assert!(stderr.contains("line 2"));

    let sweep_dir = dir.path().join("sweep");
    let (code, _, _) = run_bin(&[
        "sweep",
        &s(&data),
        "--method",
        "spectral",
        "--k",
        "2",
        "--grid-K",
        "8,12",
        "--seeds",
        "3",
        "--out",
        &s(&sweep_dir),
    ]);
    assert_eq!(code, 0);
    let summary = std::fs::read_to_string(sweep_dir.join("summary.csv")).unwrap();
    let mut lines = summary.lines();
    assert_eq!(lines.next(), Some("method,m,K,mean_ari,std_ari,mean_time"));
    assert_eq!(lines.count(), 2);
    let reports: Vec<ExperimentReport> =
        serde_json::from_str(&std::fs::read_to_string(sweep_dir.join("reports.json")).unwrap()).unwrap();
    assert_eq!(reports.len(), 2);

    let (code, stdout, _) = run_bin(&["diag", &s(&data), "--m", "400"]);
    assert_eq!(code, 0);
    let diag: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(diag["covering_radius"], 0.0);
}

use std::fs;
use std::path::Path;

use congestion_core::harness::{
    p0_ablation, run, run_observed, sweep, write_table, CaseId, ErrorReport, Field, RunConfig, SweepMode, SweepSpec,
    TimeStep,
};
use congestion_core::par::Execution;
use congestion_core::{Error, SchemeKind};

fn p1(scheme: SchemeKind) -> RunConfig {
    RunConfig {
        scheme,
        t_end: 0.01,
        ..RunConfig::default()
    }
}

fn lines(path: &Path) -> Vec<String> {
    fs::read_to_string(path).unwrap().lines().map(str::to_string).collect()
}

#[test]
fn snapshots_and_overlays_on_disk() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = RunConfig {
        snapshot_times: vec![0.0, 0.005, 0.01],
        output_dir: Some(dir.path().to_path_buf()),
        ..p1(SchemeKind::Gauge1)
    };
    let out = run(&cfg).unwrap();
    assert_eq!(out.snapshots.len(), 3);
    for t in ["0.000000", "0.005000", "0.010000"] {
        let num = lines(&dir.path().join(format!("P1_gauge1_t{t}.csv")));
        let exact = lines(&dir.path().join(format!("P1_exact_t{t}.csv")));
        assert_eq!(num.len(), 1 + 201);
        assert_eq!(exact.len(), num.len());
        assert_eq!(num[0], "x,rho,q");
    }
    let report = lines(&dir.path().join("report.csv"));
    assert_eq!(report[0], ErrorReport::CSV_HEADER);
    assert_eq!(report.len(), 2);
    assert!(out.report.e_l1.is_some() && out.report.g_tv.is_some());
    assert_eq!(out.final_field.time(), 0.01);
    assert_eq!(out.final_field.step(), 20);
}

#[test]
fn steps_land_on_snapshot_times() {
    let cfg = RunConfig {
        snapshot_times: vec![0.0033],
        time_step: TimeStep::Fixed(1e-3),
        ..p1(SchemeKind::Direct)
    };
    let out = run(&cfg).unwrap();
    assert_eq!(out.snapshots[0].time, 0.0033);
    assert_eq!(out.snapshots[0].field.time(), 0.0033);
    let dts: Vec<f64> = out.log.steps.iter().map(|s| s.dt).collect();
    assert_eq!(dts.len(), 11);
    assert!((dts[3] - 3e-4).abs() <= 1e-15);
    assert_eq!(out.final_field.time(), 0.01);
}

#[test]
fn runs_are_deterministic() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for dir in [&a, &b] {
        let cfg = RunConfig {
            case: CaseId::P3,
            snapshot_times: vec![0.01],
            output_dir: Some(dir.path().to_path_buf()),
            ..p1(SchemeKind::Gauge2)
        };
        run(&cfg).unwrap();
    }
    let name = "P3_gauge2_t0.010000.csv";
    assert_eq!(fs::read(a.path().join(name)).unwrap(), fs::read(b.path().join(name)).unwrap());
}

#[test]
fn sequential_and_parallel_agree() {
    let cfg = p1(SchemeKind::Direct);
    let seq = run_observed(&cfg, Execution::Sequential, |_| Ok(())).unwrap();
    let par = run_observed(&cfg, Execution::Parallel, |_| Ok(())).unwrap();
    assert_eq!(seq.final_field, par.final_field);

    let cfg = RunConfig {
        case: CaseId::Cluster2D,
        dx: 0.05,
        t_end: 0.005,
        ..p1(SchemeKind::Gauge1)
    };
    let seq = run_observed(&cfg, Execution::Sequential, |_| Ok(())).unwrap();
    let par = run_observed(&cfg, Execution::Parallel, |_| Ok(())).unwrap();
    let (Field::TwoD { state: s, .. }, Field::TwoD { state: p, .. }) = (&seq.final_field, &par.final_field) else {
        panic!("expected 2D fields");
    };
    let d = s.rho.iter().zip(&p.rho).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    assert!(d <= 1e-12, "{d:e}");
}

#[test]
fn sweep_ratios_are_quotients() {
    let spec = SweepSpec {
        varying: vec![("dt".into(), vec!["1/250".into(), "1/500".into(), "1/1000".into()])],
        mode: SweepMode::Zip,
        fixed: RunConfig {
            t_end: 0.02,
            ..RunConfig::default()
        },
        report_time: None,
    };
    let rows = sweep(&spec, Execution::default()).unwrap();
    assert_eq!(rows.len(), 3);
    assert!(rows[0].ratio_e.is_none());
    for k in 1..3 {
        let (prev, cur) = (rows[k - 1].result.as_ref().unwrap(), rows[k].result.as_ref().unwrap());
        assert_eq!(rows[k].ratio_e, Some(prev.e_l1.unwrap() / cur.e_l1.unwrap()));
        assert_eq!(rows[k].ratio_g, Some(prev.g_tv.unwrap() / cur.g_tv.unwrap()));
    }
    let seq = sweep(&spec, Execution::Sequential).unwrap();
    assert_eq!(seq, rows);
}

#[test]
fn sweep_keeps_failed_rows() {
    let spec = SweepSpec {
        varying: vec![
            ("scheme".into(), vec!["direct".into(), "gauge1".into()]),
            ("boundary".into(), vec!["copy".into(), "periodic".into()]),
        ],
        mode: SweepMode::Product,
        fixed: RunConfig {
            t_end: 0.005,
            ..RunConfig::default()
        },
        report_time: None,
    };
    let rows = sweep(&spec, Execution::default()).unwrap();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows.iter().filter(|r| r.result.is_err()).count(), 1);
    let mut buf = Vec::new();
    write_table(&rows, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let table: Vec<&str> = text.lines().collect();
    assert!(table[0].ends_with(",error"));
    assert!(table[4].contains("gauge schemes need copy boundaries"));
}

#[test]
fn config_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p4.cfg");
    fs::write(&path, "# P4\ncase = P4\nscheme = gauge1\ndx = 1/100\ndt = 1/1000\nt_end = 0.01\n").unwrap();
    let cfg = RunConfig::from_file(&path).unwrap();
    assert_eq!(cfg.case, CaseId::P4);
    assert_eq!(cfg.dx, 0.01);
    let out = run(&cfg).unwrap();
    assert_eq!(out.report.case, "P4");
    assert_eq!(out.report.scheme, "gauge1");
    assert_eq!(out.final_field.step(), 10);
}

#[test]
fn failed_step_is_located_and_earlier_snapshots_survive() {
    let dir = tempfile::tempdir().unwrap();
    // explicit convective Courant number above one
    let cfg = RunConfig {
        dx: 0.005,
        time_step: TimeStep::Fixed(0.005),
        t_end: 0.1,
        snapshot_times: vec![0.01],
        output_dir: Some(dir.path().to_path_buf()),
        ..RunConfig::default()
    };
    match run(&cfg) {
        Err(Error::Step { step, time, .. }) => {
            assert!(step > 2);
            assert!((time - step as f64 * 0.005).abs() <= 1e-12);
        }
        other => panic!("expected a step failure, got {:?}", other.map(|o| o.report)),
    }
    assert!(dir.path().join("P1_direct_t0.010000.csv").exists());
}

#[test]
fn ablation_writes_both_variants() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = RunConfig {
        snapshot_times: vec![0.01],
        output_dir: Some(dir.path().to_path_buf()),
        ..p1(SchemeKind::Direct)
    };
    let ab = p0_ablation(&cfg).unwrap();
    assert!(dir.path().join("split/P1_direct_t0.010000.csv").exists());
    assert!(dir.path().join("unsplit/P1_direct_t0.010000.csv").exists());
    assert_ne!(ab.split.final_field, ab.unsplit.final_field);
}

#[test]
fn invalid_configs_are_rejected() {
    let bad = [
        RunConfig { t_end: 0.0, ..RunConfig::default() },
        RunConfig { time_step: TimeStep::Fixed(-1.0), ..RunConfig::default() },
        RunConfig { picard_iters: 2, scheme: SchemeKind::Gauge1, ..RunConfig::default() },
        RunConfig { case: CaseId::Custom, ..RunConfig::default() },
        RunConfig { epsilon: -1.0, ..RunConfig::default() },
    ];
    for cfg in bad {
        assert!(run(&cfg).is_err(), "{cfg:?}");
    }
}

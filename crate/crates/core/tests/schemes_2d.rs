use congestion_core::harness::cases::cluster2d_state;
use congestion_core::harness::{build_case, run, CaseId, Field, RunConfig};
use congestion_core::metrics::total_variation;
use congestion_core::par::Execution;
use congestion_core::schemes::one_d;
use congestion_core::schemes::two_d::{self, GaugeState2D};
use congestion_core::{BoundaryRule, Grid1D, Grid2D, GridState2D, PressureLaw, SchemeConfig, SchemeKind};

fn law() -> PressureLaw {
    PressureLaw::standard(1e-4).unwrap()
}

fn advance(kind: SchemeKind, grid: &Grid2D, s: &GridState2D, g: &mut GaugeState2D, dt: f64) -> GridState2D {
    let cfg = SchemeConfig::default();
    match kind {
        SchemeKind::Direct => two_d::direct_step(&law(), grid, s, dt, &cfg).unwrap(),
        _ => {
            let (next, gauge) = two_d::gauge_step(&law(), grid, s, g, dt, kind, &cfg).unwrap();
            *g = gauge;
            next
        }
    }
}

fn max_node_diff(grid: &Grid2D, a: &[f64], b: &[f64]) -> f64 {
    let (a, b) = (two_d::interior(grid, a), two_d::interior(grid, b));
    a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

#[test]
fn uniform_state_is_preserved() {
    let grid = Grid2D::unit_square(1.0 / 20.0).unwrap();
    let s0 = GridState2D::from_fn(&grid, BoundaryRule::Copy, |_, _| (0.6, 0.2, -0.1));
    for kind in [SchemeKind::Direct, SchemeKind::Gauge1, SchemeKind::Gauge2] {
        let mut g = GaugeState2D::new(&grid, &s0, kind, Execution::Sequential).unwrap();
        let mut s = s0.clone();
        for _ in 0..10 {
            s = advance(kind, &grid, &s, &mut g, 1e-3);
        }
        assert!(max_node_diff(&grid, &s.rho, &s0.rho) <= 1e-12, "{kind}");
        assert!(max_node_diff(&grid, &s.q1, &s0.q1) <= 1e-12, "{kind}");
        assert!(max_node_diff(&grid, &s.q2, &s0.q2) <= 1e-12, "{kind}");
        if kind.is_gauge() {
            assert!(g.phi.iter().all(|v| v.abs() <= 1e-12));
        }
    }
}

#[test]
fn y_invariant_direct_matches_1d() {
    let h = 1.0 / 50.0;
    let grid = Grid2D::unit_square(h).unwrap();
    let line = Grid1D::with_intervals(0.0, 1.0, 50);
    let case = build_case(CaseId::P1, None).unwrap();
    let mut s1 = case.initial_1d(&line, BoundaryRule::Copy).unwrap();
    let mut s2 = GridState2D::from_fn(&grid, BoundaryRule::Copy, |x, _| {
        let j = (x / h).round() as usize;
        (s1.rho_interior()[j], s1.q_interior()[j], 0.0)
    });
    let cfg = SchemeConfig::default();
    for _ in 0..10 {
        s1 = one_d::direct_step(&law(), &line, &s1, 5e-4, &cfg).unwrap();
        s2 = two_d::direct_step(&law(), &grid, &s2, 5e-4, &cfg).unwrap();
    }
    let mut worst: f64 = 0.0;
    for j in 0..grid.ny() {
        for i in 0..grid.nx() {
            let k = grid.idx(i as isize, j as isize);
            worst = worst.max((s2.rho[k] - s1.rho_interior()[i]).abs());
            worst = worst.max((s2.q1[k] - s1.q_interior()[i]).abs());
            worst = worst.max(s2.q2[k].abs());
        }
    }
    assert!(worst <= 1e-10, "{worst:e}");
}

#[test]
fn cluster_keeps_point_symmetry() {
    let grid = Grid2D::unit_square(1.0 / 48.0).unwrap();
    let s0 = GridState2D::from_fn(&grid, BoundaryRule::Copy, cluster2d_state);
    let (nx, ny) = (grid.nx() as isize, grid.ny() as isize);
    for kind in [SchemeKind::Direct, SchemeKind::Gauge1, SchemeKind::Gauge2] {
        let mut g = GaugeState2D::new(&grid, &s0, kind, Execution::Sequential).unwrap();
        let mut s = s0.clone();
        for _ in 0..8 {
            s = advance(kind, &grid, &s, &mut g, 5e-4);
            let mut worst: f64 = 0.0;
            for j in 0..ny {
                for i in 0..nx {
                    let (a, b) = (grid.idx(i, j), grid.idx(nx - 1 - i, ny - 1 - j));
                    worst = worst.max((s.rho[a] - s.rho[b]).abs());
                    worst = worst.max((s.q1[a] + s.q1[b]).abs());
                    worst = worst.max((s.q2[a] + s.q2[b]).abs());
                }
            }
            assert!(worst <= 1e-10, "{kind} step {}: {worst:e}", s.step);
        }
    }
}

#[test]
fn periodic_direct_conserves_mass() {
    let grid = Grid2D::unit_square(1.0 / 40.0).unwrap();
    let mut s = GridState2D::from_fn(&grid, BoundaryRule::Periodic, cluster2d_state);
    let cfg = SchemeConfig {
        boundary: BoundaryRule::Periodic,
        ..SchemeConfig::default()
    };
    let m0 = s.total_mass(&grid);
    for _ in 0..10 {
        let before = s.total_mass(&grid);
        s = two_d::direct_step(&law(), &grid, &s, 5e-4, &cfg).unwrap();
        assert!((s.total_mass(&grid) - before).abs() <= 1e-12 * m0);
    }
}

#[test]
fn gauge_rejects_periodic() {
    let grid = Grid2D::unit_square(0.1).unwrap();
    let s = GridState2D::from_fn(&grid, BoundaryRule::Periodic, |_, _| (0.5, 0.0, 0.0));
    let g = GaugeState2D::new(&grid, &s, SchemeKind::Gauge1, Execution::Sequential).unwrap();
    let cfg = SchemeConfig {
        boundary: BoundaryRule::Periodic,
        ..SchemeConfig::default()
    };
    assert!(two_d::gauge_step(&law(), &grid, &s, &g, 1e-3, SchemeKind::Gauge1, &cfg).is_err());
    assert!(two_d::gauge_step(&law(), &grid, &s, &g, 1e-3, SchemeKind::Direct, &SchemeConfig::default()).is_err());
}

fn cluster_cut(kind: SchemeKind) -> (f64, Vec<f64>, Vec<f64>) {
    let cfg = RunConfig {
        case: CaseId::Cluster2D,
        scheme: kind,
        dx: 0.01,
        t_end: 0.05,
        ..RunConfig::default()
    };
    let out = run(&cfg).unwrap();
    let Field::TwoD { grid, state } = &out.final_field else {
        panic!("cluster case is two-dimensional");
    };
    let j = (grid.ny() / 2) as isize;
    let rho = (0..grid.nx()).map(|i| state.rho[grid.idx(i as isize, j)]).collect();
    let q = (0..grid.nx()).map(|i| state.q1[grid.idx(i as isize, j)]).collect();
    (out.report.max_rho, rho, q)
}

#[test]
fn cluster_congests_and_gauge_is_calmer() {
    let (max_d, rho_d, q_d) = cluster_cut(SchemeKind::Direct);
    let (max_g, rho_g, q_g) = cluster_cut(SchemeKind::Gauge1);
    for m in [max_d, max_g] {
        assert!(m > 0.95 && m < 1.0, "{m}");
    }
    let plateau_tv = |rho: &[f64], q: &[f64]| {
        let v: Vec<f64> = rho.iter().zip(q).filter(|(r, _)| **r > 0.95).map(|(_, q)| *q).collect();
        total_variation(&v)
    };
    assert!(plateau_tv(&rho_g, &q_g) < plateau_tv(&rho_d, &q_d));
}

#[test]
fn state_rows_match_grid() {
    let grid = Grid2D::unit_square(0.25).unwrap();
    let s = GridState2D::from_fn(&grid, BoundaryRule::Copy, cluster2d_state);
    let mut buf = Vec::new();
    s.write_csv(&grid, &mut buf).unwrap();
    assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 1 + 25);
}

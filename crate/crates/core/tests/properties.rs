use congestion_core::metrics::{l1_relative_error, total_variation, tv_relative_error};
use congestion_core::schemes::one_d;
use congestion_core::{BoundaryRule, Grid1D, GridState1D, PressureLaw, SchemeConfig, Splitting};
use proptest::prelude::*;

fn law(eps: f64, split: bool) -> PressureLaw {
    let s = if split { Splitting::Standard } else { Splitting::None };
    PressureLaw::standard(eps).unwrap().with_splitting(s)
}

fn field(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-5.0f64..5.0, n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn invert_p1_round_trip(rho in 1e-3f64..0.995, log_eps in -8.0f64..-1.0, split: bool) {
        let law = law(10f64.powf(log_eps), split);
        let back = law.invert_p1(law.p1(rho).unwrap()).unwrap();
        prop_assert!((back - rho).abs() <= 1e-10 * rho.max(1e-2), "{rho} -> {back}");
    }

    #[test]
    fn pressures_increase(a in 0.0f64..0.99, b in 0.0f64..0.99, split: bool) {
        prop_assume!(a < b);
        let law = law(1e-4, split);
        prop_assert!(law.pressure(a).unwrap() < law.pressure(b).unwrap());
        prop_assert!(law.p1(a).unwrap() < law.p1(b).unwrap());
        if split {
            prop_assert!(law.p0(a) < law.p0(b));
        }
    }

    #[test]
    fn constant_states_are_fixed(rho in 0.05f64..0.98, u in -1.0f64..1.0, log_eps in -8.0f64..-2.0) {
        let law = law(10f64.powf(log_eps), true);
        let grid = Grid1D::with_intervals(0.0, 1.0, 40);
        let s0 = GridState1D::from_fn(&grid, BoundaryRule::Copy, |_| (rho, rho * u));
        let s1 = one_d::direct_step(&law, &grid, &s0, 1e-3, &SchemeConfig::default()).unwrap();
        for (a, b) in s1.rho.iter().zip(&s0.rho) {
            prop_assert!((a - b).abs() <= 1e-12);
        }
        for (a, b) in s1.q.iter().zip(&s0.q) {
            prop_assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn density_stays_below_maximal(
        rl in 0.2f64..0.95, rr in 0.2f64..0.95,
        ul in -1.0f64..1.0, ur in -1.0f64..1.0,
        log_eps in -8.0f64..-2.0,
    ) {
        let law = law(10f64.powf(log_eps), true);
        let grid = Grid1D::with_intervals(0.0, 1.0, 100);
        let mut s = GridState1D::from_fn(&grid, BoundaryRule::Copy, |x| if x <= 0.5 { (rl, rl * ul) } else { (rr, rr * ur) });
        for _ in 0..5 {
            s = one_d::direct_step(&law, &grid, &s, 5e-4, &SchemeConfig::default()).unwrap();
            prop_assert!(s.min_rho() > 0.0 && s.max_rho() < 1.0);
        }
    }

    #[test]
    fn periodic_mass_is_conserved(rho in prop::collection::vec(0.2f64..0.9, 30), q in prop::collection::vec(-0.3f64..0.3, 30)) {
        let law = law(1e-4, true);
        let grid = Grid1D::with_intervals(0.0, 1.0, 29);
        let mut s = GridState1D::from_fn(&grid, BoundaryRule::Periodic, |x| {
            let j = (x * 29.0).round() as usize;
            (rho[j], q[j])
        });
        let cfg = SchemeConfig { boundary: BoundaryRule::Periodic, ..SchemeConfig::default() };
        let m0 = s.total_mass(&grid);
        s = one_d::direct_step(&law, &grid, &s, 1e-3, &cfg).unwrap();
        prop_assert!((s.total_mass(&grid) - m0).abs() <= 1e-12 * m0);
    }

    #[test]
    fn total_mass_is_linear(a in field(21), b in field(21), x in -3.0f64..3.0, y in -3.0f64..3.0) {
        let grid = Grid1D::with_intervals(-1.0, 2.0, 20);
        let mk = |v: &[f64]| {
            let mut s = GridState1D::zeros(&grid);
            s.rho[2..23].copy_from_slice(v);
            s
        };
        let comb: Vec<f64> = a.iter().zip(&b).map(|(p, q)| x * p + y * q).collect();
        let lhs = mk(&comb).total_mass(&grid);
        let rhs = x * mk(&a).total_mass(&grid) + y * mk(&b).total_mass(&grid);
        let scale = 3.0 * (x.abs() + y.abs()) * 5.0;
        prop_assert!((lhs - rhs).abs() <= 1e-13 * scale.max(1.0));
    }

    #[test]
    fn ghost_fill_is_idempotent(v in field(12), periodic: bool) {
        let rule = if periodic { BoundaryRule::Periodic } else { BoundaryRule::Copy };
        let grid = Grid1D::with_intervals(0.0, 1.0, 11);
        let mut s = GridState1D::from_fn(&grid, rule, |x| {
            let j = (x * 11.0).round() as usize;
            (v[j], -v[j])
        });
        let once = s.clone();
        s.fill_ghosts(rule);
        prop_assert_eq!(s, once);
    }

    #[test]
    fn relative_errors_are_scale_invariant(w in field(16), r in field(16), c in 0.01f64..100.0) {
        prop_assume!(r.iter().any(|v| v.abs() > 1e-3) && total_variation(&r) > 1e-3);
        let (cw, cr): (Vec<f64>, Vec<f64>) = (w.iter().map(|v| c * v).collect(), r.iter().map(|v| c * v).collect());
        let (e0, e1) = (l1_relative_error(&w, &r).unwrap(), l1_relative_error(&cw, &cr).unwrap());
        prop_assert!((e0 - e1).abs() <= 1e-12 * e0.max(1.0));
        let (g0, g1) = (tv_relative_error(&w, &r).unwrap(), tv_relative_error(&cw, &cr).unwrap());
        prop_assert!((g0 - g1).abs() <= 1e-12 * g0.max(1.0));
    }
}

#[test]
fn spike_on_monotone_step() {
    let w: Vec<f64> = (0..20).map(|k| if k < 10 { 0.0 } else { 1.0 }).collect();
    let mut spiked = w.clone();
    spiked[4] += 0.3;
    let g = tv_relative_error(&spiked, &w).unwrap();
    assert!((g - 2.0 * 0.3 / total_variation(&w)).abs() <= 1e-15);
    assert_eq!(l1_relative_error(&w, &w).unwrap(), 0.0);
}

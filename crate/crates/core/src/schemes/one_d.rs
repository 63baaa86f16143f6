//! One-dimensional direct and gauge schemes.
//!
//! Interface arrays are indexed on the ghosted storage: entry `k` sits
//! between storage nodes `k` and `k + 1`, so node `j` (storage `j + 2`) has
//! its right interface at `k = j + 2`.
//!
//! The implicit unknown is the scaled pressure `pi = eps * p1(rho)`; the
//! density follows from `rho = p1^{-1}(pi / eps)`.

use super::{velocity, SchemeConfig, SchemeKind};
use crate::error::{Error, Result};
use crate::mesh::{BoundaryRule, Grid1D, GridState1D, GHOST};
use crate::numerics::{newton_solve, solve_banded, BandedMatrix, BandedSystem};
use crate::pressure::PressureLaw;

/// Rusanov interface data.
#[derive(Debug, Clone, PartialEq)]
pub struct FluxSet1D {
    /// Local diffusion coefficient `C_{j+1/2}`.
    pub c_half: Vec<f64>,
    /// Explicit momentum flux `F_{j+1/2}`.
    pub f_half: Vec<f64>,
}

/// Largest explicit characteristic speed at node storage index `s`.
#[inline]
fn node_speed(law: &PressureLaw, rho: f64, q: f64) -> f64 {
    velocity(rho, q).abs() + law.explicit_sound_speed(rho)
}

/// `C_{j+1/2} = max(|u| + sqrt(eps p0'))` over the two neighbouring nodes.
pub fn local_diffusion(law: &PressureLaw, state: &GridState1D) -> Vec<f64> {
    let n = state.rho.len();
    let speed: Vec<f64> = (0..n).map(|s| node_speed(law, state.rho[s], state.q[s])).collect();
    (0..n - 1).map(|k| speed[k].max(speed[k + 1])).collect()
}

/// `F_{j+1/2} = {q^2/rho + eps p0(rho)} - C (q_{j+1} - q_j) / 2`.
pub fn momentum_flux_explicit(law: &PressureLaw, state: &GridState1D, c_half: &[f64]) -> Vec<f64> {
    momentum_flux_mixed(law, &state.rho, &state.q, state, c_half)
}

// Convective part from (rho_c, q_c), explicit pressure and viscosity from `base`.
fn momentum_flux_mixed(
    law: &PressureLaw,
    rho_c: &[f64],
    q_c: &[f64],
    base: &GridState1D,
    c_half: &[f64],
) -> Vec<f64> {
    let eps = law.epsilon();
    let n = base.rho.len();
    let phys: Vec<f64> = (0..n)
        .map(|s| q_c[s] * velocity(rho_c[s], q_c[s]) + eps * law.p0(base.rho[s]))
        .collect();
    (0..n - 1)
        .map(|k| 0.5 * (phys[k] + phys[k + 1]) - 0.5 * c_half[k] * (base.q[k + 1] - base.q[k]))
        .collect()
}

pub fn fluxes(law: &PressureLaw, state: &GridState1D) -> FluxSet1D {
    let c_half = local_diffusion(law, state);
    let f_half = momentum_flux_explicit(law, state, &c_half);
    FluxSet1D { c_half, f_half }
}

/// Largest explicit wave speed over the nodes.
pub fn max_wave_speed(law: &PressureLaw, state: &GridState1D) -> f64 {
    let n = state.nodes();
    (GHOST..GHOST + n)
        .map(|s| node_speed(law, state.rho[s], state.q[s]))
        .fold(0.0, f64::max)
}

/// Time step with `dt * max_speed / dx = sigma`; `dt_max` if all speeds vanish.
pub fn adaptive_dt(law: &PressureLaw, state: &GridState1D, sigma: f64, dx: f64, dt_max: f64) -> f64 {
    let s = max_wave_speed(law, state);
    if s > 0.0 {
        sigma * dx / s
    } else {
        dt_max
    }
}

/// Right-hand side and coupling of the implicit pressure equation
/// `rho(pi_j) - coef (pi_{j+2} - 2 pi_j + pi_{j-2}) = rhs_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectSystem1D {
    pub rhs: Vec<f64>,
    pub coef: f64,
}

pub fn assemble_direct_system(
    grid: &Grid1D,
    state: &GridState1D,
    fl: &FluxSet1D,
    dt: f64,
) -> DirectSystem1D {
    let dx = grid.dx;
    let (r, q, c, f) = (&state.rho, &state.q, &fl.c_half, &fl.f_half);
    let a = dt / (2.0 * dx);
    let b = dt * dt / (2.0 * dx * dx);
    let rhs = (0..grid.nodes())
        .map(|j| {
            let s = j + GHOST;
            r[s] - a * (q[s + 1] - q[s - 1])
                + a * (c[s] * (r[s + 1] - r[s]) - c[s - 1] * (r[s] - r[s - 1]))
                + b * (f[s + 1] - f[s] - f[s - 1] + f[s - 2])
        })
        .collect();
    DirectSystem1D {
        rhs,
        coef: dt * dt / (4.0 * dx * dx),
    }
}

/// Node index of a ghost-closed neighbour of `j`.
#[inline]
fn closed(j: isize, n: usize, rule: BoundaryRule) -> usize {
    match rule {
        BoundaryRule::Copy => j.clamp(0, n as isize - 1) as usize,
        BoundaryRule::Periodic => j.rem_euclid(n as isize) as usize,
    }
}

fn stencil_offsets(n: usize, rule: BoundaryRule) -> Vec<isize> {
    let mut offs = vec![-2, -1, 0, 1, 2];
    if rule == BoundaryRule::Periodic {
        let n = n as isize;
        offs.extend([n - 1, n - 2, 1 - n, 2 - n]);
    }
    offs
}

/// `d rho / d pi` at density `rho`, kept finite near vacuum.
fn drho_dpi(law: &PressureLaw, rho: f64) -> Result<f64> {
    let d = law.epsilon() * law.dp1(rho.max(1e-10))?;
    Ok(1.0 / d)
}

fn densities(law: &PressureLaw, pi: &[f64]) -> Result<Vec<f64>> {
    let eps = law.epsilon();
    pi.iter().map(|&v| law.invert_p1(v / eps)).collect()
}

/// Solve the implicit pressure equation by damped Newton, returning `pi`.
pub fn solve_implicit_pressure(
    law: &PressureLaw,
    sys: &DirectSystem1D,
    pi0: Vec<f64>,
    cfg: &SchemeConfig,
) -> Result<Vec<f64>> {
    let n = sys.rhs.len();
    let rule = cfg.boundary;
    let c = sys.coef;
    let offs = stencil_offsets(n, rule);
    let residual = |pi: &[f64], out: &mut [f64]| -> Result<()> {
        let rho = densities(law, pi)?;
        for j in 0..n {
            let ji = j as isize;
            let lap = pi[closed(ji + 2, n, rule)] - 2.0 * pi[j] + pi[closed(ji - 2, n, rule)];
            out[j] = rho[j] - c * lap - sys.rhs[j];
        }
        Ok(())
    };
    let jacobian = |pi: &[f64]| -> Result<BandedMatrix> {
        let rho = densities(law, pi)?;
        let mut m = BandedMatrix::new(n, &offs);
        for j in 0..n {
            let ji = j as isize;
            m.add(j, j, drho_dpi(law, rho[j])? + 2.0 * c);
            m.add(j, closed(ji + 2, n, rule), -c);
            m.add(j, closed(ji - 2, n, rule), -c);
        }
        Ok(m)
    };
    Ok(newton_solve(residual, jacobian, pi0, &cfg.newton)?.x)
}

fn initial_pi(law: &PressureLaw, state: &GridState1D) -> Result<Vec<f64>> {
    let eps = law.epsilon();
    state.rho_interior().iter().map(|&r| Ok(eps * law.p1(r)?)).collect()
}

/// Reject densities outside `(0, rho_star)`.
pub fn check_density(law: &PressureLaw, state: &GridState1D) -> Result<()> {
    for (j, &r) in state.rho_interior().iter().enumerate() {
        if !(r > 0.0 && r < law.rho_star()) {
            return Err(Error::DensityBound {
                node: j,
                rho: r,
                time: state.time,
            });
        }
    }
    Ok(())
}

// Momentum update given the implicit pressure and the explicit fluxes.
fn momentum_update(grid: &Grid1D, base: &GridState1D, f: &[f64], pi: &[f64], dt: f64, rule: BoundaryRule) -> Vec<f64> {
    let n = grid.nodes();
    let dx = grid.dx;
    (0..n)
        .map(|j| {
            let s = j + GHOST;
            let ji = j as isize;
            base.q[s]
                - dt / dx * (f[s] - f[s - 1])
                - dt / (2.0 * dx) * (pi[closed(ji + 1, n, rule)] - pi[closed(ji - 1, n, rule)])
        })
        .collect()
}

fn assemble_state(rho: &[f64], q: &[f64], prev: &GridState1D, dt: f64, rule: BoundaryRule) -> GridState1D {
    let mut out = GridState1D {
        rho: prev.rho.clone(),
        q: prev.q.clone(),
        time: prev.time + dt,
        step: prev.step + 1,
    };
    out.rho[GHOST..GHOST + rho.len()].copy_from_slice(rho);
    out.q[GHOST..GHOST + q.len()].copy_from_slice(q);
    out.fill_ghosts(rule);
    out
}

/// One step of the direct scheme.
pub fn direct_step(law: &PressureLaw, grid: &Grid1D, state: &GridState1D, dt: f64, cfg: &SchemeConfig) -> Result<GridState1D> {
    let fl = fluxes(law, state);
    let sys = assemble_direct_system(grid, state, &fl, dt);
    let pi = solve_implicit_pressure(law, &sys, initial_pi(law, state)?, cfg)?;
    let rho = densities(law, &pi)?;
    let q = momentum_update(grid, state, &fl.f_half, &pi, dt, cfg.boundary);
    let out = assemble_state(&rho, &q, state, dt, cfg.boundary);
    check_density(law, &out)?;
    Ok(out)
}

/// Direct step followed by `cfg.picard_iters` fixed-point sweeps in which the
/// convective flux `q^2/rho` is re-evaluated at the latest iterate. The
/// explicit pressure and the diffusion stay at time `n`.
pub fn picard_step(law: &PressureLaw, grid: &Grid1D, state: &GridState1D, dt: f64, cfg: &SchemeConfig) -> Result<GridState1D> {
    let mut iterate = direct_step(law, grid, state, dt, cfg)?;
    if cfg.picard_iters == 0 {
        return Ok(iterate);
    }
    let c_half = local_diffusion(law, state);
    let mut pi = initial_pi(law, &iterate)?;
    for _ in 0..cfg.picard_iters {
        let f_half = momentum_flux_mixed(law, &iterate.rho, &iterate.q, state, &c_half);
        let fl = FluxSet1D {
            c_half: c_half.clone(),
            f_half,
        };
        let sys = assemble_direct_system(grid, state, &fl, dt);
        pi = solve_implicit_pressure(law, &sys, pi, cfg)?;
        let rho = densities(law, &pi)?;
        let q = momentum_update(grid, state, &fl.f_half, &pi, dt, cfg.boundary);
        iterate = assemble_state(&rho, &q, state, dt, cfg.boundary);
        check_density(law, &iterate)?;
    }
    Ok(iterate)
}

/// Auxiliary gauge variables: the spatially constant `a` and the node values
/// of `phi` (zero at both boundary nodes).
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeState1D {
    pub a: f64,
    pub phi: Vec<f64>,
}

impl GaugeState1D {
    /// `a` is the node average of the momentum. `phi` starts at zero; the
    /// update never reads the previous `phi`.
    pub fn new(state: &GridState1D) -> Self {
        let q = state.q_interior();
        GaugeState1D {
            a: q.iter().sum::<f64>() / q.len() as f64,
            phi: vec![0.0; q.len()],
        }
    }
}

// phi ghost closure: odd reflection about the Dirichlet boundary nodes.
#[inline]
fn phi_at(phi: &[f64], j: isize) -> f64 {
    let m = phi.len() as isize - 1;
    if j < 0 {
        -phi[(-j) as usize]
    } else if j > m {
        -phi[(2 * m - j) as usize]
    } else {
        phi[j as usize]
    }
}

/// Dirichlet Poisson solve for `phi` on the interior nodes `1..M-1`.
///
/// `wide` selects `(phi_{j+2} - 2 phi_j + phi_{j-2}) / (4 dx^2)`, otherwise
/// `(phi_{j+1} - 2 phi_j + phi_{j-1}) / dx^2`.
pub fn solve_gauge_potential(dx: f64, rhs: &[f64], wide: bool) -> Result<Vec<f64>> {
    let n_nodes = rhs.len();
    let m = n_nodes - 1;
    let n = m - 1;
    let (reach, scale) = if wide { (2isize, 1.0 / (4.0 * dx * dx)) } else { (1, 1.0 / (dx * dx)) };
    let mut mat = BandedMatrix::new(n, &[-reach, 0, reach]);
    // Unknown u = j - 1 for node j; the system is negated to make it SPD.
    for u in 0..n {
        let j = u as isize + 1;
        mat.add(u, u, 2.0 * scale);
        for nb in [j - reach, j + reach] {
            if nb >= 1 && nb <= m as isize - 1 {
                mat.add(u, (nb - 1) as usize, -scale);
            } else if nb < 0 {
                // odd reflection phi_{-k} = -phi_k
                let img = -nb;
                mat.add(u, (img - 1) as usize, scale);
            } else if nb > m as isize {
                let img = 2 * m as isize - nb;
                mat.add(u, (img - 1) as usize, scale);
            }
        }
    }
    let b: Vec<f64> = (1..m).map(|j| -rhs[j]).collect();
    let inner = solve_banded(&BandedSystem { matrix: mat, rhs: b })?;
    let mut phi = vec![0.0; n_nodes];
    phi[1..m].copy_from_slice(&inner);
    Ok(phi)
}

/// One step of a gauge scheme.
pub fn gauge_step(
    law: &PressureLaw,
    grid: &Grid1D,
    state: &GridState1D,
    gauge: &GaugeState1D,
    dt: f64,
    kind: SchemeKind,
    cfg: &SchemeConfig,
) -> Result<(GridState1D, GaugeState1D)> {
    if !kind.is_gauge() {
        return Err(Error::InvalidArgument("gauge_step needs a gauge scheme".into()));
    }
    if cfg.boundary != BoundaryRule::Copy {
        return Err(Error::Config("gauge schemes need copy boundaries".into()));
    }
    let n = grid.nodes();
    let dx = grid.dx;
    let eps = law.epsilon();
    let fl = fluxes(law, state);
    let sys = assemble_direct_system(grid, state, &fl, dt);
    let pi = solve_implicit_pressure(law, &sys, initial_pi(law, state)?, cfg)?;
    let rho_new = densities(law, &pi)?;

    let (r, q, c) = (&state.rho, &state.q, &fl.c_half);
    let rhs: Vec<f64> = (0..n)
        .map(|j| {
            let s = j + GHOST;
            (rho_new[j] - r[s]) / dt
                - (c[s] * (r[s + 1] - r[s]) - c[s - 1] * (r[s] - r[s - 1])) / (2.0 * dx)
        })
        .collect();
    let phi = solve_gauge_potential(dx, &rhs, kind == SchemeKind::Gauge2)?;

    let len = grid.c - grid.b;
    let edge = |j: usize| -> f64 {
        let s = j + GHOST;
        q[s] * velocity(r[s], q[s]) + eps * law.p0(r[s]) + pi[j]
    };
    let visc = |k: usize| c[k] * (q[k + 1] - q[k]);
    // sum over all nodes of X_{j+1/2} - X_{j-1/2}: the two ghost interfaces remain
    let telescoped = visc(n - 1 + GHOST) - visc(GHOST - 1);
    let a = gauge.a - dt / len * (edge(n - 1) - edge(0)) + dt / (2.0 * len) * telescoped;

    let q_new: Vec<f64> = (0..n as isize)
        .map(|j| a - (phi_at(&phi, j + 1) - phi_at(&phi, j - 1)) / (2.0 * dx))
        .collect();
    let out = assemble_state(&rho_new, &q_new, state, dt, cfg.boundary);
    check_density(law, &out)?;
    Ok((out, GaugeState1D { a, phi }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p1_state(grid: &Grid1D) -> GridState1D {
        GridState1D::from_fn(grid, BoundaryRule::Copy, |x| if x <= 0.5 { (0.7, 0.8) } else { (0.7, -0.8) })
    }

    #[test]
    fn uniform_rest_has_zero_flux_differences() {
        let law = PressureLaw::standard(1e-4).unwrap();
        let grid = Grid1D::with_intervals(0.0, 1.0, 20);
        let s = GridState1D::from_fn(&grid, BoundaryRule::Copy, |_| (0.5, 0.0));
        let fl = fluxes(&law, &s);
        for w in fl.f_half.windows(2) {
            assert!((w[1] - w[0]).abs() < 1e-15);
        }
        assert!(fl.c_half.iter().all(|&c| (c - 0.02).abs() < 1e-14));
    }

    #[test]
    fn p1_first_interface_values() {
        let law = PressureLaw::standard(1e-4).unwrap();
        let grid = Grid1D::new(0.0, 1.0, 0.005).unwrap();
        let s = p1_state(&grid);
        let fl = fluxes(&law, &s);
        let c0 = 0.8 / 0.7 + law.explicit_sound_speed(0.7);
        // interface between nodes 100 (left value) and 101
        let k = 100 + GHOST;
        assert!((fl.c_half[k] - c0).abs() < 1e-14);
        let phys = 0.64 / 0.7 + 1e-4 * law.p0(0.7);
        let expect = phys - 0.5 * c0 * (-1.6);
        assert!((fl.f_half[k] - expect).abs() < 1e-13);
    }

    #[test]
    fn gauge_potential_inverts_operator() {
        let dx = 0.1;
        let phi_exact: Vec<f64> = (0..=10).map(|j| if j == 0 || j == 10 { 0.0 } else { (j as f64 * 0.7).sin() }).collect();
        for wide in [false, true] {
            let rhs: Vec<f64> = (0..=10isize)
                .map(|j| {
                    if wide {
                        (phi_at(&phi_exact, j + 2) - 2.0 * phi_at(&phi_exact, j) + phi_at(&phi_exact, j - 2)) / (4.0 * dx * dx)
                    } else {
                        (phi_at(&phi_exact, j + 1) - 2.0 * phi_at(&phi_exact, j) + phi_at(&phi_exact, j - 1)) / (dx * dx)
                    }
                })
                .collect();
            let phi = solve_gauge_potential(dx, &rhs, wide).unwrap();
            for j in 0..=10 {
                assert!((phi[j] - phi_exact[j]).abs() < 1e-10, "wide {wide} node {j}");
            }
        }
    }
}

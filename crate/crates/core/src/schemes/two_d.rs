//! Two-dimensional direct and gauge schemes on a tensor grid.
//!
//! Interface arrays share the ghosted node storage: the x-interface
//! `(i + 1/2, j)` lives at `grid.idx(i, j)`, the y-interface `(i, j + 1/2)`
//! likewise. Node-only fields (implicit pressure, gauge variables) are
//! stored without ghosts, `u = j * nx + i`.

use super::{velocity, SchemeConfig, SchemeKind};
use crate::error::{Error, Result};
use crate::mesh::{BoundaryRule, Grid2D, GridState2D};
use crate::numerics::{newton_solve, solve_pcg, BandedMatrix, KrylovOptions, LinearSolve};
use crate::par;
use crate::pressure::PressureLaw;

/// Rusanov interface data in both directions.
#[derive(Debug, Clone, PartialEq)]
pub struct FluxSet2D {
    pub cx: Vec<f64>,
    /// `F_{i+1/2,j}`, both momentum components.
    pub fx: [Vec<f64>; 2],
    pub cy: Vec<f64>,
    /// `G_{i,j+1/2}`, both momentum components.
    pub gy: [Vec<f64>; 2],
}

fn node_speed(law: &PressureLaw, rho: f64, q1: f64, q2: f64) -> f64 {
    let c = law.explicit_sound_speed(rho);
    velocity(rho, q1).abs().max(velocity(rho, q2).abs()) + c
}

/// Largest explicit wave speed over the nodes.
pub fn max_wave_speed(law: &PressureLaw, grid: &Grid2D, s: &GridState2D) -> f64 {
    let mut m = 0.0_f64;
    for j in 0..grid.ny() as isize {
        for i in 0..grid.nx() as isize {
            let k = grid.idx(i, j);
            m = m.max(node_speed(law, s.rho[k], s.q1[k], s.q2[k]));
        }
    }
    m
}

/// Time step with `dt * max_speed / min(dx, dy) = sigma`.
pub fn adaptive_dt(law: &PressureLaw, grid: &Grid2D, s: &GridState2D, sigma: f64, dt_max: f64) -> f64 {
    let v = max_wave_speed(law, grid, s);
    if v > 0.0 {
        sigma * grid.x.dx.min(grid.y.dx) / v
    } else {
        dt_max
    }
}

pub fn fluxes(law: &PressureLaw, grid: &Grid2D, s: &GridState2D, exec: par::Execution) -> FluxSet2D {
    let n = grid.len_ghosted();
    let stride = grid.stride();
    let rows = n / stride;
    let eps = law.epsilon();
    let mut speed = vec![0.0; n];
    par::fill(&mut speed, exec, |k| node_speed(law, s.rho[k], s.q1[k], s.q2[k]));
    let mut p0 = vec![0.0; n];
    par::fill(&mut p0, exec, |k| eps * law.p0(s.rho[k]));
    let u1 = |k: usize| velocity(s.rho[k], s.q1[k]);
    let u2 = |k: usize| velocity(s.rho[k], s.q2[k]);

    let xvalid = |k: usize| k % stride + 1 < stride;
    let yvalid = |k: usize| k / stride + 1 < rows;
    let mut cx = vec![0.0; n];
    par::fill(&mut cx, exec, |k| if xvalid(k) { speed[k].max(speed[k + 1]) } else { 0.0 });
    let mut cy = vec![0.0; n];
    par::fill(&mut cy, exec, |k| if yvalid(k) { speed[k].max(speed[k + stride]) } else { 0.0 });

    let mut fx1 = vec![0.0; n];
    par::fill(&mut fx1, exec, |k| {
        if !xvalid(k) {
            return 0.0;
        }
        let (a, b) = (k, k + 1);
        0.5 * (s.q1[a] * u1(a) + p0[a] + s.q1[b] * u1(b) + p0[b]) - 0.5 * cx[k] * (s.q1[b] - s.q1[a])
    });
    let mut fx2 = vec![0.0; n];
    par::fill(&mut fx2, exec, |k| {
        if !xvalid(k) {
            return 0.0;
        }
        let (a, b) = (k, k + 1);
        0.5 * (s.q2[a] * u1(a) + s.q2[b] * u1(b)) - 0.5 * cx[k] * (s.q2[b] - s.q2[a])
    });
    let mut gy1 = vec![0.0; n];
    par::fill(&mut gy1, exec, |k| {
        if !yvalid(k) {
            return 0.0;
        }
        let (a, b) = (k, k + stride);
        0.5 * (s.q1[a] * u2(a) + s.q1[b] * u2(b)) - 0.5 * cy[k] * (s.q1[b] - s.q1[a])
    });
    let mut gy2 = vec![0.0; n];
    par::fill(&mut gy2, exec, |k| {
        if !yvalid(k) {
            return 0.0;
        }
        let (a, b) = (k, k + stride);
        0.5 * (s.q2[a] * u2(a) + p0[a] + s.q2[b] * u2(b) + p0[b]) - 0.5 * cy[k] * (s.q2[b] - s.q2[a])
    });
    FluxSet2D {
        cx,
        fx: [fx1, fx2],
        cy,
        gy: [gy1, gy2],
    }
}

/// Second differences of the explicit fluxes entering the mass equation,
/// i.e. the braces multiplying `dt^2/2`.
fn flux_second_differences(grid: &Grid2D, fl: &FluxSet2D, i: isize, j: isize) -> f64 {
    let (dx, dy) = (grid.x.dx, grid.y.dx);
    let at = |i, j| grid.idx(i, j);
    let [f1, f2] = &fl.fx;
    let [g1, g2] = &fl.gy;
    (f1[at(i + 1, j)] - f1[at(i, j)] - f1[at(i - 1, j)] + f1[at(i - 2, j)]) / (dx * dx)
        + (g1[at(i + 1, j)] - g1[at(i + 1, j - 1)] - g1[at(i - 1, j)] + g1[at(i - 1, j - 1)]) / (dx * dy)
        + (f2[at(i, j + 1)] - f2[at(i - 1, j + 1)] - f2[at(i, j - 1)] + f2[at(i - 1, j - 1)]) / (dx * dy)
        + (g2[at(i, j + 1)] - g2[at(i, j)] - g2[at(i, j - 1)] + g2[at(i, j - 2)]) / (dy * dy)
}

/// Local-diffusion terms `[C d rho]` of the mass flux, per unit time.
fn density_viscosity(grid: &Grid2D, s: &GridState2D, fl: &FluxSet2D, i: isize, j: isize) -> f64 {
    let (dx, dy) = (grid.x.dx, grid.y.dx);
    let at = |i, j| grid.idx(i, j);
    let r = &s.rho;
    let k = at(i, j);
    (fl.cx[k] * (r[at(i + 1, j)] - r[k]) - fl.cx[at(i - 1, j)] * (r[k] - r[at(i - 1, j)])) / (2.0 * dx)
        + (fl.cy[k] * (r[at(i, j + 1)] - r[k]) - fl.cy[at(i, j - 1)] * (r[k] - r[at(i, j - 1)])) / (2.0 * dy)
}

/// Right-hand side and couplings of
/// `rho(pi) - cx (pi_{i+2} - 2 pi + pi_{i-2}) - cy (pi_{j+2} - 2 pi + pi_{j-2}) = rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectSystem2D {
    pub rhs: Vec<f64>,
    pub cx: f64,
    pub cy: f64,
}

pub fn assemble_direct_system(grid: &Grid2D, s: &GridState2D, fl: &FluxSet2D, dt: f64, exec: par::Execution) -> DirectSystem2D {
    let (nx, ny) = (grid.nx(), grid.ny());
    let (dx, dy) = (grid.x.dx, grid.y.dx);
    let mut rhs = vec![0.0; nx * ny];
    par::fill(&mut rhs, exec, |u| {
        let (i, j) = ((u % nx) as isize, (u / nx) as isize);
        let at = |i, j| grid.idx(i, j);
        let k = at(i, j);
        let div = (s.q1[at(i + 1, j)] - s.q1[at(i - 1, j)]) / (2.0 * dx) + (s.q2[at(i, j + 1)] - s.q2[at(i, j - 1)]) / (2.0 * dy);
        s.rho[k] - dt * div + dt * density_viscosity(grid, s, fl, i, j) + 0.5 * dt * dt * flux_second_differences(grid, fl, i, j)
    });
    DirectSystem2D {
        rhs,
        cx: dt * dt / (4.0 * dx * dx),
        cy: dt * dt / (4.0 * dy * dy),
    }
}

#[inline]
fn closed(k: isize, n: usize, rule: BoundaryRule) -> usize {
    match rule {
        BoundaryRule::Copy => k.clamp(0, n as isize - 1) as usize,
        BoundaryRule::Periodic => k.rem_euclid(n as isize) as usize,
    }
}

fn densities(law: &PressureLaw, pi: &[f64]) -> Result<Vec<f64>> {
    let eps = law.epsilon();
    pi.iter().map(|&v| law.invert_p1(v / eps)).collect()
}

/// Newton solve of the implicit pressure equation, returning `pi = eps p1`.
pub fn solve_implicit_pressure(
    law: &PressureLaw,
    grid: &Grid2D,
    sys: &DirectSystem2D,
    pi0: Vec<f64>,
    cfg: &SchemeConfig,
) -> Result<Vec<f64>> {
    let (nx, ny) = (grid.nx(), grid.ny());
    let rule = cfg.boundary;
    let n = nx * ny;
    let (cx, cy) = (sys.cx, sys.cy);
    let exec = cfg.exec;
    let nbrs = move |u: usize| -> [(usize, f64); 5] {
        let (i, j) = ((u % nx) as isize, (u / nx) as isize);
        let xp = closed(i + 2, nx, rule);
        let xm = closed(i - 2, nx, rule);
        let yp = closed(j + 2, ny, rule);
        let ym = closed(j - 2, ny, rule);
        let jj = j as usize * nx;
        let ii = i as usize;
        [
            (u, 2.0 * (cx + cy)),
            (jj + xp, -cx),
            (jj + xm, -cx),
            (yp * nx + ii, -cy),
            (ym * nx + ii, -cy),
        ]
    };
    let residual = |pi: &[f64], out: &mut [f64]| -> Result<()> {
        let rho = densities(law, pi)?;
        par::fill(out, exec, |u| {
            let lap: f64 = nbrs(u).iter().map(|&(v, c)| c * pi[v]).sum();
            rho[u] + lap - sys.rhs[u]
        });
        Ok(())
    };
    let mut offsets = vec![0isize, 1, -1, 2, -2];
    for d in [nx as isize, 2 * nx as isize] {
        offsets.extend([d, -d]);
    }
    if rule == BoundaryRule::Periodic {
        for d in [nx as isize - 1, nx as isize - 2] {
            offsets.extend([d, -d]);
        }
        for d in [(ny as isize - 1) * nx as isize, (ny as isize - 2) * nx as isize] {
            offsets.extend([d, -d]);
        }
    }
    let jacobian = |pi: &[f64]| -> Result<BandedMatrix> {
        let rho = densities(law, pi)?;
        let mut m = BandedMatrix::new(n, &offsets);
        let eps = law.epsilon();
        for u in 0..n {
            m.add(u, u, 1.0 / (eps * law.dp1(rho[u].max(1e-10))?));
            for (v, c) in nbrs(u) {
                m.add(u, v, c);
            }
        }
        Ok(m)
    };
    let mut opts = cfg.newton;
    if let LinearSolve::Banded = opts.linear {
        opts.linear = LinearSolve::Krylov(KrylovOptions {
            exec,
            ..KrylovOptions::default()
        });
    }
    Ok(newton_solve(residual, jacobian, pi0, &opts)?.x)
}

fn node_field(grid: &Grid2D, v: &[f64]) -> Vec<f64> {
    let (nx, ny) = (grid.nx(), grid.ny());
    let mut out = Vec::with_capacity(nx * ny);
    for j in 0..ny as isize {
        for i in 0..nx as isize {
            out.push(v[grid.idx(i, j)]);
        }
    }
    out
}

fn initial_pi(law: &PressureLaw, grid: &Grid2D, s: &GridState2D) -> Result<Vec<f64>> {
    let eps = law.epsilon();
    node_field(grid, &s.rho).into_iter().map(|r| Ok(eps * law.p1(r)?)).collect()
}

pub fn check_density(law: &PressureLaw, grid: &Grid2D, s: &GridState2D) -> Result<()> {
    for (u, r) in node_field(grid, &s.rho).into_iter().enumerate() {
        if !(r > 0.0 && r < law.rho_star()) {
            return Err(Error::DensityBound {
                node: u,
                rho: r,
                time: s.time,
            });
        }
    }
    Ok(())
}

fn with_nodes(grid: &Grid2D, prev: &GridState2D, rho: &[f64], q1: &[f64], q2: &[f64], dt: f64, rule: BoundaryRule) -> GridState2D {
    let mut out = GridState2D {
        rho: prev.rho.clone(),
        q1: prev.q1.clone(),
        q2: prev.q2.clone(),
        time: prev.time + dt,
        step: prev.step + 1,
    };
    let nx = grid.nx();
    for u in 0..rho.len() {
        let k = grid.idx((u % nx) as isize, (u / nx) as isize);
        out.rho[k] = rho[u];
        out.q1[k] = q1[u];
        out.q2[k] = q2[u];
    }
    out.fill_ghosts(grid, rule);
    out
}

// Explicit flux divergence of component `c` at node `u`.
fn flux_divergence(grid: &Grid2D, fl: &FluxSet2D, c: usize, u: usize) -> f64 {
    let nx = grid.nx();
    let (i, j) = ((u % nx) as isize, (u / nx) as isize);
    let k = grid.idx(i, j);
    (fl.fx[c][k] - fl.fx[c][grid.idx(i - 1, j)]) / grid.x.dx + (fl.gy[c][k] - fl.gy[c][grid.idx(i, j - 1)]) / grid.y.dx
}

/// One step of the direct scheme.
pub fn direct_step(law: &PressureLaw, grid: &Grid2D, s: &GridState2D, dt: f64, cfg: &SchemeConfig) -> Result<GridState2D> {
    let exec = cfg.exec;
    let fl = fluxes(law, grid, s, exec);
    let sys = assemble_direct_system(grid, s, &fl, dt, exec);
    let pi = solve_implicit_pressure(law, grid, &sys, initial_pi(law, grid, s)?, cfg)?;
    let rho = densities(law, &pi)?;
    let (nx, ny) = (grid.nx(), grid.ny());
    let rule = cfg.boundary;
    let (dx, dy) = (grid.x.dx, grid.y.dx);
    let q_old = [node_field(grid, &s.q1), node_field(grid, &s.q2)];
    let mut q = [vec![0.0; nx * ny], vec![0.0; nx * ny]];
    for c in 0..2 {
        let qc = &q_old[c];
        par::fill(&mut q[c], exec, |u| {
            let (i, j) = ((u % nx) as isize, (u / nx) as isize);
            let grad = if c == 0 {
                (pi[(j as usize) * nx + closed(i + 1, nx, rule)] - pi[(j as usize) * nx + closed(i - 1, nx, rule)]) / (2.0 * dx)
            } else {
                (pi[closed(j + 1, ny, rule) * nx + i as usize] - pi[closed(j - 1, ny, rule) * nx + i as usize]) / (2.0 * dy)
            };
            qc[u] - dt * flux_divergence(grid, &fl, c, u) - dt * grad
        });
    }
    let out = with_nodes(grid, s, &rho, &q[0], &q[1], dt, rule);
    check_density(law, grid, &out)?;
    Ok(out)
}

/// Dirichlet Poisson problem `lap_h u = f` on the interior nodes with
/// `u = g` on the boundary nodes. Ghost values beyond the boundary use the
/// odd reflection `u_{-k} = 2 g_0 - u_k`.
pub fn solve_poisson_dirichlet(
    grid: &Grid2D,
    f: &[f64],
    g: &[f64],
    wide: bool,
    exec: par::Execution,
) -> Result<Vec<f64>> {
    let (nx, ny) = (grid.nx(), grid.ny());
    let (ix, iy) = (nx - 2, ny - 2);
    let reach = if wide { 2isize } else { 1 };
    let sx = 1.0 / ((reach * reach) as f64 * grid.x.dx * grid.x.dx);
    let sy = 1.0 / ((reach * reach) as f64 * grid.y.dx * grid.y.dx);
    let unknown = |i: isize, j: isize| -> Option<usize> {
        if i >= 1 && i <= nx as isize - 2 && j >= 1 && j <= ny as isize - 2 {
            Some((j as usize - 1) * ix + i as usize - 1)
        } else {
            None
        }
    };
    // solve for u - shift so that constant boundary data is reproduced exactly
    let shift = g.first().copied().unwrap_or(0.0);
    let g: Vec<f64> = g.iter().map(|v| v - shift).collect();
    let n = ix * iy;
    let r = reach;
    let mut offsets = vec![0isize, r, -r, r * ix as isize, -r * ix as isize];
    offsets.extend([1, -1, ix as isize, -(ix as isize)]);
    let mut m = BandedMatrix::new(n, &offsets);
    let mut b = vec![0.0; n];
    for j in 1..ny as isize - 1 {
        for i in 1..nx as isize - 1 {
            let row = unknown(i, j).unwrap();
            let node = j as usize * nx + i as usize;
            b[row] = -f[node];
            m.add(row, row, 2.0 * (sx + sy));
            // negated Laplacian: -s * neighbour
            let mut couple = |ni: isize, nj: isize, s: f64, axis_x: bool| {
                let (lim, pos) = if axis_x { (nx as isize - 1, ni) } else { (ny as isize - 1, nj) };
                if pos >= 0 && pos <= lim {
                    match unknown(ni, nj) {
                        Some(col) => m.add(row, col, -s),
                        None => b[row] += s * g[nj as usize * nx + ni as usize],
                    }
                } else {
                    // reflect about the boundary node
                    let (edge, img) = if pos < 0 { (0, -pos) } else { (lim, 2 * lim - pos) };
                    let (ei, ej, ri, rj) = if axis_x { (edge, nj, img, nj) } else { (ni, edge, ni, img) };
                    b[row] += 2.0 * s * g[ej as usize * nx + ei as usize];
                    match unknown(ri, rj) {
                        Some(col) => m.add(row, col, s),
                        None => b[row] -= s * g[rj as usize * nx + ri as usize],
                    }
                }
            };
            couple(i + r, j, sx, true);
            couple(i - r, j, sx, true);
            couple(i, j + r, sy, false);
            couple(i, j - r, sy, false);
        }
    }
    let inner = solve_pcg(
        &m,
        &b,
        None,
        &KrylovOptions {
            exec,
            ..KrylovOptions::default()
        },
    )?;
    let mut out = g;
    for j in 1..ny - 1 {
        for i in 1..nx - 1 {
            out[j * nx + i] = inner[(j - 1) * ix + i - 1];
        }
    }
    out.iter_mut().for_each(|v| *v += shift);
    Ok(out)
}

// Centred gradient of a node field with odd reflection about boundary values.
fn gradient(grid: &Grid2D, v: &[f64], u: usize) -> [f64; 2] {
    let (nx, ny) = (grid.nx() as isize, grid.ny() as isize);
    let (i, j) = ((u as isize) % nx, (u as isize) / nx);
    let at = |i: isize, j: isize| -> f64 {
        let reflect = |k: isize, n: isize| -> (isize, isize) {
            if k < 0 {
                (0, -k)
            } else if k >= n {
                (n - 1, 2 * (n - 1) - k)
            } else {
                (k, k)
            }
        };
        let (ei, ri) = reflect(i, nx);
        let (ej, rj) = reflect(j, ny);
        let val = |a: isize, b: isize| v[(b * nx + a) as usize];
        if ei != ri {
            2.0 * val(ei, j) - val(ri, j)
        } else if ej != rj {
            2.0 * val(i, ej) - val(i, rj)
        } else {
            val(i, j)
        }
    };
    [
        (at(i + 1, j) - at(i - 1, j)) / (2.0 * grid.x.dx),
        (at(i, j + 1) - at(i, j - 1)) / (2.0 * grid.y.dx),
    ]
}

/// Gauge variables on the nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeState2D {
    pub a: [Vec<f64>; 2],
    pub phi: Vec<f64>,
    pub p: Vec<f64>,
}

impl GaugeState2D {
    /// `lap phi = -div q` with `phi = 0` on the boundary, then `a = q + grad phi`
    /// so that `q = a - grad phi` holds initially.
    pub fn new(grid: &Grid2D, s: &GridState2D, kind: SchemeKind, exec: par::Execution) -> Result<Self> {
        let (nx, ny) = (grid.nx(), grid.ny());
        let n = nx * ny;
        let q = [node_field(grid, &s.q1), node_field(grid, &s.q2)];
        let mut div = vec![0.0; n];
        for (u, d) in div.iter_mut().enumerate() {
            let (i, j) = ((u % nx) as isize, (u / nx) as isize);
            let at = |c: usize, i, j| if c == 0 { s.q1[grid.idx(i, j)] } else { s.q2[grid.idx(i, j)] };
            *d = -((at(0, i + 1, j) - at(0, i - 1, j)) / (2.0 * grid.x.dx) + (at(1, i, j + 1) - at(1, i, j - 1)) / (2.0 * grid.y.dx));
        }
        let phi = solve_poisson_dirichlet(grid, &div, &vec![0.0; n], kind == SchemeKind::Gauge2, exec)?;
        let mut a = q.clone();
        for u in 0..n {
            let g = gradient(grid, &phi, u);
            a[0][u] += g[0];
            a[1][u] += g[1];
        }
        Ok(GaugeState2D {
            a,
            phi,
            p: vec![0.0; n],
        })
    }
}

/// One step of a gauge scheme.
pub fn gauge_step(
    law: &PressureLaw,
    grid: &Grid2D,
    s: &GridState2D,
    gauge: &GaugeState2D,
    dt: f64,
    kind: SchemeKind,
    cfg: &SchemeConfig,
) -> Result<(GridState2D, GaugeState2D)> {
    if !kind.is_gauge() {
        return Err(Error::InvalidArgument("gauge_step needs a gauge scheme".into()));
    }
    if cfg.boundary != BoundaryRule::Copy {
        return Err(Error::Config("gauge schemes need copy boundaries".into()));
    }
    let exec = cfg.exec;
    let wide = kind == SchemeKind::Gauge2;
    let (nx, ny) = (grid.nx(), grid.ny());
    let n = nx * ny;
    let fl = fluxes(law, grid, s, exec);
    let sys = assemble_direct_system(grid, s, &fl, dt, exec);
    let pi = solve_implicit_pressure(law, grid, &sys, initial_pi(law, grid, s)?, cfg)?;
    let rho = densities(law, &pi)?;

    let mut f_phi = vec![0.0; n];
    par::fill(&mut f_phi, exec, |u| {
        let (i, j) = ((u % nx) as isize, (u / nx) as isize);
        (rho[u] - s.rho[grid.idx(i, j)]) / dt - density_viscosity(grid, s, &fl, i, j)
    });
    let phi = solve_poisson_dirichlet(grid, &f_phi, &vec![0.0; n], wide, exec)?;

    let mut f_p = vec![0.0; n];
    par::fill(&mut f_p, exec, |u| {
        let (i, j) = ((u % nx) as isize, (u / nx) as isize);
        -0.5 * flux_second_differences(grid, &fl, i, j)
    });
    // boundary values: eps p1(rho^{n+1}) - (phi^{n+1} - phi^n)/dt, with phi = 0 there
    let mut g_p = vec![0.0; n];
    for u in 0..n {
        let (i, j) = (u % nx, u / nx);
        if i == 0 || j == 0 || i == nx - 1 || j == ny - 1 {
            g_p[u] = pi[u] - (phi[u] - gauge.phi[u]) / dt;
        }
    }
    let p = solve_poisson_dirichlet(grid, &f_p, &g_p, wide, exec)?;

    let mut a = [vec![0.0; n], vec![0.0; n]];
    for c in 0..2 {
        let prev = &gauge.a[c];
        par::fill(&mut a[c], exec, |u| prev[u] - dt * flux_divergence(grid, &fl, c, u) - dt * gradient(grid, &p, u)[c]);
    }
    let mut q = [vec![0.0; n], vec![0.0; n]];
    for c in 0..2 {
        let ac = &a[c];
        par::fill(&mut q[c], exec, |u| ac[u] - gradient(grid, &phi, u)[c]);
    }
    let out = with_nodes(grid, s, &rho, &q[0], &q[1], dt, cfg.boundary);
    check_density(law, grid, &out)?;
    Ok((out, GaugeState2D { a, phi, p }))
}

/// Node values of a ghosted field.
pub fn interior(grid: &Grid2D, v: &[f64]) -> Vec<f64> {
    node_field(grid, v)
}

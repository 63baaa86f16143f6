//! Uniform node-centred grids, ghost layers and field dumps.
//!
//! Nodes sit at `x_j = b + j dx`, `j = 0..=M`, including both boundary
//! points. Every stored field carries [`GHOST`] extra layers on each side.

use std::io::Write;

use crate::error::{Error, Result};

/// Ghost layers on each side; the widest stencil reaches `j +- 2`.
pub const GHOST: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundaryRule {
    /// Ghost values copy the nearest boundary node.
    #[default]
    Copy,
    /// The node sequence `0..=M` repeats with period `M + 1`.
    Periodic,
}

impl std::str::FromStr for BoundaryRule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "copy" => Ok(BoundaryRule::Copy),
            "periodic" => Ok(BoundaryRule::Periodic),
            _ => Err(Error::Config(format!("unknown boundary rule '{s}'"))),
        }
    }
}

impl std::fmt::Display for BoundaryRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BoundaryRule::Copy => "copy",
            BoundaryRule::Periodic => "periodic",
        })
    }
}

fn intervals_for(len: f64, dx: f64) -> Result<usize> {
    if !(len > 0.0 && dx > 0.0 && dx.is_finite()) {
        return Err(Error::InvalidGrid(format!(
            "need a positive domain length and spacing (length {len}, dx {dx})"
        )));
    }
    let m = (len / dx).round();
    if m < 2.0 || ((m * dx - len).abs() > 1e-9 * len) {
        return Err(Error::InvalidGrid(format!(
            "spacing {dx} does not divide the domain length {len} into at least two intervals"
        )));
    }
    Ok(m as usize)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    pub b: f64,
    pub c: f64,
    /// Number of intervals `M`; there are `M + 1` nodes.
    pub m: usize,
    pub dx: f64,
}

impl Grid1D {
    pub fn new(b: f64, c: f64, dx: f64) -> Result<Self> {
        let m = intervals_for(c - b, dx)?;
        Ok(Self::with_intervals(b, c, m))
    }

    pub fn with_intervals(b: f64, c: f64, m: usize) -> Self {
        Grid1D {
            b,
            c,
            m,
            dx: (c - b) / m as f64,
        }
    }

    pub fn nodes(&self) -> usize {
        self.m + 1
    }

    pub fn len_ghosted(&self) -> usize {
        self.nodes() + 2 * GHOST
    }

    /// Coordinate of node `j`.
    pub fn x(&self, j: usize) -> f64 {
        self.b + (self.c - self.b) * j as f64 / self.m as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid2D {
    pub x: Grid1D,
    pub y: Grid1D,
}

impl Grid2D {
    pub fn new(x: Grid1D, y: Grid1D) -> Self {
        Grid2D { x, y }
    }

    /// Unit square with equal spacing in both directions.
    pub fn unit_square(h: f64) -> Result<Self> {
        Ok(Grid2D {
            x: Grid1D::new(0.0, 1.0, h)?,
            y: Grid1D::new(0.0, 1.0, h)?,
        })
    }

    pub fn nx(&self) -> usize {
        self.x.nodes()
    }
    pub fn ny(&self) -> usize {
        self.y.nodes()
    }
    /// Row length including ghosts.
    pub fn stride(&self) -> usize {
        self.x.len_ghosted()
    }
    pub fn len_ghosted(&self) -> usize {
        self.x.len_ghosted() * self.y.len_ghosted()
    }

    /// Storage index of node `(i, j)`; ghost nodes use offsets in `-2..=M+2`.
    #[inline]
    pub fn idx(&self, i: isize, j: isize) -> usize {
        (j + GHOST as isize) as usize * self.stride() + (i + GHOST as isize) as usize
    }
}

fn fill_ghosts_1d(v: &mut [f64], nodes: usize, rule: BoundaryRule) {
    let g = GHOST;
    for k in 0..g {
        let (left, right) = match rule {
            BoundaryRule::Copy => (g, g + nodes - 1),
            BoundaryRule::Periodic => (g + nodes - g + k, g + k),
        };
        v[k] = v[left];
        v[g + nodes + k] = v[right];
    }
}

/// Density and momentum on a 1D grid, ghosts included.
#[derive(Debug, Clone, PartialEq)]
pub struct GridState1D {
    pub rho: Vec<f64>,
    pub q: Vec<f64>,
    pub time: f64,
    pub step: usize,
}

impl GridState1D {
    pub fn zeros(grid: &Grid1D) -> Self {
        GridState1D {
            rho: vec![0.0; grid.len_ghosted()],
            q: vec![0.0; grid.len_ghosted()],
            time: 0.0,
            step: 0,
        }
    }

    /// State with node values `f(x_j) = (rho, q)`.
    pub fn from_fn(grid: &Grid1D, rule: BoundaryRule, f: impl Fn(f64) -> (f64, f64)) -> Self {
        let mut s = Self::zeros(grid);
        for j in 0..grid.nodes() {
            let (r, q) = f(grid.x(j));
            s.rho[j + GHOST] = r;
            s.q[j + GHOST] = q;
        }
        s.fill_ghosts(rule);
        s
    }

    pub fn nodes(&self) -> usize {
        self.rho.len() - 2 * GHOST
    }

    pub fn rho_interior(&self) -> &[f64] {
        &self.rho[GHOST..self.rho.len() - GHOST]
    }

    pub fn q_interior(&self) -> &[f64] {
        &self.q[GHOST..self.q.len() - GHOST]
    }

    pub fn fill_ghosts(&mut self, rule: BoundaryRule) {
        let n = self.nodes();
        fill_ghosts_1d(&mut self.rho, n, rule);
        fill_ghosts_1d(&mut self.q, n, rule);
    }

    /// `(c - b)/(M + 1) * sum_j rho_j` over the nodes.
    pub fn total_mass(&self, grid: &Grid1D) -> f64 {
        let n = self.nodes() as f64;
        (grid.c - grid.b) / n * self.rho_interior().iter().sum::<f64>()
    }

    pub fn max_rho(&self) -> f64 {
        self.rho_interior().iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v))
    }

    pub fn min_rho(&self) -> f64 {
        self.rho_interior().iter().fold(f64::INFINITY, |m, &v| m.min(v))
    }

    /// `x,rho,q` rows with 17 significant digits.
    pub fn write_csv<W: Write>(&self, grid: &Grid1D, mut w: W) -> Result<()> {
        writeln!(w, "x,rho,q")?;
        for j in 0..grid.nodes() {
            writeln!(
                w,
                "{:.16e},{:.16e},{:.16e}",
                grid.x(j),
                self.rho[j + GHOST],
                self.q[j + GHOST]
            )?;
        }
        Ok(())
    }
}

/// Density and momentum on a 2D grid, ghosts included, x fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct GridState2D {
    pub rho: Vec<f64>,
    pub q1: Vec<f64>,
    pub q2: Vec<f64>,
    pub time: f64,
    pub step: usize,
}

/// Fill the ghost frame of a 2D field.
pub fn fill_ghosts_2d(grid: &Grid2D, v: &mut [f64], rule: BoundaryRule) {
    let (nx, ny) = (grid.nx() as isize, grid.ny() as isize);
    let g = GHOST as isize;
    let wrap = |k: isize, n: isize| -> isize {
        match rule {
            BoundaryRule::Copy => k.clamp(0, n - 1),
            BoundaryRule::Periodic => k.rem_euclid(n),
        }
    };
    for j in 0..ny {
        for i in (-g..0).chain(nx..nx + g) {
            v[grid.idx(i, j)] = v[grid.idx(wrap(i, nx), j)];
        }
    }
    for j in (-g..0).chain(ny..ny + g) {
        for i in -g..nx + g {
            v[grid.idx(i, j)] = v[grid.idx(i, wrap(j, ny))];
        }
    }
}

impl GridState2D {
    pub fn zeros(grid: &Grid2D) -> Self {
        let n = grid.len_ghosted();
        GridState2D {
            rho: vec![0.0; n],
            q1: vec![0.0; n],
            q2: vec![0.0; n],
            time: 0.0,
            step: 0,
        }
    }

    /// State with node values `f(x, y) = (rho, q1, q2)`.
    pub fn from_fn(grid: &Grid2D, rule: BoundaryRule, f: impl Fn(f64, f64) -> (f64, f64, f64)) -> Self {
        let mut s = Self::zeros(grid);
        for j in 0..grid.ny() {
            for i in 0..grid.nx() {
                let (r, a, b) = f(grid.x.x(i), grid.y.x(j));
                let k = grid.idx(i as isize, j as isize);
                s.rho[k] = r;
                s.q1[k] = a;
                s.q2[k] = b;
            }
        }
        s.fill_ghosts(grid, rule);
        s
    }

    pub fn fill_ghosts(&mut self, grid: &Grid2D, rule: BoundaryRule) {
        fill_ghosts_2d(grid, &mut self.rho, rule);
        fill_ghosts_2d(grid, &mut self.q1, rule);
        fill_ghosts_2d(grid, &mut self.q2, rule);
    }

    fn interior<'a>(&'a self, grid: &'a Grid2D, v: &'a [f64]) -> impl Iterator<Item = f64> + 'a {
        (0..grid.ny()).flat_map(move |j| (0..grid.nx()).map(move |i| v[grid.idx(i as isize, j as isize)]))
    }

    pub fn total_mass(&self, grid: &Grid2D) -> f64 {
        let area = (grid.x.c - grid.x.b) * (grid.y.c - grid.y.b);
        let n = (grid.nx() * grid.ny()) as f64;
        area / n * self.interior(grid, &self.rho).sum::<f64>()
    }

    pub fn max_rho(&self, grid: &Grid2D) -> f64 {
        self.interior(grid, &self.rho).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_rho(&self, grid: &Grid2D) -> f64 {
        self.interior(grid, &self.rho).fold(f64::INFINITY, f64::min)
    }

    /// `x,y,rho,q1,q2` rows, row-major with x fastest.
    pub fn write_csv<W: Write>(&self, grid: &Grid2D, mut w: W) -> Result<()> {
        writeln!(w, "x,y,rho,q1,q2")?;
        for j in 0..grid.ny() {
            for i in 0..grid.nx() {
                let k = grid.idx(i as isize, j as isize);
                writeln!(
                    w,
                    "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                    grid.x.x(i),
                    grid.y.x(j),
                    self.rho[k],
                    self.q1[k],
                    self.q2[k]
                )?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn copy_and_periodic_ghosts() {
        let grid = Grid1D::with_intervals(0.0, 1.0, 2);
        let mut s = GridState1D::zeros(&grid);
        s.rho[2..5].copy_from_slice(&[1.0, 2.0, 3.0]);
        s.fill_ghosts(BoundaryRule::Copy);
        assert_eq!(s.rho, vec![1.0, 1.0, 1.0, 2.0, 3.0, 3.0, 3.0]);
        s.fill_ghosts(BoundaryRule::Periodic);
        assert_eq!(s.rho, vec![2.0, 3.0, 1.0, 2.0, 3.0, 1.0, 2.0]);
    }

    #[test]
    fn uniform_mass() {
        for m in [4, 17, 200] {
            let grid = Grid1D::with_intervals(0.0, 1.0, m);
            let s = GridState1D::from_fn(&grid, BoundaryRule::Copy, |_| (0.7, 0.0));
            assert!((s.total_mass(&grid) - 0.7).abs() < 1e-14);
        }
    }

    #[test]
    fn grid_spacing_checked() {
        assert!(Grid1D::new(0.0, 1.0, 0.3).is_err());
        let g = Grid1D::new(0.0, 1.0, 0.005).unwrap();
        assert_eq!(g.m, 200);
        assert_eq!(g.x(100), 0.5);
    }

    #[test]
    fn ghosts_2d() {
        let grid = Grid2D::unit_square(0.25).unwrap();
        let s = GridState2D::from_fn(&grid, BoundaryRule::Copy, |x, y| (x + 10.0 * y, 0.0, 0.0));
        assert_eq!(s.rho[grid.idx(-2, -1)], s.rho[grid.idx(0, 0)]);
        assert_eq!(s.rho[grid.idx(6, 2)], s.rho[grid.idx(4, 2)]);
        let p = GridState2D::from_fn(&grid, BoundaryRule::Periodic, |x, y| (x + 10.0 * y, 0.0, 0.0));
        assert_eq!(p.rho[grid.idx(-1, 0)], p.rho[grid.idx(4, 0)]);
        assert_eq!(p.rho[grid.idx(1, 5)], p.rho[grid.idx(1, 0)]);
    }
}

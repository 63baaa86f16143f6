//! Exact Riemann solutions used as reference data.
//!
//! * [`solve_riemann_eps`]: entropy solution for a fixed `eps > 0`.
//! * [`limit_riemann`]: closed-form `eps -> 0` solutions, where congested
//!   states carry a pressure `pbar` and may propagate at infinite speed.
//! * [`ClusterCollision`]: velocity and pressure after two congested
//!   clusters collide.

mod cluster;
mod compose;
pub mod curves;
mod eps;
mod limit;

pub use cluster::ClusterCollision;
pub use compose::{compose_riemann, interaction_time, RiemannProblem};
pub use curves::Branch;
pub use eps::solve_riemann_eps;
pub use limit::limit_riemann;

use crate::error::{Error, Result};
use crate::numerics::find_root_bracketed;
use crate::pressure::PressureLaw;

/// A constant state `(rho, q)` with the congestion pressure `pbar` of the
/// limit system (zero unless `rho` equals `rho_star`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiemannState {
    pub rho: f64,
    pub q: f64,
    pub pbar: f64,
}

impl RiemannState {
    pub fn new(rho: f64, q: f64) -> Self {
        RiemannState { rho, q, pbar: 0.0 }
    }

    pub fn congested(rho_star: f64, q: f64, pbar: f64) -> Self {
        RiemannState { rho: rho_star, q, pbar }
    }

    pub const VACUUM: RiemannState = RiemannState {
        rho: 0.0,
        q: 0.0,
        pbar: 0.0,
    };

    pub fn velocity(&self) -> f64 {
        if self.rho > 0.0 {
            self.q / self.rho
        } else {
            0.0
        }
    }

    fn mirrored(self) -> Self {
        RiemannState { q: -self.q, ..self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WaveKind {
    Shock,
    Rarefaction,
    Contact,
    /// Release of the congestion pressure at infinite speed.
    Declustering,
    /// Vacuum region between two waves.
    Vacuum,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Wave {
    pub kind: WaveKind,
    pub family: Option<Branch>,
    /// Discontinuities have `speed_lo == speed_hi`; fans span the interval.
    pub speed_lo: f64,
    pub speed_hi: f64,
    pub left: RiemannState,
    pub right: RiemannState,
}

impl Wave {
    fn jump(kind: WaveKind, speed: f64, left: RiemannState, right: RiemannState) -> Self {
        Wave {
            kind,
            family: None,
            speed_lo: speed,
            speed_hi: speed,
            left,
            right,
        }
    }

    fn mirrored(self) -> Self {
        Wave {
            kind: self.kind,
            family: self.family.map(|b| match b {
                Branch::Minus => Branch::Plus,
                Branch::Plus => Branch::Minus,
            }),
            speed_lo: -self.speed_hi,
            speed_hi: -self.speed_lo,
            left: self.right.mirrored(),
            right: self.left.mirrored(),
        }
    }
}

/// Self-similar solution of one Riemann problem, waves ordered by speed.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveStructure {
    pub left: RiemannState,
    pub right: RiemannState,
    pub waves: Vec<Wave>,
    pub intermediate: Vec<RiemannState>,
    law: Option<PressureLaw>,
}

impl WaveStructure {
    fn mirrored(self) -> Self {
        let mut waves: Vec<Wave> = self.waves.into_iter().map(Wave::mirrored).collect();
        waves.reverse();
        let mut intermediate: Vec<RiemannState> = self.intermediate.into_iter().map(RiemannState::mirrored).collect();
        intermediate.reverse();
        WaveStructure {
            left: self.right.mirrored(),
            right: self.left.mirrored(),
            waves,
            intermediate,
            law: self.law,
        }
    }

    /// Smallest and largest wave speed; `None` without waves.
    pub fn speed_range(&self) -> Option<(f64, f64)> {
        let lo = self.waves.first()?.speed_lo;
        let hi = self.waves.last()?.speed_hi;
        Some((lo, hi))
    }

    /// State at similarity coordinate `xi = (x - x0) / t`.
    ///
    /// Exactly on a discontinuity the right state is returned.
    pub fn sample(&self, xi: f64) -> Result<RiemannState> {
        let mut state = self.left;
        for w in &self.waves {
            if xi < w.speed_lo {
                return Ok(state);
            }
            if w.kind == WaveKind::Rarefaction && xi < w.speed_hi {
                return self.sample_fan(w, xi);
            }
            if w.kind == WaveKind::Vacuum && xi < w.speed_hi {
                return Ok(RiemannState::VACUUM);
            }
            state = w.right;
        }
        Ok(state)
    }

    fn sample_fan(&self, w: &Wave, xi: f64) -> Result<RiemannState> {
        let law = self
            .law
            .ok_or_else(|| Error::InvalidArgument("rarefaction without a pressure law".into()))?;
        let branch = w.family.unwrap_or(Branch::Minus);
        let anchor = match branch {
            Branch::Minus => w.left,
            Branch::Plus => w.right,
        };
        let (lo, hi) = if w.left.rho < w.right.rho {
            (w.left.rho, w.right.rho)
        } else {
            (w.right.rho, w.left.rho)
        };
        let speed = |rho: f64| -> f64 {
            match curves::integral_velocity(&law, anchor.rho, anchor.q, rho, branch) {
                Ok(u) => curves::characteristic_speed(&law, rho, u, branch) - xi,
                Err(_) => f64::NAN,
            }
        };
        let rho = find_root_bracketed(speed, lo, hi)?;
        let u = curves::integral_velocity(&law, anchor.rho, anchor.q, rho, branch)?;
        Ok(RiemannState::new(rho, rho * u))
    }
}

/// Density and momentum of `ws` at the nodes `xs`, centred at `x0`, time `t`.
pub fn sample_profile(ws: &WaveStructure, x0: f64, t: f64, xs: &[f64]) -> Result<Vec<RiemannState>> {
    if t <= 0.0 {
        return Ok(xs
            .iter()
            .map(|&x| if x <= x0 { ws.left } else { ws.right })
            .collect());
    }
    xs.iter().map(|&x| ws.sample((x - x0) / t)).collect()
}

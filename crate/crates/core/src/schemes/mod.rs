//! Time-stepping schemes in one and two space dimensions.

pub mod one_d;
pub mod two_d;

use crate::error::{Error, Result};
use crate::mesh::BoundaryRule;
use crate::numerics::NewtonOptions;
use crate::par::Execution;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeKind {
    Direct,
    /// Gauge scheme with the compact `j +- 1` Laplacian for `phi`.
    Gauge1,
    /// Gauge scheme with the wide `j +- 2` Laplacian for `phi`.
    Gauge2,
}

impl SchemeKind {
    pub fn is_gauge(self) -> bool {
        !matches!(self, SchemeKind::Direct)
    }

    pub fn name(self) -> &'static str {
        match self {
            SchemeKind::Direct => "direct",
            SchemeKind::Gauge1 => "gauge1",
            SchemeKind::Gauge2 => "gauge2",
        }
    }
}

impl std::fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for SchemeKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "direct" => Ok(SchemeKind::Direct),
            "gauge1" | "gauge-1" => Ok(SchemeKind::Gauge1),
            "gauge2" | "gauge-2" => Ok(SchemeKind::Gauge2),
            _ => Err(Error::Config(format!("unknown scheme '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeConfig {
    pub boundary: BoundaryRule,
    pub newton: NewtonOptions,
    /// Extra fixed-point sweeps refreshing the convective flux (1D direct only).
    pub picard_iters: usize,
    pub exec: Execution,
}

impl Default for SchemeConfig {
    fn default() -> Self {
        SchemeConfig {
            boundary: BoundaryRule::Copy,
            newton: NewtonOptions {
                residual_tol: 1e-13,
                lower_bound: Some(0.0),
                ..NewtonOptions::default()
            },
            picard_iters: 0,
            exec: Execution::default(),
        }
    }
}

/// Velocity `q / rho`, zero in vacuum.
#[inline]
pub(crate) fn velocity(rho: f64, q: f64) -> f64 {
    if rho > 0.0 {
        q / rho
    } else {
        0.0
    }
}

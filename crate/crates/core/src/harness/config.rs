//! Run configuration and its flat `key = value` file format.
//!
//! ```text
//! # P1 at the Table-1 mesh
//! case = P1
//! scheme = gauge1
//! epsilon = 1e-4
//! dx = 1/200
//! dt = 1/1000
//! t_end = 0.025
//! snapshots = 0.0125, 0.025
//! ```
//!
//! Numbers may be written as fractions `a/b`. Blank lines and `#` comments
//! are ignored. Keys: `case`, `scheme`, `picard`, `epsilon`, `gamma`,
//! `rho_star`, `dx`, `dt`, `courant_sigma`, `t_end`, `snapshots`,
//! `boundary`, `out`, `splitting` (`standard` or `none`), and for the
//! custom case `left`, `right` (`rho,q`) and `jump`.

use std::path::{Path, PathBuf};

use super::cases::{CaseId, Piecewise};
use crate::error::{Error, Result};
use crate::mesh::BoundaryRule;
use crate::pressure::{PressureLaw, Splitting};
use crate::riemann::RiemannState;
use crate::schemes::SchemeKind;

/// Time-step selection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TimeStep {
    Fixed(f64),
    /// `dt = sigma * dx / max_lambda`, capped at `dt_max`.
    Adaptive { sigma: f64, dt_max: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub case: CaseId,
    pub scheme: SchemeKind,
    pub picard_iters: usize,
    pub epsilon: f64,
    pub gamma: f64,
    pub rho_star: f64,
    pub dx: f64,
    pub time_step: TimeStep,
    pub t_end: f64,
    pub snapshot_times: Vec<f64>,
    pub boundary: BoundaryRule,
    pub output_dir: Option<PathBuf>,
    pub splitting: Splitting,
    pub custom: Option<Piecewise>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            case: CaseId::P1,
            scheme: SchemeKind::Direct,
            picard_iters: 0,
            epsilon: 1e-4,
            gamma: 2.0,
            rho_star: 1.0,
            dx: 5e-3,
            time_step: TimeStep::Fixed(5e-4),
            t_end: 0.05,
            snapshot_times: Vec::new(),
            boundary: BoundaryRule::Copy,
            output_dir: None,
            splitting: Splitting::Standard,
            custom: None,
        }
    }
}

/// Parses a float, accepting `a/b`.
pub fn parse_number(s: &str) -> Result<f64> {
    let s = s.trim();
    let bad = || Error::Config(format!("cannot parse number '{s}'"));
    match s.split_once('/') {
        Some((a, b)) => {
            let a: f64 = a.trim().parse().map_err(|_| bad())?;
            let b: f64 = b.trim().parse().map_err(|_| bad())?;
            Ok(a / b)
        }
        None => s.parse().map_err(|_| bad()),
    }
}

pub fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',').filter(|t| !t.trim().is_empty()).map(parse_number).collect()
}

fn parse_state(s: &str) -> Result<RiemannState> {
    let v = parse_list(s)?;
    match v.as_slice() {
        [rho, q] => Ok(RiemannState::new(*rho, *q)),
        _ => Err(Error::Config(format!("state must be 'rho,q', got '{s}'"))),
    }
}

impl RunConfig {
    /// Sets one field from its textual form.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key.trim().replace('-', "_").as_str() {
            "case" => self.case = value.parse()?,
            "scheme" => self.scheme = value.parse()?,
            "picard" | "picard_iters" => {
                self.picard_iters = value
                    .parse()
                    .map_err(|_| Error::Config(format!("picard must be a count, got '{value}'")))?
            }
            "epsilon" | "eps" => self.epsilon = parse_number(value)?,
            "gamma" => self.gamma = parse_number(value)?,
            "rho_star" => self.rho_star = parse_number(value)?,
            "dx" => self.dx = parse_number(value)?,
            "dt" => {
                let dt = parse_number(value)?;
                self.time_step = match self.time_step {
                    TimeStep::Adaptive { sigma, .. } => TimeStep::Adaptive { sigma, dt_max: dt },
                    TimeStep::Fixed(_) => TimeStep::Fixed(dt),
                }
            }
            "courant_sigma" | "sigma" => {
                let sigma = parse_number(value)?;
                let dt_max = match self.time_step {
                    TimeStep::Fixed(dt) | TimeStep::Adaptive { dt_max: dt, .. } => dt,
                };
                self.time_step = TimeStep::Adaptive { sigma, dt_max };
            }
            "t_end" | "t" => self.t_end = parse_number(value)?,
            "snapshots" | "snapshot_times" => self.snapshot_times = parse_list(value)?,
            "boundary" => self.boundary = value.parse()?,
            "out" | "output_dir" => self.output_dir = Some(PathBuf::from(value)),
            "splitting" => {
                self.splitting = match value.to_ascii_lowercase().as_str() {
                    "standard" | "split" => Splitting::Standard,
                    "none" | "off" => Splitting::None,
                    _ => return Err(Error::Config(format!("unknown splitting '{value}'"))),
                }
            }
            "left" | "right" | "jump" => self.set_custom(key.trim(), value)?,
            other => return Err(Error::Config(format!("unknown key '{other}'"))),
        }
        Ok(())
    }

    fn set_custom(&mut self, key: &str, value: &str) -> Result<()> {
        let p = self.custom.get_or_insert_with(|| Piecewise {
            breaks: vec![0.5],
            states: vec![RiemannState::new(0.5, 0.0); 2],
        });
        match key {
            "left" => p.states[0] = parse_state(value)?,
            "right" => p.states[1] = parse_state(value)?,
            _ => p.breaks[0] = parse_number(value)?,
        }
        Ok(())
    }

    /// Applies `key = value` lines.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected 'key = value'", n + 1)))?;
            self.set(k, v).map_err(|e| Error::Config(format!("line {}: {e}", n + 1)))?;
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let mut cfg = RunConfig::default();
        cfg.apply_text(&std::fs::read_to_string(path)?)?;
        Ok(cfg)
    }

    pub fn law(&self) -> Result<PressureLaw> {
        Ok(PressureLaw::new(self.gamma, self.rho_star, self.epsilon)?.with_splitting(self.splitting))
    }

    /// Nominal step size; the adaptive cap in adaptive mode.
    pub fn nominal_dt(&self) -> f64 {
        match self.time_step {
            TimeStep::Fixed(dt) => dt,
            TimeStep::Adaptive { dt_max, .. } => dt_max,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(Error::Config(format!("t_end must be positive, got {}", self.t_end)));
        }
        if let Some(t) = self.snapshot_times.iter().find(|&&t| !(0.0..=self.t_end).contains(&t)) {
            return Err(Error::Config(format!("snapshot time {t} outside [0, {}]", self.t_end)));
        }
        match self.time_step {
            TimeStep::Fixed(dt) if !(dt > 0.0 && dt.is_finite()) => {
                return Err(Error::Config(format!("dt must be positive, got {dt}")))
            }
            TimeStep::Adaptive { sigma, dt_max } if !(sigma > 0.0 && dt_max > 0.0) => {
                return Err(Error::Config(format!(
                    "adaptive stepping needs sigma > 0 and dt > 0, got {sigma}, {dt_max}"
                )))
            }
            _ => {}
        }
        if self.scheme.is_gauge() && self.boundary == BoundaryRule::Periodic {
            return Err(Error::Config("gauge schemes need copy boundaries".into()));
        }
        if self.picard_iters > 0 && (self.scheme != SchemeKind::Direct || self.case.is_2d()) {
            return Err(Error::Config("picard iterations apply to the 1D direct scheme only".into()));
        }
        self.law()?;
        Ok(())
    }
}

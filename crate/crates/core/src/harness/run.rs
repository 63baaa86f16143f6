//! Time integration of a configured case, with snapshots and error reports.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use super::cases::{build_case, Case};
use super::config::{RunConfig, TimeStep};
use crate::error::{Error, Result};
use crate::mesh::{Grid1D, Grid2D, GridState1D, GridState2D};
use crate::metrics::{l1_relative_error_multi, tv_relative_error_multi};
use crate::par::Execution;
use crate::pressure::PressureLaw;
use crate::schemes::{one_d, two_d, SchemeConfig, SchemeKind};

/// A solution field together with its grid.
#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    OneD { grid: Grid1D, state: GridState1D },
    TwoD { grid: Grid2D, state: GridState2D },
}

impl Field {
    pub fn time(&self) -> f64 {
        match self {
            Field::OneD { state, .. } => state.time,
            Field::TwoD { state, .. } => state.time,
        }
    }

    pub fn step(&self) -> usize {
        match self {
            Field::OneD { state, .. } => state.step,
            Field::TwoD { state, .. } => state.step,
        }
    }

    pub fn total_mass(&self) -> f64 {
        match self {
            Field::OneD { grid, state } => state.total_mass(grid),
            Field::TwoD { grid, state } => state.total_mass(grid),
        }
    }

    pub fn max_rho(&self) -> f64 {
        match self {
            Field::OneD { state, .. } => state.max_rho(),
            Field::TwoD { grid, state } => state.max_rho(grid),
        }
    }

    pub fn min_rho(&self) -> f64 {
        match self {
            Field::OneD { state, .. } => state.min_rho(),
            Field::TwoD { grid, state } => state.min_rho(grid),
        }
    }

    /// Interior node densities, x fastest in 2D.
    pub fn rho_nodes(&self) -> Vec<f64> {
        match self {
            Field::OneD { state, .. } => state.rho_interior().to_vec(),
            Field::TwoD { grid, state } => two_d::interior(grid, &state.rho),
        }
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        match self {
            Field::OneD { grid, state } => state.write_csv(grid, w),
            Field::TwoD { grid, state } => state.write_csv(grid, w),
        }
    }

    fn max_wave_speed(&self, law: &PressureLaw) -> f64 {
        match self {
            Field::OneD { state, .. } => one_d::max_wave_speed(law, state),
            Field::TwoD { grid, state } => two_d::max_wave_speed(law, grid, state),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRecord {
    pub step: usize,
    pub time: f64,
    pub dt: f64,
    /// Step size before shortening to land on a snapshot or `t_end`.
    pub dt_nominal: f64,
    pub max_lambda: f64,
    pub max_rho: f64,
    pub mass: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunLog {
    pub steps: Vec<StepRecord>,
}

impl RunLog {
    /// `(max lambda, max lambda * dt / dx)` over all steps.
    pub fn courant(&self, dx: f64) -> Result<(f64, f64)> {
        if self.steps.is_empty() {
            return Err(Error::InvalidArgument("empty run log".into()));
        }
        let lam = self.steps.iter().map(|s| s.max_lambda).fold(0.0, f64::max);
        let c = self
            .steps
            .iter()
            .map(|s| s.max_lambda * s.dt_nominal / dx)
            .fold(0.0, f64::max);
        Ok((lam, c))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    pub case: String,
    pub scheme: String,
    pub epsilon: f64,
    pub dx: f64,
    pub dt: f64,
    pub t: f64,
    pub e_l1: Option<f64>,
    pub g_tv: Option<f64>,
    pub max_lambda: f64,
    pub courant: f64,
    pub mass_drift: f64,
    pub max_rho: f64,
}

fn opt(v: Option<f64>) -> String {
    v.map_or(String::new(), |x| format!("{x:.16e}"))
}

impl ErrorReport {
    pub const CSV_HEADER: &'static str = "case,scheme,epsilon,dx,dt,t,e_l1,g_tv,max_lambda,courant,mass_drift,max_rho";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{:e},{:.16e},{:.16e},{:.16e},{},{},{:.16e},{:.16e},{:.16e},{:.16e}",
            self.case,
            self.scheme,
            self.epsilon,
            self.dx,
            self.dt,
            self.t,
            opt(self.e_l1),
            opt(self.g_tv),
            self.max_lambda,
            self.courant,
            self.mass_drift,
            self.max_rho
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub time: f64,
    pub field: Field,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub report: ErrorReport,
    pub snapshots: Vec<Snapshot>,
    pub final_field: Field,
    pub log: RunLog,
}

enum Stepper {
    OneD(Option<one_d::GaugeState1D>),
    TwoD(Option<two_d::GaugeState2D>),
}

fn advance(
    law: &PressureLaw,
    field: &Field,
    stepper: &mut Stepper,
    dt: f64,
    kind: SchemeKind,
    cfg: &SchemeConfig,
) -> Result<Field> {
    Ok(match (field, stepper) {
        (Field::OneD { grid, state }, Stepper::OneD(gauge)) => {
            let next = match gauge {
                Some(g) => {
                    let (s, g2) = one_d::gauge_step(law, grid, state, g, dt, kind, cfg)?;
                    *g = g2;
                    s
                }
                None => one_d::picard_step(law, grid, state, dt, cfg)?,
            };
            Field::OneD { grid: *grid, state: next }
        }
        (Field::TwoD { grid, state }, Stepper::TwoD(gauge)) => {
            let next = match gauge {
                Some(g) => {
                    let (s, g2) = two_d::gauge_step(law, grid, state, g, dt, kind, cfg)?;
                    *g = g2;
                    s
                }
                None => two_d::direct_step(law, grid, state, dt, cfg)?,
            };
            Field::TwoD { grid: *grid, state: next }
        }
        _ => unreachable!("stepper and field dimensions always match"),
    })
}

/// Initial field of a configuration.
pub fn initial_field(cfg: &RunConfig) -> Result<(Case, Field)> {
    let case = build_case(cfg.case, cfg.custom.as_ref())?;
    let field = if cfg.case.is_2d() {
        let grid = Grid2D::unit_square(cfg.dx)?;
        let state = case.initial_2d(&grid, cfg.boundary)?;
        Field::TwoD { grid, state }
    } else {
        let grid = Grid1D::new(0.0, 1.0, cfg.dx)?;
        let state = case.initial_1d(&grid, cfg.boundary)?;
        Field::OneD { grid, state }
    };
    Ok((case, field))
}

fn snapshot_name(cfg: &RunConfig, tag: &str, t: f64) -> String {
    format!("{}_{}_t{:.6}.csv", cfg.case, tag, t)
}

fn write_file(dir: &Path, name: &str, f: impl FnOnce(&mut BufWriter<File>) -> Result<()>) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let mut w = BufWriter::new(File::create(dir.join(name))?);
    f(&mut w)?;
    w.flush()?;
    Ok(())
}

/// Limit-solution profile on the nodes of a 1D field, if one exists at `t`.
pub fn reference_field(case: &Case, law: &PressureLaw, field: &Field, t: f64) -> Option<GridState1D> {
    let Field::OneD { grid, state } = field else {
        return None;
    };
    let xs: Vec<f64> = (0..grid.nodes()).map(|j| grid.x(j)).collect();
    let exact = case.reference(law, t, &xs, true).ok()?;
    let mut out = state.clone();
    for (j, s) in exact.iter().enumerate() {
        out.rho[j + crate::mesh::GHOST] = s.rho;
        out.q[j + crate::mesh::GHOST] = s.q;
    }
    Some(out)
}

fn record_snapshot(cfg: &RunConfig, case: &Case, law: &PressureLaw, field: &Field, t: f64, out: &mut Vec<Snapshot>) -> Result<()> {
    if let Some(dir) = &cfg.output_dir {
        write_file(dir, &snapshot_name(cfg, cfg.scheme.name(), t), |w| field.write_csv(w))?;
        if let (Some(exact), Field::OneD { grid, .. }) = (reference_field(case, law, field, t), field) {
            write_file(dir, &snapshot_name(cfg, "exact", t), |w| exact.write_csv(grid, w))?;
        }
    }
    out.push(Snapshot { time: t, field: field.clone() });
    Ok(())
}

/// Runs `cfg` to `t_end`.
pub fn run(cfg: &RunConfig) -> Result<RunOutput> {
    run_observed(cfg, Execution::default(), |_| Ok(()))
}

/// Runs `cfg`, calling `observe` on the initial field and after every step.
/// Snapshot files are written as soon as they are reached, so a failed run
/// leaves the snapshots taken before the failure on disk.
pub fn run_observed(cfg: &RunConfig, exec: Execution, mut observe: impl FnMut(&Field) -> Result<()>) -> Result<RunOutput> {
    cfg.validate()?;
    let law = cfg.law()?;
    let (case, mut field) = initial_field(cfg)?;
    let scheme_cfg = SchemeConfig {
        boundary: cfg.boundary,
        picard_iters: cfg.picard_iters,
        exec,
        ..SchemeConfig::default()
    };
    let mut stepper = match &field {
        Field::OneD { state, .. } => Stepper::OneD(cfg.scheme.is_gauge().then(|| one_d::GaugeState1D::new(state))),
        Field::TwoD { grid, state } => Stepper::TwoD(if cfg.scheme.is_gauge() {
            Some(two_d::GaugeState2D::new(grid, state, cfg.scheme, exec)?)
        } else {
            None
        }),
    };

    let mut stops: Vec<f64> = cfg.snapshot_times.iter().copied().filter(|&t| t > 0.0 && t < cfg.t_end).collect();
    stops.push(cfg.t_end);
    stops.sort_by(f64::total_cmp);
    stops.dedup();

    let mut snapshots = Vec::new();
    if cfg.snapshot_times.iter().any(|&t| t == 0.0) {
        record_snapshot(cfg, &case, &law, &field, 0.0, &mut snapshots)?;
    }
    observe(&field)?;
    let mass0 = field.total_mass();
    let mut max_rho = field.max_rho();
    let mut log = RunLog::default();

    for &stop in &stops {
        loop {
            let t = field.time();
            let dt_nominal = match cfg.time_step {
                TimeStep::Fixed(dt) => dt,
                TimeStep::Adaptive { sigma, dt_max } => match &field {
                    Field::OneD { grid, state } => one_d::adaptive_dt(&law, state, sigma, grid.dx, dt_max),
                    Field::TwoD { grid, state } => two_d::adaptive_dt(&law, grid, state, sigma, dt_max),
                },
            };
            let remaining = stop - t;
            if remaining <= 1e-9 * dt_nominal {
                break;
            }
            let lands = remaining <= dt_nominal * (1.0 + 1e-9);
            let dt = if lands { remaining } else { dt_nominal };
            let max_lambda = field.max_wave_speed(&law);
            let step = field.step();
            let mut next = advance(&law, &field, &mut stepper, dt, cfg.scheme, &scheme_cfg).map_err(|e| Error::Step {
                step: step + 1,
                time: t + dt,
                source: Box::new(e),
            })?;
            if lands {
                match &mut next {
                    Field::OneD { state, .. } => state.time = stop,
                    Field::TwoD { state, .. } => state.time = stop,
                }
            }
            field = next;
            max_rho = max_rho.max(field.max_rho());
            log.steps.push(StepRecord {
                step: field.step(),
                time: field.time(),
                dt,
                dt_nominal,
                max_lambda,
                max_rho: field.max_rho(),
                mass: field.total_mass(),
            });
            observe(&field)?;
        }
        if cfg.snapshot_times.contains(&stop) {
            record_snapshot(cfg, &case, &law, &field, stop, &mut snapshots)?;
        }
    }

    let t = field.time();
    let (e_l1, g_tv) = match (&field, reference_field(&case, &law, &field, t)) {
        (Field::OneD { state, .. }, Some(exact)) => {
            let pairs: [(&[f64], &[f64]); 2] = [
                (state.rho_interior(), exact.rho_interior()),
                (state.q_interior(), exact.q_interior()),
            ];
            (l1_relative_error_multi(&pairs).ok(), tv_relative_error_multi(&pairs).ok())
        }
        _ => (None, None),
    };
    let dx = match &field {
        Field::OneD { grid, .. } => grid.dx,
        Field::TwoD { grid, .. } => grid.x.dx,
    };
    let (max_lambda, courant) = log.courant(dx).unwrap_or((0.0, 0.0));
    let report = ErrorReport {
        case: cfg.case.to_string(),
        scheme: cfg.scheme.to_string(),
        epsilon: cfg.epsilon,
        dx,
        dt: cfg.nominal_dt(),
        t,
        e_l1,
        g_tv,
        max_lambda,
        courant,
        mass_drift: (field.total_mass() - mass0).abs() / mass0.abs(),
        max_rho,
    };
    if let Some(dir) = &cfg.output_dir {
        write_file(dir, "report.csv", |w| {
            writeln!(w, "{}", ErrorReport::CSV_HEADER)?;
            writeln!(w, "{}", report.csv_row())?;
            Ok(())
        })?;
    }
    Ok(RunOutput {
        report,
        snapshots,
        final_field: field,
        log,
    })
}

//! Config-driven runner: named test cases, time integration with snapshot
//! output, error reports against the limit Riemann solutions, parameter
//! sweeps and the pressure-splitting ablation.

pub mod cases;
pub mod config;
pub mod run;
pub mod sweep;

pub use cases::{build_case, Case, CaseId, Piecewise};
pub use config::{RunConfig, TimeStep};
pub use run::{run, run_observed, ErrorReport, Field, RunLog, RunOutput, Snapshot};
pub use sweep::{sweep, write_table, SweepMode, SweepRow, SweepSpec};

use crate::error::Result;
use crate::metrics::total_variation;
use crate::pressure::Splitting;

/// Paired runs with and without the pressure splitting.
#[derive(Debug, Clone, PartialEq)]
pub struct Ablation {
    pub split: RunOutput,
    pub unsplit: RunOutput,
}

impl Ablation {
    /// `TV(rho)` at the final time, split then unsplit.
    pub fn density_tv(&self) -> (f64, f64) {
        (
            total_variation(&self.split.final_field.rho_nodes()),
            total_variation(&self.unsplit.final_field.rho_nodes()),
        )
    }
}

/// Runs `cfg` with the standard splitting and with `p0 = 0`. Output files go
/// to `split/` and `unsplit/` below the configured directory.
pub fn p0_ablation(cfg: &RunConfig) -> Result<Ablation> {
    let variant = |splitting: Splitting, sub: &str| {
        let mut c = cfg.clone();
        c.splitting = splitting;
        c.output_dir = cfg.output_dir.as_ref().map(|d| d.join(sub));
        run(&c)
    };
    Ok(Ablation {
        split: variant(Splitting::Standard, "split")?,
        unsplit: variant(Splitting::None, "unsplit")?,
    })
}

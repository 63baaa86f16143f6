//! Parameter sweeps producing convergence tables.

use std::io::Write;

use super::config::RunConfig;
use super::run::{run_observed, ErrorReport};
use crate::error::{Error, Result};
use crate::par::{self, Execution};

/// How the varying parameter lists are combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SweepMode {
    /// Row `k` takes the `k`-th value of every list; lists must have equal length.
    #[default]
    Zip,
    /// Cartesian product, last list fastest.
    Product,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    /// `(config key, values)` pairs, values in config-file syntax.
    pub varying: Vec<(String, Vec<String>)>,
    pub mode: SweepMode,
    pub fixed: RunConfig,
    /// Overrides `fixed.t_end` when set.
    pub report_time: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub params: Vec<(String, String)>,
    pub result: std::result::Result<ErrorReport, String>,
    /// Previous `e_l1` of the same scheme divided by this one.
    pub ratio_e: Option<f64>,
    pub ratio_g: Option<f64>,
}

impl SweepSpec {
    /// Parameter assignments, one per row.
    pub fn combinations(&self) -> Result<Vec<Vec<(String, String)>>> {
        if self.varying.is_empty() {
            return Err(Error::Config("sweep needs at least one varying parameter".into()));
        }
        if let Some((k, _)) = self.varying.iter().find(|(_, v)| v.is_empty()) {
            return Err(Error::Config(format!("sweep parameter '{k}' has no values")));
        }
        match self.mode {
            SweepMode::Zip => {
                let n = self.varying[0].1.len();
                if self.varying.iter().any(|(_, v)| v.len() != n) {
                    return Err(Error::Config("zipped sweep lists must have equal length".into()));
                }
                Ok((0..n)
                    .map(|i| self.varying.iter().map(|(k, v)| (k.clone(), v[i].clone())).collect())
                    .collect())
            }
            SweepMode::Product => {
                let mut rows: Vec<Vec<(String, String)>> = vec![Vec::new()];
                for (k, vals) in &self.varying {
                    rows = rows
                        .into_iter()
                        .flat_map(|r| {
                            vals.iter().map(move |v| {
                                let mut r = r.clone();
                                r.push((k.clone(), v.clone()));
                                r
                            })
                        })
                        .collect();
                }
                Ok(rows)
            }
        }
    }

    fn config_for(&self, params: &[(String, String)]) -> Result<RunConfig> {
        let mut cfg = self.fixed.clone();
        cfg.output_dir = None;
        if let Some(t) = self.report_time {
            cfg.t_end = t;
            cfg.snapshot_times.retain(|&s| s <= t);
        }
        for (k, v) in params {
            cfg.set(k, v)?;
        }
        Ok(cfg)
    }
}

fn ratio(prev: Option<f64>, cur: Option<f64>) -> Option<f64> {
    match (prev, cur) {
        (Some(p), Some(c)) if c > 0.0 => Some(p / c),
        _ => None,
    }
}

/// Runs every combination; a failing run becomes an error row.
pub fn sweep(spec: &SweepSpec, exec: Execution) -> Result<Vec<SweepRow>> {
    let combos = spec.combinations()?;
    let inner = match exec {
        Execution::Parallel => Execution::Sequential,
        Execution::Sequential => Execution::Sequential,
    };
    let results = par::map(&combos, exec, |params| {
        spec.config_for(params)
            .and_then(|cfg| run_observed(&cfg, inner, |_| Ok(())))
            .map(|out| out.report)
            .map_err(|e| e.to_string())
    });
    let mut rows: Vec<SweepRow> = Vec::with_capacity(combos.len());
    for (params, result) in combos.into_iter().zip(results) {
        let (mut ratio_e, mut ratio_g) = (None, None);
        if let Ok(cur) = &result {
            let prev = rows
                .iter()
                .rev()
                .find_map(|r| r.result.as_ref().ok().filter(|p| p.scheme == cur.scheme));
            if let Some(p) = prev {
                ratio_e = ratio(p.e_l1, cur.e_l1);
                ratio_g = ratio(p.g_tv, cur.g_tv);
            }
        }
        rows.push(SweepRow {
            params,
            result,
            ratio_e,
            ratio_g,
        });
    }
    Ok(rows)
}

fn cell(v: Option<f64>) -> String {
    v.map_or(String::new(), |x| format!("{x:.6e}"))
}

/// CSV table: parameter columns, the report columns, ratios and an error column.
pub fn write_table<W: Write>(rows: &[SweepRow], mut w: W) -> Result<()> {
    let Some(first) = rows.first() else {
        return Ok(());
    };
    let keys: Vec<&str> = first.params.iter().map(|(k, _)| k.as_str()).collect();
    let report_cols = ErrorReport::CSV_HEADER.split(',').count();
    writeln!(w, "{},{},ratio_e,ratio_g,error", keys.join(","), ErrorReport::CSV_HEADER)?;
    for r in rows {
        let params: Vec<&str> = r.params.iter().map(|(_, v)| v.as_str()).collect();
        let (report, err) = match &r.result {
            Ok(rep) => (rep.csv_row(), String::new()),
            Err(e) => (vec![""; report_cols].join(","), e.replace([',', '\n'], ";")),
        };
        writeln!(w, "{},{},{},{},{}", params.join(","), report, cell(r.ratio_e), cell(r.ratio_g), err)?;
    }
    Ok(())
}

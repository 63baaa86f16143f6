use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use congestion_core::harness::config::parse_number;
use congestion_core::harness::{
    build_case, p0_ablation, run, sweep, write_table, ErrorReport, RunConfig, SweepMode, SweepSpec,
};
use congestion_core::mesh::Grid1D;
use congestion_core::par::Execution;

/// Asymptotic-preserving solvers for the Euler system with congestion.
#[derive(Parser)]
#[command(name = "congestion", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one case and print its error report.
    Run(Common),
    /// Run a parameter sweep and write a convergence table.
    Sweep(SweepArgs),
    /// Dump the exact Riemann profile of a 1D case at `--t-end`.
    Riemann(RiemannArgs),
    /// Run with and without the pressure splitting.
    AblateP0(Common),
}

/// Run parameters. Flags override values read from `--config`.
#[derive(Args, Clone, Default)]
struct Common {
    /// Flat `key = value` configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    case: Option<String>,
    #[arg(long)]
    scheme: Option<String>,
    #[arg(long)]
    epsilon: Option<String>,
    #[arg(long)]
    gamma: Option<String>,
    #[arg(long)]
    rho_star: Option<String>,
    #[arg(long)]
    dx: Option<String>,
    #[arg(long)]
    dt: Option<String>,
    /// Adaptive stepping with this Courant number; `--dt` becomes the cap.
    #[arg(long)]
    courant_sigma: Option<String>,
    #[arg(long)]
    t_end: Option<String>,
    /// Comma-separated snapshot times.
    #[arg(long)]
    snapshots: Option<String>,
    #[arg(long)]
    picard: Option<String>,
    /// `copy` or `periodic`.
    #[arg(long)]
    boundary: Option<String>,
    /// `standard` or `none`.
    #[arg(long)]
    splitting: Option<String>,
    /// Output directory for snapshots and reports.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn config(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::from_file(p).with_context(|| format!("reading {}", p.display()))?,
            None => RunConfig::default(),
        };
        // order matters: `dt` before `courant_sigma` keeps the cap
        let flags = [
            ("case", &self.case),
            ("scheme", &self.scheme),
            ("epsilon", &self.epsilon),
            ("gamma", &self.gamma),
            ("rho_star", &self.rho_star),
            ("dx", &self.dx),
            ("dt", &self.dt),
            ("courant_sigma", &self.courant_sigma),
            ("t_end", &self.t_end),
            ("snapshots", &self.snapshots),
            ("picard", &self.picard),
            ("boundary", &self.boundary),
            ("splitting", &self.splitting),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                cfg.set(key, v).with_context(|| format!("--{}", key.replace('_', "-")))?;
            }
        }
        if let Some(out) = &self.out {
            cfg.output_dir = Some(out.clone());
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: Common,
    /// `key=v1,v2,...`; repeat for several parameters.
    #[arg(long = "vary", required = true)]
    vary: Vec<String>,
    /// Cartesian product of the lists instead of zipping them.
    #[arg(long)]
    product: bool,
    /// Time at which errors are reported; defaults to `--t-end`.
    #[arg(long)]
    report_time: Option<String>,
    /// Table file; stdout when absent.
    #[arg(long)]
    table: Option<PathBuf>,
}

#[derive(Args)]
struct RiemannArgs {
    #[command(flatten)]
    common: Common,
    /// Use the finite-eps solution instead of the eps -> 0 limit.
    #[arg(long)]
    finite: bool,
}

fn parse_vary(spec: &str) -> Result<(String, Vec<String>)> {
    let Some((key, values)) = spec.split_once('=') else {
        bail!("--vary expects key=v1,v2,... got '{spec}'");
    };
    let values: Vec<String> = values.split(',').map(|v| v.trim().to_string()).filter(|v| !v.is_empty()).collect();
    Ok((key.trim().to_string(), values))
}

fn output(path: Option<&PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)?;
            }
            Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?))
        }
        None => Box::new(io::stdout().lock()),
    })
}

fn cmd_run(args: &Common) -> Result<()> {
    let cfg = args.config()?;
    let out = run(&cfg)?;
    println!("{}", ErrorReport::CSV_HEADER);
    println!("{}", out.report.csv_row());
    Ok(())
}

fn cmd_sweep(args: &SweepArgs) -> Result<()> {
    let fixed = args.common.config()?;
    let varying = args.vary.iter().map(|v| parse_vary(v)).collect::<Result<Vec<_>>>()?;
    let report_time = args
        .report_time
        .as_deref()
        .map(parse_number)
        .transpose()?;
    let spec = SweepSpec {
        varying,
        mode: if args.product { SweepMode::Product } else { SweepMode::Zip },
        fixed,
        report_time,
    };
    let rows = sweep(&spec, Execution::default())?;
    let failed = rows.iter().filter(|r| r.result.is_err()).count();
    write_table(&rows, output(args.table.as_ref())?)?;
    if failed > 0 {
        eprintln!("{failed} of {} runs failed; see the error column", rows.len());
    }
    Ok(())
}

fn cmd_riemann(args: &RiemannArgs) -> Result<()> {
    let cfg = args.common.config()?;
    let case = build_case(cfg.case, cfg.custom.as_ref())?;
    let law = cfg.law()?;
    let grid = Grid1D::new(0.0, 1.0, cfg.dx)?;
    let xs: Vec<f64> = (0..grid.nodes()).map(|j| grid.x(j)).collect();
    for p in case.riemann_problems(&law, !args.finite)? {
        for w in &p.solution.waves {
            eprintln!("x0 = {}: {:?} speeds [{}, {}]", p.x0, w.kind, w.speed_lo, w.speed_hi);
        }
    }
    let profile = case.reference(&law, cfg.t_end, &xs, !args.finite)?;
    let path = cfg
        .output_dir
        .as_ref()
        .map(|d| d.join(format!("{}_{}_t{:.6}.csv", cfg.case, if args.finite { "eps" } else { "exact" }, cfg.t_end)));
    let mut w = output(path.as_ref())?;
    writeln!(w, "x,rho,q")?;
    for (x, s) in xs.iter().zip(&profile) {
        writeln!(w, "{x:.16e},{:.16e},{:.16e}", s.rho, s.q)?;
    }
    w.flush()?;
    Ok(())
}

fn cmd_ablate(args: &Common) -> Result<()> {
    let cfg = args.config()?;
    let ab = p0_ablation(&cfg)?;
    let (split, unsplit) = ab.density_tv();
    println!("variant,{}", ErrorReport::CSV_HEADER);
    println!("split,{}", ab.split.report.csv_row());
    println!("unsplit,{}", ab.unsplit.report.csv_row());
    eprintln!("TV(rho): split {split:.6}, unsplit {unsplit:.6}");
    Ok(())
}

fn diagnostic(e: &anyhow::Error) -> String {
    let mut msg = String::new();
    for cause in e.chain() {
        let text = cause.to_string();
        if !msg.ends_with(&text) {
            if !msg.is_empty() {
                msg.push_str(": ");
            }
            msg.push_str(&text);
        }
    }
    msg
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Riemann(a) => cmd_riemann(a),
        Command::AblateP0(a) => cmd_ablate(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", diagnostic(&e));
            ExitCode::FAILURE
        }
    }
}

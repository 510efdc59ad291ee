//! `sphlab`: run checks, sweeps and region queries from the command line.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 for usage
//! or config errors.

mod config;
mod output;
mod run;

use clap::{Parser, Subcommand};
use config::{ConfigError, Exp, ExperimentConfig, Operation, RegionParams, TableParams, VerifyParams};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "sphlab", version, about = "Spherical and bilinear spherical averages: checks, sweeps and exponent regions")]
struct Cli {
    /// TOML experiment config with one operation table.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory for CSV and JSON files.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for randomized checks (overrides the config).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Quadrature resolution (overrides the config).
    #[arg(long, global = true)]
    resolution: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run named check suites, or `all`.
    Verify { suites: Vec<String> },
    /// Run the scaling sweep described by --config.
    Sweep,
    /// Classify an exponent point, or print a vertex of a region.
    Region(RegionArgs),
    /// Reproduce the interpolation table.
    Table {
        /// Dimensions, comma separated.
        #[arg(long, value_delimiter = ',')]
        d: Vec<u32>,
        /// Values of r, comma separated.
        #[arg(long, value_delimiter = ',')]
        r: Vec<String>,
    },
    /// Evaluate averaging operators at points, from --config.
    Average,
}

#[derive(clap::Args)]
struct RegionArgs {
    #[arg(long)]
    thm: Option<String>,
    #[arg(long)]
    d: Option<u32>,
    #[arg(long)]
    r: Option<String>,
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    q: Option<String>,
    #[arg(long)]
    p1: Option<String>,
    #[arg(long)]
    p2: Option<String>,
    /// Reciprocal coordinates, comma separated.
    #[arg(long)]
    point: Option<String>,
    /// Vertex name, or `all`.
    #[arg(long)]
    vertex: Option<String>,
}

pub enum Failure {
    Usage(String),
    Checks,
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Usage(e.0)
    }
}

impl From<sphlab::Error> for Failure {
    fn from(e: sphlab::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn exp(s: &str) -> Result<Exp, Failure> {
    s.parse().map(Exp).map_err(|e: sphlab::Error| Failure::Usage(format!("{s:?}: {e}")))
}

fn from_args(cmd: &Cmd) -> Result<ExperimentConfig, Failure> {
    let mut cfg = ExperimentConfig::empty();
    match cmd {
        Cmd::Verify { suites } => {
            if suites.is_empty() {
                return Err(Failure::Usage("verify needs suite names (or `all`) or --config".into()));
            }
            cfg.verify = Some(VerifyParams { suites: suites.clone() });
            cfg.seed = Some(0);
        }
        Cmd::Region(a) => {
            let thm = a.thm.clone().ok_or_else(|| Failure::Usage("region needs --thm".into()))?;
            let d = a.d.ok_or_else(|| Failure::Usage("region needs --d".into()))?;
            let r = a.r.as_deref().map(exp).transpose()?;
            let given: Vec<&Option<String>> = vec![&a.p, &a.q, &a.p1, &a.p2];
            let exponents = match (&a.p1, &a.p2, &a.p, &a.q) {
                (None, None, Some(p), Some(q)) => Some(vec![exp(p)?, exp(q)?]),
                (Some(p1), Some(p2), Some(p), None) => Some(vec![exp(p1)?, exp(p2)?, exp(p)?]),
                _ if given.iter().all(|g| g.is_none()) => None,
                _ => return Err(Failure::Usage("give --p --q (linear) or --p1 --p2 --p (bilinear)".into())),
            };
            let point = match &a.point {
                Some(s) => Some(
                    s.split(',')
                        .map(|c| c.trim().parse().map(config::Rat).map_err(|e| Failure::Usage(format!("--point {c:?}: {e}"))))
                        .collect::<Result<Vec<_>, _>>()?,
                ),
                None => None,
            };
            cfg.region = Some(RegionParams { thm, d, r, exponents, point, vertex: a.vertex.clone() });
        }
        Cmd::Table { d, r } => {
            if d.is_empty() || r.is_empty() {
                return Err(Failure::Usage("table needs --d and --r, or --config".into()));
            }
            cfg.table = Some(TableParams { d: d.clone(), r: r.iter().map(|s| exp(s)).collect::<Result<_, _>>()? });
        }
        Cmd::Sweep | Cmd::Average => return Err(Failure::Usage("this command needs --config".into())),
    }
    Ok(cfg)
}

fn has_inline_args(cmd: &Cmd) -> bool {
    match cmd {
        Cmd::Verify { suites } => !suites.is_empty(),
        Cmd::Region(a) => [&a.thm, &a.r, &a.p, &a.q, &a.p1, &a.p2, &a.point, &a.vertex].iter().any(|o| o.is_some()) || a.d.is_some(),
        Cmd::Table { d, r } => !d.is_empty() || !r.is_empty(),
        Cmd::Sweep | Cmd::Average => false,
    }
}

fn operation(cmd: &Cmd) -> Operation {
    match cmd {
        Cmd::Verify { .. } => Operation::Verify,
        Cmd::Sweep => Operation::Sweep,
        Cmd::Region(_) => Operation::Region,
        Cmd::Table { .. } => Operation::Table,
        Cmd::Average => Operation::Average,
    }
}

fn execute(cli: Cli) -> Result<(), Failure> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Failure::Usage("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| Failure::Usage(e.to_string()))?;
    }
    let op = operation(&cli.cmd);
    let mut cfg = match &cli.config {
        Some(path) => {
            if has_inline_args(&cli.cmd) {
                return Err(Failure::Usage("give either --config or inline arguments, not both".into()));
            }
            let cfg = ExperimentConfig::load(path)?;
            let found = cfg.operation()?;
            if found != op {
                return Err(Failure::Usage(format!("{}: config describes `{found}`, not `{op}`", path.display())));
            }
            cfg
        }
        None => from_args(&cli.cmd)?,
    };
    if cli.seed.is_some() {
        cfg.seed = cli.seed;
    }
    if let Some(res) = cli.resolution {
        if res == 0 {
            return Err(Failure::Usage("--resolution must be positive".into()));
        }
        cfg.resolution = Some(res);
    }
    if cli.out.is_some() {
        cfg.out = cli.out;
    }
    run::dispatch(op, &cfg)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

//! `lp-homotopy`: tables, verification suites and solvers on the command line.
//!
//! Exit codes: 0 all checks pass, 1 a check failed, 2 usage or input error.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lp_homotopy::geometry::QuadratureConfig;

use output::{Failure, Manifest};

#[derive(Debug, Parser)]
#[command(name = "lp-homotopy", version, about = "Homotopy operators on differential forms and their L^p bounds")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// Seed of every random draw.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Monte Carlo sample count (also the lattice size for T).
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Simpson panels for the s-integral of the T kernel.
    #[arg(long, global = true)]
    pub t_steps: Option<usize>,
    /// TOML quadrature config (`samples`, `seed`, `t_steps`); flags override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    /// Write the output here and the run manifest next to it
    /// (`<path>.manifest.json`); otherwise stdout and stderr.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Pretty,
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the ball-constant table or the sphere-constant table.
    Constants(commands::ConstantsArgs),
    /// Run a randomized verification suite.
    #[command(subcommand)]
    Verify(commands::Suite),
    /// Check d(γω) = ω and the norm bound for a map file and a form file.
    TransferCheck(commands::TransferArgs),
    /// Singular values of the discretized T operator.
    IlCompactness(commands::CompactnessArgs),
    /// Minimal-energy primitive of an exact form.
    Pharmonic(commands::PharmonicArgs),
}

impl Global {
    fn quadrature(&self) -> Result<QuadratureConfig, Failure> {
        let mut cfg = match &self.config {
            Some(path) => QuadratureConfig::from_file(path).map_err(|e| Failure::Usage(e.to_string()))?,
            None => QuadratureConfig::default(),
        };
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(s) = self.samples {
            cfg.sample_count = s;
        }
        if let Some(t) = self.t_steps {
            cfg.t_subdivisions = t;
        }
        cfg.validate().map_err(|e| Failure::Usage(e.to_string()))?;
        Ok(cfg)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let result = cli.global.quadrature().and_then(|cfg| commands::run(&cli.command, &cli.global, &cfg));
    match result {
        Ok(report) => {
            let manifest = Manifest::new(&cli, &report, start.elapsed());
            let pass = report.passed();
            if let Err(e) = output::emit(&cli.global, &report, &manifest) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if !pass {
                if let Some(check) = report.checks.iter().find(|c| !c.pass) {
                    eprintln!("check failed: {}", check.name);
                }
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
    }
}

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::time::Duration;

use serde::Serialize;
use serde_json::Value;

use crate::{Cli, Global};

/// Errors that end a run before a report exists.
#[derive(Debug)]
pub enum Failure {
    /// Bad flags or unreadable input: exit 2.
    Usage(String),
    /// A computation that should have succeeded did not: exit 1.
    Check(String),
}

impl From<lp_homotopy::Error> for Failure {
    fn from(e: lp_homotopy::Error) -> Self {
        use lp_homotopy::Error as E;
        match e {
            E::Convergence { .. } | E::Singularity(_) => Failure::Check(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            pass,
            detail: detail.into(),
        }
    }
}

/// Rendered output plus the checks it made.
#[derive(Debug)]
pub struct Report {
    pub body: String,
    pub parameters: Value,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

#[derive(Debug, Serialize)]
pub struct Manifest {
    pub command: String,
    pub parameters: Value,
    pub seed: u64,
    pub samples: usize,
    pub t_steps: usize,
    pub versions: Value,
    pub wall_time_s: f64,
    pub checks: Vec<Check>,
}

impl Manifest {
    pub fn new(cli: &Cli, report: &Report, elapsed: Duration) -> Self {
        let cfg = cli.global.quadrature().unwrap_or_default();
        let command = std::env::args().skip(1).collect::<Vec<_>>().join(" ");
        Manifest {
            command,
            parameters: report.parameters.clone(),
            seed: cfg.seed,
            samples: cfg.sample_count,
            t_steps: cfg.t_subdivisions,
            versions: serde_json::json!({
                "lp-homotopy": env!("CARGO_PKG_VERSION"),
            }),
            wall_time_s: elapsed.as_secs_f64(),
            checks: report.checks.clone(),
        }
    }
}

fn sidecar(path: &std::path::Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

pub fn emit(global: &Global, report: &Report, manifest: &Manifest) -> std::io::Result<()> {
    let manifest_json = serde_json::to_string_pretty(manifest).map_err(std::io::Error::other)?;
    match &global.out {
        Some(path) => {
            fs::write(path, &report.body)?;
            fs::write(sidecar(path), manifest_json + "\n")?;
        }
        None => {
            std::io::stdout().write_all(report.body.as_bytes())?;
            eprintln!("{manifest_json}");
        }
    }
    Ok(())
}

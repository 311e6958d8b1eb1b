//! `lmscale`: command-line front end for the multiscale lattice library.
//!
//! Every run writes its CSV artifacts, a deterministic `report.json` and a
//! `timing.json` into `--out`. Exit codes: 0 ok, 2 config, 3 singularity,
//! 4 convergence failure, 5 I/O, 1 internal.

mod commands;
mod config;
mod error;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use commands::Outcome;
use config::Config;
use error::CliError;

#[derive(Parser)]
#[command(name = "lmscale", version, about = "Multiscale reduction of the lattice sine-Gordon equation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Table of the change-of-lattice coefficients P(i, k).
    Stirling(Common),
    /// Dispersion relation and group velocity on a k sweep.
    Dispersion(Common),
    /// Evolve the lattice sine-Gordon equation from a constant or plane-wave start.
    SgRun(Common),
    /// Evolve the discrete NLS equation from a Gaussian envelope.
    NlsRun(Common),
    /// Far-field check of the NLS reduction over a list of N.
    Validate(Common),
    /// Carrier, scale ratios and NLS coefficients.
    Coeffs(Common),
}

#[derive(Args)]
struct Common {
    /// Flat `key = value` configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (created if missing).
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Built-in parameter set; keys in --config override it.
    #[arg(long)]
    preset: Option<String>,
}

type Handler = fn(&mut Config) -> Result<Outcome, CliError>;

impl Command {
    fn parts(&self) -> (&'static str, &Common, Handler) {
        match self {
            Command::Stirling(c) => ("stirling", c, commands::stirling),
            Command::Dispersion(c) => ("dispersion", c, commands::dispersion_sweep),
            Command::SgRun(c) => ("sg-run", c, commands::sg_run),
            Command::NlsRun(c) => ("nls-run", c, commands::nls_run),
            Command::Validate(c) => ("validate", c, commands::validate),
            Command::Coeffs(c) => ("coeffs", c, commands::coeffs),
        }
    }
}

fn load_config(name: &str, common: &Common) -> Result<Config, CliError> {
    let file = match &common.config {
        Some(path) => Config::from_file(path)?,
        None => Config::default(),
    };
    match &common.preset {
        Some(preset) => Ok(file.layered_on(commands::preset(name, preset)?)),
        None => Ok(file),
    }
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|e| CliError::io(&path, e))
}

fn pretty(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values serialize");
    s.push('\n');
    s
}

fn run(name: &str, common: &Common, f: Handler) -> Result<(), CliError> {
    let start = Instant::now();
    let mut cfg = Config::default();
    let result = load_config(name, common).and_then(|c| {
        cfg = c;
        f(&mut cfg)
    });
    let created = std::fs::create_dir_all(&common.out).map_err(|e| CliError::io(&common.out, e));
    let outcome = match result {
        Ok(outcome) => {
            created?;
            outcome
        }
        Err(e) => {
            let report = json!({
                "command": name,
                "status": "error",
                "config": cfg.echo(),
                "error": {
                    "kind": e.kind(),
                    "message": e.to_string(),
                    "location": e.location().map(|(n, m)| json!({ "n": n, "m": m })),
                },
            });
            // best effort: the original error is what matters
            let _ = write(&common.out, "report.json", &pretty(&report));
            return Err(e);
        }
    };
    for (file, contents) in &outcome.artifacts {
        write(&common.out, file, contents)?;
    }
    let mut artifacts: Vec<&str> = outcome.artifacts.iter().map(|(f, _)| f.as_str()).collect();
    artifacts.extend(["report.json", "timing.json"]);
    let status = match &outcome.failure {
        None => "ok",
        Some(e) => e.kind(),
    };
    let report = json!({
        "command": name,
        "status": status,
        "config": cfg.echo(),
        "derived": outcome.derived,
        "metrics": outcome.metrics,
        "artifacts": artifacts,
    });
    write(&common.out, "report.json", &pretty(&report))?;
    let mut timing = outcome.timing;
    timing.insert("total_s".into(), json!(start.elapsed().as_secs_f64()));
    write(&common.out, "timing.json", &pretty(&json!({ "command": name, "runtime_s": timing })))?;
    println!("{name}: {status}, {} artifact(s) in {}", artifacts.len(), common.out.display());
    match outcome.failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, common, f) = cli.command.parts();
    match run(name, common, f) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("lmscale {name}: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

mod commands;
mod spec;
mod table;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use fsig_core::Error;

use crate::commands::{Outcome, Settings};
use crate::spec::BackendChoice;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("time budget exhausted")]
    Budget,
    #[error("verification failure: {0}")]
    Verification(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Internal(_) => 1,
            CliError::Input(_) => 2,
            CliError::Budget => 3,
            CliError::Verification(_) => 4,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded => CliError::Budget,
            Error::NotEffective { .. } => CliError::Verification(e.to_string()),
            Error::MissingGroebnerBasis | Error::RegionInsufficient(_) => CliError::Internal(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(name = "fsig", version, about = "F-signature, splitting numbers and finite-cover checks in positive characteristic")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Splitting numbers and the F-signature of a ring or pair.
    Compute(CommonArgs),
    /// Transformation rule, doubling and trace checks for a cover.
    Verify(CommonArgs),
    /// Order bound for the local fundamental group.
    Bounds(CommonArgs),
    /// Chains of cyclic covers over a quotient singularity.
    Chain(CommonArgs),
    /// Purity of the branch locus.
    Purity(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// JSON input file.
    #[arg(long)]
    spec: PathBuf,
    /// Write the JSON report here; timing goes to `<out>.timing.json`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Largest Frobenius exponent for sequence computations.
    #[arg(long)]
    e_max: Option<u32>,
    #[arg(long, value_enum)]
    backend: Option<BackendChoice>,
    /// Wall-clock budget in seconds.
    #[arg(long)]
    budget: Option<f64>,
    /// Compare the report against `<dir>/<command>-<spec stem>.json`,
    /// creating the file when it is missing.
    #[arg(long)]
    golden: Option<PathBuf>,
    /// Print the JSON report instead of the table.
    #[arg(long)]
    json: bool,
}

fn run(name: &str, args: &CommonArgs) -> Result<Vec<String>, CliError> {
    let start = Instant::now();
    let doc = spec::load(&args.spec)?;
    let settings = Settings::resolve(&doc, args.e_max, args.backend, args.budget);
    let Outcome { json, table, mut failures } = match name {
        "compute" => commands::compute(&doc, &settings),
        "verify" => commands::verify(&doc, &settings),
        "bounds" => commands::bounds(&doc, &settings),
        "chain" => commands::chain(&doc, &settings),
        "purity" => commands::purity(&doc, &settings),
        _ => unreachable!("subcommand names are fixed"),
    }?;
    if args.json {
        println!("{json}");
    } else {
        print!("{table}");
    }
    if let Some(out) = &args.out {
        write(out, &format!("{json}\n"))?;
        let timing = serde_json::json!({ "command": name, "elapsed_secs": start.elapsed().as_secs_f64() });
        write(&sidecar(out), &format!("{timing:#}\n"))?;
    }
    if let Some(dir) = &args.golden {
        if let Some(msg) = golden(dir, name, &args.spec, &json)? {
            failures.push(msg);
        }
    }
    Ok(failures)
}

fn sidecar(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".timing.json");
    PathBuf::from(s)
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))
}

fn golden(dir: &Path, name: &str, spec: &Path, json: &str) -> Result<Option<String>, CliError> {
    let stem = spec.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "spec".into());
    let path = dir.join(format!("{name}-{stem}.json"));
    match std::fs::read_to_string(&path) {
        Ok(expected) if expected.trim_end() == json.trim_end() => Ok(None),
        Ok(_) => Ok(Some(format!("report differs from golden file {}", path.display()))),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
            std::fs::create_dir_all(dir).map_err(|e| CliError::Input(format!("cannot create {}: {e}", dir.display())))?;
            write(&path, &format!("{json}\n"))?;
            eprintln!("created golden file {}", path.display());
            Ok(None)
        }
        Err(e) => Err(CliError::Input(format!("cannot read {}: {e}", path.display()))),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, args) = match &cli.command {
        Command::Compute(a) => ("compute", a),
        Command::Verify(a) => ("verify", a),
        Command::Bounds(a) => ("bounds", a),
        Command::Chain(a) => ("chain", a),
        Command::Purity(a) => ("purity", a),
    };
    let err = match run(name, args) {
        Ok(failures) if failures.is_empty() => return ExitCode::SUCCESS,
        Ok(failures) => CliError::Verification(failures.join("; ")),
        Err(e) => e,
    };
    eprintln!("error: {err}");
    ExitCode::from(err.exit_code())
}

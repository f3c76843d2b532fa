use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use srcflow::commands::{run, Command, Options};
use srcflow::config::{BranchName, RunConfig};
use srcflow::Failure;

#[derive(Parser)]
#[command(name = "srcflow", version, about = "Stationary isentropic source flows of ideal and van der Waals gases")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(clap::Args)]
struct Common {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Directory for the output files.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Overrides the branch given in the configuration.
    #[arg(long, value_enum)]
    branch: Option<BranchArg>,
    /// Comma-separated viscosity parameters mu = k/I to solve for in turn.
    #[arg(long, value_delimiter = ',')]
    mu_sweep: Option<Vec<f64>>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Inviscid density profile on the configured grid (CSV).
    EulerProfile(Common),
    /// Viscous profile and step summary (CSV + JSON).
    NsProfile(Common),
    /// Inviscid profile with phase labels, vdW gas only (CSV).
    Phases(Common),
    /// Prints the calibration constant C0.
    Calibrate(Common),
    /// Series values on the grid and the residual-order fit (CSV + JSON).
    Expand(Common),
    /// Runs the consistency checks for a configuration or an existing profile.
    Validate {
        #[command(flatten)]
        common: Common,
        /// Profile CSV to re-check instead of recomputing.
        #[arg(long)]
        input: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum BranchArg {
    Lower,
    Higher,
}

fn execute(cli: Cli) -> Result<(), Failure> {
    let (command, common, input) = match cli.command {
        Cmd::EulerProfile(c) => (Command::EulerProfile, c, None),
        Cmd::NsProfile(c) => (Command::NsProfile, c, None),
        Cmd::Phases(c) => (Command::Phases, c, None),
        Cmd::Calibrate(c) => (Command::Calibrate, c, None),
        Cmd::Expand(c) => (Command::Expand, c, None),
        Cmd::Validate { common, input } => (Command::Validate, common, input),
    };
    let text = fs::read_to_string(&common.config)
        .map_err(|e| Failure::config(format!("cannot read {}: {e}", common.config.display())))?;
    let cfg = RunConfig::from_json(&text)?;
    let opts = Options {
        out: common.out,
        branch: common.branch.map(|b| match b {
            BranchArg::Lower => BranchName::Lower,
            BranchArg::Higher => BranchName::Higher,
        }),
        mu_sweep: common.mu_sweep,
        input,
    };
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    run(command, &cfg, &opts, &mut lock)?;
    lock.flush().map_err(|e| Failure::config(e.to_string()))
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            if let Some(diag) = &failure.diagnostic {
                eprintln!("{}", serde_json::to_string_pretty(diag).unwrap_or_default());
            }
            ExitCode::from(failure.code)
        }
    }
}

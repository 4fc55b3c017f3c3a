use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qtcurv::builtins::builtin_scenario;
use qtcurv_cli::{list_builtins, run, CliError, RunOptions, RunSummary, Scenario};

#[derive(Parser)]
#[command(name = "qtcurv", about = "Prescribed Q- and T-curvature on the hemisphere")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Flags {
    /// Output directory (default: the scenario's, else out/<name>).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Basis degree override.
    #[arg(long)]
    degree: Option<usize>,
    /// Reload coefficients.csv from the output directory and only verify.
    #[arg(long)]
    verify_only: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file.
    Run {
        file: PathBuf,
        #[command(flatten)]
        flags: Flags,
    },
    /// Run a built-in scenario.
    RunBuiltin {
        name: String,
        #[command(flatten)]
        flags: Flags,
    },
    /// List curvature families, groups and built-in scenarios.
    ListBuiltins,
}

fn report(s: &RunSummary) {
    for (k, v) in &s.manifest {
        println!("{k:<22} {v}");
    }
    println!("wrote {} files to {}", s.files.len(), s.out_dir.display());
}

fn execute(cmd: Command) -> Result<(), CliError> {
    let (sc, flags) = match cmd {
        Command::ListBuiltins => {
            print!("{}", list_builtins());
            return Ok(());
        }
        Command::Run { file, flags } => (Scenario::from_file(&file)?, flags),
        Command::RunBuiltin { name, flags } => (Scenario::from_builtin(&builtin_scenario(&name)?), flags),
    };
    let opts = RunOptions { out: flags.out, seed: flags.seed, degree: flags.degree, verify_only: flags.verify_only };
    let summary = run(&sc, &opts)?;
    for w in &summary.warnings {
        eprintln!("warning: {w}");
    }
    report(&summary);
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse().command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

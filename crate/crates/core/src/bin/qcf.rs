//! `qcf run <ghz|three-box|ifm>` and `qcf run-file <path>`.
//!
//! Exit codes: 0 when the scenario ran (individual entries may still carry
//! errors), 2 for invalid input, 1 for internal failures.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qcf_core::{run_named, run_scenario, NamedScenario, Report, RunOptions, ScenarioFile, ScenarioName};

#[derive(Parser)]
#[command(name = "qcf", version, about = "Pre/post-selection, weak values and GHZ refutation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a built-in scenario: ghz, three-box or ifm.
    Run {
        name: String,
        #[command(flatten)]
        opts: Flags,
    },
    /// Run a scenario described by a JSON file.
    RunFile {
        path: PathBuf,
        #[command(flatten)]
        opts: Flags,
    },
}

#[derive(Args)]
struct Flags {
    /// Print the report as a single JSON document.
    #[arg(long)]
    json: bool,
    /// Certainty tolerance for elements of reality.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Pointer coupling strength for the weak-measurement simulation.
    #[arg(long, default_value_t = 0.01)]
    coupling: f64,
    /// Write the scenario as a JSON scenario file.
    #[arg(long, value_name = "PATH")]
    emit_scenario: Option<PathBuf>,
}

enum Failure {
    Input(String),
    Internal(String),
}

impl Flags {
    fn options(&self) -> Result<RunOptions, Failure> {
        if !(self.tol.is_finite() && (0.0..1.0).contains(&self.tol)) {
            return Err(Failure::Input(format!("--tol must be in [0, 1), got {}", self.tol)));
        }
        if !self.coupling.is_finite() || self.coupling == 0.0 {
            return Err(Failure::Input(format!("--coupling must be non-zero, got {}", self.coupling)));
        }
        Ok(RunOptions { tol: self.tol, coupling: self.coupling, ..RunOptions::default() })
    }
}

fn emit(scenario: &NamedScenario, path: &Path) -> Result<(), Failure> {
    let file = ScenarioFile::from_scenario(scenario).ok_or_else(|| {
        Failure::Input(format!("scenario `{}` has no pre/post ensemble to export", scenario.name))
    })?;
    std::fs::write(path, file.to_json() + "\n")
        .map_err(|e| Failure::Internal(format!("cannot write {}: {e}", path.display())))
}

fn execute(command: Command) -> Result<(Report, bool), Failure> {
    match command {
        Command::Run { name, opts } => {
            let run_opts = opts.options()?;
            let name: ScenarioName = name.parse().map_err(|e: qcf_core::Error| Failure::Input(e.to_string()))?;
            if let Some(path) = &opts.emit_scenario {
                emit(&NamedScenario::build(name), path)?;
            }
            Ok((run_named(name, &run_opts), opts.json))
        }
        Command::RunFile { path, opts } => {
            let run_opts = opts.options()?;
            let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            let scenario = ScenarioFile::load(&path)
                .and_then(|f| f.validate(&stem))
                .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            if let Some(out) = &opts.emit_scenario {
                emit(&scenario, out)?;
            }
            Ok((run_scenario(&scenario, &run_opts), opts.json))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok((report, json)) => {
            let mut stdout = std::io::stdout().lock();
            let written = if json { writeln!(stdout, "{}", report.to_json()) } else { write!(stdout, "{report}") };
            match written.and_then(|()| stdout.flush()) {
                Ok(()) => ExitCode::SUCCESS,
                // a closed pipe (e.g. `| head`) is not an error
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("qcf: internal error: cannot write output: {e}");
                    ExitCode::from(1)
                }
            }
        }
        Err(Failure::Input(msg)) => {
            eprintln!("qcf: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("qcf: internal error: {msg}");
            ExitCode::from(1)
        }
    }
}

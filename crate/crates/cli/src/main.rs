use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hyperloc::arith::{parse_q, Q};
use hyperloc_cli::{export_fixtures, run, selftest, CliError, Command, Flags, Report};

#[derive(Parser)]
#[command(name = "hyperloc", version, about = "Local contributions of fixed components via hyperbolic localization")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// Emit a machine-readable report.
    #[arg(long, global = true)]
    json: bool,
    /// Parameter of a parametric fixture.
    #[arg(long, global = true)]
    k: Option<usize>,
    /// Spectral residual tolerance, as an exact rational.
    #[arg(long, global = true, value_parser = parse_tolerance)]
    tolerance: Option<Q>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check a problem file against the schema and every invariant.
    Validate { file: PathBuf },
    /// Hyperbolic localization trace of a fan, sheaf and map.
    Localize { file: PathBuf },
    /// Local trace function of each fixed component, cell by cell.
    LocalTrace { file: PathBuf },
    /// Local contribution of each fixed component.
    Contribution { file: PathBuf },
    /// Cellular Hopf trace of the global model.
    GlobalTrace { file: PathBuf },
    /// Compare the global trace with the sum of local contributions.
    Verify { file: PathBuf },
    /// Characteristic cycle as a table of chamber multiplicities.
    Cc { file: PathBuf },
    /// Microlocal index against the file's test function.
    Index { file: PathBuf },
    /// Run every worked example and the randomized suites.
    Selftest,
    /// Write the shipped problem files into a directory.
    ExportFixtures { dir: PathBuf },
}

fn parse_tolerance(s: &str) -> Result<Q, String> {
    parse_q(s).map_err(|e| e.to_string())
}

fn dispatch(cli: &Cli, flags: &Flags) -> Result<Report, CliError> {
    let (cmd, file) = match &cli.command {
        Cmd::Validate { file } => (Command::Validate, file),
        Cmd::Localize { file } => (Command::Localize, file),
        Cmd::LocalTrace { file } => (Command::LocalTrace, file),
        Cmd::Contribution { file } => (Command::Contribution, file),
        Cmd::GlobalTrace { file } => (Command::GlobalTrace, file),
        Cmd::Verify { file } => (Command::Verify, file),
        Cmd::Cc { file } => (Command::Cc, file),
        Cmd::Index { file } => (Command::Index, file),
        Cmd::Selftest => return selftest(flags),
        Cmd::ExportFixtures { dir } => return export_fixtures(dir),
    };
    run(cmd, file, flags)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let flags = Flags { json: cli.json, k: cli.k, tolerance: cli.tolerance.clone() };
    match dispatch(&cli, &flags) {
        Ok(report) => {
            print!("{}", report.render(flags.json));
            ExitCode::from(report.exit_code())
        }
        Err(e) => {
            if flags.json {
                let v = serde_json::json!({ "error": { "diagnostic": e.name(), "message": e.to_string() } });
                println!("{}", serde_json::to_string_pretty(&v).expect("serializes"));
            } else {
                eprintln!("error[{}]: {e}", e.name());
            }
            ExitCode::from(e.exit_code())
        }
    }
}

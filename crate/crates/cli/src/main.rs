use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use finsler_cli::CliError;
use finsler_core::verify::CheckOptions;

/// Chern-Finsler geometry of holomorphic Lie algebroids.
#[derive(Parser)]
#[command(name = "finsler", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load a model and check the algebroid axioms.
    Validate {
        model: PathBuf,
        /// Report a Jacobi identity failure as a warning.
        #[arg(long)]
        jacobi_warning: bool,
    },
    /// Run the verification suites over seeded sample points.
    Check {
        model: PathBuf,
        #[arg(long, default_value_t = 100)]
        points: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Comma-separated suite names, `default` or `all`.
        #[arg(long, default_value = "default")]
        checks: String,
        /// Write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print a tensor at one point.
    Eval {
        model: PathBuf,
        /// Point document `{"z": [[re, im], ...], "u": [[re, im], ...]}`, inline or a file path.
        #[arg(long)]
        at: String,
        /// One of F, h, N, L, C, R, torsion, curvature, kahler.
        #[arg(long)]
        quantity: String,
    },
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Validate { model, jacobi_warning } => {
            let o = finsler_cli::validate(&model, jacobi_warning)?;
            print!("{}", o.stdout);
            Ok(o.code)
        }
        Command::Check { model, points, seed, tol, checks, out } => {
            let kinds = finsler_cli::parse_checks(&checks)?;
            let opts = CheckOptions { points, seed, tol };
            let (report, code) = finsler_cli::check(&model, &kinds, &opts)?;
            if let Some(out) = out {
                std::fs::write(&out, report.to_json())
                    .map_err(|e| CliError::Malformed(format!("cannot write {}: {e}", out.display())))?;
            }
            print!("{}", report.summary());
            Ok(code)
        }
        Command::Eval { model, at, quantity } => {
            let o = finsler_cli::eval(&model, &at, &quantity)?;
            print!("{}", o.stdout);
            Ok(o.code)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use moncat::crosscheck::CheckOptions;
use moncat::io::{run_command, CertificateReport, RunOptions, Workspace};
use moncat::linalg::Field;
use moncat::Error;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Machine,
}

/// Certificates for localization, quotients and gluing of commutative
/// monoids in finite-dimensional linear categories.
///
/// Exit status: 0 when a verdict (positive or negative) was computed, 2 for
/// input errors, 3 when an internal self-test fails.
#[derive(Debug, Parser)]
#[command(name = "moncat", version)]
struct Cli {
    /// check-monoid, end-ring, localize, quotient, quotient-ideal,
    /// check-cover, certify-immersion, check-conservative, check-basechange,
    /// integrality, function-field, glue, closed-subscheme, local-ring,
    /// cross-check or corpus-run.
    verb: String,

    /// Names declared in the workspace, or literal sections like `[1 0]`.
    args: Vec<String>,

    /// Workspace file.
    #[arg(short, long)]
    workspace: Option<PathBuf>,

    /// Corpus field: F2, F3 or Q.
    #[arg(long)]
    field: Option<Field>,

    /// Largest corpus dimension.
    #[arg(long, default_value_t = 3)]
    dim_max: usize,

    /// Also write the report to this file.
    #[arg(long)]
    report: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Random presheaves in the global-sections check.
    #[arg(long, default_value_t = 24)]
    presheaves: usize,

    #[arg(long, default_value_t = 1)]
    seed: u64,

    /// Invert the comparisons of one property suite (1-10) to exercise the
    /// self-test failure path.
    #[arg(long, hide = true)]
    inject_fault: Option<usize>,
}

fn run(cli: &Cli) -> Result<CertificateReport, Error> {
    let ws = cli.workspace.as_deref().map(Workspace::parse_file).transpose()?;
    let opts = RunOptions {
        field: cli.field,
        dim_max: cli.dim_max,
        presheaves: cli.presheaves,
        seed: cli.seed,
        checks: CheckOptions {
            fault: cli.inject_fault,
        },
    };
    run_command(&cli.verb, &cli.args, ws.as_ref(), &opts)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            let text = match cli.format {
                Format::Text => report.to_text(),
                Format::Machine => report.to_machine() + "\n",
            };
            print!("{text}");
            if let Some(path) = &cli.report {
                if let Err(e) = std::fs::write(path, &text) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use branchflow::circuit::{parse, print};
use branchflow::config::Tolerances;
use branchflow::emit::{emit, Format};
use branchflow::orchestrate::{orchestrate, RunOptions};

#[derive(Parser)]
#[command(name = "branchflow", version, about = "Run and analyse reversible and quantum computational networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum EmitFormat {
    Csv,
    Dot,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run a circuit document and emit its traces and reports.
    Run {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "csv")]
        emit: EmitFormat,
        /// Tolerance for analyzer checks (default from BRANCHFLOW_TOLERANCE, else 1e-10).
        #[arg(long)]
        tolerance: Option<f64>,
        #[arg(long, default_value_t = branchflow::config::DEFAULT_MAX_QUBITS)]
        max_qubits: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print a document in canonical form.
    Fmt {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

const VALIDATION_FAILURE: u8 = 1;
const CHECK_FAILURE: u8 = 2;

fn write_output(text: &str, out: Option<&PathBuf>) -> Result<(), String> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load(file: &PathBuf) -> Result<branchflow::circuit::CircuitDocument, String> {
    let text = fs::read_to_string(file).map_err(|e| format!("{}: {e}", file.display()))?;
    let doc = parse(&text).map_err(|e| format!("{}:{e}", file.display()))?;
    for w in &doc.warnings {
        eprintln!("warning: {w}");
    }
    Ok(doc)
}

fn run(cli: Cli) -> Result<u8, String> {
    match cli.command {
        Command::Fmt { file, out } => {
            let doc = load(&file)?;
            write_output(&print(&doc), out.as_ref())?;
            Ok(0)
        }
        Command::Run {
            file,
            emit: format,
            tolerance,
            max_qubits,
            out,
        } => {
            if let Some(t) = tolerance {
                if !(t.is_finite() && t > 0.0) {
                    return Err(format!("tolerance must be positive, got {t}"));
                }
            }
            let doc = load(&file)?;
            let options = RunOptions {
                tolerance: tolerance.unwrap_or_else(|| Tolerances::default().products),
                max_qubits,
            };
            let output = orchestrate(&doc, &options).map_err(|e| format!("{}: {e}", file.display()))?;
            let format = match format {
                EmitFormat::Csv => Format::Csv,
                EmitFormat::Dot => Format::Dot,
                EmitFormat::Json => Format::Json,
            };
            write_output(&emit(&output, format), out.as_ref())?;
            let mut code = 0;
            for a in output.analyses.iter().filter(|a| !a.as_expected()) {
                eprintln!(
                    "check failed: {} (expected {}, {})",
                    a.name,
                    a.expected.name(),
                    if a.passed { "passed" } else { "failed" }
                );
                code = CHECK_FAILURE;
            }
            Ok(code)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(VALIDATION_FAILURE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(VALIDATION_FAILURE)
        }
    }
}

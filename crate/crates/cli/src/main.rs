//! `walker`: curvature, classification and geodesics of four-dimensional
//! Walker metrics from plain-text problem files.
//!
//! Exit codes: 0 success, 1 output could not be written, 2 input or usage
//! error, 3 failed check, 4 geodesic integration stopped early.

mod commands;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use walker::classify::ClassTag;

use commands::{CliError, GeodesicParams};
use report::Report;

#[derive(Parser)]
#[command(name = "walker", version, about = "Curvature, Einstein-like classes and geodesics of Walker metrics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Problem file.
    #[arg(short = 'i', long = "input", value_name = "FILE")]
    input: PathBuf,
    /// Print the report as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Metric, connection, curvature, Ricci data and covariant derivative of Ricci.
    Analyze {
        #[command(flatten)]
        common: Common,
    },
    /// Class verdicts for a concrete problem, or the class systems of a symbolic one.
    Classify {
        #[command(flatten)]
        common: Common,
        /// Comma-separated subset of E,P,A,B,C.
        #[arg(long, value_delimiter = ',', default_value = "E,P,A,B,C", value_parser = parse_class)]
        classes: Vec<ClassTag>,
        /// Compare the derived systems with the published statements.
        #[arg(long)]
        paper_diff: bool,
    },
    /// Check the general computation against the published closed forms.
    Verify {
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
        /// Also require the covariant derivative table to match.
        #[arg(long)]
        strict: bool,
    },
    /// Integrate the geodesic equations with fixed-step RK4.
    Geodesic {
        #[command(flatten)]
        common: Common,
        /// Initial position.
        #[arg(long, value_parser = parse_vec4, allow_hyphen_values = true, default_value = "0,0,0,0")]
        x0: [f64; 4],
        /// Initial velocity.
        #[arg(long, value_parser = parse_vec4, allow_hyphen_values = true)]
        v0: [f64; 4],
        /// End time.
        #[arg(long = "t", default_value_t = 1.0)]
        t_end: f64,
        /// Step size.
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        /// CSV trajectory output.
        #[arg(short = 'o', long = "output", value_name = "CSV")]
        output: Option<PathBuf>,
    },
}

fn parse_class(s: &str) -> Result<ClassTag, String> {
    match ClassTag::parse(s.trim()) {
        Some(t) if t != ClassTag::Diagonal => Ok(t),
        _ => Err(format!("unknown class `{s}`; expected one of E, P, A, B, C")),
    }
}

fn parse_vec4(s: &str) -> Result<[f64; 4], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(format!("expected 4 comma-separated numbers, found {}", parts.len()));
    }
    let mut out = [0.0f64; 4];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = p.parse().map_err(|_| format!("`{p}` is not a number"))?;
        if !o.is_finite() {
            return Err(format!("`{p}` is not finite"));
        }
    }
    Ok(out)
}

fn run(cli: Cli) -> Result<(Report, bool), CliError> {
    Ok(match cli.command {
        Command::Analyze { common } => (commands::analyze(commands::load(&common.input)?)?, common.json),
        Command::Classify { common, classes, paper_diff } => {
            (commands::classify(commands::load(&common.input)?, &classes, paper_diff)?, common.json)
        }
        Command::Verify { json, strict } => (commands::verify(strict), json),
        Command::Geodesic { common, x0, v0, t_end, dt, output } => {
            let params = GeodesicParams { x0, v0, t_end, dt, csv: output };
            (commands::geodesic(commands::load(&common.input)?, params)?, common.json)
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((report, json)) => {
            let text = if json { report.to_json() } else { report.to_text() };
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(1);
            }
            if let Some(first) = report.status.failures.first() {
                eprintln!("walker: {first}");
            }
            ExitCode::from(report.status.exit_code as u8)
        }
        Err(e) => {
            eprintln!("walker: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

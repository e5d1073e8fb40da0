//! Command-line front end: `build`, `verify` and `classify`.

pub mod bundle;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::error::{KacError, Result};
use crate::gzbasis::HighestWeight;
use crate::induced::Normalization;
use crate::relations::{default_norms, default_weights, sweep, SweepConfig};
use crate::typicality::{classify, irreducible_dim, Kind};

pub use bundle::{read_bundle, write_bundle, ExportBundle};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_BUILD_ERROR: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(name = "kacmod", version, about = "Induced modules of U_q[gl(2/1)]: build, verify, classify")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Export the generator matrices of one module.
    Build {
        /// Highest weight m13,m23,m33.
        #[arg(long, value_parser = parse_weight, allow_hyphen_values = true)]
        hw: HighestWeight,
        #[arg(long, default_value_t = 1.7, allow_hyphen_values = true)]
        q: f64,
        /// Normalization constants a1,a2,a3.
        #[arg(long, value_parser = parse_norm, default_value = "1,1,1", allow_hyphen_values = true)]
        a: Normalization,
        /// Export the irreducible factor module when the module is nontypical.
        #[arg(long)]
        factor: bool,
        /// Relative tolerance of the embedded relation reports.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the relation suite over a grid of modules.
    Verify {
        /// Highest weight m13,m23,m33; may be repeated. Overrides --grid.
        #[arg(long, value_parser = parse_weight, allow_hyphen_values = true)]
        hw: Vec<HighestWeight>,
        /// `default`, `empty`, or highest weights separated by `;`.
        #[arg(long, default_value = "default", allow_hyphen_values = true)]
        grid: String,
        /// Values of q separated by commas.
        #[arg(long, value_delimiter = ',', default_values_t = [1.1, 1.7, 2.3], allow_hyphen_values = true)]
        q_list: Vec<f64>,
        /// Normalizations a1,a2,a3 separated by `;`.
        #[arg(long, allow_hyphen_values = true)]
        a_list: Option<String>,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Write the full report list as JSON to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the typicality class of a highest weight.
    Classify {
        #[arg(long, value_parser = parse_weight, allow_hyphen_values = true)]
        hw: HighestWeight,
    },
}

fn parse_triple(s: &str) -> std::result::Result<[f64; 3], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("expected three comma-separated numbers, got {s:?}"));
    }
    let mut out = [0.0; 3];
    for (slot, p) in out.iter_mut().zip(parts) {
        *slot = p.parse().map_err(|_| format!("{p:?} is not a number"))?;
    }
    Ok(out)
}

fn parse_weight(s: &str) -> std::result::Result<HighestWeight, String> {
    let [a, b, c] = parse_triple(s)?;
    HighestWeight::new(a, b, c).map_err(|e| e.to_string())
}

fn parse_norm(s: &str) -> std::result::Result<Normalization, String> {
    let [a, b, c] = parse_triple(s)?;
    Normalization::new(a, b, c).map_err(|e| e.to_string())
}

fn parse_list<T>(s: &str, item: fn(&str) -> std::result::Result<T, String>) -> std::result::Result<Vec<T>, String> {
    s.split(';').map(str::trim).filter(|p| !p.is_empty()).map(item).collect()
}

/// Formats a label, printing integers without a fractional part.
fn label(x: f64) -> String {
    format!("{}", x + 0.0)
}

/// One-line classification summary.
pub fn classification_line(hw: &HighestWeight) -> String {
    let c = classify(hw);
    let tail = match c.kind {
        Kind::Typical => format!("dim={}", hw.module_dim()),
        _ => format!("factor_dim={}", irreducible_dim(hw)),
    };
    format!("{} c1={} c2={} {tail}", c.kind, label(c.c1), label(c.c2))
}

/// Parses `args` (including the program name) and runs the command, writing
/// to `out` and `err`. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match cli.command {
        Command::Build { hw, q, a, factor, tol, out: path } => match cmd_build(&hw, q, &a, factor, tol) {
            Ok(bundle) => {
                let written = match &path {
                    Some(p) => write_bundle(&bundle, p),
                    None => bundle.to_json().and_then(|t| {
                        out.write_all(t.as_bytes()).map_err(|e| KacError::Format(e.to_string()))
                    }),
                };
                match written {
                    Ok(()) => EXIT_OK,
                    Err(e) => {
                        let _ = writeln!(err, "error: {e}");
                        EXIT_BUILD_ERROR
                    }
                }
            }
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                EXIT_BUILD_ERROR
            }
        },
        Command::Verify { hw, grid, q_list, a_list, tol, out: path } => {
            let config = match verify_config(hw, &grid, q_list, a_list.as_deref(), tol) {
                Ok(c) => c,
                Err(msg) => {
                    let _ = writeln!(err, "error: {msg}");
                    return EXIT_USAGE;
                }
            };
            cmd_verify(&config, path.as_deref(), out, err)
        }
        Command::Classify { hw } => {
            let _ = writeln!(out, "{}", classification_line(&hw));
            EXIT_OK
        }
    }
}

pub fn cmd_build(hw: &HighestWeight, q: f64, norm: &Normalization, factor: bool, tol: f64) -> Result<ExportBundle> {
    ExportBundle::build(hw, q, norm, factor, tol)
}

fn verify_config(
    hw: Vec<HighestWeight>,
    grid: &str,
    qs: Vec<f64>,
    a_list: Option<&str>,
    tol: f64,
) -> std::result::Result<SweepConfig, String> {
    let weights = if !hw.is_empty() {
        hw
    } else {
        match grid {
            "default" => default_weights(4),
            "empty" => Vec::new(),
            explicit => parse_list(explicit, parse_weight)?,
        }
    };
    let norms = match a_list {
        Some(s) => parse_list(s, parse_norm)?,
        None => default_norms(),
    };
    if !(tol.is_finite() && tol > 0.0) {
        return Err(format!("tolerance {tol} must be positive"));
    }
    Ok(SweepConfig { weights, qs, norms, tol })
}

/// Runs the sweep, prints a summary and every failure, and optionally writes
/// all reports as JSON. Exit code 0 iff every report passed.
pub fn cmd_verify(config: &SweepConfig, path: Option<&std::path::Path>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let reports = sweep(config);
    let failed: Vec<_> = reports.iter().filter(|r| !r.passed).collect();
    for r in &failed {
        let ctx = r.context.as_ref().map_or(String::new(), |c| {
            format!(" hw={:?} q={} a={:?}", c.hw, c.q, c.a)
        });
        let _ = writeln!(out, "FAIL {}{ctx} residual={:e} scale={:e}", r.relation_id, r.max_residual, r.scale);
    }
    let _ = writeln!(
        out,
        "{} cells, {} checks, {} failed",
        config.cells(),
        reports.len(),
        failed.len()
    );
    if let Some(p) = path {
        let records: Vec<bundle::ReportRecord> = reports.iter().map(bundle::ReportRecord::from).collect();
        let text = match serde_json::to_string_pretty(&records) {
            Ok(t) => t + "\n",
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                return EXIT_BUILD_ERROR;
            }
        };
        if let Err(e) = std::fs::write(p, text) {
            let _ = writeln!(err, "error: {}: {e}", p.display());
            return EXIT_BUILD_ERROR;
        }
    }
    if failed.is_empty() {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAILED
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("kacmod").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn classify_lines() {
        assert_eq!(run_args(&["classify", "--hw", "1,0,-2"]).1, "class1 c1=0 c2=-2 factor_dim=5\n");
        assert_eq!(run_args(&["classify", "--hw", "1,0,1"]).1, "typical c1=3 c2=1 dim=8\n");
        assert_eq!(run_args(&["classify", "--hw", "0,0,0"]).1, "class2 c1=1 c2=0 factor_dim=1\n");
        assert_eq!(run_args(&["classify", "--hw", "-1,-1,1"]).1, "class2 c1=1 c2=0 factor_dim=1\n");
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_args(&["build", "--hw", "1,0"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["classify", "--hw", "0,1,0"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn build_errors() {
        assert_eq!(run_args(&["build", "--hw", "1,0,1", "--q", "1"]).0, EXIT_BUILD_ERROR);
        assert_eq!(run_args(&["build", "--hw", "1,0,1", "--q", "-2"]).0, EXIT_BUILD_ERROR);
    }

    #[test]
    fn verify_small_grids() {
        let (code, out, _) = run_args(&["verify", "--grid", "empty"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("0 cells, 0 checks, 0 failed"));
        assert_eq!(run_args(&["verify", "--hw", "1,0,1", "--q-list", "1.7", "--a-list", "1,1,1"]).0, EXIT_OK);
        assert_eq!(
            run_args(&["verify", "--hw", "1,0,1", "--q-list", "1.7", "--a-list", "1,1,1", "--tol", "1e-30"]).0,
            EXIT_VERIFY_FAILED
        );
    }
}

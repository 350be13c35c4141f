use std::ffi::OsString;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use greenband::green::io::write_generators_json;
use greenband::matrix::io::write_matrix_text;
use greenband::UpperBandwidth;

use crate::bench::{fit_records, run_bench, write_bench_csv, BenchConfig, Method};
use crate::commands::{self, GenSpec, InvertMethod};
use crate::error::{exit, CliError, CliResult};
use crate::examples::{run_example, ExampleOptions};

/// Band matrix inversion through Green generators.
///
/// Exit status: 0 success, 1 I/O or other failure, 2 parse or usage
/// error, 3 singular matrix or zero pivot, 4 verification failure.
#[derive(Debug, Parser)]
#[command(name = "greenband", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a random band matrix.
    Gen(GenArgs),
    /// Compute the Green generators of the inverse of a band matrix.
    Invert(InvertArgs),
    /// Expand a generator file into the covered part of the inverse.
    Reconstruct(ReconstructArgs),
    /// Compare generators with the dense inverse of a matrix.
    Verify(VerifyArgs),
    /// Time an inversion method over a list of sizes.
    Bench(BenchArgs),
    /// Reproduce one of the scripted experiments.
    Example(ExampleArgs),
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub n: usize,
    /// Lower bandwidth.
    #[arg(long)]
    pub r: usize,
    /// Upper bandwidth: a count or `full`.
    #[arg(long, default_value = "full", value_parser = parse_upper, conflicts_with = "cond")]
    pub r_upper: UpperBandwidth,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Value added to the diagonal.
    #[arg(long, conflicts_with = "cond")]
    pub diag_shift: Option<f64>,
    /// Prescribed 2-norm condition number (full upper part).
    #[arg(long)]
    pub cond: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct InvertArgs {
    /// Matrix file.
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = InvertMethod::Qr)]
    pub method: InvertMethod,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReconstructArgs {
    /// Generator file.
    pub input: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Matrix file.
    pub matrix: PathBuf,
    /// Generator file.
    pub generators: PathBuf,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Comma-separated matrix sizes.
    #[arg(long, value_delimiter = ',', required = true)]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 5)]
    pub r: usize,
    #[arg(long, value_enum, default_value_t = Method::Qr)]
    pub method: Method,
    #[arg(long, default_value_t = 3)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Largest size for which the oracle error is computed.
    #[arg(long, default_value_t = 1000)]
    pub oracle_cutoff: usize,
    /// Value added to the diagonal; defaults to `r`.
    #[arg(long)]
    pub diag_shift: Option<f64>,
    /// CSV output; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExampleArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=5))]
    pub id: u32,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    #[arg(long, default_value_t = 3)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

fn parse_upper(s: &str) -> Result<UpperBandwidth, String> {
    if s.eq_ignore_ascii_case("full") {
        Ok(UpperBandwidth::Full)
    } else {
        s.parse()
            .map(UpperBandwidth::Limited)
            .map_err(|e| format!("expected a count or `full`: {e}"))
    }
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn emit(out: Option<&Path>, body: &str) -> CliResult<()> {
    match out {
        Some(p) => fs::write(p, body).map_err(|e| CliError::io(p, e)),
        None => std::io::stdout()
            .write_all(body.as_bytes())
            .map_err(|e| CliError::Other(format!("stdout: {e}"))),
    }
}

pub fn execute(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Gen(a) => {
            let spec = GenSpec {
                n: a.n,
                r: a.r,
                r_upper: a.r_upper,
                seed: a.seed,
                diag_shift: a.diag_shift.unwrap_or(0.0),
                cond: a.cond,
            };
            emit(a.out.as_deref(), &write_matrix_text(&commands::generate(&spec)?))
        }
        Command::Invert(a) => {
            let m = commands::parse_matrix(&read(&a.input)?, &a.input.display().to_string())?;
            let g = commands::invert(&m, a.method)?;
            emit(a.out.as_deref(), &write_generators_json(&g))
        }
        Command::Reconstruct(a) => emit(a.out.as_deref(), &commands::reconstruct_text(&read(&a.input)?)?),
        Command::Verify(a) => {
            let m = commands::parse_matrix(&read(&a.matrix)?, &a.matrix.display().to_string())?;
            let g = commands::parse_generators(&read(&a.generators)?, &a.generators.display().to_string())?;
            let report = commands::verify(&m, &g)?;
            println!("{report}");
            if report.passed() {
                Ok(())
            } else {
                Err(CliError::VerifyFailed(format!(
                    "relative error exceeds 100 eps kappa2 ({:.3e} > {:.3e})",
                    report.rel_err, report.threshold
                )))
            }
        }
        Command::Bench(a) => {
            let mut cfg = BenchConfig::new(a.sizes, a.r, a.method);
            cfg.trials = a.trials;
            cfg.seed = a.seed;
            cfg.oracle_cutoff = a.oracle_cutoff;
            cfg.diag_shift = a.diag_shift;
            let recs = run_bench(&cfg)?;
            emit(a.out.as_deref(), &write_bench_csv(&recs))?;
            let fit = fit_records(&recs, a.method)?;
            // keep stdout clean when it carries the CSV
            if a.out.is_some() {
                println!("{}: {fit}", a.method.tag());
            } else {
                eprintln!("{}: {fit}", a.method.tag());
            }
            Ok(())
        }
        Command::Example(a) => {
            let opts = ExampleOptions {
                trials: a.trials,
                seed: a.seed,
            };
            for line in run_example(a.id, &a.out_dir, opts)? {
                println!("{line}");
            }
            Ok(())
        }
    }
}

/// Parses `args` (including the program name), runs the command and
/// returns the exit status.
pub fn run<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { exit::PARSE } else { exit::OK };
        }
    };
    match execute(cli) {
        Ok(()) => exit::OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

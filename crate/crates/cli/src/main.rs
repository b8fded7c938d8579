//! `qensemble`: moment tables, density and zero data, convergence studies and
//! the verification suite for the q-deformed Al-Salam–Carlitz ensemble.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod number;
mod table;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qensemble::combinat::EnumerationCaps;
use qensemble::verify::Scope;

use commands::{Failure, Method, Mode, MomentsConfig, Outcome};
use number::Number;
use table::{Format, Table};

#[derive(Parser)]
#[command(name = "qensemble", version, about = "Spectral moments, limiting density and zeros of the q-deformed Al-Salam-Carlitz ensemble")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Moments m_{N,p} through one or more independent routes.
    Moments {
        #[arg(long = "N", visible_alias = "n")]
        n: usize,
        #[arg(long, default_value_t = 0)]
        p_min: usize,
        #[arg(long, default_value_t = 8)]
        p_max: usize,
        /// `p/q` in exact mode; decimals need `--mode float`.
        #[arg(long, allow_hyphen_values = true)]
        q: Number,
        #[arg(long, allow_hyphen_values = true)]
        a: Number,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "closed")]
        method: Vec<Method>,
        #[arg(long, value_enum, default_value = "exact")]
        mode: Mode,
        /// Exit with status 3 unless every requested route agrees.
        #[arg(long)]
        verify: bool,
        #[arg(long, default_value_t = 14)]
        max_path_length: usize,
        #[arg(long, default_value_t = 10)]
        max_matching_vertices: usize,
        /// Truncation tolerance of the Jackson-integral route.
        #[arg(long, default_value_t = 1e-15)]
        tol: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Limiting density on a uniform grid over [a, 1].
    Density {
        #[arg(long, allow_hyphen_values = true)]
        a: Number,
        /// Decimal, `p/q` or `log(x)`.
        #[arg(long)]
        lambda: Number,
        #[arg(long, default_value_t = 1001)]
        grid: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Zeros of U_N at q = exp(-lambda/N) with empirical and limiting CDFs.
    Zeros {
        #[arg(long = "N", visible_alias = "n")]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        a: Number,
        #[arg(long)]
        lambda: Number,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Residual of the two-term large-N expansion of q^{p/2} m_{N,p}.
    Converge {
        #[arg(long)]
        p: usize,
        #[arg(long, allow_hyphen_values = true)]
        a: Number,
        #[arg(long)]
        lambda: Number,
        #[arg(long = "N", visible_alias = "n", value_delimiter = ',', default_value = "8,16,32,64")]
        n: Vec<usize>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run the acceptance checks and print a pass/fail manifest.
    Verify {
        /// Smaller grids for the enumeration and zero-distribution checks.
        #[arg(long)]
        quick: bool,
    },
}

fn emit(table: &Table, out: &OutputArgs) -> Outcome<()> {
    let io_err = |e: io::Error| Failure::Runtime(format!("writing output: {e}"));
    match &out.output {
        Some(path) => {
            let file = File::create(path).map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            table.write(out.format, &mut w).map_err(io_err)?;
            w.flush().map_err(io_err)
        }
        None => match table.write(out.format, io::stdout().lock()) {
            Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
            other => other.map_err(io_err),
        },
    }
}

fn configure_threads() -> Outcome<()> {
    let Ok(raw) = std::env::var("QENSEMBLE_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::BadParams(format!("QENSEMBLE_THREADS must be a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Runtime(e.to_string()))
}

fn run(cli: Cli) -> Outcome<()> {
    configure_threads()?;
    match cli.command {
        Command::Moments {
            n,
            p_min,
            p_max,
            q,
            a,
            method,
            mode,
            verify,
            max_path_length,
            max_matching_vertices,
            tol,
            out,
        } => {
            let cfg = MomentsConfig {
                n,
                p_min,
                p_max,
                q,
                a,
                methods: method,
                mode,
                verify,
                caps: EnumerationCaps {
                    max_path_length,
                    max_matching_vertices,
                },
                tol,
            };
            emit(&commands::moments(&cfg)?, &out)
        }
        Command::Density { a, lambda, grid, out } => {
            emit(&commands::density(a.to_f64(), lambda.to_f64(), grid)?, &out)
        }
        Command::Zeros { n, a, lambda, out } => emit(&commands::zeros_table(a.to_f64(), lambda.to_f64(), n)?, &out),
        Command::Converge { p, a, lambda, n, out } => {
            emit(&commands::converge(p, a.to_f64(), lambda.to_f64(), &n)?, &out)
        }
        Command::Verify { quick } => {
            let (reports, outcome) = commands::verify(if quick { Scope::Quick } else { Scope::Full });
            for r in &reports {
                println!("{}", commands::manifest_line(r));
            }
            outcome
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.exit_code())
        }
    }
}

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use thiserror::Error;

mod commands;
mod input;
mod output;

use output::Format;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Compute(String),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub fn compute<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Compute(e.to_string())
}

#[derive(Debug, Parser)]
#[command(name = "superlie", version, about = "Exact supertraces, denominator identities and foldings of graded Lie superalgebras")]
struct Cli {
    #[arg(long, value_enum, default_value = "csv", global = true)]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Worker threads for parallel sections (0 = rayon default).
    #[arg(long, env = "SUPERLIE_THREADS", default_value_t = 0, global = true)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Supertraces of a free Lie superalgebra, checked against the brute-force oracle.
    FreeLie {
        #[arg(long)]
        gens: PathBuf,
        #[arg(long, default_value_t = 6)]
        max_weight: u32,
        /// Skip the oracle column.
        #[arg(long)]
        no_oracle: bool,
        /// Largest block (in words) the oracle will expand.
        #[arg(long, default_value_t = superlie::freelie::DEFAULT_GUARD)]
        guard: u64,
    },
    /// Multiplicities of the gl(k,l) irreducibles in the degree-n component.
    GlDecomp {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        l: usize,
        #[arg(long)]
        n: u32,
        /// Also compare the character against the oracle at three rational points.
        #[arg(long)]
        check: bool,
    },
    /// Product side against sum side of a denominator identity.
    Denominator {
        /// Generator file: free Lie superalgebra identity.
        #[arg(long, conflicts_with = "data")]
        gens: Option<PathBuf>,
        /// Borcherds–Cartan data: product over roots against the Weyl sum.
        #[arg(long)]
        data: Option<PathBuf>,
        /// Root multiplicities for --data.
        #[arg(long, requires = "data", conflicts_with = "kostant")]
        mults: Option<PathBuf>,
        /// 1-based indices J; multiplicities outside the J-span come from Kostant homology (conjectural).
        #[arg(long, requires = "data")]
        kostant: Option<String>,
        #[arg(long, default_value_t = 6)]
        bound: u32,
    },
    /// Supertraces of the Monstrous Lie superalgebra attached to a q-series.
    Monstrous {
        #[arg(long)]
        qseries: PathBuf,
        #[arg(long = "box", default_value_t = 6)]
        box_bound: u32,
    },
    /// Folded Borcherds–Cartan data under a diagram automorphism.
    Fold {
        #[arg(long)]
        data: PathBuf,
        /// Cycle notation, e.g. "1 3" or "(1 4)(2 3)"; defaults to the file's automorphism.
        #[arg(long)]
        sigma: Option<String>,
    },
    /// σᵏ traces and fixed-point dimensions on root spaces of finite-type data.
    OrbitTrace {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        sigma: Option<String>,
    },
    /// The acceptance checks.
    Selftest {
        /// Comma-separated criteria, default all.
        #[arg(long)]
        criteria: Option<String>,
    },
}

fn run(cli: Cli) -> Result<bool, CliError> {
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
            .map_err(|e| CliError::Input(e.to_string()))?;
    }
    let (table, ok) = match &cli.command {
        Command::FreeLie { gens, max_weight, no_oracle, guard } => commands::free_lie(gens, *max_weight, !*no_oracle, *guard)?,
        Command::GlDecomp { k, l, n, check } => commands::gl_decomp(*k, *l, *n, *check)?,
        Command::Denominator { gens, data, mults, kostant, bound } => {
            commands::denominator(gens.as_deref(), data.as_deref(), mults.as_deref(), kostant.as_deref(), *bound)?
        }
        Command::Monstrous { qseries, box_bound } => commands::monstrous(qseries, *box_bound)?,
        Command::Fold { data, sigma } => commands::fold(data, sigma.as_deref())?,
        Command::OrbitTrace { data, sigma } => commands::orbit_trace(data, sigma.as_deref())?,
        Command::Selftest { criteria } => commands::selftest(criteria.as_deref())?,
    };
    match &cli.output {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            table.write(cli.format, &mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            table.write(cli.format, &mut w)?;
        }
    }
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CliError::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

//! `tensorpres`: norms, preserver verification and recovery, CCNR screening.
//!
//! Exit codes: 0 success / pass / found / not flagged; 1 fail / not found /
//! flagged; 2 malformed input; 3 invalid norm spec; 4 ambiguous recovery;
//! 5 I/O or numerical failure.

mod commands;
mod matrix_file;
mod report;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("invalid norm: {0}")]
    InvalidSpec(String),
    #[error("{0}")]
    Library(tensorpres::Error),
    #[error("i/o: {0}")]
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Malformed(_) => 2,
            CliError::InvalidSpec(_) => 3,
            CliError::Library(tensorpres::Error::AmbiguousRecovery { .. }) => 4,
            CliError::Library(_) | CliError::Io(_) => 5,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "tensorpres", version, about = "Unitarily invariant norms and their preservers on tensor products")]
struct Cli {
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Override the command's tolerance (recover, verify, ccnr).
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Directory for report.json and matrix outputs.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Print the JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

/// Exactly one must be given; checked after parsing so misuse exits 3.
#[derive(Args, Debug, Default)]
pub struct NormFlags {
    #[arg(long, value_name = "K")]
    ky_fan: Option<String>,
    #[arg(long, value_name = "P")]
    schatten: Option<String>,
    #[arg(long)]
    spectral: bool,
    #[arg(long)]
    trace_norm: bool,
    #[arg(long)]
    frobenius: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum DemoKind {
    /// Random standard-form superoperator.
    Standard,
    /// Corner-swapping map (Frobenius preserver, not standard form).
    Swap,
    /// `C_r` and its partial transpose, norms side by side.
    Cr,
    /// Maximally entangled two-qubit state.
    Entangled,
    /// Maximally mixed product state, or a random pure one with --pure.
    Product,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a norm of a matrix file.
    Norm {
        file: PathBuf,
        #[command(flatten)]
        spec: NormFlags,
    },
    /// Check norm preservation on product matrices.
    Verify {
        file: PathBuf,
        #[arg(long)]
        shape: Option<String>,
        #[command(flatten)]
        spec: NormFlags,
        #[arg(long, default_value_t = 50)]
        trials: usize,
    },
    /// Decide whether a superoperator has the standard form and recover it.
    Recover {
        file: PathBuf,
        #[arg(long)]
        shape: Option<String>,
    },
    /// Realignment (CCNR) entanglement test.
    Ccnr {
        file: PathBuf,
        #[arg(long)]
        shape: Option<String>,
    },
    /// Emit a named example.
    Demo {
        kind: DemoKind,
        #[arg(long, default_value = "2,2")]
        shape: String,
        #[arg(long, default_value_t = 2.0)]
        r: f64,
        /// Norm for `demo cr`, e.g. ky-fan:2 (default: several).
        #[arg(long)]
        spec: Option<String>,
        /// Random pure product state for `demo product`.
        #[arg(long)]
        pure: bool,
    },
}

pub struct Context {
    pub seed: u64,
    pub tol: Option<f64>,
    pub argv: Vec<String>,
}

fn shape_arg(s: &Option<String>) -> Result<Option<Vec<usize>>, CliError> {
    s.as_deref().map(commands::parse_shape).transpose()
}

fn run(cli: &Cli, ctx: &Context) -> Result<report::Outcome, CliError> {
    match &cli.command {
        Command::Norm { file, spec } => commands::cmd_norm(ctx, file, spec),
        Command::Verify {
            file,
            shape,
            spec,
            trials,
        } => commands::cmd_verify(ctx, file, shape_arg(shape)?.as_deref(), spec, *trials),
        Command::Recover { file, shape } => commands::cmd_recover(ctx, file, shape_arg(shape)?.as_deref()),
        Command::Ccnr { file, shape } => commands::cmd_ccnr(ctx, file, shape_arg(shape)?.as_deref()),
        Command::Demo {
            kind,
            shape,
            r,
            spec,
            pure,
        } => commands::cmd_demo(
            ctx,
            &commands::DemoArgs {
                kind: *kind,
                shape: &commands::parse_shape(shape)?,
                r: *r,
                spec: spec.as_deref(),
                pure: *pure,
            },
        ),
    }
}

fn finish(out: Option<&Path>, json: bool, outcome: &report::Outcome) -> Result<(), CliError> {
    if let Some(dir) = out {
        report::write_out(dir, outcome)?;
    }
    let text = if json { outcome.report.to_json() } else { outcome.human.clone() };
    let mut stdout = std::io::stdout().lock();
    match writeln!(stdout, "{text}").and_then(|_| stdout.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::Io(e.to_string())),
        _ => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = Context {
        seed: cli.seed,
        tol: cli.tol,
        argv: std::env::args().skip(1).collect(),
    };
    let result = run(&cli, &ctx).and_then(|outcome| {
        finish(cli.out.as_deref(), cli.json, &outcome)?;
        Ok(outcome.exit)
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

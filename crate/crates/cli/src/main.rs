mod commands;
mod solve;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Compute(String),
}

impl CliError {
    pub fn usage(flag: &str, msg: impl std::fmt::Display) -> Self {
        CliError::Usage(format!("invalid value for {flag}: {msg}"))
    }

    pub fn compute(e: impl std::fmt::Display) -> Self {
        CliError::Compute(e.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
    Markdown,
}

#[derive(Parser, Debug)]
#[command(name = "oblit", version, about = "Bounds, polar cones and solvable points for systems of low-degree forms")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// Decimal digits for numeric work.
    #[arg(long, global = true, env = "OBLIT_PRECISION", default_value_t = 100)]
    pub precision: u32,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Type and degree vector operations.
    Type {
        #[command(subcommand)]
        op: TypeOp,
    },
    /// Upper bound f_j(m2, m3, m4).
    Bound(BoundArgs),
    /// Bound tables for one kind of form.
    Table(TableArgs),
    /// The bounding polynomial q(j, m2, m3, m4).
    Qpoly(QpolyArgs),
    /// Compare the point bound with the classical and corollary bounds.
    Compare {
        #[arg(long)]
        degree: u32,
        #[arg(long)]
        m: u64,
    },
    /// Polar cone of a system at given points.
    Polar(PolarArgs),
    /// Find a point or a linear subspace on a system.
    Solve(SolveArgs),
    /// Evaluate a certificate and optionally check residuals.
    Verify(VerifyArgs),
    /// Run the golden-table and identity checks.
    Selftest,
}

#[derive(Subcommand, Debug)]
pub enum TypeOp {
    /// Sum of two type vectors.
    Add { a: String, b: String },
    /// Concatenation of two degree vectors.
    Concat { a: String, b: String },
    /// Type of a degree vector.
    Of { degrees: String },
    /// Raised type m^j.
    Raise {
        m: String,
        #[arg(long, default_value_t = 1)]
        j: u64,
    },
    /// Raised degree vector d^j.
    RaiseDeg {
        d: String,
        #[arg(long, default_value_t = 1)]
        j: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BoundMode {
    Closed,
    Search,
}

#[derive(Args, Debug)]
pub struct BoundArgs {
    #[arg(long, default_value_t = 0)]
    pub j: u64,
    #[arg(long, default_value_t = 0)]
    pub m2: u64,
    #[arg(long, default_value_t = 0)]
    pub m3: u64,
    #[arg(long, default_value_t = 0)]
    pub m4: u64,
    #[arg(long, value_enum, default_value_t = BoundMode::Closed)]
    pub mode: BoundMode,
    #[arg(long)]
    pub trace: bool,
}

#[derive(Args, Debug)]
pub struct TableArgs {
    /// quadric, cubic or quartic.
    #[arg(long)]
    pub kind: String,
    #[arg(long, default_value_t = 8)]
    pub j_max: u64,
    #[arg(long, default_value_t = 8)]
    pub m_max: u64,
}

#[derive(Args, Debug)]
pub struct QpolyArgs {
    /// Evaluate at j,m2,m3,m4.
    #[arg(long)]
    pub at: Option<String>,
    /// Coefficient of one monomial, e.g. m4^8 or j*m4^7.
    #[arg(long)]
    pub coeff: Option<String>,
    /// Print p(m2,m3,m4) = q(0,m2,m3,m4) instead.
    #[arg(long)]
    pub p: bool,
    /// Compare with the transcribed appendix polynomial.
    #[arg(long)]
    pub check: bool,
}

#[derive(Args, Debug)]
pub struct PolarArgs {
    #[arg(long)]
    pub system: std::path::PathBuf,
    /// Points separated by ';', coordinates by ','.
    #[arg(long)]
    pub points: String,
    /// Number of points to iterate over (defaults to all given).
    #[arg(long)]
    pub iterate: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SolveMode {
    Numeric,
    Finite,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[arg(long)]
    pub system: std::path::PathBuf,
    #[arg(long, value_enum, default_value_t = SolveMode::Numeric)]
    pub mode: SolveMode,
    /// Characteristic for finite mode.
    #[arg(long, default_value_t = 5)]
    pub p: u64,
    /// Find a j-plane instead of a point.
    #[arg(long)]
    pub plane: Option<usize>,
    /// Repeat with seeds seed, seed+1, ... and report every witness.
    #[arg(long, default_value_t = 1)]
    pub witnesses: u64,
    /// Residual tolerance exponent (default: minus half the precision).
    #[arg(long, allow_hyphen_values = true)]
    pub tolerance_exp: Option<i32>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Certificate JSON or the JSON written by `solve`.
    #[arg(long)]
    pub cert: std::path::PathBuf,
    /// System to check the certified points against.
    #[arg(long)]
    pub system: Option<std::path::PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    pub tolerance_exp: Option<i32>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(out) => {
            print!("{out}");
            if !out.ends_with('\n') {
                println!();
            }
            ExitCode::SUCCESS
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Compute(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

//! `fracgalerkin` command-line front-end.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

use config::{BasisArgs, ConventionArg, KindArg};

#[derive(Debug, Parser)]
#[command(
    name = "fracgalerkin",
    version,
    about = "Fractional integral and derivative matrices in Jacobi bases"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write operator matrices as JSON.
    Matrix {
        #[command(flatten)]
        basis: BasisArgs,
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[arg(long, value_enum, default_value_t = KindArg::Both)]
        kind: KindArg,
        #[arg(long, value_enum, default_value_t = ConventionArg::Galerkin)]
        convention: ConventionArg,
    },
    /// Apply an operator matrix to a coefficient file or to sampled data.
    Apply {
        #[command(flatten)]
        basis: BasisArgs,
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 16)]
        n: usize,
        #[arg(long, value_enum, default_value_t = KindArg::Integral)]
        kind: KindArg,
        /// Coefficient CSV (`index,value`).
        #[arg(long, conflicts_with = "samples", required_unless_present = "samples")]
        input: Option<PathBuf>,
        /// Sample CSV (`x,fx`), projected onto the basis first.
        #[arg(long)]
        samples: Option<PathBuf>,
        #[arg(long)]
        quad_order: Option<usize>,
    },
    /// Solve the Abel equation for sampled right-hand side data.
    Solve {
        #[command(flatten)]
        basis: BasisArgs,
        #[arg(long)]
        alpha: f64,
        /// Number of solution coefficients minus one.
        #[arg(long, default_value_t = 16)]
        n: usize,
        /// Degree of the right-hand side expansion; defaults to max(8n, 64).
        #[arg(long)]
        inner_n: Option<usize>,
        /// Projection rule order; defaults to 2 inner-n + 64.
        #[arg(long)]
        quad_order: Option<usize>,
        #[arg(long, default_value_t = 4.0)]
        nu: f64,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long)]
        samples: PathBuf,
    },
    /// Decay fit and regime report for a coefficient sequence.
    Analyze {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 4.0)]
        nu: f64,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        /// Growth exponent of the basis norms, M_n ~ n^growth_beta.
        #[arg(long, default_value_t = 0.0)]
        growth_beta: f64,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Weighted L_nu norms of the basis polynomials and their growth rate.
    BasisNorms {
        #[command(flatten)]
        basis: BasisArgs,
        #[arg(long, default_value_t = 64)]
        n: usize,
        #[arg(long, default_value_t = 4.0)]
        nu: f64,
    },
}

/// A failure with its exit status and diagnostic tag.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags or input files; exit status 2.
    Config(fracgalerkin::Error),
    /// Numerical failure after validation; exit status 3.
    Solver(fracgalerkin::Error),
    /// Output could not be written; exit status 1.
    Output(String),
}

impl CliError {
    pub fn config(msg: String) -> Self {
        CliError::Config(fracgalerkin::Error::Domain(msg))
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Solver(_) => 3,
            CliError::Output(_) => 1,
        }
    }

    fn line(&self) -> String {
        let (code, msg) = match self {
            CliError::Config(e) | CliError::Solver(e) => (e.code(), e.message().to_string()),
            CliError::Output(m) => ("output", m.clone()),
        };
        format!("error[{code}]: {}", msg.replace('\n', " "))
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Matrix {
            basis,
            alpha,
            n,
            kind,
            convention,
        } => commands::matrix(&basis, alpha, n, kind, convention.into()),
        Command::Apply {
            basis,
            alpha,
            n,
            kind,
            input,
            samples,
            quad_order,
        } => commands::apply(&basis, alpha, n, kind, input, samples, quad_order),
        Command::Solve {
            basis,
            alpha,
            n,
            inner_n,
            quad_order,
            nu,
            p,
            samples,
        } => {
            let cfg =
                config::JobConfig::new(&basis, alpha, n, inner_n, quad_order, nu, p, samples)?;
            commands::solve(&cfg)
        }
        Command::Analyze {
            input,
            nu,
            p,
            growth_beta,
            out,
        } => commands::analyze(&input, nu, p, growth_beta, &out),
        Command::BasisNorms { basis, n, nu } => commands::basis_norms(&basis, n, nu),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            eprintln!("error[usage]: {}", first.trim_start_matches("error: "));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.line());
            ExitCode::from(e.exit_code())
        }
    }
}

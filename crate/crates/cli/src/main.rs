//! `subflow`: command-line front end for the self-similar solver, the
//! finite-difference reference, the Erdélyi–Kober error study and profile
//! fitting.

// `!(x > 0.0)` is used on purpose so that NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod exit;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::commands::{collapse, ek_error, fd, fit, selfsim};

#[derive(Debug, Parser)]
#[command(
    name = "subflow",
    version,
    about = "Self-similar subdiffusion of moisture in porous media"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Series solution: profile.csv, solution.json, moisture.csv
    Selfsim(selfsim::Args),
    /// Finite-difference reference run and its diagnostics
    Fd(fd::Args),
    /// Erdélyi–Kober series errors against direct quadrature
    EkError(ek_error::Args),
    /// Fit alpha, D0 and optionally m to a measured profile
    Fit(fit::Args),
    /// Collapse diagnostic of a stored finite-difference history
    Collapse(collapse::Args),
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Selfsim(args) => selfsim::run(args),
        Command::Fd(args) => fd::run(args),
        Command::EkError(args) => ek_error::run(args),
        Command::Fit(args) => fit::run(args),
        Command::Collapse(args) => collapse::run(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit::code(&e))
        }
    }
}

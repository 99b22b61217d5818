//! Command-line front end for `reflect-core`.
//!
//! Every command prints one JSON envelope
//! `{schema_version, command, status, payload, diagnostics}` and exits with
//! 0 (ok), 1 (invariant-violation) or 2 (input-error).

use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub mod commands;
pub mod error;
pub mod io;
pub mod report;

use error::CliError;
use report::{CommandResult, Status};

#[derive(Debug, Parser)]
#[command(name = "reflect", version, about = "Isometric reflections of finite-dimensional normed spaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Norm axiom report and isometric coordinate sign changes.
    Analyze {
        /// Norm JSON file, or `fixture:NAME`.
        input: String,
        #[arg(long, default_value_t = 512)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Coxeter graph, components and type labels.
    Coxeter {
        /// Norm or reflections JSON file, or `fixture:NAME`.
        input: String,
        #[arg(long, default_value_t = reflect_core::coxeter::DEFAULT_ORDER_CAP)]
        order_cap: u64,
        /// Write the graph in DOT format.
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Hilbert/Coxeter strip decomposition.
    Decompose {
        input: String,
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Estimate the reflection constant c(E), or sweep it over ℓ_p.
    Constant {
        /// Norm JSON file, or `fixture:NAME`; omit with --lp-sweep.
        input: Option<String>,
        /// Comma-separated exponents, e.g. "1.25,1.5,2,3,4".
        #[arg(long)]
        lp_sweep: Option<String>,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long, default_value_t = 32)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the sweep as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Check the invariants attached to a named fixture.
    Verify {
        fixture: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// List or print the built-in fixtures.
    Fixtures {
        #[command(subcommand)]
        action: FixturesAction,
    },
}

#[derive(Debug, Subcommand)]
pub enum FixturesAction {
    List,
    Show {
        name: String,
        /// Print only the fixture document, ready to be used as an input file.
        #[arg(long)]
        raw: bool,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Analyze { .. } => "analyze",
            Command::Coxeter { .. } => "coxeter",
            Command::Decompose { .. } => "decompose",
            Command::Constant { .. } => "constant",
            Command::Verify { .. } => "verify",
            Command::Fixtures { .. } => "fixtures",
        }
    }
}

/// Rendered stdout and exit code.
pub fn run(cli: Cli) -> (String, i32) {
    let name = cli.command.name();
    if let Command::Fixtures { action: FixturesAction::Show { name: fx, raw: true } } = &cli.command {
        return match commands::fixture_document(fx) {
            Ok(doc) => (doc, 0),
            Err(e) => finish(name, Err(e)),
        };
    }
    let result = match cli.command {
        Command::Analyze { input, samples, seed } => commands::analyze(&input, samples, seed),
        Command::Coxeter { input, order_cap, dot, seed } => commands::coxeter(&input, order_cap, dot, seed),
        Command::Decompose { input, tolerance, seed } => commands::decompose_cmd(&input, tolerance, seed),
        Command::Constant { input, lp_sweep, dim, restarts, seed, csv } => {
            commands::constant(commands::ConstantArgs { input, lp_sweep, dim, restarts, seed, csv })
        }
        Command::Verify { fixture, seed } => commands::verify(&fixture, seed),
        Command::Fixtures { action: FixturesAction::List } => Ok(commands::fixtures_list()),
        Command::Fixtures { action: FixturesAction::Show { name, .. } } => commands::fixtures_show(&name),
    };
    finish(name, result)
}

fn finish(name: &str, result: Result<CommandResult, CliError>) -> (String, i32) {
    let result = result.unwrap_or_else(|e| {
        let status = match e {
            CliError::Input(_) => Status::InputError,
            CliError::Invariant(_) => Status::InvariantViolation,
        };
        CommandResult { command: name.into(), status, payload: serde_json::Value::Null, diagnostics: vec![e.to_string()] }
    });
    (result.render(), result.status.exit_code())
}

//! `ps-purify`: reproduce the figure data, cross-check the oracles, fuzz the bounds.
//!
//! Exit status: 0 on success, 1 when a tolerance or property check fails (or a numerical
//! error occurs), 2 on usage or configuration errors.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{CommandFactory, Parser, Subcommand};

use commands::{CommandError, Figure};
use config::RunConfig;

#[derive(Parser, Debug)]
#[command(name = "ps-purify", version, about = "Relative purity of photon-subtracted Gaussian states")]
struct Cli {
    /// TOML run configuration (see docs/config.md).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    output: Option<String>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug, Clone, PartialEq)]
enum Command {
    /// Write the data behind one figure (CSV, or JSON for fig3).
    Reproduce {
        #[arg(value_enum)]
        figure: Figure,
    },
    /// Run the cross-oracle suite and report the largest deviations.
    Verify,
    /// Property-check the ratio bounds and verdicts on a seeded random corpus.
    Fuzz {
        #[arg(long)]
        count: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

/// Parses the `command` key of a config file with the same grammar as the command line.
fn command_from_config(text: &str) -> Result<Command, clap::Error> {
    let args = std::iter::once("ps-purify").chain(text.split_whitespace());
    Cli::try_parse_from(args)?.command.ok_or_else(|| Cli::command().error(clap::error::ErrorKind::MissingSubcommand, "empty command"))
}

fn usage_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}\n\n{}", Cli::command().render_usage());
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let mut cfg = match &cli.config {
        Some(path) => match RunConfig::load(path) {
            Ok(c) => c,
            Err(e) => return usage_error(e),
        },
        None => RunConfig::default(),
    };
    let command = match (cli.command, cfg.command.as_deref()) {
        (Some(c), _) => c,
        (None, Some(text)) => match command_from_config(text) {
            Ok(c) => c,
            Err(e) => return usage_error(format!("config command '{text}': {}", e.kind())),
        },
        (None, None) => return usage_error("no command given"),
    };
    if let Command::Fuzz { count, seed } = &command {
        cfg.fuzz_count = count.unwrap_or(cfg.fuzz_count);
        cfg.seed = seed.unwrap_or(cfg.seed);
    }
    if cli.output.is_some() {
        cfg.output = cli.output;
    }

    let mut out = match output::open(cfg.output.as_deref()) {
        Ok(o) => o,
        Err(e) => return usage_error(format!("cannot open output: {e}")),
    };
    let result: Result<bool, CommandError> = match command {
        Command::Reproduce { figure } => commands::reproduce::run(figure, &cfg, &mut out).map(|()| true),
        Command::Verify => commands::verify::run(&cfg, &mut out),
        Command::Fuzz { .. } => commands::fuzz::run(&cfg, cfg.fuzz_count, cfg.seed, &mut out),
    };
    let flushed = out.flush();
    match (result, flushed) {
        (Ok(true), Ok(())) => ExitCode::SUCCESS,
        // a reader such as `head` closed the pipe early
        (Err(CommandError::Io(e)), _) | (Ok(_), Err(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        (Ok(false), Ok(())) => ExitCode::from(1),
        (Err(e), _) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        (_, Err(e)) => {
            eprintln!("error: cannot write output: {e}");
            ExitCode::from(1)
        }
    }
}

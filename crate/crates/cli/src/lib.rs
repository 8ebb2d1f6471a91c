//! Command-line driver for the `qalign` simulator.
//!
//! Exit codes: 0 verified success, 1 search failure (rerunning with another
//! seed may succeed), 2 usage or I/O error.

pub mod args;
pub mod commands;
pub mod instance;

use anyhow::{Context, Result};
use clap::Parser;
use std::ffi::OsString;
use std::io::Write;

pub use args::Cli;
pub use commands::{cmd_align, cmd_encode, cmd_exact, cmd_stats, cmd_trace, Status};

use args::{Command, OutputArgs};
use commands::Rendered;

pub const EXIT_ERROR: i32 = 2;

/// Parses `argv`, runs the command and returns the process exit code.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { 0 };
            let _ = write!(stderr, "{e}");
            return code;
        }
    };
    match execute(&cli, stdout) {
        Ok(status) => status as i32,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e:#}");
            EXIT_ERROR
        }
    }
}

pub fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<Status> {
    let (rendered, output) = match &cli.command {
        Command::Exact(a) => (commands::render_exact(&cmd_exact(a)?, a.output.format)?, &a.output),
        Command::Align(a) => (commands::render_align(&cmd_align(a)?, a.output.format)?, &a.output),
        Command::Trace(a) => (commands::render_trace(&cmd_trace(a)?, a.output.format)?, &a.output),
        Command::Stats(a) => (commands::render_stats(&cmd_stats(a)?, a.output.format)?, &a.output),
        Command::Encode(a) => (commands::render_encode(&cmd_encode(a)?, a.output.format)?, &a.output),
    };
    emit(&rendered, output, stdout)?;
    Ok(rendered.status)
}

fn emit(rendered: &Rendered, output: &OutputArgs, stdout: &mut dyn Write) -> Result<()> {
    match &output.output {
        Some(path) => std::fs::write(path, &rendered.body)
            .with_context(|| format!("writing {}", path.display())),
        None => stdout
            .write_all(rendered.body.as_bytes())
            .context("writing to standard output"),
    }
}

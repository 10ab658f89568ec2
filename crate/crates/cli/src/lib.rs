//! Command-line front end: JSON in, JSON out, exit codes 0 / 1 / 2.

pub mod args;
pub mod commands;
pub mod convert;
pub mod io;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;
use serde_json::Value;

use args::{Cli, Command};
use io::{report, write_json, CliResult};

fn verb(command: &Command) -> &'static str {
    match command {
        Command::Kc { .. } => "kc",
        Command::Machine { .. } => "machine",
        Command::CompileTest { .. } => "compile-test",
        Command::ExtractTest { .. } => "extract-test",
        Command::Convert { .. } => "convert",
        Command::Compress { .. } => "compress",
        Command::Diagonalize { .. } => "diagonalize",
        Command::OmegaReduce { .. } => "omega-reduce",
        Command::Verify { .. } => "verify",
    }
}

/// Result value, and whether the command's own checks passed.
fn execute(command: &Command) -> CliResult<(Value, bool)> {
    let ok = |v| Ok((v, true));
    match command {
        Command::Kc { input, out } => ok(commands::kc(input, out.as_deref())?),
        Command::Machine { query } => ok(commands::machine(query)?),
        Command::CompileTest { input, mode, form, out } => {
            ok(commands::compile_test(input, (*mode).into(), *form, out.as_deref())?)
        }
        Command::ExtractTest { input, kind, depth, cuts, out } => {
            ok(commands::extract_test(input, *kind, *depth, cuts, out.as_deref())?)
        }
        Command::Convert { from, to, input, g, out } => {
            let route = convert::find_route(*from, *to)?;
            let converted = route.convert(input, g)?;
            if let Some(path) = out {
                write_json(path, &converted.output)?;
            }
            ok(converted.report)
        }
        Command::Compress { machine, x, count } => ok(commands::compress(machine, x, *count)?),
        Command::Diagonalize { construction } => ok(commands::diagonalize(construction)?),
        Command::OmegaReduce { machine, x, n, hits, bound } => {
            let opts = randlab::omega::OmegaOptions { hits: *hits, bound: *bound };
            ok(commands::omega_reduce(machine, x, *n, opts)?)
        }
        Command::Verify { suite, seed, scale, functional } => {
            let extra = match functional {
                Some(path) => Some(io::read_json(path)?),
                None => None,
            };
            let ctx = verify::SuiteContext { seed: *seed, scale: *scale, functional: extra };
            let report = verify::run(*suite, &ctx);
            let pass = report.failures() == 0;
            Ok((serde_json::to_value(&report).expect("reports are plain JSON"), pass))
        }
    }
}

/// Runs one command line, writing the report to `out` and errors to `err`.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let name = verb(&cli.command);
    match execute(&cli.command) {
        Ok((value, pass)) => {
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(&report(name, &value)).unwrap());
            if pass {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(err, "{}", serde_json::to_string_pretty(&e.to_json(name)).unwrap());
            e.code()
        }
    }
}

pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run(argv, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

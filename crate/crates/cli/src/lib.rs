//! Energy scans, pole listings and solver cross-checks for zero-range
//! potential targets, emitted as CSV or JSON.

// NaN must fail range checks, so `!(x > 0.0)` is intended.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod geometry_file;
pub mod table;

use std::io::Write;

use args::{Cli, Command, OutputArgs};
pub use commands::{cmd_ics, cmd_phases, cmd_poles, cmd_verify, VerifyReport};
pub use config::RunConfig;
pub use error::{CliError, Result};
pub use geometry_file::{parse_geometry, parse_geometry_file};
use serde::Serialize;
pub use table::{Cell, Table};

use crate::config::{Format, PresetName, Source};

fn emit<C: Serialize>(table: &Table, config: &C, format: Format, output: &OutputArgs, stdout: &mut dyn Write) -> Result<()> {
    let mut buf = Vec::new();
    match format {
        Format::Csv => table.write_csv(&mut buf)?,
        Format::Json => {
            table.write_json(config, &mut buf)?;
            buf.push(b'\n');
        }
    }
    match &output.out {
        Some(path) => std::fs::write(path, buf)?,
        None => stdout.write_all(&buf)?,
    }
    Ok(())
}

/// Run a parsed command line. Tables go to `--out` or `stdout`; reports and
/// diagnostics to `stderr`.
pub fn run(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Phases { target, grid, output, verify } => {
            let config = target.config("phases", &grid, output.format)?;
            let table = cmd_phases(&config)?;
            if verify {
                let r = cmd_verify(&config)?;
                writeln!(
                    stderr,
                    "verify: {} points, max |closed form - solver| in eta = {:e} (k = {}), multiplicities {}",
                    r.points,
                    r.max_deviation,
                    r.worst_k,
                    if r.multiplicities_agree { "agree" } else { "DIFFER" }
                )?;
            }
            emit(&table, &config, output.format, &output, stdout)
        }
        Command::Ics { target, grid, output, reference } => {
            let mut config = target.config("ics", &grid, output.format)?;
            if let (Some(path), Source::Preset(p)) = (&reference, &mut config.source) {
                if p.name != PresetName::SilaneDressed {
                    return Err(CliError::Config("--reference applies to silane-dressed".into()));
                }
                if p.b.is_none() {
                    let curve = commands::read_reference(path)?;
                    let (b, cost) = commands::fit_dressing_b(&curve, config.mode)?;
                    writeln!(stderr, "fitted b = {b} (log-residual {cost:e})")?;
                    p.b = Some(b);
                }
            }
            let table = cmd_ics(&config)?;
            emit(&table, &config, output.format, &output, stdout)
        }
        Command::Poles { l, alpha, output } => {
            let table = cmd_poles(l, alpha)?;
            let config = serde_json::json!({ "command": "poles", "l": l, "alpha": alpha });
            emit(&table, &config, output.format, &output, stdout)
        }
        Command::Verify { target, grid, tol } => {
            let config = target.config("verify", &grid, Format::Csv)?;
            let r = cmd_verify(&config)?;
            writeln!(
                stdout,
                "{}: {} points, max |closed form - solver| in eta = {:e} at k = {}, multiplicities {}",
                commands::source_label(&config),
                r.points,
                r.max_deviation,
                r.worst_k,
                if r.multiplicities_agree { "agree" } else { "differ" }
            )?;
            if !(r.max_deviation <= tol) || !r.multiplicities_agree {
                return Err(CliError::Verification { deviation: r.max_deviation, tolerance: tol });
            }
            Ok(())
        }
    }
}

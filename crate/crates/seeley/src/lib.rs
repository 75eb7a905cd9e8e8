//! Command-line front end for `seeley-core`: run configurations, grid
//! evaluation and CSV/JSON output.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod grid;
pub mod output;

use std::io::Write;

pub use commands::{run, Outcome, VerifyReport};
pub use error::{CliError, Result};

/// Environment variable holding the worker thread count.
pub const THREADS_VAR: &str = "SEELEY_THREADS";

/// Size the global thread pool from [`THREADS_VAR`], if set.
pub fn init_threads() -> Result<()> {
    let Ok(v) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| CliError::Config(format!("{THREADS_VAR}: `{v}` is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(format!("{THREADS_VAR}: {e}")))
}

/// Write the artifacts of `outcome`. Returns whether every check passed.
pub fn emit(outcome: &Outcome) -> Result<bool> {
    match outcome {
        Outcome::Table {
            table,
            metadata,
            output,
        } => {
            output::emit(table, metadata, output.as_deref())?;
            Ok(true)
        }
        Outcome::Report { report, output } => {
            let mut json = serde_json::to_vec_pretty(report)?;
            json.push(b'\n');
            match output {
                Some(path) => std::fs::write(path, &json).map_err(|e| CliError::io(path, e))?,
                None => std::io::stdout()
                    .lock()
                    .write_all(&json)
                    .map_err(|e| CliError::io("<stdout>", e))?,
            }
            Ok(report.passed)
        }
    }
}

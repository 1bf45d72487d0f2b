//! Command-line front end for the `trimode` library: point classification,
//! time traces, boundary sweeps, figure data and oracle verification.

// `!(x >= y)` forms are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
pub mod checks;
pub mod commands;
pub mod config;
pub mod csv;
pub mod error;
pub mod sweep;

pub use args::{Cli, Command};
pub use error::{CliError, CliResult};

use rayon::prelude::*;

pub fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Classify(a) => commands::classify::run(&a),
        Command::Evolve(a) => commands::evolve::run(&a),
        Command::Boundary(a) => commands::boundary::run(&a),
        Command::Figure(a) => commands::figure::run(&a),
        Command::Verify(a) => commands::verify::run(&a),
    }
}

/// Maps `f` over `items` on `jobs` workers (0 for one per core), keeping
/// input order.
pub fn par_map<T, R, F>(jobs: usize, items: &[T], f: F) -> CliResult<Vec<R>>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Domain(format!("cannot start {jobs} workers: {e}")))?;
    Ok(pool.install(|| items.par_iter().map(f).collect()))
}

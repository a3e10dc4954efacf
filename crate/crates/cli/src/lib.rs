//! Command-line harness: single runs, three-way benchmark tables, spectrum
//! export, multigrid runs and model-problem export.

pub mod bench;
pub mod config;
pub mod error;
pub mod mg;
pub mod pipeline;
pub mod provenance;

pub use bench::{bench_row, bench_table, format_table, BenchmarkRow, Cell, Manifest};
pub use config::{Computation, Disk, MatrixSource, Precond, Rhs, RunConfig};
pub use error::{exit, CliError, Stage};
pub use pipeline::{load_problem, projected_err, run, spectrum, Problem, RunReport};

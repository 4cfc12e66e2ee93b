//! Library side of the `vqsel` command: CSV ingestion, configuration and
//! the subcommand implementations, kept separate from argument parsing so
//! they can be driven directly from tests.

pub mod config;
pub mod ingest;
pub mod run;

pub use config::{DistanceKind, Formulation, KernelArg, RunConfig, SolverKind};
pub use ingest::{ingest_csv, read_matrix_csv};
pub use run::{baseline, build_problem, export_qubo, run, verify, CliError, Problem, RunResult};

//! QUBO and cardinality-constrained QBP instances, the penalty fold between
//! them, and exact and heuristic solvers.
//!
//! Matrices are stored symmetric. Constant offsets (such as the `λk²` left
//! over by the penalty expansion) are never stored; each operation states
//! which constant it drops.

mod anneal;
mod exhaustive;
mod export;
mod instance;

pub use anneal::{solve_sa, AnnealSchedule};
pub use exhaustive::{
    solve_constrained_exhaustive, solve_exhaustive, CONSTRAINED_MAX_SUBSETS, EXHAUSTIVE_MAX_VARS,
};
pub use export::{read_sparse, write_sparse};
pub use instance::{
    qbp_energy, qbp_to_qubo, qubo_energy, sufficient_penalty, QbpInstance, QuboInstance, Selection,
    SolveReport, SolveStats,
};

//! Prototype selection (hard vector quantization) as quadratic binary
//! optimization.
//!
//! Two formulations pick `k` prototypes out of a dataset: a k-medoids style
//! program balancing centrality against diversity, and a kernel-density
//! program minimizing the squared maximum mean discrepancy between the data
//! and the prototypes. Both are built from pairwise tables only
//! ([`kernels`]), folded into QUBOs with a cardinality penalty ([`qubo`]),
//! and coincide exactly for normalized kernels under the parameter map in
//! [`formulations::kde_equivalent_med_params`].

pub mod density;
pub mod error;
pub mod formulations;
pub mod kernels;
pub mod medoids;
mod numeric;
pub mod qubo;

pub use density::{kde_density, kde_density_subset, mmd_squared, MmdReport};
pub use error::{Error, Result};
pub use formulations::{
    build_kde_qbp, build_kde_qubo, build_med_qbp, build_med_qubo, complement_distance,
    kde_equivalent_med_params, verify_equivalence, EquivalenceReport, KdeParams, MedParams,
};
pub use kernels::{
    euclidean_distance_matrix, eval_kernel, kernel_matrix, kernel_to_distance, Dataset, DistanceMatrix,
    KernelMatrix, KernelSpec,
};
pub use medoids::{
    lloyd_from, lloyd_kmedoids, medoid_of, nearest_medoid_scatter, within_cluster_scatter, ClusterAssignment,
    LloydOutcome,
};
pub use qubo::{
    qbp_energy, qbp_to_qubo, qubo_energy, solve_constrained_exhaustive, solve_exhaustive, solve_sa,
    sufficient_penalty, AnnealSchedule, QbpInstance, QuboInstance, Selection, SolveReport, SolveStats,
};

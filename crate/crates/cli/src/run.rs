use std::fmt;

use serde::Serialize;
use vqsel_core::{
    build_kde_qbp, build_med_qbp, euclidean_distance_matrix, kernel_matrix, kernel_to_distance, lloyd_kmedoids,
    mmd_squared, nearest_medoid_scatter, qbp_to_qubo, solve_constrained_exhaustive, solve_exhaustive, solve_sa,
    sufficient_penalty, verify_equivalence, AnnealSchedule, Dataset, DistanceMatrix, EquivalenceReport, Error,
    KernelMatrix, KernelSpec, QbpInstance, QuboInstance, SolveStats,
};

use crate::config::{DistanceKind, Formulation, KernelArg, RunConfig, SolverKind};
use crate::ingest::{ingest_csv, read_matrix_csv};

pub const TOOL: &str = env!("CARGO_PKG_NAME");
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Io(String),
}

impl CliError {
    /// 1 for input and precondition problems, 2 when an exact solver's
    /// capacity is exceeded.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::Capacity(_)) => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => e.fmt(f),
            CliError::Io(msg) => f.write_str(msg),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub version: &'static str,
    pub seed: u64,
    pub n: usize,
    /// Echo of the configuration with `gamma` and `lambda` resolved.
    pub config: RunConfig,
    /// What `objective` measures.
    pub objective_kind: &'static str,
    pub stats: SolveStats,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunResult {
    pub selected_indices: Vec<usize>,
    pub objective: f64,
    pub feasible: bool,
    /// Null only when the solver selected nothing.
    pub mmd_squared: Option<f64>,
    /// Scatter of the selection used as medoids; null when no distance is
    /// available or nothing was selected.
    pub within_scatter: Option<f64>,
    pub equivalence: Option<EquivalenceReport>,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyResult {
    pub equivalence: EquivalenceReport,
    pub provenance: VerifyProvenance,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyProvenance {
    pub tool: &'static str,
    pub version: &'static str,
    pub n: usize,
    pub k: usize,
    pub kernel: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct BaselineResult {
    pub medoids: Vec<usize>,
    pub labels: Vec<usize>,
    pub scatter: f64,
    pub iterations: usize,
    pub converged: bool,
    pub scatter_trace: Vec<f64>,
    pub mmd_squared: f64,
    pub provenance: VerifyProvenance,
}

/// Everything derived from a config before solving.
#[derive(Debug, Clone)]
pub struct Problem {
    pub data: Option<Dataset>,
    pub kernel: KernelMatrix,
    pub distance: std::result::Result<DistanceMatrix, Error>,
    pub gamma: Option<f64>,
    pub qbp: QbpInstance,
    pub lambda: f64,
}

impl Problem {
    pub fn qubo(&self) -> Result<QuboInstance> {
        Ok(qbp_to_qubo(&self.qbp, self.lambda)?)
    }

    /// The config as it was effectively run.
    pub fn resolved_config(&self, config: &RunConfig) -> RunConfig {
        RunConfig {
            gamma: self.gamma,
            lambda: Some(self.lambda),
            ..config.clone()
        }
    }
}

fn load_kernel(config: &RunConfig) -> Result<(Option<Dataset>, KernelMatrix)> {
    let data = match &config.input_path {
        Some(path) => Some(ingest_csv(path, config.has_header)?),
        None => None,
    };
    let kernel = match (&config.kernel, &data) {
        (KernelArg::Precomputed(path), data) => {
            let m = read_matrix_csv(path)?;
            if let Some(d) = data {
                if d.len() != m.nrows() {
                    return Err(Error::Input(format!(
                        "precomputed kernel is {0}x{0} but the input has {1} points",
                        m.nrows(),
                        d.len()
                    ))
                    .into());
                }
            }
            KernelMatrix::from_matrix(m)?
        }
        (KernelArg::Rbf(h), Some(d)) => kernel_matrix(&KernelSpec::rbf(*h)?, d)?,
        (KernelArg::Laplacian(h), Some(d)) => kernel_matrix(&KernelSpec::laplacian(*h)?, d)?,
        (_, None) => {
            return Err(Error::Input(format!("kernel {} needs --input", config.kernel)).into());
        }
    };
    Ok((data, kernel))
}

fn load_distance(
    kind: DistanceKind,
    data: Option<&Dataset>,
    kernel: &KernelMatrix,
) -> std::result::Result<DistanceMatrix, Error> {
    match kind {
        DistanceKind::Kernel => kernel_to_distance(kernel),
        DistanceKind::Euclidean => data
            .map(euclidean_distance_matrix)
            .ok_or_else(|| Error::Input("euclidean distance needs --input".into())),
    }
}

/// Loads the data and builds the kernel, distance and constrained program.
pub fn build_problem(config: &RunConfig) -> Result<Problem> {
    let (data, kernel) = load_kernel(config)?;
    let n = kernel.n();
    let k = config.k;
    if k == 0 || k > n {
        return Err(Error::Input(format!("--k {k} must lie in [1, {n}]")).into());
    }
    let distance = load_distance(config.distance, data.as_ref(), &kernel);
    let (gamma, qbp) = match config.formulation {
        Formulation::Med => {
            let gamma = config.gamma.unwrap_or(2.0 * (k as f64 / n as f64));
            let d = distance.as_ref().map_err(|e| CliError::Core(e.clone()))?;
            (Some(gamma), build_med_qbp(d, gamma, k)?)
        }
        Formulation::Kde => {
            if config.gamma.is_some() {
                return Err(Error::Input("--gamma only applies to --formulation med".into()).into());
            }
            (None, build_kde_qbp(&kernel, k)?)
        }
    };
    let lambda = config.lambda.unwrap_or_else(|| sufficient_penalty(&qbp));
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::Input(format!("--lambda must be positive, got {lambda}")).into());
    }
    Ok(Problem {
        data,
        kernel,
        distance,
        gamma,
        qbp,
        lambda,
    })
}

/// `select`: build, solve and report.
pub fn run(config: &RunConfig) -> Result<RunResult> {
    let problem = build_problem(config)?;
    let k = config.k;
    let (report, objective_kind) = match config.solver {
        SolverKind::Constrained => (
            solve_constrained_exhaustive(&problem.qbp)?,
            "z'Az + b'z over the feasible set",
        ),
        SolverKind::Exhaustive => (
            solve_exhaustive(&problem.qubo()?)?,
            "z'Qz of the penalized QUBO (constant lambda*k^2 dropped)",
        ),
        SolverKind::Sa => {
            let q = problem.qubo()?;
            let schedule = AnnealSchedule::scaled_to(&q, config.sweeps, config.restarts);
            (
                solve_sa(&q, &schedule, config.seed)?,
                "z'Qz of the penalized QUBO (constant lambda*k^2 dropped)",
            )
        }
    };
    let indices = report.best.indices();
    let feasible = indices.len() == k;
    let mmd = if indices.is_empty() {
        None
    } else {
        Some(mmd_squared(&problem.kernel, &report.best)?.mmd_squared)
    };
    let within_scatter = match (&problem.distance, indices.is_empty()) {
        (Ok(d), false) => Some(nearest_medoid_scatter(d, &indices)?),
        _ => None,
    };
    let equivalence = if config.check_equivalence {
        let med_lambda = match config.formulation {
            Formulation::Med => problem.lambda,
            Formulation::Kde => problem.lambda + 1.0,
        };
        Some(verify_equivalence(&problem.kernel, k, med_lambda, config.tolerance)?)
    } else {
        None
    };
    Ok(RunResult {
        selected_indices: indices,
        objective: report.objective,
        feasible,
        mmd_squared: mmd,
        within_scatter,
        equivalence,
        provenance: Provenance {
            tool: TOOL,
            version: VERSION,
            seed: config.seed,
            n: problem.kernel.n(),
            config: problem.resolved_config(config),
            objective_kind,
            stats: report.stats,
        },
    })
}

fn short_provenance(config: &RunConfig, n: usize) -> VerifyProvenance {
    VerifyProvenance {
        tool: TOOL,
        version: VERSION,
        n,
        k: config.k,
        kernel: config.kernel.to_string(),
    }
}

/// `verify`: compares the MED QUBO on `1 − K` with the KDE QUBO on `K`.
/// `--lambda` is the MED penalty (default 2).
pub fn verify(config: &RunConfig) -> Result<VerifyResult> {
    let (_, kernel) = load_kernel(config)?;
    let med_lambda = config.lambda.unwrap_or(2.0);
    let equivalence = verify_equivalence(&kernel, config.k, med_lambda, config.tolerance)?;
    Ok(VerifyResult {
        equivalence,
        provenance: short_provenance(config, kernel.n()),
    })
}

/// `baseline`: Lloyd-style k-medoids on the configured distance.
pub fn baseline(config: &RunConfig) -> Result<BaselineResult> {
    let (data, kernel) = load_kernel(config)?;
    let d = load_distance(config.distance, data.as_ref(), &kernel)?;
    let out = lloyd_kmedoids(&d, config.k, config.seed, config.max_iter)?;
    let medoids = out.assignment.medoids;
    let sel = vqsel_core::Selection::from_indices(kernel.n(), &medoids)?;
    Ok(BaselineResult {
        mmd_squared: mmd_squared(&kernel, &sel)?.mmd_squared,
        labels: out.assignment.labels,
        scatter: out.assignment.scatter,
        iterations: out.iterations,
        converged: out.converged,
        scatter_trace: out.scatter_trace,
        provenance: short_provenance(config, kernel.n()),
        medoids,
    })
}

/// `export-qubo`: the penalized QUBO in sparse text form.
pub fn export_qubo(config: &RunConfig) -> Result<String> {
    let problem = build_problem(config)?;
    Ok(vqsel_core::qubo::write_sparse(&problem.qubo()?))
}

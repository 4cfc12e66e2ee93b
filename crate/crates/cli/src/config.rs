use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, ValueEnum};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Formulation {
    Med,
    Kde,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverKind {
    /// Penalized QUBO, all 2ⁿ assignments.
    Exhaustive,
    /// Cardinality-constrained QBP, all k-subsets.
    Constrained,
    /// Penalized QUBO, simulated annealing.
    Sa,
}

/// Dissimilarity used by the MED formulation and the scatter report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DistanceKind {
    /// `1 − K(x, y)`; needs a normalized kernel.
    Kernel,
    /// `‖x − y‖₂` on the input coordinates.
    Euclidean,
}

#[derive(Debug, Clone, PartialEq)]
pub enum KernelArg {
    Rbf(f64),
    Laplacian(f64),
    Precomputed(PathBuf),
}

impl FromStr for KernelArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (kind, value) = s
            .split_once(':')
            .ok_or_else(|| format!("expected rbf:H, laplacian:H or precomputed:PATH, got {s:?}"))?;
        let width = || {
            value
                .parse::<f64>()
                .ok()
                .filter(|h| h.is_finite() && *h > 0.0)
                .ok_or_else(|| format!("kernel width must be a positive number, got {value:?}"))
        };
        match kind {
            "rbf" => Ok(KernelArg::Rbf(width()?)),
            "laplacian" => Ok(KernelArg::Laplacian(width()?)),
            "precomputed" if !value.is_empty() => Ok(KernelArg::Precomputed(PathBuf::from(value))),
            _ => Err(format!("unknown kernel {s:?}")),
        }
    }
}

impl fmt::Display for KernelArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KernelArg::Rbf(h) => write!(f, "rbf:{h}"),
            KernelArg::Laplacian(h) => write!(f, "laplacian:{h}"),
            KernelArg::Precomputed(p) => write!(f, "precomputed:{}", p.display()),
        }
    }
}

impl Serialize for KernelArg {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for KernelArg {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct RunConfig {
    /// Numeric CSV, one point per row.
    #[arg(long = "input", value_name = "PATH")]
    pub input_path: Option<PathBuf>,
    /// Skip the first CSV row.
    #[arg(long = "header")]
    pub has_header: bool,
    /// rbf:H | laplacian:H | precomputed:PATH
    #[arg(long, default_value = "rbf:2")]
    pub kernel: KernelArg,
    /// Number of prototypes.
    #[arg(long)]
    pub k: usize,
    #[arg(long, value_enum, default_value_t = Formulation::Kde)]
    pub formulation: Formulation,
    #[arg(long, value_enum, default_value_t = DistanceKind::Kernel)]
    pub distance: DistanceKind,
    /// Centrality weight of the MED formulation (default 2k/n).
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Penalty weight (default: a bound that guarantees feasible minimizers).
    /// For `verify` this is the MED penalty and defaults to 2.
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long, value_enum, default_value_t = SolverKind::Constrained)]
    pub solver: SolverKind,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Annealing sweeps per restart.
    #[arg(long, default_value_t = 1000)]
    pub sweeps: usize,
    #[arg(long, default_value_t = 8)]
    pub restarts: usize,
    /// Lloyd iteration cap for `baseline`.
    #[arg(long, default_value_t = 100)]
    pub max_iter: usize,
    /// Also check that the MED and KDE QUBOs coincide on this kernel.
    #[arg(long)]
    pub check_equivalence: bool,
    #[arg(long, default_value_t = 1e-12)]
    pub tolerance: f64,
    /// Write the report here instead of stdout.
    #[arg(long = "output", value_name = "PATH")]
    pub output_path: Option<PathBuf>,
}

impl RunConfig {
    /// A config with every optional setting at its default.
    pub fn new(kernel: KernelArg, k: usize) -> Self {
        Self {
            input_path: None,
            has_header: false,
            kernel,
            k,
            formulation: Formulation::Kde,
            distance: DistanceKind::Kernel,
            gamma: None,
            lambda: None,
            solver: SolverKind::Constrained,
            seed: 0,
            sweeps: 1000,
            restarts: 8,
            max_iter: 100,
            check_equivalence: false,
            tolerance: 1e-12,
            output_path: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_arguments() {
        assert_eq!("rbf:2".parse::<KernelArg>().unwrap(), KernelArg::Rbf(2.0));
        assert_eq!("laplacian:0.5".parse::<KernelArg>().unwrap(), KernelArg::Laplacian(0.5));
        assert_eq!(
            "precomputed:k.csv".parse::<KernelArg>().unwrap(),
            KernelArg::Precomputed(PathBuf::from("k.csv"))
        );
        for bad in ["rbf", "rbf:0", "rbf:-1", "rbf:x", "cosine:1", "precomputed:"] {
            assert!(bad.parse::<KernelArg>().is_err(), "{bad}");
        }
        assert_eq!(KernelArg::Rbf(2.0).to_string(), "rbf:2");
    }
}

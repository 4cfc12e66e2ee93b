//! k-medoids (MED) and kernel-density (KDE) prototype-selection programs,
//! and the parameter map under which their QUBO matrices coincide.
//!
//! MED: `min −z⊤Dz + γ(D𝟙)⊤z  s.t. 𝟙⊤z = k`, folded with penalty `λ`:
//! `Q_MED = −D + λ𝟙𝟙⊤ + diag[γD𝟙 − 2λk𝟙]`.
//!
//! KDE: `min z⊤Kz − (2k/n)(K𝟙)⊤z  s.t. 𝟙⊤z = k`, folded with penalty `λ`:
//! `Q_KDE = K + λ𝟙𝟙⊤ − 2diag[(k/n)K𝟙 + λk𝟙]`.
//!
//! For a normalized kernel and `D = 𝟙𝟙⊤ − K`, choosing `γ = 2k/n` makes the
//! two QBPs differ by the constant `k²` on every feasible point, and makes
//! `Q_MED(λ) = Q_KDE(λ − 1)`.

use ndarray::{Array1, Array2};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernels::{DistanceMatrix, KernelMatrix};
use crate::numeric::ExactSum;
use crate::qubo::{QbpInstance, QuboInstance};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MedParams {
    /// Centrality weight relative to diversity (`β/α`).
    pub gamma: f64,
    pub k: usize,
    pub lambda: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KdeParams {
    pub k: usize,
    pub lambda: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EquivalenceReport {
    pub max_abs_diff: f64,
    pub gamma_used: f64,
    pub med_lambda: f64,
    pub kde_lambda: f64,
    pub passed: bool,
}

fn check_k(k: usize, n: usize) -> Result<()> {
    if k == 0 || k > n {
        return Err(Error::input(format!("k = {k} must lie in [1, {n}]")));
    }
    Ok(())
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::input(format!("{name} must be positive, got {v}")))
    }
}

// Σ_j scale·M_ij, correctly rounded.
fn scaled_row_sums(m: &Array2<f64>, scale: f64) -> Array1<f64> {
    m.rows()
        .into_iter()
        .map(|row| {
            let mut acc = ExactSum::new();
            for &v in row {
                acc.add_product(scale, v);
            }
            acc.value()
        })
        .collect()
}

pub fn build_med_qbp(d: &DistanceMatrix, gamma: f64, k: usize) -> Result<QbpInstance> {
    check_positive("gamma", gamma)?;
    check_k(k, d.n())?;
    let a = d.entries().mapv(|v| -v);
    let b = scaled_row_sums(d.entries(), gamma);
    QbpInstance::new(a, b, k)
}

pub fn build_med_qubo(d: &DistanceMatrix, p: &MedParams) -> Result<QuboInstance> {
    check_positive("gamma", p.gamma)?;
    check_positive("lambda", p.lambda)?;
    let n = d.n();
    check_k(p.k, n)?;
    let dm = d.entries();
    let two_k = 2.0 * p.k as f64;
    let mut q = dm.mapv(|v| -v + p.lambda);
    for i in 0..n {
        let mut acc = ExactSum::new();
        acc.add(-dm[[i, i]]);
        acc.add(p.lambda);
        for &v in dm.row(i) {
            acc.add_product(p.gamma, v);
        }
        acc.add_product(-p.lambda, two_k);
        q[[i, i]] = acc.value();
    }
    QuboInstance::new(q)
}

/// The KDE program scaled by `k²`. A feasible objective equals
/// `k²·MMD² − (k²/n²)𝟙⊤K𝟙`.
pub fn build_kde_qbp(kernel: &KernelMatrix, k: usize) -> Result<QbpInstance> {
    let n = kernel.n();
    check_k(k, n)?;
    let ratio = k as f64 / n as f64;
    let b = scaled_row_sums(kernel.entries(), -2.0 * ratio);
    QbpInstance::new(kernel.entries().clone(), b, k)
}

pub fn build_kde_qubo(kernel: &KernelMatrix, p: &KdeParams) -> Result<QuboInstance> {
    check_positive("lambda", p.lambda)?;
    let n = kernel.n();
    check_k(p.k, n)?;
    let km = kernel.entries();
    let ratio = p.k as f64 / n as f64;
    let two_k = 2.0 * p.k as f64;
    let mut q = km.mapv(|v| v + p.lambda);
    for i in 0..n {
        let mut acc = ExactSum::new();
        acc.add(km[[i, i]]);
        acc.add(p.lambda);
        for &v in km.row(i) {
            acc.add_product(-2.0 * ratio, v);
        }
        acc.add_product(-p.lambda, two_k);
        q[[i, i]] = acc.value();
    }
    QuboInstance::new(q)
}

/// `D = 𝟙𝟙⊤ − K` for a normalized kernel.
pub fn complement_distance(kernel: &KernelMatrix) -> Result<DistanceMatrix> {
    kernel.require_normalized("complement_distance")?;
    let n = kernel.n();
    let mut d = Array2::<f64>::ones((n, n)) - kernel.entries();
    d.diag_mut().fill(0.0);
    DistanceMatrix::from_matrix(d)
}

/// MED parameters reproducing the KDE program: `γ = 2k/n` and
/// `λ_KDE = λ_MED − 1`.
pub fn kde_equivalent_med_params(k: usize, n: usize, med_lambda: f64) -> Result<(f64, f64)> {
    check_k(k, n)?;
    if !(med_lambda.is_finite() && med_lambda > 1.0) {
        return Err(Error::input(format!(
            "MED penalty must exceed 1 so the KDE penalty stays positive, got {med_lambda}"
        )));
    }
    // x − 1 is exact for x ≥ 1
    Ok((2.0 * (k as f64 / n as f64), med_lambda - 1.0))
}

/// Builds `Q_MED` on `𝟙𝟙⊤ − K` and `Q_KDE` on `K` under
/// [`kde_equivalent_med_params`] and reports their largest entrywise gap.
pub fn verify_equivalence(
    kernel: &KernelMatrix,
    k: usize,
    med_lambda: f64,
    tolerance: f64,
) -> Result<EquivalenceReport> {
    kernel.require_normalized("verify_equivalence")?;
    let n = kernel.n();
    let (gamma, kde_lambda) = kde_equivalent_med_params(k, n, med_lambda)?;
    let d = complement_distance(kernel)?;
    let q_med = build_med_qubo(&d, &MedParams { gamma, k, lambda: med_lambda })?;
    let q_kde = build_kde_qubo(kernel, &KdeParams { k, lambda: kde_lambda })?;
    let max_abs_diff = q_med
        .matrix()
        .iter()
        .zip(q_kde.matrix().iter())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(EquivalenceReport {
        max_abs_diff,
        gamma_used: gamma,
        med_lambda,
        kde_lambda,
        passed: max_abs_diff <= tolerance,
    })
}

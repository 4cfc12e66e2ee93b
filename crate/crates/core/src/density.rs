//! Parzen-window density estimates and the squared maximum mean
//! discrepancy between the dataset and a selected prototype subset.
//!
//! Densities are plain kernel means, without any normalizing constant.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernels::{eval_kernel, Dataset, KernelMatrix, KernelSpec, MATRIX_TOLERANCE};
use crate::qubo::Selection;

/// `MMD² = term_ww − term_wd + term_dd` with
/// `term_ww = z⊤Kz / k²`, `term_wd = 2·𝟙⊤Kz / (kn)`, `term_dd = 𝟙⊤K𝟙 / n²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MmdReport {
    pub mmd_squared: f64,
    pub term_ww: f64,
    pub term_wd: f64,
    pub term_dd: f64,
}

/// `p_D(x) = (1/n) Σ_y K(x, y)`.
pub fn kde_density(spec: &KernelSpec, data: &Dataset, x: &[f64]) -> Result<f64> {
    let n = data.len();
    let mut total = 0.0;
    for i in 0..n {
        total += eval_kernel(spec, x, data.point(i))?;
    }
    Ok(total / n as f64)
}

/// `p_W(x) = (1/k) Σ_{y∈W} K(x, y)` over the selected points.
pub fn kde_density_subset(spec: &KernelSpec, data: &Dataset, sel: &Selection, x: &[f64]) -> Result<f64> {
    if sel.len() != data.len() {
        return Err(Error::input(format!(
            "selection has length {} but the dataset has {} points",
            sel.len(),
            data.len()
        )));
    }
    let chosen = sel.indices();
    if chosen.is_empty() {
        return Err(Error::input("density of an empty prototype set"));
    }
    let mut total = 0.0;
    for &i in &chosen {
        total += eval_kernel(spec, x, data.point(i))?;
    }
    Ok(total / chosen.len() as f64)
}

/// Squared MMD between the full sample and the selected subset, evaluated
/// entirely through kernel sums. Rows are summed sequentially, so the result
/// does not depend on thread scheduling.
pub fn mmd_squared(kernel: &KernelMatrix, sel: &Selection) -> Result<MmdReport> {
    let n = kernel.n();
    if sel.len() != n {
        return Err(Error::input(format!(
            "selection has length {} but the kernel is {n}x{n}",
            sel.len()
        )));
    }
    let chosen = sel.indices();
    if chosen.is_empty() {
        return Err(Error::input("MMD of an empty prototype set"));
    }
    let k = chosen.len() as f64;
    let nf = n as f64;
    let m = kernel.entries();

    let row_sums: Vec<f64> = m.rows().into_iter().map(|r| r.iter().sum()).collect();
    let dd: f64 = row_sums.iter().sum();
    let wd: f64 = chosen.iter().map(|&i| row_sums[i]).sum();
    let ww: f64 = chosen
        .iter()
        .map(|&i| chosen.iter().map(|&j| m[[i, j]]).sum::<f64>())
        .sum();

    let term_ww = ww / (k * k);
    let term_wd = 2.0 * wd / (k * nf);
    let term_dd = dd / (nf * nf);
    let raw = term_ww - term_wd + term_dd;
    if raw < -MATRIX_TOLERANCE {
        return Err(Error::Numerical(format!(
            "squared MMD came out as {raw}; the kernel matrix is not positive semidefinite"
        )));
    }
    Ok(MmdReport {
        mmd_squared: raw.max(0.0),
        term_ww,
        term_wd,
        term_dd,
    })
}

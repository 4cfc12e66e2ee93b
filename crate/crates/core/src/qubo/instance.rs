use ndarray::{Array1, Array2};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernels::MATRIX_TOLERANCE;
use crate::numeric::ExactSum;

/// Binary indicator vector `z` over the dataset; `z_i = 1` marks point `i`
/// as a prototype.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Selection {
    bits: Vec<bool>,
}

impl Selection {
    pub fn empty(n: usize) -> Self {
        Self {
            bits: vec![false; n],
        }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn from_indices(n: usize, indices: &[usize]) -> Result<Self> {
        let mut bits = vec![false; n];
        for &i in indices {
            if i >= n {
                return Err(Error::input(format!("index {i} out of range for n = {n}")));
            }
            bits[i] = true;
        }
        Ok(Self { bits })
    }

    /// Decodes the low `n` bits of `code`, bit `i` being `z_i`.
    pub fn from_code(n: usize, code: u64) -> Self {
        Self {
            bits: (0..n).map(|i| (code >> i) & 1 == 1).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, i: usize) -> bool {
        self.bits[i]
    }

    /// `𝟙⊤z`.
    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Selected indices in increasing order.
    pub fn indices(&self) -> Vec<usize> {
        self.bits
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
            .collect()
    }
}

/// `min z⊤Qz` over binary `z`, with `Q` symmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct QuboInstance {
    q: Array2<f64>,
}

impl QuboInstance {
    pub fn new(q: Array2<f64>) -> Result<Self> {
        check_symmetric("QUBO matrix", &q)?;
        Ok(Self { q })
    }

    pub fn matrix(&self) -> &Array2<f64> {
        &self.q
    }

    pub fn n(&self) -> usize {
        self.q.nrows()
    }

    pub fn into_matrix(self) -> Array2<f64> {
        self.q
    }
}

/// `min z⊤Az + b⊤z` subject to `𝟙⊤z = k`.
#[derive(Debug, Clone, PartialEq)]
pub struct QbpInstance {
    a: Array2<f64>,
    b: Array1<f64>,
    k: usize,
}

impl QbpInstance {
    pub fn new(a: Array2<f64>, b: Array1<f64>, k: usize) -> Result<Self> {
        check_symmetric("QBP quadratic part", &a)?;
        let n = a.nrows();
        if b.len() != n {
            return Err(Error::input(format!(
                "linear part has length {} but the quadratic part is {n}x{n}",
                b.len()
            )));
        }
        if let Some((i, v)) = b.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::input(format!("non-finite linear coefficient {v} at {i}")));
        }
        if k == 0 || k > n {
            return Err(Error::input(format!("cardinality k = {k} must lie in [1, {n}]")));
        }
        Ok(Self { a, b, k })
    }

    pub fn quadratic(&self) -> &Array2<f64> {
        &self.a
    }

    pub fn linear(&self) -> &Array1<f64> {
        &self.b
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.a.nrows()
    }
}

fn check_symmetric(what: &str, m: &Array2<f64>) -> Result<()> {
    let (r, c) = m.dim();
    if r != c {
        return Err(Error::input(format!("{what} must be square, got {r}x{c}")));
    }
    if let Some(((i, j), v)) = m.indexed_iter().find(|(_, v)| !v.is_finite()) {
        return Err(Error::input(format!("{what} has non-finite entry {v} at ({i}, {j})")));
    }
    for i in 0..r {
        for j in (i + 1)..r {
            if (m[[i, j]] - m[[j, i]]).abs() > MATRIX_TOLERANCE {
                return Err(Error::input(format!("{what} is not symmetric at ({i}, {j})")));
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveStats {
    pub evaluations: u64,
    pub restarts: u64,
    pub seed: u64,
    /// Seconds; the only nondeterministic field of a report.
    pub wall_time: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub best: Selection,
    /// Objective of `best`, without any dropped constant offset.
    pub objective: f64,
    /// `𝟙⊤z = k` for constrained solvers; always true for plain QUBOs.
    pub feasible: bool,
    pub stats: SolveStats,
}

fn check_len(expected: usize, z: &Selection) -> Result<()> {
    if z.len() != expected {
        return Err(Error::input(format!(
            "selection has length {} but the instance has {expected} variables",
            z.len()
        )));
    }
    Ok(())
}

/// `z⊤Qz`.
pub fn qubo_energy(q: &QuboInstance, z: &Selection) -> Result<f64> {
    check_len(q.n(), z)?;
    Ok(quadratic_form(&q.q, &z.indices()))
}

/// `z⊤Az + b⊤z`. Feasibility is not checked.
pub fn qbp_energy(p: &QbpInstance, z: &Selection) -> Result<f64> {
    check_len(p.n(), z)?;
    let idx = z.indices();
    let linear: f64 = idx.iter().map(|&i| p.b[i]).sum();
    Ok(quadratic_form(&p.a, &idx) + linear)
}

pub(crate) fn quadratic_form(m: &Array2<f64>, selected: &[usize]) -> f64 {
    selected
        .iter()
        .map(|&i| selected.iter().map(|&j| m[[i, j]]).sum::<f64>())
        .sum()
}

/// Folds the cardinality constraint into the objective as `λ(𝟙⊤z − k)²`:
/// `Q = A + λ𝟙𝟙⊤ + diag[b − 2λk𝟙]`.
///
/// The constant `λk²` is dropped, so for every binary `z`
/// `z⊤Qz = z⊤Az + b⊤z + λ(𝟙⊤z − k)² − λk²`.
pub fn qbp_to_qubo(p: &QbpInstance, lambda: f64) -> Result<QuboInstance> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::input(format!("penalty weight must be positive, got {lambda}")));
    }
    let n = p.n();
    let two_k = 2.0 * p.k as f64;
    let mut q = p.a.mapv(|a| a + lambda);
    for i in 0..n {
        let mut diag = ExactSum::new();
        diag.add(p.a[[i, i]]);
        diag.add(lambda);
        diag.add(p.b[i]);
        diag.add_product(-lambda, two_k);
        q[[i, i]] = diag.value();
    }
    Ok(QuboInstance { q })
}

/// A penalty weight that makes the QUBO's global minimizers feasible:
/// `λ* = 1 + Σ|A_ij| + Σ|b_i|`.
///
/// Flipping bit `i` changes `z⊤Az + b⊤z` by at most
/// `|A_ii| + |b_i| + 2Σ_{j≠i}|A_ij| ≤ λ* − 1`. From any infeasible `z` with
/// `|𝟙⊤z − k| = m`, `m` flips reach a feasible point, moving the objective by
/// at most `m(λ* − 1)` while the penalty drops by `λ*m² ≥ λ*m`.
pub fn sufficient_penalty(p: &QbpInstance) -> f64 {
    let a: f64 = p.a.iter().map(|v| v.abs()).sum();
    let b: f64 = p.b.iter().map(|v| v.abs()).sum();
    1.0 + a + b
}

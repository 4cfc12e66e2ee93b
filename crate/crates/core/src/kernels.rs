//! Mercer kernels, pairwise similarity/dissimilarity tables, and the
//! kernel-induced distance `D(x, y) = 1 − K(x, y)` for normalized kernels.
//!
//! The feature map behind a kernel is never materialized; everything
//! downstream works from the `n × n` tables built here.

use std::sync::Arc;

use ndarray::{Array1, Array2, ArrayView1};
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Symmetry, unit-diagonal and clamping tolerance for the pairwise tables.
pub const MATRIX_TOLERANCE: f64 = 1e-12;

/// `n` points in `d`-dimensional real space. Row `i` is point `x^i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    points: Array2<f64>,
}

impl Dataset {
    pub fn new(points: Array2<f64>) -> Result<Self> {
        let (n, d) = points.dim();
        if n == 0 || d == 0 {
            return Err(Error::input(format!(
                "dataset must have at least one point and one coordinate, got {n}x{d}"
            )));
        }
        if let Some(((i, j), v)) = points.indexed_iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::input(format!(
                "non-finite coordinate {v} at point {i}, dimension {j}"
            )));
        }
        Ok(Self {
            points: points.as_standard_layout().into_owned(),
        })
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        let d = rows.first().map_or(0, Vec::len);
        if let Some((i, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != d) {
            return Err(Error::input(format!(
                "point {i} has {} coordinates, expected {d}",
                row.len()
            )));
        }
        let flat: Vec<f64> = rows.into_iter().flatten().collect();
        let points = Array2::from_shape_vec((n, d), flat)
            .map_err(|e| Error::input(format!("bad dataset shape: {e}")))?;
        Self::new(points)
    }

    pub fn len(&self) -> usize {
        self.points.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.points.nrows() == 0
    }

    pub fn dim(&self) -> usize {
        self.points.ncols()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        self.points
            .row(i)
            .to_slice()
            .expect("dataset rows are stored contiguously")
    }

    pub fn points(&self) -> &Array2<f64> {
        &self.points
    }
}

/// Kernel choice. `Rbf` is `exp(−‖x−y‖² / h)`, `Laplacian` is
/// `exp(−‖x−y‖₁ / h)`; both satisfy `K(x, x) = 1`.
#[derive(Debug, Clone, PartialEq)]
pub enum KernelSpec {
    Rbf { bandwidth: f64 },
    Laplacian { scale: f64 },
    Precomputed(Arc<Array2<f64>>),
}

impl KernelSpec {
    pub fn rbf(bandwidth: f64) -> Result<Self> {
        check_width("RBF bandwidth", bandwidth)?;
        Ok(KernelSpec::Rbf { bandwidth })
    }

    pub fn laplacian(scale: f64) -> Result<Self> {
        check_width("Laplacian scale", scale)?;
        Ok(KernelSpec::Laplacian { scale })
    }

    pub fn precomputed(matrix: Array2<f64>) -> Self {
        KernelSpec::Precomputed(Arc::new(matrix))
    }

    pub fn is_parametric(&self) -> bool {
        !matches!(self, KernelSpec::Precomputed(_))
    }

    fn validate(&self) -> Result<()> {
        match *self {
            KernelSpec::Rbf { bandwidth } => check_width("RBF bandwidth", bandwidth),
            KernelSpec::Laplacian { scale } => check_width("Laplacian scale", scale),
            KernelSpec::Precomputed(_) => Ok(()),
        }
    }

    // Caller guarantees matching dimensions, finite coordinates, parametric kind.
    fn eval_unchecked(&self, x: &[f64], y: &[f64]) -> f64 {
        match *self {
            KernelSpec::Rbf { bandwidth } => {
                let sq: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
                (-sq / bandwidth).exp()
            }
            KernelSpec::Laplacian { scale } => {
                let l1: f64 = x.iter().zip(y).map(|(a, b)| (a - b).abs()).sum();
                (-l1 / scale).exp()
            }
            KernelSpec::Precomputed(_) => unreachable!("precomputed kernels have no pointwise form"),
        }
    }
}

fn check_width(what: &str, h: f64) -> Result<()> {
    if h.is_finite() && h > 0.0 {
        Ok(())
    } else {
        Err(Error::input(format!("{what} must be a positive finite number, got {h}")))
    }
}

/// Evaluates a parametric kernel at a pair of points.
pub fn eval_kernel(spec: &KernelSpec, x: &[f64], y: &[f64]) -> Result<f64> {
    spec.validate()?;
    if !spec.is_parametric() {
        return Err(Error::input(
            "a precomputed kernel cannot be evaluated at arbitrary points",
        ));
    }
    if x.len() != y.len() {
        return Err(Error::input(format!(
            "dimension mismatch: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::input("non-finite coordinate in kernel argument"));
    }
    Ok(spec.eval_unchecked(x, y))
}

/// Symmetric `n × n` kernel table; `normalized` records whether every
/// diagonal entry is 1 within [`MATRIX_TOLERANCE`].
#[derive(Debug, Clone, PartialEq)]
pub struct KernelMatrix {
    entries: Array2<f64>,
    normalized: bool,
}

impl KernelMatrix {
    /// Validates an externally supplied table (square, finite, symmetric).
    pub fn from_matrix(entries: Array2<f64>) -> Result<Self> {
        check_square_symmetric("kernel matrix", &entries)?;
        let normalized = first_non_unit_diagonal(&entries).is_none();
        Ok(Self {
            entries,
            normalized,
        })
    }

    pub fn entries(&self) -> &Array2<f64> {
        &self.entries
    }

    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Index of the first diagonal entry that is not 1, if any.
    pub fn first_non_unit_diagonal(&self) -> Option<usize> {
        first_non_unit_diagonal(&self.entries)
    }

    pub(crate) fn require_normalized(&self, context: &str) -> Result<()> {
        match self.first_non_unit_diagonal() {
            None => Ok(()),
            Some(i) => Err(Error::Precondition(format!(
                "{context} requires a normalized kernel, but K[{i}][{i}] = {}",
                self.entries[[i, i]]
            ))),
        }
    }
}

fn first_non_unit_diagonal(m: &Array2<f64>) -> Option<usize> {
    m.diag()
        .iter()
        .position(|v| (v - 1.0).abs() > MATRIX_TOLERANCE)
}

fn check_square_symmetric(what: &str, m: &Array2<f64>) -> Result<()> {
    let (r, c) = m.dim();
    if r != c || r == 0 {
        return Err(Error::input(format!("{what} must be square and non-empty, got {r}x{c}")));
    }
    if let Some(((i, j), v)) = m.indexed_iter().find(|(_, v)| !v.is_finite()) {
        return Err(Error::input(format!("{what} has non-finite entry {v} at ({i}, {j})")));
    }
    for i in 0..r {
        for j in (i + 1)..r {
            if (m[[i, j]] - m[[j, i]]).abs() > MATRIX_TOLERANCE {
                return Err(Error::input(format!(
                    "{what} is not symmetric at ({i}, {j}): {} vs {}",
                    m[[i, j]],
                    m[[j, i]]
                )));
            }
        }
    }
    Ok(())
}

/// Builds `K[i][j] = K(x^i, x^j)`. Only the upper triangle is evaluated and
/// then mirrored, so the result is exactly symmetric. Precomputed tables are
/// validated and passed through.
pub fn kernel_matrix(spec: &KernelSpec, data: &Dataset) -> Result<KernelMatrix> {
    spec.validate()?;
    let n = data.len();
    if let KernelSpec::Precomputed(m) = spec {
        if m.nrows() != n {
            return Err(Error::input(format!(
                "precomputed kernel is {}x{} but the dataset has {n} points",
                m.nrows(),
                m.ncols()
            )));
        }
        return KernelMatrix::from_matrix((**m).clone());
    }
    let upper: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let xi = data.point(i);
            (i..n)
                .map(|j| spec.eval_unchecked(xi, data.point(j)))
                .collect()
        })
        .collect();
    let mut entries = Array2::zeros((n, n));
    for (i, row) in upper.iter().enumerate() {
        for (offset, &v) in row.iter().enumerate() {
            let j = i + offset;
            entries[[i, j]] = v;
            entries[[j, i]] = v;
        }
    }
    let normalized = first_non_unit_diagonal(&entries).is_none();
    Ok(KernelMatrix {
        entries,
        normalized,
    })
}

/// Symmetric, nonnegative, zero-diagonal dissimilarity table.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    entries: Array2<f64>,
}

impl DistanceMatrix {
    /// Validates a table; negatives down to `−1e−12` are clamped to zero.
    pub fn from_matrix(mut entries: Array2<f64>) -> Result<Self> {
        check_square_symmetric("distance matrix", &entries)?;
        for ((i, j), v) in entries.indexed_iter_mut() {
            if i == j && v.abs() > MATRIX_TOLERANCE {
                return Err(Error::input(format!(
                    "distance matrix has nonzero diagonal {v} at index {i}"
                )));
            }
            if *v < -MATRIX_TOLERANCE {
                return Err(Error::input(format!(
                    "distance matrix has negative entry {v} at ({i}, {j})"
                )));
            }
            if *v < 0.0 || i == j {
                *v = 0.0;
            }
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &Array2<f64> {
        &self.entries
    }

    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[[i, j]]
    }

    pub fn row(&self, i: usize) -> ArrayView1<'_, f64> {
        self.entries.row(i)
    }

    /// `D·𝟙`.
    pub fn row_sums(&self) -> Array1<f64> {
        self.entries.sum_axis(ndarray::Axis(1))
    }
}

/// `D(x, y) = 1 − K(x, y)`, half the squared feature-space distance under a
/// normalized kernel. With `RBF(h = 2)` this is Welsch's loss
/// `1 − exp(−‖x−y‖²/2)`.
pub fn kernel_to_distance(kernel: &KernelMatrix) -> Result<DistanceMatrix> {
    kernel.require_normalized("kernel_to_distance")?;
    let mut d = kernel.entries.mapv(|k| 1.0 - k);
    d.diag_mut().fill(0.0);
    DistanceMatrix::from_matrix(d)
}

/// Pairwise Euclidean distances `‖x^i − x^j‖₂`.
pub fn euclidean_distance_matrix(data: &Dataset) -> DistanceMatrix {
    let n = data.len();
    let mut entries = Array2::zeros((n, n));
    for i in 0..n {
        for j in (i + 1)..n {
            let sq: f64 = data
                .point(i)
                .iter()
                .zip(data.point(j))
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            let v = sq.sqrt();
            entries[[i, j]] = v;
            entries[[j, i]] = v;
        }
    }
    DistanceMatrix { entries }
}

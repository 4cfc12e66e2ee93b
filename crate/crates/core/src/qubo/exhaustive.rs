//! Ground-truth solvers by complete enumeration.
//!
//! Ties (energies equal up to [`TIE_TOLERANCE`], relative) go to the
//! selection with the smallest integer value when `z` is read little-endian,
//! `z_0` being the least significant bit.

use std::cmp::Ordering;
use std::time::Instant;

use rayon::prelude::*;

use super::instance::{qbp_energy, qubo_energy, QbpInstance, QuboInstance, Selection, SolveReport, SolveStats};
use crate::error::{Error, Result};
use crate::numeric::binomial;

pub const EXHAUSTIVE_MAX_VARS: usize = 24;
pub const CONSTRAINED_MAX_SUBSETS: u128 = 5_000_000;
pub const TIE_TOLERANCE: f64 = 1e-10;

// Gray-code runs longer than this are re-anchored with a full evaluation.
const CHUNK_BITS: usize = 16;

fn ties(a: f64, b: f64) -> bool {
    (a - b).abs() <= TIE_TOLERANCE * (1.0 + a.abs().max(b.abs()))
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    energy: f64,
    code: u64,
}

impl Candidate {
    fn beats(&self, other: &Candidate) -> bool {
        if ties(self.energy, other.energy) {
            self.code < other.code
        } else {
            self.energy < other.energy
        }
    }
}

/// Global minimizer of `z⊤Qz` over all `2ⁿ` assignments, `n ≤ 24`.
pub fn solve_exhaustive(q: &QuboInstance) -> Result<SolveReport> {
    let n = q.n();
    if n > EXHAUSTIVE_MAX_VARS {
        return Err(Error::Capacity(format!(
            "exhaustive search supports at most {EXHAUSTIVE_MAX_VARS} variables, instance has {n}"
        )));
    }
    let start = Instant::now();
    let low = n.min(CHUNK_BITS);
    let high = n - low;
    let best = (0..1u64 << high)
        .into_par_iter()
        .map(|prefix| scan_chunk(q, low, prefix))
        .collect::<Vec<_>>()
        .into_iter()
        .reduce(|acc, c| if c.beats(&acc) { c } else { acc })
        .expect("at least one chunk");
    let selection = Selection::from_code(n, best.code);
    let objective = qubo_energy(q, &selection)?;
    Ok(SolveReport {
        best: selection,
        objective,
        feasible: true,
        stats: SolveStats {
            evaluations: 1u64 << n,
            restarts: 1,
            seed: 0,
            wall_time: start.elapsed().as_secs_f64(),
        },
    })
}

fn scan_chunk(q: &QuboInstance, low: usize, prefix: u64) -> Candidate {
    let m = q.matrix();
    let n = q.n();
    let mut code = prefix << low;
    let mut z: Vec<bool> = (0..n).map(|i| (code >> i) & 1 == 1).collect();
    // field[i] = Σ_j Q_ij z_j
    let mut field: Vec<f64> = (0..n)
        .map(|i| (0..n).filter(|&j| z[j]).map(|j| m[[i, j]]).sum())
        .collect();
    let mut energy: f64 = (0..n).filter(|&i| z[i]).map(|i| field[i]).sum();
    let mut best = Candidate { energy, code };
    for step in 1u64..(1u64 << low) {
        let bit = step.trailing_zeros() as usize;
        let qbb = m[[bit, bit]];
        let sign = if z[bit] { -1.0 } else { 1.0 };
        let others = field[bit] - if z[bit] { qbb } else { 0.0 };
        energy += sign * (qbb + 2.0 * others);
        for (j, f) in field.iter_mut().enumerate() {
            *f += sign * m[[j, bit]];
        }
        z[bit] = !z[bit];
        code ^= 1 << bit;
        let cand = Candidate { energy, code };
        if cand.beats(&best) {
            best = cand;
        }
    }
    best
}

/// Little-endian integer order of two equal-size index sets (ascending).
fn little_endian_cmp(a: &[usize], b: &[usize]) -> Ordering {
    for (x, y) in a.iter().rev().zip(b.iter().rev()) {
        match x.cmp(y) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

/// Global minimizer of `z⊤Az + b⊤z` over the `C(n, k)` feasible points.
pub fn solve_constrained_exhaustive(p: &QbpInstance) -> Result<SolveReport> {
    let (n, k) = (p.n(), p.k());
    let subsets = binomial(n, k);
    if subsets > CONSTRAINED_MAX_SUBSETS {
        return Err(Error::Capacity(format!(
            "C({n}, {k}) = {subsets} feasible points exceeds the limit of {CONSTRAINED_MAX_SUBSETS}"
        )));
    }
    let start = Instant::now();
    let mut search = SubsetSearch {
        p,
        current: Vec::with_capacity(k),
        best: Vec::new(),
        best_energy: f64::INFINITY,
        visited: 0,
    };
    search.descend(0, 0.0);
    let selection = Selection::from_indices(n, &search.best)?;
    let objective = qbp_energy(p, &selection)?;
    Ok(SolveReport {
        best: selection,
        objective,
        feasible: true,
        stats: SolveStats {
            evaluations: search.visited,
            restarts: 1,
            seed: 0,
            wall_time: start.elapsed().as_secs_f64(),
        },
    })
}

struct SubsetSearch<'a> {
    p: &'a QbpInstance,
    current: Vec<usize>,
    best: Vec<usize>,
    best_energy: f64,
    visited: u64,
}

impl SubsetSearch<'_> {
    fn descend(&mut self, from: usize, energy: f64) {
        let (n, k) = (self.p.n(), self.p.k());
        if self.current.len() == k {
            self.visited += 1;
            let better = if self.best.is_empty() {
                true
            } else if ties(energy, self.best_energy) {
                little_endian_cmp(&self.current, &self.best) == Ordering::Less
            } else {
                energy < self.best_energy
            };
            if better {
                self.best.clone_from(&self.current);
                self.best_energy = energy;
            }
            return;
        }
        let remaining = k - self.current.len();
        let a = self.p.quadratic();
        let b = self.p.linear();
        for i in from..=(n - remaining) {
            let cross: f64 = self.current.iter().map(|&j| a[[i, j]]).sum();
            let added = b[i] + a[[i, i]] + 2.0 * cross;
            self.current.push(i);
            self.descend(i + 1, energy + added);
            self.current.pop();
        }
    }
}

//! Single-bit-flip Metropolis simulated annealing for plain QUBOs.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::instance::{quadratic_form, QuboInstance, Selection, SolveReport, SolveStats};
use crate::error::{Error, Result};

/// Geometric cooling from `t_start` to `t_end` over `sweeps` sweeps, repeated
/// from `restarts` independent random starts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnnealSchedule {
    pub t_start: f64,
    pub t_end: f64,
    pub sweeps: usize,
    pub restarts: usize,
}

impl Default for AnnealSchedule {
    fn default() -> Self {
        Self {
            t_start: 10.0,
            t_end: 1e-3,
            sweeps: 1000,
            restarts: 8,
        }
    }
}

impl AnnealSchedule {
    /// Temperatures scaled to the instance: `t_start` is half the largest
    /// possible single-flip energy change, `t_end` four orders below it.
    pub fn scaled_to(q: &QuboInstance, sweeps: usize, restarts: usize) -> Self {
        let m = q.matrix();
        let widest = (0..q.n())
            .map(|i| {
                let row: f64 = m.row(i).iter().map(|v| v.abs()).sum();
                2.0 * row - m[[i, i]].abs()
            })
            .fold(0.0, f64::max);
        let t_start = if widest > 0.0 { 0.5 * widest } else { 1.0 };
        Self {
            t_start,
            t_end: t_start * 1e-4,
            sweeps,
            restarts,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_end.is_finite() && self.t_end > 0.0 && self.t_start.is_finite() && self.t_start > self.t_end) {
            return Err(Error::input(format!(
                "annealing temperatures need t_start > t_end > 0, got {} and {}",
                self.t_start, self.t_end
            )));
        }
        if self.sweeps == 0 || self.restarts == 0 {
            return Err(Error::input("annealing needs at least one sweep and one restart"));
        }
        Ok(())
    }

    fn temperature(&self, sweep: usize) -> f64 {
        if self.sweeps == 1 {
            return self.t_end;
        }
        let frac = sweep as f64 / (self.sweeps - 1) as f64;
        self.t_start * (self.t_end / self.t_start).powf(frac)
    }
}

#[derive(Debug, Clone)]
pub(crate) struct RestartOutcome {
    pub best: Vec<bool>,
    pub best_energy: f64,
    pub last: Vec<bool>,
    pub last_energy: f64,
}

pub(crate) fn anneal_once(q: &QuboInstance, schedule: &AnnealSchedule, seed: u64) -> RestartOutcome {
    let m = q.matrix();
    let n = q.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut z: Vec<bool> = (0..n).map(|_| rng.gen::<bool>()).collect();
    let mut field: Vec<f64> = (0..n)
        .map(|i| (0..n).filter(|&j| z[j]).map(|j| m[[i, j]]).sum())
        .collect();
    let mut energy: f64 = (0..n).filter(|&i| z[i]).map(|i| field[i]).sum();
    let mut best = z.clone();
    let mut best_energy = energy;

    for sweep in 0..schedule.sweeps {
        let t = schedule.temperature(sweep);
        for i in 0..n {
            let qii = m[[i, i]];
            let sign = if z[i] { -1.0 } else { 1.0 };
            let others = field[i] - if z[i] { qii } else { 0.0 };
            let delta = sign * (qii + 2.0 * others);
            // draw unconditionally so the random stream does not depend on delta
            let u: f64 = rng.gen();
            if delta <= 0.0 || u < (-delta / t).exp() {
                z[i] = !z[i];
                energy += delta;
                for (j, f) in field.iter_mut().enumerate() {
                    *f += sign * m[[j, i]];
                }
                if energy < best_energy {
                    best_energy = energy;
                    best.clone_from(&z);
                }
            }
        }
    }
    RestartOutcome {
        best,
        best_energy,
        last: z,
        last_energy: energy,
    }
}

/// Anneals `schedule.restarts` independent chains in parallel. Restart `r`
/// is seeded with `seed + r`, so the report depends only on the instance,
/// the schedule and `seed`.
pub fn solve_sa(q: &QuboInstance, schedule: &AnnealSchedule, seed: u64) -> Result<SolveReport> {
    schedule.validate()?;
    let start = Instant::now();
    let n = q.n();
    let outcomes: Vec<(Vec<bool>, f64)> = (0..schedule.restarts as u64)
        .into_par_iter()
        .map(|r| {
            let out = anneal_once(q, schedule, seed.wrapping_add(r));
            let full = |bits: &[bool]| {
                let idx: Vec<usize> = (0..n).filter(|&i| bits[i]).collect();
                quadratic_form(q.matrix(), &idx)
            };
            debug_assert!((out.last_energy - full(&out.last)).abs() <= 1e-9 * (1.0 + out.last_energy.abs()));
            let objective = full(&out.best);
            debug_assert!((out.best_energy - objective).abs() <= 1e-9 * (1.0 + objective.abs()));
            (out.best, objective)
        })
        .collect();
    let (bits, objective) = outcomes
        .into_iter()
        .reduce(|acc, cand| if cand.1 < acc.1 { cand } else { acc })
        .expect("at least one restart");
    Ok(SolveReport {
        best: Selection::from_bits(bits),
        objective,
        feasible: true,
        stats: SolveStats {
            evaluations: (schedule.restarts * schedule.sweeps * n) as u64,
            restarts: schedule.restarts as u64,
            seed,
            wall_time: start.elapsed().as_secs_f64(),
        },
    })
}

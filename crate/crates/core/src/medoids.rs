//! Alternating (Lloyd-style) k-medoids and the within-cluster scatter, the
//! non-QUBO baseline.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernels::DistanceMatrix;

/// `medoids` are sorted ascending; `labels[i]` is a position in `medoids`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusterAssignment {
    pub medoids: Vec<usize>,
    pub labels: Vec<usize>,
    pub scatter: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LloydOutcome {
    pub assignment: ClusterAssignment,
    pub iterations: usize,
    pub converged: bool,
    /// Scatter after the initial assignment and after every iteration.
    pub scatter_trace: Vec<f64>,
}

/// Member of `cluster` with the smallest distance sum to the other members;
/// ties go to the smallest index.
pub fn medoid_of(d: &DistanceMatrix, cluster: &[usize]) -> Result<usize> {
    if cluster.is_empty() {
        return Err(Error::input("medoid of an empty cluster"));
    }
    if let Some(&bad) = cluster.iter().find(|&&i| i >= d.n()) {
        return Err(Error::input(format!("cluster member {bad} out of range for n = {}", d.n())));
    }
    let mut best = (f64::INFINITY, usize::MAX);
    for &y in cluster {
        let cost: f64 = cluster.iter().map(|&x| d.get(x, y)).sum();
        if cost < best.0 || (cost == best.0 && y < best.1) {
            best = (cost, y);
        }
    }
    Ok(best.1)
}

/// `Σ_i Σ_{x∈C_i} D(x, m_i)`.
pub fn within_cluster_scatter(d: &DistanceMatrix, medoids: &[usize], labels: &[usize]) -> Result<f64> {
    if labels.len() != d.n() {
        return Err(Error::input(format!(
            "{} labels for {} points",
            labels.len(),
            d.n()
        )));
    }
    if let Some(&m) = medoids.iter().find(|&&m| m >= d.n()) {
        return Err(Error::input(format!("medoid {m} out of range")));
    }
    let mut total = 0.0;
    for (i, &label) in labels.iter().enumerate() {
        let m = *medoids
            .get(label)
            .ok_or_else(|| Error::input(format!("label {label} of point {i} exceeds k = {}", medoids.len())))?;
        total += d.get(i, m);
    }
    Ok(total)
}

/// Scatter when every point goes to its nearest medoid.
pub fn nearest_medoid_scatter(d: &DistanceMatrix, medoids: &[usize]) -> Result<f64> {
    if medoids.is_empty() {
        return Err(Error::input("no medoids"));
    }
    let labels = assign(d, medoids);
    within_cluster_scatter(d, medoids, &labels)
}

// Nearest medoid with ties to the earlier (smaller-index) medoid; a medoid
// always labels itself so no cluster is ever empty.
fn assign(d: &DistanceMatrix, medoids: &[usize]) -> Vec<usize> {
    (0..d.n())
        .map(|i| {
            if let Some(pos) = medoids.iter().position(|&m| m == i) {
                return pos;
            }
            let mut best = 0;
            for (pos, &m) in medoids.iter().enumerate().skip(1) {
                if d.get(i, m) < d.get(i, medoids[best]) {
                    best = pos;
                }
            }
            best
        })
        .collect()
}

fn update(d: &DistanceMatrix, medoids: &[usize], labels: &[usize]) -> Vec<usize> {
    let mut clusters = vec![Vec::new(); medoids.len()];
    for (i, &l) in labels.iter().enumerate() {
        clusters[l].push(i);
    }
    let mut next: Vec<usize> = clusters
        .iter()
        .map(|c| medoid_of(d, c).expect("clusters contain their medoid"))
        .collect();
    next.sort_unstable();
    next
}

/// Lloyd-style k-medoids from a uniformly random (seeded) initial k-subset.
/// Stops when the medoid set repeats or after `max_iter` iterations.
pub fn lloyd_kmedoids(d: &DistanceMatrix, k: usize, seed: u64, max_iter: usize) -> Result<LloydOutcome> {
    let n = d.n();
    if k == 0 || k > n {
        return Err(Error::input(format!("k = {k} must lie in [1, {n}]")));
    }
    if max_iter == 0 {
        return Err(Error::input("max_iter must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut medoids = sample(&mut rng, n, k).into_vec();
    medoids.sort_unstable();
    lloyd_from(d, medoids, max_iter)
}

/// Lloyd iterations from a given initial medoid set.
pub fn lloyd_from(d: &DistanceMatrix, mut medoids: Vec<usize>, max_iter: usize) -> Result<LloydOutcome> {
    medoids.sort_unstable();
    medoids.dedup();
    if medoids.is_empty() || medoids.iter().any(|&m| m >= d.n()) {
        return Err(Error::input("initial medoids must be distinct, in range and non-empty"));
    }
    let mut labels = assign(d, &medoids);
    let mut trace = vec![within_cluster_scatter(d, &medoids, &labels)?];
    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iter {
        iterations += 1;
        let next = update(d, &medoids, &labels);
        if next == medoids {
            converged = true;
            trace.push(*trace.last().expect("trace starts non-empty"));
            break;
        }
        medoids = next;
        labels = assign(d, &medoids);
        trace.push(within_cluster_scatter(d, &medoids, &labels)?);
    }
    let scatter = *trace.last().expect("trace starts non-empty");
    Ok(LloydOutcome {
        assignment: ClusterAssignment {
            medoids,
            labels,
            scatter,
        },
        iterations,
        converged,
        scatter_trace: trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{euclidean_distance_matrix, Dataset};
    use ndarray::array;

    fn line3() -> DistanceMatrix {
        DistanceMatrix::from_matrix(array![[0.0, 1.0, 2.0], [1.0, 0.0, 1.0], [2.0, 1.0, 0.0]]).unwrap()
    }

    fn two_pairs() -> DistanceMatrix {
        let data = Dataset::from_rows(vec![vec![0.0], vec![0.1], vec![10.0], vec![10.1]]).unwrap();
        euclidean_distance_matrix(&data)
    }

    #[test]
    fn medoid_examples() {
        let d = line3();
        assert_eq!(medoid_of(&d, &[2]).unwrap(), 2);
        assert_eq!(medoid_of(&d, &[0, 1, 2]).unwrap(), 1);
        assert_eq!(medoid_of(&d, &[2, 1]).unwrap(), 1);
        assert_eq!(medoid_of(&d, &[0, 2]).unwrap(), 0);
        assert_eq!(medoid_of(&d, &[2, 0]).unwrap(), 0);
        assert!(medoid_of(&d, &[]).is_err());
    }

    #[test]
    fn scatter_examples() {
        let d = line3();
        assert_eq!(within_cluster_scatter(&d, &[0, 1, 2], &[0, 1, 2]).unwrap(), 0.0);
        assert_eq!(within_cluster_scatter(&d, &[1], &[0, 0, 0]).unwrap(), 2.0);
        assert_eq!(within_cluster_scatter(&d, &[0], &[0, 0, 0]).unwrap(), 3.0);
        assert!(within_cluster_scatter(&d, &[0], &[0, 1, 0]).is_err());
        assert!(within_cluster_scatter(&d, &[0], &[0, 0]).is_err());
    }

    #[test]
    fn every_point_a_medoid() {
        let out = lloyd_kmedoids(&line3(), 3, 9, 10).unwrap();
        assert_eq!(out.assignment.medoids, vec![0, 1, 2]);
        assert_eq!(out.assignment.scatter, 0.0);
        assert_eq!(out.iterations, 1);
        assert!(out.converged);
    }

    #[test]
    fn single_medoid_on_a_line() {
        for seed in 0..10 {
            let out = lloyd_kmedoids(&line3(), 1, seed, 10).unwrap();
            assert_eq!(out.assignment.medoids, vec![1]);
            assert_eq!(out.assignment.scatter, 2.0);
        }
    }

    #[test]
    fn separated_pairs_from_every_start() {
        let d = two_pairs();
        for a in 0..4 {
            for b in (a + 1)..4 {
                let out = lloyd_from(&d, vec![a, b], 50).unwrap();
                let m = &out.assignment.medoids;
                assert!(m[0] < 2 && m[1] >= 2, "start {{{a},{b}}} ended at {m:?}");
                assert!((out.assignment.scatter - 0.2).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn duplicate_points_keep_their_own_cluster() {
        let data = Dataset::from_rows(vec![vec![1.0], vec![1.0], vec![5.0]]).unwrap();
        let d = euclidean_distance_matrix(&data);
        let out = lloyd_from(&d, vec![0, 1], 5).unwrap();
        let a = &out.assignment;
        assert_eq!(a.labels[0], 0);
        assert_eq!(a.labels[1], 1);
        assert_eq!(a.scatter, within_cluster_scatter(&d, &a.medoids, &a.labels).unwrap());
    }

    #[test]
    fn parameter_validation() {
        assert!(lloyd_kmedoids(&line3(), 0, 0, 5).is_err());
        assert!(lloyd_kmedoids(&line3(), 4, 0, 5).is_err());
        assert!(lloyd_kmedoids(&line3(), 1, 0, 0).is_err());
        assert!(lloyd_from(&line3(), vec![5], 3).is_err());
    }

    #[test]
    fn converged_state_is_a_fixed_point() {
        let data = Dataset::from_rows((0..9).map(|i| vec![(i * i % 7) as f64, (i % 4) as f64]).collect()).unwrap();
        let d = euclidean_distance_matrix(&data);
        let out = lloyd_kmedoids(&d, 3, 4, 100).unwrap();
        assert!(out.converged);
        let again = lloyd_from(&d, out.assignment.medoids.clone(), 1).unwrap();
        assert_eq!(again.assignment, out.assignment);
    }
}

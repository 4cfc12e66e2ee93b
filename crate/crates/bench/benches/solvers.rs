use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vqsel_core::{
    build_kde_qbp, kernel_matrix, qbp_to_qubo, solve_constrained_exhaustive, solve_exhaustive, solve_sa,
    sufficient_penalty, verify_equivalence, AnnealSchedule, Dataset, KernelSpec, QuboInstance,
};

fn dataset(n: usize, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Dataset::from_rows((0..n).map(|_| vec![rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)]).collect())
        .unwrap()
}

fn random_qubo(n: usize, seed: u64) -> QuboInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = Array2::zeros((n, n));
    for i in 0..n {
        for j in i..n {
            let v: f64 = rng.gen_range(-1.0..1.0);
            m[[i, j]] = v;
            m[[j, i]] = v;
        }
    }
    QuboInstance::new(m).unwrap()
}

fn kernel_tables(c: &mut Criterion) {
    let spec = KernelSpec::rbf(2.0).unwrap();
    let mut group = c.benchmark_group("kernel_matrix");
    for n in [64, 256, 1024] {
        let data = dataset(n, 1);
        group.bench_with_input(BenchmarkId::from_parameter(n), &data, |b, data| {
            b.iter(|| kernel_matrix(&spec, black_box(data)).unwrap())
        });
    }
    group.finish();
}

fn exact_solvers(c: &mut Criterion) {
    let mut group = c.benchmark_group("exhaustive");
    group.sample_size(10);
    for n in [12, 16, 20] {
        let q = random_qubo(n, 2);
        group.bench_with_input(BenchmarkId::new("qubo", n), &q, |b, q| b.iter(|| solve_exhaustive(q).unwrap()));
    }
    let kernel = kernel_matrix(&KernelSpec::rbf(1.0).unwrap(), &dataset(20, 3)).unwrap();
    let qbp = build_kde_qbp(&kernel, 5).unwrap();
    group.bench_function("constrained_20_choose_5", |b| {
        b.iter(|| solve_constrained_exhaustive(black_box(&qbp)).unwrap())
    });
    group.finish();
}

fn annealing(c: &mut Criterion) {
    let kernel = kernel_matrix(&KernelSpec::rbf(1.0).unwrap(), &dataset(64, 4)).unwrap();
    let qbp = build_kde_qbp(&kernel, 8).unwrap();
    let q = qbp_to_qubo(&qbp, sufficient_penalty(&qbp)).unwrap();
    let schedule = AnnealSchedule::scaled_to(&q, 500, 4);
    c.bench_function("sa_kde_64", |b| b.iter(|| solve_sa(black_box(&q), &schedule, 0).unwrap()));
}

fn equivalence(c: &mut Criterion) {
    let kernel = kernel_matrix(&KernelSpec::laplacian(1.0).unwrap(), &dataset(200, 5)).unwrap();
    c.bench_function("verify_equivalence_200", |b| {
        b.iter(|| verify_equivalence(black_box(&kernel), 20, 50.0, 1e-12).unwrap())
    });
}

criterion_group!(benches, kernel_tables, exact_solvers, annealing, equivalence);
criterion_main!(benches);

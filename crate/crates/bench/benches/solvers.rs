use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use orthkit_bench::{random_pair, tied_complex};
use orthkit_core::multilinear::{norm_bruteforce, norm_estimate, random_map};
use orthkit_core::orthogonality::{decide_orthogonality, maximal_numerical_range, oracle_min_norm};
use orthkit_core::smoothness::{decide_smooth, sip_orthogonality_probe};
use orthkit_core::{Field, SolverConfig};

fn norms(c: &mut Criterion) {
    let cfg = SolverConfig::default();
    let mut g = c.benchmark_group("norm");
    for n in [2usize, 4, 6] {
        let (t, _) = random_pair(n, &[n, n], Field::Real, 1);
        g.bench_with_input(BenchmarkId::new("estimate_bilinear", n), &t, |b, t| b.iter(|| norm_estimate(t, &cfg).unwrap()));
    }
    let (t, _) = random_pair(2, &[2, 2], Field::Real, 1);
    g.bench_function("bruteforce_2x2x2_d100", |b| b.iter(|| norm_bruteforce(&t, 100, u128::MAX).unwrap()));
    g.finish();
}

fn orthogonality(c: &mut Criterion) {
    let cfg = SolverConfig::default();
    let mut g = c.benchmark_group("orthogonality");
    for n in [4usize, 8, 16] {
        let t = tied_complex(n, 3);
        let a = random_map(n, &[n], Field::Complex, 4).unwrap();
        g.bench_with_input(BenchmarkId::new("decide_tied", n), &(t.clone(), a.clone()), |b, (t, a)| {
            b.iter(|| decide_orthogonality(t, a, &cfg).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("oracle_tied", n), &(t.clone(), a.clone()), |b, (t, a)| {
            b.iter(|| oracle_min_norm(t, a, &cfg).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("maximal_range", n), &(t, a), |b, (t, a)| {
            b.iter(|| maximal_numerical_range(t, a, &cfg).unwrap())
        });
    }
    let (t, a) = random_pair(3, &[3, 3], Field::Real, 5);
    g.bench_function("decide_bilinear_sampled", |b| b.iter(|| decide_orthogonality(&t, &a, &cfg).unwrap()));
    g.finish();
}

fn smoothness(c: &mut Criterion) {
    let cfg = SolverConfig::default();
    let mut g = c.benchmark_group("smoothness");
    let (t, _) = random_pair(4, &[4], Field::Complex, 6);
    g.bench_function("decide_smooth_4", |b| b.iter(|| decide_smooth(&t, &cfg).unwrap()));
    let diag = orthkit_core::MultilinearMap::real_matrix(2, 2, &[2.0, 0.0, 0.0, 1.0]).unwrap();
    let e22 = orthkit_core::MultilinearMap::real_matrix(2, 2, &[0.0, 0.0, 0.0, 1.0]).unwrap();
    g.bench_function("sip_probe_diag", |b| b.iter(|| sip_orthogonality_probe(&diag, &e22, &cfg).unwrap()));
    g.finish();
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(20);
    targets = norms, orthogonality, smoothness
}
criterion_main!(benches);

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use chromatic_core::oracles::brute_force_tcg_elimination;
use chromatic_core::random::{random_colored_graph, random_pp, rng_for};
use chromatic_core::solver::{solve_pp, solve_tcg, SolveOptions};
use chromatic_core::sweep;

fn agreement(c: &mut Criterion) {
    let graphs: Vec<_> = (0..400)
        .map(|i| random_colored_graph(&mut rng_for(1, i), 7, 3, 0.5))
        .collect();
    let check = |g: &_| {
        let oracle = brute_force_tcg_elimination(g).unwrap().is_some();
        let solved = solve_tcg(g, &SolveOptions::default()).unwrap().is_solved();
        oracle == solved
    };
    let mut group = c.benchmark_group("solver_oracle_sweep");
    group.sample_size(20);
    group.bench_function("parallel", |b| b.iter(|| black_box(sweep::map(&graphs, check))));
    group.bench_function("sequential", |b| b.iter(|| black_box(sweep::map_sequential(&graphs, check))));
    group.finish();
}

fn phylogeny(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve_pp");
    group.sample_size(20);
    for genes in [3, 5] {
        let instances: Vec<_> = (0..64)
            .map(|i| random_pp(&mut rng_for(2, i), 30, genes, 3))
            .collect();
        let run = |inst: &_| solve_pp(inst, &SolveOptions::default()).unwrap().is_solved();
        group.bench_with_input(BenchmarkId::new("parallel", genes), &instances, |b, xs| {
            b.iter(|| black_box(sweep::map(xs, run)))
        });
        group.bench_with_input(BenchmarkId::new("sequential", genes), &instances, |b, xs| {
            b.iter(|| black_box(sweep::map_sequential(xs, run)))
        });
    }
    group.finish();
}

criterion_group!(benches, agreement, phylogeny);
criterion_main!(benches);

//! Benchmarks of the solver-heavy paths: exact-mode primal solve (certificate
//! fast path), dual-side simplex on the prefix-constraint program, grid
//! brute-force minimization on the cone example, and the truncated
//! sequence-space LP.

use criterion::{criterion_group, criterion_main, Criterion};
use gaplab_bench::{gap_problem, half_indicator_problem, sequence_lp};
use gaplab_core::kretschmer::{discretize_dual, solve_discretized};
use gaplab_core::lp::solve;
use gaplab_core::rat;
use gaplab_core::soc::{brute_value, BruteBox, SocPoint};
use gaplab_core::Rat;
use std::hint::black_box;

fn bench_gap_primal(c: &mut Criterion) {
    let problem = gap_problem(64);
    c.bench_function("gap-primal-exact-64", |b| {
        b.iter(|| solve_discretized(black_box(&problem)).expect("solvable").value)
    });
}

fn bench_gap_dual(c: &mut Criterion) {
    let lp = discretize_dual(&gap_problem(64)).expect("well-formed");
    c.bench_function("gap-dual-simplex-64", |b| {
        b.iter(|| solve(black_box(&lp)).expect("solvable").value)
    });
}

fn bench_half_indicator(c: &mut Criterion) {
    let problem = half_indicator_problem(256);
    c.bench_function("half-indicator-primal-256", |b| {
        b.iter(|| solve_discretized(black_box(&problem)).expect("solvable").value)
    });
}

fn bench_cone_brute(c: &mut Criterion) {
    let y = SocPoint::new(rat(5, 1), rat(3, 1), Rat::ZERO);
    let bx = BruteBox {
        x1lo: rat(-10, 1),
        x1hi: rat(10, 1),
        x2hi: rat(10, 1),
    };
    c.bench_function("cone-brute-201", |b| {
        b.iter(|| brute_value(black_box(&y), &bx, 201))
    });
}

fn bench_sequence_lp(c: &mut Criterion) {
    let lp = sequence_lp(16);
    c.bench_function("sequence-lp-16", |b| {
        b.iter(|| solve(black_box(&lp)).expect("solvable").value)
    });
}

criterion_group!(
    benches,
    bench_gap_primal,
    bench_gap_dual,
    bench_half_indicator,
    bench_cone_brute,
    bench_sequence_lp
);
criterion_main!(benches);

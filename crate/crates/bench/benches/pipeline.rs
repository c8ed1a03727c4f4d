use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lame_bethe::pipeline::{self, Level};
use lame_bethe::rootdata::d_dimension;
use lame_bethe::solver::{solve_multistart, solve_stieltjes_real, SolveOptions};
use lame_bethe::{Caps, Multidegree};
use lame_bethe_bench::{classical, rank_two};

fn bound(c: &mut Criterion) {
    let mut g = c.benchmark_group("d_dimension");
    for (k, r, l) in [(2usize, 1usize, vec![6usize]), (3, 2, vec![3, 3]), (3, 3, vec![2, 3, 2])] {
        let md = Multidegree(l.clone());
        g.bench_with_input(BenchmarkId::from_parameter(format!("k{k}-r{r}-{l:?}")), &md, |b, md| {
            b.iter(|| d_dimension(black_box(k), r, md, &Caps::default()).unwrap())
        });
    }
    g.finish();
}

fn stieltjes(c: &mut Criterion) {
    let mut g = c.benchmark_group("stieltjes");
    for (n, l) in [(2usize, 4usize), (3, 3), (4, 3)] {
        let ws = classical(n, l);
        g.bench_with_input(BenchmarkId::from_parameter(format!("n{n}-l{l}")), &ws, |b, ws| {
            b.iter(|| solve_stieltjes_real(ws, &SolveOptions::default()).unwrap())
        });
    }
    g.finish();
}

fn multistart(c: &mut Criterion) {
    let ws = rank_two();
    c.bench_function("multistart/rank2-200", |b| {
        b.iter(|| solve_multistart(&ws, Some(200), 3, &SolveOptions::default()).unwrap())
    });
}

fn verify(c: &mut Criterion) {
    let ws = classical(3, 3);
    let set = solve_stieltjes_real(&ws, &SolveOptions::default()).unwrap();
    let coords = set.orbits[0].coords.clone();
    let mut g = c.benchmark_group("verify");
    for level in [Level::Exponents, Level::Flag, Level::Tilde] {
        g.bench_function(format!("{level:?}"), |b| {
            b.iter(|| pipeline::verify_point(&ws, black_box(&coords), level, 1e-10, 0).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, bound, stieltjes, multistart, verify);
criterion_main!(benches);

//! Benchmark fixtures shared by the criterion benches.

use lame_bethe::{WeightSystem, C64};

/// Real second-order data on `n` evenly spaced points with unequal charges.
pub fn classical(n: usize, l: usize) -> WeightSystem {
    let z: Vec<f64> = (0..n).map(|s| s as f64 - 0.5 * (n - 1) as f64).collect();
    let m: Vec<f64> = (0..n).map(|s| -1.0 - 0.25 * s as f64).collect();
    WeightSystem::classical_real(&z, &m, l).expect("valid classical data")
}

/// A small rank-2 system with two fundamental weights and one generic point.
pub fn rank_two() -> WeightSystem {
    let c = |re: f64, im: f64| C64::new(re, im);
    let w = |a: f64, b: f64, d: f64| vec![c(a, 0.0), c(b, 0.0), c(d, 0.0)];
    WeightSystem::new(
        2,
        vec![c(0.0, 0.0), c(1.0, 0.0), c(-0.5, 0.7)],
        vec![w(1.0, 0.0, 0.0), w(1.0, 0.0, 0.0), w(0.0, 0.0, -1.0)],
        vec![1, 1],
    )
    .expect("valid rank-2 data")
}

//! Searches for orbits of critical points.
//!
//! Two solvers: an exhaustive one for the real case `r = 1` with negative
//! pairings, where every assignment of points to the gaps between
//! consecutive `z_s` holds exactly one critical point, and a seeded
//! multi-start Newton search for everything else.

use crate::error::{Error, Result};
use crate::master::{
    bae_jacobian, bae_residual, canonicalize, classify_multiplicity, flatten, residual_norm,
    unflatten, CanonicalKey, Coords, CriticalPoint, DEFAULT_QUANTUM, DEFAULT_TOL,
};
use crate::rootdata::{binomial, d_dimension, is_separating, Caps, WeightSystem};
use crate::scalar::C64;
use crate::verify::check_coords_off_diagonal;
use nalgebra::{DMatrix, DVector};
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

pub const MAX_ITERATIONS: usize = 200;
pub const MAX_HALVINGS: usize = 40;
/// Polish iterations applied by [`certify_orbit`] inside the solvers.
pub const POLISH_ITERATIONS: usize = 5;
/// Minimum separation demanded by the off-diagonal audit.
pub const INVARIANT_MARGIN: f64 = 1e-8;
/// Starts wandering farther than this many data scales are abandoned.
pub const ESCAPE_FACTOR: f64 = 1e4;
/// Starts per unit of the bound when none are requested.
pub const STARTS_PER_ORBIT: u64 = 50;
/// Upper limit on the default number of starts.
pub const MAX_DEFAULT_STARTS: u64 = 200_000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolveOptions {
    pub tol: f64,
    pub quantum: f64,
    pub caps: Caps,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            tol: DEFAULT_TOL,
            quantum: DEFAULT_QUANTUM,
            caps: Caps::default(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SearchLog {
    pub attempted: u64,
    pub converged: u64,
    pub duplicate: u64,
    pub invariant_violating: u64,
    pub diverged: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrbitSet {
    pub orbits: Vec<CriticalPoint>,
    #[serde(serialize_with = "ser_big")]
    pub bound: BigUint,
    pub saturated: bool,
    /// `None` when the separating test was skipped for cost.
    pub separating: Option<bool>,
    pub search_log: SearchLog,
}

fn ser_big<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v.to_u64() {
        Some(x) => s.serialize_u64(x),
        None => s.serialize_str(&v.to_string()),
    }
}

impl OrbitSet {
    pub fn keys(&self, quantum: f64) -> Vec<CanonicalKey> {
        self.orbits.iter().map(|o| o.key(quantum)).collect()
    }
}

fn sort_coords(t: &mut Coords) {
    for g in t.iter_mut() {
        g.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    }
}

/// Final polish and audit of an approximately critical point: at most
/// `polish` Newton steps (each kept only if it lowers the residual), the
/// off-diagonal clauses with margin [`INVARIANT_MARGIN`], the residual
/// bound `tol`, and the multiplicity.
pub fn certify_orbit(
    ws: &WeightSystem,
    t: &Coords,
    tol: f64,
    polish: usize,
) -> Result<CriticalPoint> {
    let mut t = t.clone();
    let mut res = bae_residual(ws, &t)?;
    let mut norm = residual_norm(&res);
    for _ in 0..polish {
        if norm == 0.0 {
            break;
        }
        let Some(step) = newton_step(ws, &t, &res) else {
            break;
        };
        let cand = apply_step(&t, &step, 1.0, ws);
        match bae_residual(ws, &cand) {
            Ok(r) if residual_norm(&r) < norm => {
                norm = residual_norm(&r);
                res = r;
                t = cand;
            }
            _ => break,
        }
    }
    check_coords_off_diagonal(ws, &t, INVARIANT_MARGIN)?;
    if !(norm <= tol) {
        return Err(Error::NotCritical {
            residual: norm,
            tol,
            residuals: res.iter().map(|c| [c.re, c.im]).collect(),
        });
    }
    let multiplicity = classify_multiplicity(&bae_jacobian(ws, &t)?);
    sort_coords(&mut t);
    Ok(CriticalPoint {
        coords: t,
        residual_norm: norm,
        multiplicity,
    })
}

fn newton_step(ws: &WeightSystem, t: &Coords, res: &[C64]) -> Option<DVector<C64>> {
    let jac = bae_jacobian(ws, t).ok()?;
    let rhs = DVector::from_iterator(res.len(), res.iter().map(|c| -c));
    let step = jac.lu().solve(&rhs)?;
    if step.iter().all(|c| c.re.is_finite() && c.im.is_finite()) {
        Some(step)
    } else {
        None
    }
}

fn apply_step(t: &Coords, step: &DVector<C64>, lambda: f64, ws: &WeightSystem) -> Coords {
    let v: Vec<C64> = flatten(t)
        .iter()
        .zip(step.iter())
        .map(|(a, d)| a + d * lambda)
        .collect();
    unflatten(&v, &ws.l().0)
}

enum Outcome {
    Converged(CriticalPoint),
    Invariant,
    Diverged,
}

/// Damped Newton: the step is halved until the max-norm of the residual
/// decreases (at most [`MAX_HALVINGS`] times), for at most
/// [`MAX_ITERATIONS`] iterations.
fn damped_newton(
    ws: &WeightSystem,
    start: Coords,
    tol: f64,
    center: C64,
    escape: f64,
) -> Option<Coords> {
    let mut t = start;
    let mut res = bae_residual(ws, &t).ok()?;
    let mut norm = residual_norm(&res);
    for _ in 0..MAX_ITERATIONS {
        if norm <= tol {
            return Some(t);
        }
        let step = newton_step(ws, &t, &res)?;
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..=MAX_HALVINGS {
            let cand = apply_step(&t, &step, lambda, ws);
            if let Ok(r) = bae_residual(ws, &cand) {
                let n = residual_norm(&r);
                if n < norm {
                    t = cand;
                    res = r;
                    norm = n;
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !accepted {
            return None;
        }
        if t.iter().flatten().any(|x| (x - center).norm() > escape) {
            return None;
        }
    }
    (norm <= tol).then_some(t)
}

/// The real data of the `r = 1` problem with negative pairings:
/// `z` real, `a_s = (Λ_s, α_1) < 0` real. Returns `(z, a)` sorted by `z`.
pub fn real_negative_data(ws: &WeightSystem) -> Option<(Vec<f64>, Vec<f64>)> {
    if ws.rank() != 1 {
        return None;
    }
    let mut pts: Vec<(f64, f64)> = Vec::with_capacity(ws.n());
    for (s, z) in ws.z().iter().enumerate() {
        let a = ws.pairing(s, 1);
        if z.im != 0.0 || a.im != 0.0 || !(a.re < 0.0) {
            return None;
        }
        pts.push((z.re, a.re));
    }
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    Some(pts.into_iter().unzip())
}

/// All ways to put `l` points into `parts` ordered boxes, in lexicographic order.
pub fn compositions(l: usize, parts: usize, cap: u128) -> Result<Vec<Vec<usize>>> {
    if parts == 0 {
        return Ok(if l == 0 { vec![vec![]] } else { vec![] });
    }
    let count = binomial((l + parts - 1) as u64, l as u64);
    let needed = count.to_u128().unwrap_or(u128::MAX);
    if needed > cap {
        return Err(Error::ResourceLimit {
            what: "cells",
            needed,
            cap,
        });
    }
    let mut out = Vec::new();
    let mut cur = vec![0usize; parts];
    fn rec(i: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(cur.clone());
            return;
        }
        for k in (0..=left).rev() {
            cur[i] = k;
            rec(i + 1, left - k, cur, out);
        }
    }
    rec(0, l, &mut cur, &mut out);
    Ok(out)
}

/// Chebyshev-spaced starting points of a cell.
pub fn chebyshev_cell(z: &[f64], cell: &[usize]) -> Vec<f64> {
    let mut out = Vec::new();
    for (s, &k) in cell.iter().enumerate() {
        let (a, b) = (z[s], z[s + 1]);
        for j in 1..=k {
            let theta = (2 * j - 1) as f64 * std::f64::consts::PI / (2 * k) as f64;
            out.push(0.5 * (a + b) - 0.5 * (b - a) * theta.cos());
        }
    }
    out
}

/// Real residual `R_j = Σ a_s/(t_j - z_s) - Σ_{k≠j} 2/(t_j - t_k)`.
fn real_residual(z: &[f64], a: &[f64], t: &[f64]) -> Vec<f64> {
    t.iter()
        .enumerate()
        .map(|(j, &tj)| {
            let mut acc: f64 = z.iter().zip(a).map(|(zs, as_)| as_ / (tj - zs)).sum();
            for (k, &tk) in t.iter().enumerate() {
                if k != j {
                    acc -= 2.0 / (tj - tk);
                }
            }
            acc
        })
        .collect()
}

fn real_jacobian(z: &[f64], a: &[f64], t: &[f64]) -> DMatrix<f64> {
    let l = t.len();
    DMatrix::from_fn(l, l, |j, k| {
        if j == k {
            let mut d: f64 = z
                .iter()
                .zip(a)
                .map(|(zs, as_)| -as_ / (t[j] - zs).powi(2))
                .sum();
            for (m, &tm) in t.iter().enumerate() {
                if m != j {
                    d += 2.0 / (t[j] - tm).powi(2);
                }
            }
            d
        } else {
            -2.0 / (t[j] - t[k]).powi(2)
        }
    })
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Interval `(lo, hi)` of the cell for each point.
fn cell_bounds(z: &[f64], cell: &[usize]) -> Vec<(f64, f64)> {
    cell.iter()
        .enumerate()
        .flat_map(|(s, &k)| std::iter::repeat_n((z[s], z[s + 1]), k))
        .collect()
}

fn feasible(t: &[f64], bounds: &[(f64, f64)]) -> bool {
    for (j, (&tj, &(lo, hi))) in t.iter().zip(bounds).enumerate() {
        if !(tj > lo && tj < hi) {
            return false;
        }
        if j > 0 && bounds[j - 1] == (lo, hi) && !(t[j - 1] < tj) {
            return false;
        }
    }
    true
}

fn newton_real(z: &[f64], a: &[f64], bounds: &[(f64, f64)], t: &mut Vec<f64>, target: f64) -> bool {
    let mut res = real_residual(z, a, t);
    let mut norm = inf_norm(&res);
    for _ in 0..MAX_ITERATIONS {
        if norm <= target {
            return true;
        }
        let jac = real_jacobian(z, a, t);
        let rhs = DVector::from_iterator(res.len(), res.iter().map(|x| -x));
        let Some(step) = jac.cholesky().map(|c| c.solve(&rhs)) else {
            return false;
        };
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..=MAX_HALVINGS {
            let cand: Vec<f64> = t
                .iter()
                .zip(step.iter())
                .map(|(x, d)| x + lambda * d)
                .collect();
            if feasible(&cand, bounds) {
                let r = real_residual(z, a, &cand);
                let n = inf_norm(&r);
                if n < norm {
                    *t = cand;
                    res = r;
                    norm = n;
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !accepted {
            return norm <= target;
        }
    }
    norm <= target
}

/// Gauss–Seidel sweeps where each coordinate is found by bisection:
/// `R_j` increases strictly in `t_j` between its neighbours.
fn bisection_sweeps(z: &[f64], a: &[f64], bounds: &[(f64, f64)], t: &mut [f64], sweeps: usize) {
    let l = t.len();
    for _ in 0..sweeps {
        for j in 0..l {
            let (mut lo, mut hi) = bounds[j];
            if j > 0 && bounds[j - 1] == bounds[j] {
                lo = lo.max(t[j - 1]);
            }
            if j + 1 < l && bounds[j + 1] == bounds[j] {
                hi = hi.min(t[j + 1]);
            }
            let f = |x: f64, t: &mut [f64]| {
                t[j] = x;
                real_residual(z, a, t)[j]
            };
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if f(mid, t) < 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            t[j] = 0.5 * (lo + hi);
        }
    }
}

/// Exhaustive solver for `r = 1`, real `z` and real negative pairings:
/// one critical point per cell, found by safeguarded Newton from
/// Chebyshev-spaced points with a bisection fallback.
pub fn solve_stieltjes_real(ws: &WeightSystem, opts: &SolveOptions) -> Result<OrbitSet> {
    let (z, a) = real_negative_data(ws).ok_or_else(|| {
        Error::NotClassicalCase("need r = 1, real z and real negative pairings (Λ_s, α_1)".into())
    })?;
    let l = ws.l().0[0];
    let n = z.len();
    let cells = compositions(l, n.saturating_sub(1), opts.caps.compositions)?;
    let bound = binomial((l + n).saturating_sub(2) as u64, l as u64);
    let mut log = SearchLog::default();
    let found: Vec<Result<CriticalPoint>> = cells
        .par_iter()
        .map(|cell| {
            let bounds = cell_bounds(&z, cell);
            let mut t = chebyshev_cell(&z, cell);
            let target = opts.tol * 1e-2;
            if !newton_real(&z, &a, &bounds, &mut t, target) {
                bisection_sweeps(&z, &a, &bounds, &mut t, 200);
                if !newton_real(&z, &a, &bounds, &mut t, target)
                    && inf_norm(&real_residual(&z, &a, &t)) > opts.tol
                {
                    return Err(Error::ConvergenceFailure { cell: cell.clone() });
                }
            }
            let coords = vec![t.iter().map(|&x| C64::new(x, 0.0)).collect()];
            certify_orbit(ws, &coords, opts.tol, POLISH_ITERATIONS)
        })
        .collect();
    let mut orbits = Vec::with_capacity(found.len());
    for f in found {
        log.attempted += 1;
        let cp = f?;
        log.converged += 1;
        orbits.push(cp);
    }
    orbits.sort_by_key(|o| o.key(opts.quantum));
    let saturated = BigUint::from(orbits.len()) == bound;
    Ok(OrbitSet {
        orbits,
        bound,
        saturated,
        separating: None,
        search_log: log,
    })
}

/// Default number of starts: `50 · d(n-1, l)`, capped.
pub fn default_starts(bound: &BigUint) -> u64 {
    let want = bound
        .to_u64()
        .unwrap_or(u64::MAX)
        .saturating_mul(STARTS_PER_ORBIT);
    want.clamp(1, MAX_DEFAULT_STARTS)
}

/// Seeded multi-start Newton search. Start `idx` draws from
/// `ChaCha8(seed)` on stream `idx`, so the result does not depend on the
/// number of threads. Duplicates are removed by canonical key in start
/// order and the orbits are sorted by key.
pub fn solve_multistart(
    ws: &WeightSystem,
    starts: Option<u64>,
    seed: u64,
    opts: &SolveOptions,
) -> Result<OrbitSet> {
    let r = ws.rank();
    let n = ws.n();
    let bound = d_dimension(n.saturating_sub(1), r, ws.l(), &opts.caps)?;
    let separating = match is_separating(ws, &opts.caps) {
        Ok(s) => Some(s.separating),
        Err(Error::ResourceLimit { .. }) => None,
        Err(e) => return Err(e),
    };
    let mut log = SearchLog::default();
    if ws.l().is_zero() {
        log.attempted = 1;
        log.converged = 1;
        let cp = certify_orbit(ws, &vec![Vec::new(); r], opts.tol, 0)?;
        let saturated = bound == BigUint::from(1u8);
        return Ok(OrbitSet {
            orbits: vec![cp],
            bound,
            saturated,
            separating,
            search_log: log,
        });
    }
    let starts = starts.unwrap_or_else(|| default_starts(&bound));
    let centroid: C64 = ws.z().iter().sum::<C64>() / n as f64;
    let scale = ws
        .z()
        .iter()
        .map(|z| (z - centroid).norm())
        .fold(1.0, f64::max);
    let escape = ESCAPE_FACTOR * scale;
    let real = real_negative_data(ws);
    let cells = match &real {
        Some((z, _)) => compositions(
            ws.l().0[0],
            z.len().saturating_sub(1),
            opts.caps.compositions,
        )
        .unwrap_or_default(),
        None => Vec::new(),
    };
    let lvec = ws.l().0.clone();

    let outcomes: Vec<Outcome> = (0..starts)
        .into_par_iter()
        .map(|idx| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(idx);
            let start: Coords = if !cells.is_empty() && idx % 2 == 1 {
                let (z, _) = real.as_ref().expect("cells imply real data");
                let cell = &cells[(idx / 2) as usize % cells.len()];
                let pts = chebyshev_cell(z, cell);
                let jitter = 1e-3 * scale;
                let v: Vec<C64> = pts
                    .iter()
                    .map(|&x| {
                        let dr: f64 = rng.sample(StandardNormal);
                        let di: f64 = rng.sample(StandardNormal);
                        C64::new(x + jitter * dr, jitter * di)
                    })
                    .collect();
                unflatten(&v, &lvec)
            } else {
                let total = ws.l().total();
                let v: Vec<C64> = (0..total)
                    .map(|_| {
                        let dr: f64 = rng.sample(StandardNormal);
                        let di: f64 = rng.sample(StandardNormal);
                        centroid + C64::new(dr, di) * scale
                    })
                    .collect();
                unflatten(&v, &lvec)
            };
            match damped_newton(ws, start, opts.tol, centroid, escape) {
                None => Outcome::Diverged,
                Some(t) => match certify_orbit(ws, &t, opts.tol, POLISH_ITERATIONS) {
                    Ok(cp) => Outcome::Converged(cp),
                    Err(Error::InvariantViolation { .. }) => Outcome::Invariant,
                    Err(_) => Outcome::Diverged,
                },
            }
        })
        .collect();

    let mut seen = std::collections::BTreeSet::new();
    let mut orbits = Vec::new();
    for o in outcomes {
        log.attempted += 1;
        match o {
            Outcome::Converged(cp) => {
                log.converged += 1;
                if seen.insert(cp.key(opts.quantum)) {
                    orbits.push(cp);
                } else {
                    log.duplicate += 1;
                }
            }
            Outcome::Invariant => log.invariant_violating += 1,
            Outcome::Diverged => log.diverged += 1,
        }
    }
    orbits.sort_by_key(|o| o.key(opts.quantum));
    let found = BigUint::from(orbits.len());
    if separating == Some(true) && found > bound {
        return Err(Error::BoundViolation {
            found: orbits.len(),
            bound: bound.to_string(),
        });
    }
    let saturated = found == bound;
    Ok(OrbitSet {
        orbits,
        bound,
        saturated,
        separating,
        search_log: log,
    })
}

/// Orbit keys found by either solver, for comparisons.
pub fn orbit_keys(set: &OrbitSet, quantum: f64) -> Vec<CanonicalKey> {
    set.orbits
        .iter()
        .map(|o| canonicalize(&o.coords, quantum))
        .collect()
}

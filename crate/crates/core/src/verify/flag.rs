//! Numerical realisation of the quasi-polynomial flag.
//!
//! The factored operator `(d - g_N) ⋯ (d - g_1)` is rewritten as the first
//! order system `w_j' = g_{j+1} w_j + w_{j+1}` (`w_N = 0`) for the state
//! `w_0 = u, w_j = (d - g_j) w_{j-1}`. The solution `u_k` is the one whose
//! state at the base point is `φ_k` in slot `k - 1` and zero elsewhere,
//! where `φ_k = y_k T_k / y_{k-1}`; then `(d - g_{k-1}) ⋯ (d - g_1) u_k = φ_k`
//! and `Wr(u_1, ..., u_k) = φ_1 ⋯ φ_k = y_k T_k ⋯ T_1`.
//!
//! Derivatives of `u` are exact linear combinations of the state with
//! rational coefficients, so no finite differences are needed.

use super::ode::{integrate_segment, OdeOptions};
use super::offdiag::PolyTuple;
use super::wronskian::{wronskian, wronskian_rows, wronskian_scale};
use crate::diffop::{log_derivative, pole_jet, LinearDiffOp, OpData, RationalFn};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::{Scalar, C64};
use serde::{Serialize, Serializer};

/// Acceptance threshold for every flag and tilde residual.
pub const FLAG_TOL: f64 = 1e-6;
/// Sample points per instance.
pub const SAMPLE_COUNT: usize = 12;
/// Vertices of each probe loop around a root of `y`.
pub const PROBE_POINTS: usize = 64;
/// Largest power `x^p` used for the lemma check.
const LEMMA_MAX_POWER: usize = 3;

fn ser_points<S: Serializer>(v: &[C64], s: S) -> std::result::Result<S::Ok, S::Error> {
    v.iter()
        .map(|c| [c.re, c.im])
        .collect::<Vec<_>>()
        .serialize(s)
}

fn ser_point<S: Serializer>(c: &C64, s: S) -> std::result::Result<S::Ok, S::Error> {
    [c.re, c.im].serialize(s)
}

#[derive(Clone, Debug, Serialize)]
pub struct FlagWitness {
    #[serde(serialize_with = "ser_point")]
    pub center: C64,
    pub radius: f64,
    #[serde(serialize_with = "ser_points")]
    pub sample_points: Vec<C64>,
    /// Level `i`: max relative error of `Wr(u_1..u_i)` against `y_i T_i ⋯ T_1`.
    pub wronskian_residuals: Vec<f64>,
    /// `D u_k` with the expanded coefficients, relative to its terms.
    pub solution_residuals: Vec<f64>,
    /// Level `i`: `(d - g_i) ⋯ (d - g_1) x^p` against `Wr(u_1..u_i, x^p) / (y_i T_i ⋯ T_1)`.
    pub lemma_residuals: Vec<f64>,
}

impl FlagWitness {
    pub fn max_residual(&self) -> f64 {
        self.wronskian_residuals
            .iter()
            .chain(&self.solution_residuals)
            .chain(&self.lemma_residuals)
            .fold(0.0, |a, &b| a.max(b))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TildeReport {
    /// `Wr(y_i, ỹ_i) = (T_{i+1}/T_i) y_{i-1} y_{i+1}` at the sample points.
    pub identity_residuals: Vec<f64>,
    /// Principal part and monodromy of `ỹ_i` on loops around roots of `y`.
    pub probe_residuals: Vec<f64>,
    pub probe_loops: usize,
}

impl TildeReport {
    pub fn max_residual(&self) -> f64 {
        self.identity_residuals
            .iter()
            .chain(&self.probe_residuals)
            .fold(0.0, |a, &b| a.max(b))
    }
}

struct Frame<'a> {
    data: &'a OpData<C64>,
    y: &'a PolyTuple<C64>,
    op: &'a LinearDiffOp<C64>,
    n: usize,
    /// `c[m][j]`: `u^{(m)} = Σ_j c[m][j] w_j`.
    c: Vec<Vec<RationalFn<C64>>>,
    /// `ln' T_k` for `k = 1..=N`.
    lnt: Vec<RationalFn<C64>>,
    singular: Vec<C64>,
    /// Partial fractions of the factors, which stay accurate next to
    /// clustered roots where the expanded forms lose their digits.
    poles: Option<Vec<Vec<(C64, C64)>>>,
}

impl<'a> Frame<'a> {
    fn new(
        data: &'a OpData<C64>,
        y: &'a PolyTuple<C64>,
        op: &'a LinearDiffOp<C64>,
    ) -> Result<Self> {
        let n = data.r + 1;
        if op.order() != n || y.rank() != data.r {
            return Err(Error::InvalidInput(format!(
                "operator of order {} for r = {}",
                op.order(),
                data.r
            )));
        }
        let g = op.factors();
        let mut c = vec![(0..n)
            .map(|j| {
                if j == 0 {
                    RationalFn::constant(C64::new(1.0, 0.0))
                } else {
                    RationalFn::zero()
                }
            })
            .collect::<Vec<_>>()];
        for m in 0..n {
            let prev = &c[m];
            let next = (0..n)
                .map(|j| {
                    let mut v = prev[j].derivative().add(&prev[j].mul(&g[j]));
                    if j > 0 {
                        v = v.add(&prev[j - 1]);
                    }
                    v
                })
                .collect();
            c.push(next);
        }
        let lnt = (1..=n)
            .map(|k| log_derivative(&data.t_quasi(k)))
            .collect::<Result<Vec<_>>>()?;
        let mut singular: Vec<C64> = data.z.clone();
        for roots in y.roots() {
            singular.extend(roots);
        }
        let poles = op.partial_fractions();
        Ok(Frame {
            data,
            y,
            op,
            n,
            c,
            lnt,
            singular,
            poles,
        })
    }

    fn t_val(&self, k: usize, x: C64, anchor: C64) -> C64 {
        if k == 0 || k > self.n {
            return C64::new(1.0, 0.0);
        }
        self.data.t_quasi(k).eval_branch(x, anchor)
    }

    fn phi(&self, k: usize, x: C64, anchor: C64) -> C64 {
        self.y.y(k).eval_c64(x) * self.t_val(k, x, anchor) / self.y.y(k - 1).eval_c64(x)
    }

    /// `y_k T_k ⋯ T_1`
    fn big_w(&self, k: usize, x: C64, anchor: C64) -> C64 {
        (1..=k).fold(self.y.y(k).eval_c64(x), |acc, j| {
            acc * self.t_val(j, x, anchor)
        })
    }

    /// State of all `N` basis solutions, solution-major.
    fn initial(&self, x0: C64, anchor: C64) -> Vec<C64> {
        let n = self.n;
        let mut w = vec![C64::new(0.0, 0.0); n * n];
        for k in 1..=n {
            w[(k - 1) * n + (k - 1)] = self.phi(k, x0, anchor);
        }
        w
    }

    fn propagate(&self, x0: C64, x1: C64, state: &[C64]) -> Result<Vec<C64>> {
        let n = self.n;
        let g = self.op.factors();
        let rhs = |x: C64, w: &[C64]| {
            let gv: Vec<C64> = match &self.poles {
                Some(p) => p.iter().map(|pj| pole_jet(pj, x, 1)[0]).collect(),
                None => g.iter().map(|gj| gj.eval_c64(x)).collect(),
            };
            let mut out = vec![C64::new(0.0, 0.0); n * n];
            for k in 0..n {
                for j in 0..n {
                    let mut v = gv[j] * w[k * n + j];
                    if j + 1 < n {
                        v += w[k * n + j + 1];
                    }
                    out[k * n + j] = v;
                }
            }
            out
        };
        // solutions can differ in size by orders of magnitude, so each one
        // is measured against its own norm
        let opts = OdeOptions { block: n, ..OdeOptions::default() };
        let out = integrate_segment(rhs, x0, x1, state, opts)?;
        if out.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::PathThroughSingularity(format!("{x0} -> {x1}")));
        }
        Ok(out)
    }

    /// `jets[k][m] = u_{k+1}^{(m)}(x)`, `m = 0..=N`.
    fn jets(&self, x: C64, state: &[C64]) -> Vec<Vec<C64>> {
        let n = self.n;
        let cv = match &self.poles {
            Some(p) => derivative_weights(p, x, n),
            None => self
                .c
                .iter()
                .map(|row| row.iter().map(|f| f.eval_c64(x)).collect())
                .collect(),
        };
        (0..n)
            .map(|k| {
                (0..=n)
                    .map(|m| (0..n).map(|j| cv[m][j] * state[k * n + j]).sum())
                    .collect()
            })
            .collect()
    }

    fn nearest_singularity(&self, x: C64, skip: Option<C64>) -> f64 {
        self.singular
            .iter()
            .filter(|s| skip.is_none_or(|t| (**s - t).norm() > 1e-12))
            .map(|s| (s - x).norm())
            .fold(f64::INFINITY, f64::min)
    }

    /// Point of the padded bounding box farthest from every singular point.
    fn choose_disc(&self) -> (C64, f64) {
        let (mut lo_re, mut hi_re, mut lo_im, mut hi_im) = (
            f64::INFINITY,
            f64::NEG_INFINITY,
            f64::INFINITY,
            f64::NEG_INFINITY,
        );
        for s in &self.singular {
            lo_re = lo_re.min(s.re);
            hi_re = hi_re.max(s.re);
            lo_im = lo_im.min(s.im);
            hi_im = hi_im.max(s.im);
        }
        let pad = 0.5 * (hi_re - lo_re).max(hi_im - lo_im).max(1.0);
        let steps = 40;
        let mut best = (C64::new(lo_re - pad, lo_im - pad), -1.0);
        for a in 0..=steps {
            for b in 0..=steps {
                let x = C64::new(
                    lo_re - pad + (hi_re - lo_re + 2.0 * pad) * a as f64 / steps as f64,
                    lo_im - pad + (hi_im - lo_im + 2.0 * pad) * b as f64 / steps as f64,
                );
                let d = self.nearest_singularity(x, None);
                if d > best.1 + 1e-12 {
                    best = (x, d);
                }
            }
        }
        (best.0, 0.5 * best.1)
    }

    /// `(ỹ_i, ỹ_i')` for `i = 1..=r` from the jets of the basis.
    fn tilde(&self, x: C64, anchor: C64, jets: &[Vec<C64>]) -> Vec<(C64, C64)> {
        let r = self.data.r;
        (1..=r)
            .map(|i| {
                let mut cols: Vec<&[C64]> = jets[..i - 1].iter().map(|j| j.as_slice()).collect();
                cols.push(&jets[i]);
                let rows: Vec<usize> = (0..i).collect();
                let mut drows: Vec<usize> = (0..i - 1).collect();
                drows.push(i);
                let v = wronskian_rows(&cols, &rows);
                let dv = wronskian_rows(&cols, &drows);
                let p: C64 = (1..=i).map(|k| self.t_val(k, x, anchor)).product();
                let lnp: C64 = (0..i).map(|k| self.lnt[k].eval_c64(x)).sum();
                (v / p, (dv - v * lnp) / p)
            })
            .collect()
    }
}

/// Values at `x` of the weights `c[m][j]`, from Taylor jets of the factors:
/// `c[m+1][j] = c[m][j]' + g_j c[m][j] + c[m][j-1]`.
fn derivative_weights(poles: &[Vec<(C64, C64)>], x: C64, n: usize) -> Vec<Vec<C64>> {
    let len = n + 1;
    let zero = C64::new(0.0, 0.0);
    let g: Vec<Vec<C64>> = poles.iter().map(|p| pole_jet(p, x, len)).collect();
    let mut cur: Vec<Vec<C64>> = (0..n)
        .map(|j| {
            let mut v = vec![zero; len];
            if j == 0 {
                v[0] = C64::new(1.0, 0.0);
            }
            v
        })
        .collect();
    let mut out = vec![cur.iter().map(|v| v[0]).collect::<Vec<_>>()];
    for _ in 0..n {
        let next: Vec<Vec<C64>> = (0..n)
            .map(|j| {
                let mut v = vec![zero; len];
                for i in 0..len - 1 {
                    v[i] = cur[j][i + 1] * (i + 1) as f64;
                }
                for (a, ga) in g[j].iter().enumerate() {
                    for (b, cb) in cur[j].iter().enumerate().take(len - a) {
                        v[a + b] += ga * cb;
                    }
                }
                if j > 0 {
                    for (slot, c) in v.iter_mut().zip(&cur[j - 1]) {
                        *slot += c;
                    }
                }
                v
            })
            .collect();
        out.push(next.iter().map(|v| v[0]).collect());
        cur = next;
    }
    out
}

fn sample_points(center: C64, radius: f64) -> Vec<C64> {
    (0..SAMPLE_COUNT)
        .map(|k| {
            center
                + C64::from_polar(
                    0.8 * radius,
                    0.1 + 2.0 * std::f64::consts::PI * k as f64 / SAMPLE_COUNT as f64,
                )
        })
        .collect()
}

fn rel(a: C64, b: C64, scale: f64) -> f64 {
    let s = scale.max(f64::MIN_POSITIVE);
    (a - b).norm() / s
}

/// Computes the flag solutions on a disc free of singular points and
/// measures every flag identity. Does not judge the residuals.
pub fn flag_witness(
    data: &OpData<C64>,
    y: &PolyTuple<C64>,
    op: &LinearDiffOp<C64>,
) -> Result<FlagWitness> {
    let fr = Frame::new(data, y, op)?;
    let n = fr.n;
    let (center, radius) = fr.choose_disc();
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::PathThroughSingularity(
            "no singularity-free disc".into(),
        ));
    }
    let points = sample_points(center, radius);
    let start = fr.initial(center, center);
    let mut wr = vec![0.0f64; n];
    let mut sol = vec![0.0f64; n];
    let mut lemma = vec![0.0f64; n];
    // L_i x^p, symbolic
    let lemma_fns: Vec<Vec<RationalFn<C64>>> = (1..=n)
        .map(|i| {
            let partial = LinearDiffOp::from_factors(op.factors()[..i].to_vec());
            (0..=LEMMA_MAX_POWER)
                .map(|p| partial.apply_factored(&RationalFn::from_poly(Poly::monomial(p))))
                .collect()
        })
        .collect();
    for &x in &points {
        let state = fr.propagate(center, x, &start)?;
        let jets = fr.jets(x, &state);
        for i in 1..=n {
            let cols: Vec<&[C64]> = jets[..i].iter().map(|j| j.as_slice()).collect();
            let got = wronskian(&cols);
            let want = fr.big_w(i, x, center);
            wr[i - 1] = wr[i - 1].max(rel(got, want, want.norm()));
        }
        for (k, jet) in jets.iter().enumerate() {
            let val = op.apply_to_jet(x, jet);
            let scale: f64 = (0..=n)
                .map(|m| op.coeff_of_derivative(m).eval_c64(x).norm() * jet[m].norm())
                .sum();
            sol[k] = sol[k].max(val.norm() / scale.max(f64::MIN_POSITIVE));
        }
        for i in 1..=n {
            let w_i = fr.big_w(i, x, center);
            for p in 0..=LEMMA_MAX_POWER {
                let lhs = lemma_fns[i - 1][p].eval_c64(x);
                let mono = Poly::<C64>::monomial(p);
                let mut mj = vec![mono.eval_c64(x)];
                let mut d = mono.clone();
                for _ in 0..n {
                    d = d.derivative();
                    mj.push(d.eval_c64(x));
                }
                let mut cols: Vec<&[C64]> = jets[..i].iter().map(|j| j.as_slice()).collect();
                cols.push(&mj);
                let rhs = wronskian(&cols) / w_i;
                let scale = lhs.norm().max(wronskian_scale(&cols) / w_i.norm());
                lemma[i - 1] = lemma[i - 1].max(rel(lhs, rhs, scale));
            }
        }
    }
    Ok(FlagWitness {
        center,
        radius,
        sample_points: points,
        wronskian_residuals: wr,
        solution_residuals: sol,
        lemma_residuals: lemma,
    })
}

/// [`flag_witness`] followed by the [`FLAG_TOL`] test.
pub fn check_flag(
    data: &OpData<C64>,
    y: &PolyTuple<C64>,
    op: &LinearDiffOp<C64>,
) -> Result<FlagWitness> {
    let w = flag_witness(data, y, op)?;
    for (i, &r) in w.wronskian_residuals.iter().enumerate() {
        if !(r <= FLAG_TOL) {
            return Err(Error::FlagViolation {
                level: i + 1,
                residual: r,
            });
        }
    }
    for (i, &r) in w
        .solution_residuals
        .iter()
        .chain(&w.lemma_residuals)
        .enumerate()
    {
        if !(r <= FLAG_TOL) {
            return Err(Error::FlagViolation {
                level: i % w.wronskian_residuals.len() + 1,
                residual: r,
            });
        }
    }
    Ok(w)
}

/// Residuals of `Wr(y_i, ỹ_i) = (T_{i+1}/T_i) y_{i-1} y_{i+1}` with
/// `ỹ_i T_1 ⋯ T_i = Wr(u_1, ..., u_{i-1}, u_{i+1})`, plus loops around
/// every root of `y` on which `ỹ_i` must be single-valued and free of a
/// principal part.
pub fn tilde_report(
    data: &OpData<C64>,
    y: &PolyTuple<C64>,
    op: &LinearDiffOp<C64>,
) -> Result<TildeReport> {
    let fr = Frame::new(data, y, op)?;
    let r = data.r;
    let (center, radius) = fr.choose_disc();
    let start = fr.initial(center, center);
    let mut ident = vec![0.0f64; r];
    for &x in &sample_points(center, radius) {
        let state = fr.propagate(center, x, &start)?;
        let jets = fr.jets(x, &state);
        for (idx, (yt, dyt)) in fr.tilde(x, center, &jets).into_iter().enumerate() {
            let i = idx + 1;
            let yi = y.y(i).eval_c64(x);
            let dyi = y.y(i).derivative().eval_c64(x);
            let lhs = yi * dyt - dyi * yt;
            let rhs = fr.t_val(i + 1, x, center) / fr.t_val(i, x, center)
                * y.y(i - 1).eval_c64(x)
                * y.y(i + 1).eval_c64(x);
            let scale = rhs.norm().max((yi * dyt).norm()).max((dyi * yt).norm());
            ident[idx] = ident[idx].max(rel(lhs, rhs, scale));
        }
    }

    let mut roots: Vec<C64> = Vec::new();
    for group in y.roots() {
        for t in group {
            if !roots.iter().any(|u| (u - t).norm() < 1e-12) {
                roots.push(t);
            }
        }
    }
    let mut probe = vec![0.0f64; r];
    for &t in &roots {
        let rho = 0.5 * fr.nearest_singularity(t, Some(t));
        let vertex = |k: usize| {
            t + C64::from_polar(
                rho,
                2.0 * std::f64::consts::PI * k as f64 / PROBE_POINTS as f64,
            )
        };
        let mut state = fr.initial(vertex(0), t);
        let mut values: Vec<Vec<C64>> = Vec::with_capacity(PROBE_POINTS + 1);
        for k in 0..=PROBE_POINTS {
            if k > 0 {
                state = fr.propagate(vertex(k - 1), vertex(k), &state)?;
            }
            let x = vertex(k);
            let jets = fr.jets(x, &state);
            values.push(fr.tilde(x, t, &jets).into_iter().map(|(v, _)| v).collect());
        }
        for i in 0..r {
            let size = values.iter().map(|v| v[i].norm()).fold(0.0, f64::max);
            if size == 0.0 {
                continue;
            }
            let mono = (values[PROBE_POINTS][i] - values[0][i]).norm() / size;
            let mut worst = mono;
            for p in 1..=3i32 {
                let coef: C64 = (0..PROBE_POINTS)
                    .map(|k| values[k][i] * (vertex(k) - t).powi(p))
                    .sum::<C64>()
                    / PROBE_POINTS as f64;
                worst = worst.max(coef.norm() / (size * rho.powi(p)));
            }
            probe[i] = probe[i].max(worst);
        }
    }
    Ok(TildeReport {
        identity_residuals: ident,
        probe_residuals: probe,
        probe_loops: roots.len(),
    })
}

/// [`tilde_report`] followed by the [`FLAG_TOL`] test.
pub fn check_tilde_identities(
    data: &OpData<C64>,
    y: &PolyTuple<C64>,
    op: &LinearDiffOp<C64>,
) -> Result<TildeReport> {
    let rep = tilde_report(data, y, op)?;
    for (i, (&a, &b)) in rep
        .identity_residuals
        .iter()
        .zip(&rep.probe_residuals)
        .enumerate()
    {
        let worst = a.max(b);
        if !(worst <= FLAG_TOL) {
            return Err(Error::IdentityViolation {
                index: i + 1,
                residual: worst,
            });
        }
    }
    Ok(rep)
}

/// Float view of an operator over any field.
pub fn op_to_c64<F: Scalar>(op: &LinearDiffOp<F>) -> LinearDiffOp<C64> {
    op.to_c64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffop::build_fundamental;
    use crate::rootdata::WeightSystem;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn setup(
        ws: &WeightSystem,
        t: &[Vec<C64>],
    ) -> (OpData<C64>, PolyTuple<C64>, LinearDiffOp<C64>) {
        let data = OpData::<C64>::from_ws(ws).unwrap();
        let y = PolyTuple::from_coords(&t.to_vec());
        let op = build_fundamental(&data, &y).unwrap();
        (data, y, op)
    }

    #[test]
    fn legendre_l1_flag_and_tilde() {
        // u_1 = x, second solution by reduction of order
        let ws = WeightSystem::classical_real(&[1.0, -1.0], &[-1.0, -1.0], 1).unwrap();
        let (data, y, op) = setup(&ws, &[vec![c(0.0)]]);
        let w = check_flag(&data, &y, &op).unwrap();
        assert!(w.max_residual() <= 1e-8, "{w:?}");
        assert!(w.sample_points.len() >= 10);
        let t = check_tilde_identities(&data, &y, &op).unwrap();
        assert!(t.max_residual() <= 1e-8, "{t:?}");
        assert_eq!(t.probe_loops, 1);
    }

    #[test]
    fn second_legendre_solution_closed_form() {
        // Wr(x, Q) = T_1 T_2 = (x-1)^{-1}(x+1)^{-1}; a solution with that
        // Wronskian is Q(x) = x/2 ln((x-1)/(x+1)) + 1 up to adding multiples of x.
        let ws = WeightSystem::classical_real(&[1.0, -1.0], &[-1.0, -1.0], 1).unwrap();
        let (data, y, op) = setup(&ws, &[vec![c(0.0)]]);
        let fr = Frame::new(&data, &y, &op).unwrap();
        let x0 = C64::new(0.3, 2.0);
        let start = fr.initial(x0, x0);
        let x1 = C64::new(-0.4, 1.1);
        let jets = fr.jets(x1, &fr.propagate(x0, x1, &start).unwrap());
        let q = |x: C64| x * 0.5 * ((x - 1.0) / (x + 1.0)).ln() + 1.0;
        let dq = |x: C64| 0.5 * ((x - 1.0) / (x + 1.0)).ln() + x / ((x - 1.0) * (x + 1.0));
        // u_2 - Q is a multiple of x
        let k0 = (jets[1][0] - q(x1)) / x1;
        let k1 = jets[1][1] - dq(x1);
        let k_start = (start[1 * 2] - q(x0)) / x0; // u_2(x0) = 0
        assert!((k0 - k1).norm() < 1e-10, "{k0} {k1}");
        assert!((k0 - k_start).norm() < 1e-10, "{k0} {k_start}");
    }

    #[test]
    fn wrong_operator_fails_flag() {
        let ws = WeightSystem::classical_real(&[1.0, -1.0], &[-1.0, -1.0], 1).unwrap();
        let (data, y, _) = setup(&ws, &[vec![c(0.0)]]);
        let other = PolyTuple::from_coords(&vec![vec![c(0.3)]]);
        let op = build_fundamental(&data, &other).unwrap();
        assert!(matches!(
            check_flag(&data, &y, &op),
            Err(Error::FlagViolation { .. })
        ));
    }

    #[test]
    fn non_critical_tuple_fails_probe() {
        let ws = WeightSystem::classical_real(&[1.0, -1.0], &[-1.0, -1.0], 1).unwrap();
        let (data, y, op) = setup(&ws, &[vec![c(0.3)]]);
        let rep = tilde_report(&data, &y, &op).unwrap();
        assert!(rep.max_residual() > 1e-3, "{rep:?}");
    }

    #[test]
    fn r2_with_nontrivial_t1() {
        // l = 0: the flag is built from the T_i alone
        let ws = WeightSystem::new(
            2,
            vec![c(0.0), c(1.0), C64::new(-1.0, 0.5)],
            vec![
                vec![c(0.3), c(-0.2), c(0.7)],
                vec![C64::new(0.1, 0.2), c(0.5), c(-0.4)],
                vec![c(-0.6), c(0.25), c(0.0)],
            ],
            vec![0, 0],
        )
        .unwrap();
        let (data, y, op) = setup(&ws, &[vec![], vec![]]);
        let w = check_flag(&data, &y, &op).unwrap();
        assert!(w.max_residual() <= 1e-8, "{w:?}");
        let t = check_tilde_identities(&data, &y, &op).unwrap();
        assert!(t.max_residual() <= 1e-8, "{t:?}");
    }
}

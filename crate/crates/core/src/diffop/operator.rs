use super::rational::RationalFn;
use super::{log_derivative, OpData};
use crate::error::{Error, Result};
use crate::poly::{poly_roots, Poly};
use crate::scalar::{Scalar, C64};
use crate::verify::{check_off_diagonal, PolyTuple};
use num_traits::Zero;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

/// Normalized size of a principal-part coefficient above which a point is
/// treated as a genuine pole in the floating-point singularity check.
pub const PRINCIPAL_PART_TOL: f64 = 1e-8;

/// Relative tolerance for float root/zero decisions inside limits.
const LIMIT_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub enum SingularPoint<F: Scalar> {
    Finite(F),
    Infinity,
}

/// Order-`N` operator `d^N + A_1 d^{N-1} + ... + A_N`, kept both as the
/// product `(d - g_N) ⋯ (d - g_1)` and expanded.
#[derive(Clone, Debug)]
pub struct LinearDiffOp<F: Scalar> {
    factors: Vec<RationalFn<F>>,
    coeffs: Vec<RationalFn<F>>,
    /// Each factor as `Σ c / (x - a)` when known from its construction.
    poles: Option<Vec<Vec<(C64, C64)>>>,
}

impl<F: Scalar> PartialEq for LinearDiffOp<F> {
    fn eq(&self, other: &Self) -> bool {
        self.factors == other.factors && self.coeffs == other.coeffs
    }
}

impl<F: Scalar> LinearDiffOp<F> {
    /// `factors[0]` is the rightmost (first applied) factor.
    pub fn from_factors(factors: Vec<RationalFn<F>>) -> Self {
        let coeffs = expand_operator(&factors);
        LinearDiffOp {
            factors,
            coeffs,
            poles: None,
        }
    }

    pub fn to_c64(&self) -> LinearDiffOp<C64> {
        LinearDiffOp {
            factors: self.factors.iter().map(|g| g.to_c64()).collect(),
            coeffs: self.coeffs.iter().map(|a| a.to_c64()).collect(),
            poles: self.poles.clone(),
        }
    }

    /// Partial fractions `(pole, residue)` of every factor, or `None` if
    /// some factor has a repeated pole or a polynomial part.
    pub(crate) fn partial_fractions(&self) -> Option<Vec<Vec<(C64, C64)>>> {
        match &self.poles {
            Some(p) => Some(p.clone()),
            None => self
                .factors
                .iter()
                .map(|g| simple_pole_form(&g.to_c64()))
                .collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.factors.len()
    }

    pub fn factors(&self) -> &[RationalFn<F>] {
        &self.factors
    }

    /// `A_1, ..., A_N`.
    pub fn coeffs(&self) -> &[RationalFn<F>] {
        &self.coeffs
    }

    /// Coefficient of `d^j` (with `d^N` having coefficient 1).
    pub fn coeff_of_derivative(&self, j: usize) -> RationalFn<F> {
        let n = self.order();
        if j == n {
            RationalFn::constant(F::one())
        } else {
            self.coeffs[n - j - 1].clone()
        }
    }

    /// `h^{-1} · D · h` where `shift = ln' h`: every factor `g` becomes `g - shift`.
    pub fn conjugate(&self, shift: &RationalFn<F>) -> Self {
        let mut out =
            LinearDiffOp::from_factors(self.factors.iter().map(|g| g.sub(shift)).collect());
        if let (Some(p), Some(s)) = (&self.poles, simple_pole_form(&shift.to_c64())) {
            out.poles = Some(
                p.iter()
                    .map(|g| g.iter().copied().chain(s.iter().map(|&(a, c)| (a, -c))).collect())
                    .collect(),
            );
        }
        out
    }

    /// Applies the factors one at a time to a rational function.
    pub fn apply_factored(&self, f: &RationalFn<F>) -> RationalFn<F> {
        self.factors
            .iter()
            .fold(f.clone(), |acc, g| acc.derivative().sub(&g.mul(&acc)))
    }

    /// Applies the expanded form to a rational function.
    pub fn apply_expanded(&self, f: &RationalFn<F>) -> RationalFn<F> {
        let n = self.order();
        let mut derivs = vec![f.clone()];
        for _ in 0..n {
            let next = derivs.last().unwrap().derivative();
            derivs.push(next);
        }
        let mut acc = derivs[n].clone();
        for (k, a) in self.coeffs.iter().enumerate() {
            acc = acc.add(&a.mul(&derivs[n - k - 1]));
        }
        acc
    }

    /// `Σ_j C_j(x) u^{(j)}(x)` for a jet `jet[j] = u^{(j)}(x)`, `j = 0..=N`.
    pub fn apply_to_jet(&self, x: C64, jet: &[C64]) -> C64 {
        let n = self.order();
        let mut acc = jet[n];
        for (k, a) in self.coeffs.iter().enumerate() {
            acc += a.to_c64().eval_c64(x) * jet[n - k - 1];
        }
        acc
    }

    /// Indicial polynomial whose roots are the exponents at `point`.
    pub fn indicial_polynomial(&self, point: &SingularPoint<F>) -> Result<Poly<F>> {
        let n = self.order();
        let mut limits = Vec::with_capacity(n + 1);
        limits.push(F::one());
        let contour = if F::EXACT { None } else { self.contour_limits(point) };
        match contour {
            Some(found) => {
                let vals = found.ok_or_else(|| Error::IrregularSingularity {
                    point: describe(point),
                })?;
                limits.extend(vals.into_iter().filter_map(F::from_c64));
            }
            None => {
                for (k, a) in self.coeffs.iter().enumerate() {
                    let k = k + 1;
                    let v = match point {
                        SingularPoint::Finite(zs) => a.limit_at(zs, k, LIMIT_TOL),
                        SingularPoint::Infinity => a.limit_at_infinity(k, LIMIT_TOL),
                    };
                    let v = v.ok_or_else(|| Error::IrregularSingularity {
                        point: describe(point),
                    })?;
                    limits.push(v);
                }
            }
        }
        let mut ind = Poly::zero();
        for (k, lim) in limits.iter().enumerate() {
            ind = &ind + &falling_factorial::<F>(n - k).scale(lim);
        }
        if matches!(point, SingularPoint::Infinity) {
            // u ~ x^ρ means exponent -ρ at infinity
            ind = Poly::new(
                ind.coeffs()
                    .iter()
                    .enumerate()
                    .map(|(j, c)| if j % 2 == 1 { -c.clone() } else { c.clone() })
                    .collect(),
            )
            .monic();
        }
        Ok(ind)
    }

    /// Float limits `a_k` as mean values of `(x - z)^k A_k` (or `x^k A_k`)
    /// on a circle, with the coefficients evaluated from the partial
    /// fractions of the factors. Expanded coefficients lose most of their
    /// digits when roots of `y` crowd around `z`. `None` when the factors
    /// are not in simple-pole form or a root sits on the point itself;
    /// `Some(None)` when a principal part survives (irregular point).
    fn contour_limits(&self, point: &SingularPoint<F>) -> Option<Option<Vec<C64>>> {
        let poles = self.partial_fractions()?;
        let all: Vec<C64> = poles.iter().flatten().map(|(a, _)| *a).collect();
        let order = self.order();
        let m = 64;
        let unit: Vec<C64> = (0..m)
            .map(|j| C64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / m as f64))
            .collect();
        // h_k(w) on the circle, and the power of w whose mean must vanish
        let (center, rho, sign) = match point {
            SingularPoint::Finite(zs) => {
                let z = zs.to_c64();
                let same = 1e-8 * (1.0 + z.norm());
                let mut nearest = f64::INFINITY;
                for a in &all {
                    let d = (a - z).norm();
                    if d > same {
                        nearest = nearest.min(d);
                    } else if d > 1e-13 * (1.0 + z.norm()) {
                        return None;
                    }
                }
                (z, (0.5 * nearest).min(1.0), 1)
            }
            SingularPoint::Infinity => {
                let far = all.iter().map(|a| a.norm()).fold(0.0, f64::max);
                (C64::new(0.0, 0.0), 2.0 * far + 1.0, -1)
            }
        };
        let table: Vec<(C64, Vec<C64>)> = unit
            .iter()
            .map(|u| {
                let w = u * rho;
                (w, coefficients_from_poles(&poles, center + w, order))
            })
            .collect();
        let mut limits = Vec::with_capacity(order);
        for k in 0..order {
            let h: Vec<C64> = table.iter().map(|(w, a)| a[k] * w.powi(k as i32 + 1)).collect();
            let size = h.iter().map(|v| v.norm()).fold(0.0, f64::max);
            let mean = |p: i32| -> C64 {
                h.iter().zip(&unit).map(|(v, u)| v * u.powi(sign * p)).sum::<C64>() / m as f64
            };
            for p in 1..=2 {
                if mean(p).norm() > PRINCIPAL_PART_TOL * size.max(f64::MIN_POSITIVE) {
                    return Some(None);
                }
            }
            limits.push(mean(0));
        }
        Some(Some(limits))
    }

    pub fn exponents_at(&self, point: &SingularPoint<F>) -> Result<Vec<C64>> {
        Ok(poly_roots(&self.indicial_polynomial(point)?.to_c64()))
    }

    /// Exponents read off the factored form: with residue `λ_k` of `g_k`
    /// at a finite point they are `λ_k + k - 1`; at infinity, with
    /// `g_k ~ μ_k / x`, they are `-(μ_k + k - 1)`.
    pub fn factored_exponents_at(&self, point: &SingularPoint<F>) -> Result<Vec<F>> {
        self.factors
            .iter()
            .enumerate()
            .map(|(k, g)| {
                let shift = F::from_i64(k as i64);
                match point {
                    SingularPoint::Finite(zs) => g
                        .limit_at(zs, 1, LIMIT_TOL)
                        .map(|lam| lam + shift)
                        .ok_or_else(|| Error::IrregularSingularity {
                            point: describe(point),
                        }),
                    SingularPoint::Infinity => g
                        .limit_at_infinity(1, LIMIT_TOL)
                        .map(|mu| -(mu + shift))
                        .ok_or_else(|| Error::IrregularSingularity {
                            point: describe(point),
                        }),
                }
            })
            .collect()
    }

    /// Exponents at every `z_s` and at infinity.
    pub fn exponent_profile(&self, z: &[F]) -> Result<ExponentProfile> {
        let finite = z
            .iter()
            .map(|zs| self.exponents_at(&SingularPoint::Finite(zs.clone())))
            .collect::<Result<Vec<_>>>()?;
        let infinity = self.exponents_at(&SingularPoint::Infinity)?;
        Ok(ExponentProfile { finite, infinity })
    }

    /// Looks for singular points of the expanded form outside `z`.
    ///
    /// Exact fields: after reduction, any denominator factor without a root
    /// in `z` is a pole outside. Floats: at every candidate root `t` of a
    /// denominator atom not in `z`, the principal part of each `A_k` is
    /// measured by a Cauchy integral on a circle around `t` and compared to
    /// the size of `A_k` on that circle.
    pub fn singularities_outside(&self, z: &[F]) -> SingularityReport {
        let mut report = SingularityReport::default();
        let zc: Vec<C64> = z.iter().map(|v| v.to_c64()).collect();
        let mut candidates: Vec<C64> = Vec::new();
        for a in &self.coeffs {
            for (atom, _) in a.atoms() {
                let mut rest = atom.clone();
                for zs in z {
                    let mu = rest.root_multiplicity(zs, LIMIT_TOL);
                    for _ in 0..mu {
                        rest = rest.div_rem(&Poly::linear(zs.clone())).0;
                    }
                }
                if rest.degree().unwrap_or(0) == 0 {
                    continue;
                }
                for root in rest.roots() {
                    if !candidates.iter().any(|c| (c - root).norm() < 1e-9) {
                        candidates.push(root);
                    }
                }
            }
        }
        if F::EXACT {
            // reduced representation: every remaining atom is a true pole
            report.poles_outside = candidates;
            report.max_principal_part = if report.poles_outside.is_empty() {
                0.0
            } else {
                f64::INFINITY
            };
            return report;
        }
        let coeffs: Vec<RationalFn<C64>> = self.coeffs.iter().map(|a| a.to_c64()).collect();
        // partial fractions of the factors evaluate far more accurately near
        // clustered roots than the expanded coefficients
        let poles = self.partial_fractions();
        if let Some(p) = &poles {
            // roots recomputed from different atoms scatter by roundoff;
            // the factor poles are the clean candidate list
            let close = |a: C64, b: C64| (a - b).norm() <= 1e-8 * (1.0 + a.norm());
            candidates.clear();
            for &(a, _) in p.iter().flatten() {
                if !zc.iter().any(|&zs| close(a, zs)) && !candidates.iter().any(|&c| close(a, c)) {
                    candidates.push(a);
                }
            }
        }
        let order = self.order();
        let eval_all = |x: C64| -> Vec<C64> {
            match &poles {
                Some(p) => coefficients_from_poles(p, x, order),
                None => coeffs.iter().map(|a| a.eval_c64(x)).collect(),
            }
        };
        for (ci, &t) in candidates.iter().enumerate() {
            let nearest = zc
                .iter()
                .copied()
                .chain(
                    candidates
                        .iter()
                        .enumerate()
                        .filter(|(j, _)| *j != ci)
                        .map(|(_, c)| *c),
                )
                .map(|p| (p - t).norm())
                .fold(f64::INFINITY, f64::min);
            let rho = (0.5 * nearest).min(1.0);
            let m = 64;
            let pts: Vec<C64> = (0..m)
                .map(|j| C64::from_polar(rho, 2.0 * std::f64::consts::PI * j as f64 / m as f64))
                .collect();
            let mut worst: f64 = 0.0;
            let table: Vec<Vec<C64>> = pts.iter().map(|w| eval_all(t + w)).collect();
            for k in 0..coeffs.len() {
                let vals: Vec<C64> = table.iter().map(|row| row[k]).collect();
                let size = vals.iter().map(|v| v.norm()).fold(0.0, f64::max);
                if size == 0.0 {
                    continue;
                }
                for p in 1..=(k + 2) as i32 {
                    let c: C64 = vals
                        .iter()
                        .zip(&pts)
                        .map(|(v, w)| v * w.powi(p))
                        .sum::<C64>()
                        / m as f64;
                    worst = worst.max(c.norm() / rho.powi(p) / size);
                }
            }
            report.max_principal_part = report.max_principal_part.max(worst);
            if worst > PRINCIPAL_PART_TOL {
                report.poles_outside.push(t);
            }
        }
        report
    }

    pub fn to_json(&self) -> LinearDiffOpJson {
        let conv = |f: &RationalFn<F>| RationalFnJson {
            numerator: f
                .numerator()
                .coeffs()
                .iter()
                .map(|c| pair(c.to_c64()))
                .collect(),
            denominator: f
                .denominator()
                .coeffs()
                .iter()
                .map(|c| pair(c.to_c64()))
                .collect(),
        };
        LinearDiffOpJson {
            order: self.order(),
            factors: self.factors.iter().map(conv).collect(),
            coefficients: self.coeffs.iter().map(conv).collect(),
        }
    }
}

fn pair(c: C64) -> [f64; 2] {
    [c.re, c.im]
}

fn describe<F: Scalar>(p: &SingularPoint<F>) -> String {
    match p {
        SingularPoint::Finite(z) => format!("{}", z.to_c64()),
        SingularPoint::Infinity => "infinity".into(),
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SingularityReport {
    /// Singular points of the expanded operator found outside `z`.
    #[serde(serialize_with = "ser_c64_list")]
    pub poles_outside: Vec<C64>,
    /// Largest normalized principal-part coefficient met (floats), 0 or ∞ (exact).
    pub max_principal_part: f64,
}

impl SingularityReport {
    pub fn ok(&self) -> bool {
        self.poles_outside.is_empty()
    }
}

fn ser_c64_list<S: Serializer>(v: &[C64], s: S) -> std::result::Result<S::Ok, S::Error> {
    v.iter().map(|c| pair(*c)).collect::<Vec<_>>().serialize(s)
}

#[derive(Clone, Debug, Serialize)]
pub struct RationalFnJson {
    pub numerator: Vec<[f64; 2]>,
    pub denominator: Vec<[f64; 2]>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LinearDiffOpJson {
    pub order: usize,
    /// Rightmost factor first: `g_1, ..., g_N` of `(d - g_N) ⋯ (d - g_1)`.
    pub factors: Vec<RationalFnJson>,
    /// `A_1, ..., A_N`.
    pub coefficients: Vec<RationalFnJson>,
}

/// Exponents at each finite singular point and at infinity.
#[derive(Clone, Debug, PartialEq)]
pub struct ExponentProfile {
    pub finite: Vec<Vec<C64>>,
    pub infinity: Vec<C64>,
}

impl Serialize for ExponentProfile {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.finite.len() + 1))?;
        for (i, ex) in self.finite.iter().enumerate() {
            map.serialize_entry(
                &format!("z{i}"),
                &ex.iter().map(|c| pair(*c)).collect::<Vec<_>>(),
            )?;
        }
        map.serialize_entry(
            "inf",
            &self.infinity.iter().map(|c| pair(*c)).collect::<Vec<_>>(),
        )?;
        map.end()
    }
}

/// `ρ (ρ - 1) ⋯ (ρ - j + 1)`
pub fn falling_factorial<F: Scalar>(j: usize) -> Poly<F> {
    (0..j).fold(Poly::one(), |acc, i| {
        &acc * &Poly::linear(F::from_i64(i as i64))
    })
}

/// `g = Σ c / (x - a)` when every denominator atom is simple and the
/// numerator has lower degree; `None` otherwise.
pub(crate) fn simple_pole_form(g: &RationalFn<C64>) -> Option<Vec<(C64, C64)>> {
    if g.atoms().iter().any(|(_, e)| *e != 1) {
        return None;
    }
    let den_deg: usize = g.atoms().iter().map(|(a, _)| a.degree().unwrap_or(0)).sum();
    if g.numerator().degree().is_some_and(|d| d >= den_deg) {
        return None;
    }
    let mut out = Vec::with_capacity(den_deg);
    for (i, (atom, _)) in g.atoms().iter().enumerate() {
        let datom = atom.derivative();
        for a in atom.roots() {
            let others = g
                .atoms()
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .fold(C64::new(1.0, 0.0), |acc, (_, (b, _))| acc * b.eval_c64(a));
            let d = datom.eval_c64(a) * others;
            if d == C64::new(0.0, 0.0) {
                return None;
            }
            out.push((a, g.numerator().eval_c64(a) / d));
        }
    }
    Some(out)
}

/// First `len` Taylor coefficients at `x` of `Σ c / (x - a)`.
pub(crate) fn pole_jet(poles: &[(C64, C64)], x: C64, len: usize) -> Vec<C64> {
    // c / (x - a + h) = Σ_m c (-h)^m / (x - a)^{m+1}
    let mut out = vec![C64::new(0.0, 0.0); len];
    for &(a, c) in poles {
        let inv = 1.0 / (x - a);
        let mut term = c * inv;
        for slot in out.iter_mut() {
            *slot += term;
            term *= -inv;
        }
    }
    out
}

/// Coefficients of `d^N, …, d^0` shifted to `A_1..A_N` order at `x`, by
/// composing the factors on truncated Taylor jets at `x`.
fn coefficients_from_poles(poles: &[Vec<(C64, C64)>], x: C64, order: usize) -> Vec<C64> {
    let len = order + 1;
    let zero = C64::new(0.0, 0.0);
    let jet_of = |p: &[(C64, C64)]| pole_jet(p, x, len);
    let mul = |a: &[C64], b: &[C64]| -> Vec<C64> {
        let mut out = vec![zero; len];
        for (i, ai) in a.iter().enumerate() {
            for (j, bj) in b.iter().enumerate().take(len - i) {
                out[i + j] += ai * bj;
            }
        }
        out
    };
    // Taylor coefficients: derivative maps c_m to (m+1) c_{m+1}
    let deriv = |a: &[C64]| -> Vec<C64> {
        let mut out = vec![zero; len];
        for m in 0..len - 1 {
            out[m] = a[m + 1] * (m + 1) as f64;
        }
        out
    };
    let mut one = vec![zero; len];
    one[0] = C64::new(1.0, 0.0);
    let mut b: Vec<Vec<C64>> = vec![one];
    for p in poles {
        let g = jet_of(p);
        let m = b.len();
        let mut next = Vec::with_capacity(m + 1);
        for j in 0..=m {
            let mut cj = vec![zero; len];
            if j < m {
                let gb = mul(&g, &b[j]);
                for ((c, d), e) in cj.iter_mut().zip(deriv(&b[j])).zip(gb) {
                    *c += d - e;
                }
            }
            if j >= 1 {
                for (c, d) in cj.iter_mut().zip(&b[j - 1]) {
                    *c += d;
                }
            }
            next.push(cj);
        }
        b = next;
    }
    let n = poles.len();
    (1..=n).map(|k| b[n - k][0]).collect()
}

/// Composes first-order factors, rightmost first, using
/// `(d - g) ∘ Σ B_j d^j = Σ (B_j' + B_{j-1} - g B_j) d^j`.
/// Returns `A_1, ..., A_N` with `A_k` the coefficient of `d^{N-k}`.
pub fn expand_operator<F: Scalar>(factors: &[RationalFn<F>]) -> Vec<RationalFn<F>> {
    let mut b: Vec<RationalFn<F>> = vec![RationalFn::constant(F::one())];
    for g in factors {
        let m = b.len();
        let mut next = Vec::with_capacity(m + 1);
        for j in 0..=m {
            let mut c = RationalFn::zero();
            if j < m {
                c = c.add(&b[j].derivative()).sub(&g.mul(&b[j]));
            }
            if j >= 1 {
                c = c.add(&b[j - 1]);
            }
            next.push(c);
        }
        b = next;
    }
    let n = factors.len();
    (1..=n).map(|k| b[n - k].clone()).collect()
}

/// The fundamental operator of the tuple `y`:
/// `(d - ln'(T_{r+1}/y_r)) ⋯ (d - ln'(y_2 T_2 / y_1)) (d - ln'(y_1 T_1))`.
pub fn build_fundamental<F: Scalar>(data: &OpData<F>, y: &PolyTuple<F>) -> Result<LinearDiffOp<F>> {
    if y.polys.len() != data.r {
        return Err(Error::InvalidInput(format!(
            "{} polynomials for r = {}",
            y.polys.len(),
            data.r
        )));
    }
    for (i, (p, &li)) in y.polys.iter().zip(&data.l).enumerate() {
        if p.degree() != Some(li) || p.leading() != F::one() {
            return Err(Error::InvalidInput(format!(
                "y_{} must be monic of degree l_{} = {li}",
                i + 1,
                i + 1
            )));
        }
    }
    check_off_diagonal(data, y)?;
    let n = data.r + 1;
    let mut factors = Vec::with_capacity(n);
    for k in 1..=n {
        let mut g = log_derivative(&data.t_quasi(k))?;
        if k <= data.r {
            g = g.add(&RationalFn::log_derivative_of(&y.polys[k - 1]));
        }
        if k >= 2 {
            g = g.sub(&RationalFn::log_derivative_of(&y.polys[k - 2]));
        }
        factors.push(g);
    }
    // residues are read off the construction rather than recomputed from
    // the combined numerators
    let roots = y.roots();
    let poles = (1..=n)
        .map(|k| {
            let mut p: Vec<(C64, C64)> = data
                .z
                .iter()
                .zip(&data.m)
                .map(|(zs, row)| (zs.to_c64(), -row[k - 1].to_c64()))
                .filter(|(_, c)| *c != C64::new(0.0, 0.0))
                .collect();
            if k <= data.r {
                p.extend(roots[k - 1].iter().map(|&t| (t, C64::new(1.0, 0.0))));
            }
            if k >= 2 {
                p.extend(roots[k - 2].iter().map(|&t| (t, C64::new(-1.0, 0.0))));
            }
            p
        })
        .collect();
    let mut op = LinearDiffOp::from_factors(factors);
    op.poles = Some(poles);
    Ok(op)
}

/// `{-m_{s,1}, -m_{s,2}+1, ..., -m_{s,r+1}+r}` at `z_s` and
/// `{m_{∞,1}, m_{∞,2}-1, ..., m_{∞,r+1}-r}` at infinity.
pub fn expected_exponents<F: Scalar>(data: &OpData<F>, point: Option<usize>) -> Vec<F> {
    (0..=data.r)
        .map(|i| {
            let k = F::from_i64(i as i64);
            match point {
                Some(s) => -data.m[s][i].clone() + k,
                None => data.m_inf[i].clone() - k,
            }
        })
        .collect()
}

/// Exponents of `T_1^{-1} D T_1`: `{0, m_{s,1}-m_{s,2}+1, ...}` at `z_s`
/// and `{-l_1, -m_{∞,1}+m_{∞,2}-1-l_1, ...}` at infinity.
pub fn expected_conjugated_exponents<F: Scalar>(data: &OpData<F>, point: Option<usize>) -> Vec<F> {
    let l1 = F::from_i64(data.l.first().copied().unwrap_or(0) as i64);
    (0..=data.r)
        .map(|i| {
            let k = F::from_i64(i as i64);
            match point {
                Some(s) => data.m[s][0].clone() - data.m[s][i].clone() + k,
                None => -data.m_inf[0].clone() + data.m_inf[i].clone() - k - l1.clone(),
            }
        })
        .collect()
}

impl<F: Scalar> Zero for LinearDiffOp<F> {
    fn zero() -> Self {
        LinearDiffOp {
            poles: None,
            factors: Vec::new(),
            coeffs: Vec::new(),
        }
    }
    fn is_zero(&self) -> bool {
        self.factors.is_empty()
    }
}

impl<F: Scalar> std::ops::Add for LinearDiffOp<F> {
    type Output = Self;
    /// Composition `self ∘ rhs` (rhs applied first).
    fn add(self, rhs: Self) -> Self {
        let mut f = rhs.factors;
        f.extend(self.factors);
        LinearDiffOp::from_factors(f)
    }
}

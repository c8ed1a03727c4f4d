//! Dense univariate polynomials with coefficients in ascending degree.

use crate::scalar::{Scalar, C64};
use num_traits::{One, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, PartialEq)]
pub struct Poly<F> {
    coeffs: Vec<F>,
}

impl<F: Scalar> fmt::Debug for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Poly{:?}",
            self.coeffs.iter().map(|c| c.to_c64()).collect::<Vec<_>>()
        )
    }
}

impl<F: Scalar> Poly<F> {
    /// Trailing exact zeros are trimmed; the zero polynomial has no coefficients.
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(F::one())
    }

    pub fn constant(c: F) -> Self {
        Poly::new(vec![c])
    }

    /// `x - a`
    pub fn linear(a: F) -> Self {
        Poly::new(vec![-a, F::one()])
    }

    pub fn monomial(k: usize) -> Self {
        let mut c = vec![F::zero(); k + 1];
        c[k] = F::one();
        Poly::new(c)
    }

    /// Monic polynomial `prod (x - r)`.
    pub fn from_roots(roots: &[F]) -> Self {
        roots
            .iter()
            .fold(Poly::one(), |acc, r| &acc * &Poly::linear(r.clone()))
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    /// Coefficient of `x^k` (zero past the end).
    pub fn coeff(&self, k: usize) -> F {
        self.coeffs.get(k).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> F {
        self.coeffs.last().cloned().unwrap_or_else(F::zero)
    }

    pub fn eval(&self, x: &F) -> F {
        self.coeffs
            .iter()
            .rev()
            .fold(F::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn eval_c64(&self, x: C64) -> C64 {
        self.coeffs
            .iter()
            .rev()
            .fold(C64::zero(), |acc, c| acc * x + c.to_c64())
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.clone() * F::from_i64(k as i64))
                .collect(),
        )
    }

    pub fn scale(&self, s: &F) -> Self {
        Poly::new(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.leading();
        Poly::new(self.coeffs.iter().map(|c| c.clone() / lc.clone()).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Poly::one(), |acc, _| &acc * self)
    }

    /// Quotient and remainder. Panics on division by the zero polynomial.
    pub fn div_rem(&self, d: &Poly<F>) -> (Poly<F>, Poly<F>) {
        let dd = d.degree().expect("division by zero polynomial");
        let lc = d.leading();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![F::zero(); rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let q = rem[k].clone() / lc.clone();
            if !q.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    let idx = k - dd + j;
                    rem[idx] = rem[idx].clone() - q.clone() * dc.clone();
                }
            }
            // the leading term cancels by construction
            rem[k] = F::zero();
            quot[k - dd] = q;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    /// Monic greatest common divisor by the Euclidean algorithm.
    /// Meaningful for exact fields only.
    pub fn gcd(&self, other: &Poly<F>) -> Poly<F> {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Coefficients of `p(x + a)`.
    pub fn taylor_shift(&self, a: &F) -> Poly<F> {
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for k in (i..n.saturating_sub(1)).rev() {
                let t = c[k + 1].clone() * a.clone();
                c[k] = c[k].clone() + t;
            }
        }
        Poly::new(c)
    }

    /// Multiplicity of `a` as a root, stopping at `max`.
    /// In floating point a value is treated as a root when
    /// `|p(a)| <= tol * sum |c_k| |a|^k`.
    pub fn root_multiplicity(&self, a: &F, tol: f64) -> usize {
        let mut p = self.clone();
        let mut m = 0;
        while let Some(d) = p.degree() {
            if d == 0 {
                break;
            }
            let v = p.eval(a);
            let is_root = if F::EXACT {
                v.is_zero()
            } else {
                let scale: f64 = p
                    .coeffs
                    .iter()
                    .enumerate()
                    .map(|(k, c)| c.modulus() * a.modulus().powi(k as i32))
                    .sum();
                v.modulus() <= tol * scale.max(f64::MIN_POSITIVE)
            };
            if !is_root {
                break;
            }
            p = p.div_rem(&Poly::linear(a.clone())).0;
            m += 1;
        }
        m
    }

    pub fn map<G: Scalar>(&self, f: impl Fn(&F) -> G) -> Poly<G> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    pub fn to_c64(&self) -> Poly<C64> {
        self.map(|c| c.to_c64())
    }

    /// Max-norm of the coefficient vector.
    pub fn norm_inf(&self) -> f64 {
        self.coeffs.iter().map(|c| c.modulus()).fold(0.0, f64::max)
    }

    /// All complex roots (with multiplicity), from the eigenvalues of the
    /// companion matrix followed by Newton polishing on the polynomial.
    pub fn roots(&self) -> Vec<C64> {
        poly_roots(&self.to_c64())
    }
}

impl<F: Scalar> Add for &Poly<F> {
    type Output = Poly<F>;
    fn add(self, rhs: &Poly<F>) -> Poly<F> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<F: Scalar> Sub for &Poly<F> {
    type Output = Poly<F>;
    fn sub(self, rhs: &Poly<F>) -> Poly<F> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<F: Scalar> Mul for &Poly<F> {
    type Output = Poly<F>;
    fn mul(self, rhs: &Poly<F>) -> Poly<F> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![F::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }
}

impl<F: Scalar> Neg for &Poly<F> {
    type Output = Poly<F>;
    fn neg(self) -> Poly<F> {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl<F: Scalar> One for Poly<F> {
    fn one() -> Self {
        Poly::constant(F::one())
    }
}

impl<F: Scalar> std::ops::Mul for Poly<F> {
    type Output = Poly<F>;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

/// Roots of a complex polynomial. Degrees 1 and 2 are solved directly,
/// higher degrees through the companion matrix.
pub fn poly_roots(p: &Poly<C64>) -> Vec<C64> {
    let Some(deg) = p.degree() else {
        return Vec::new();
    };
    let m = p.monic();
    let c = m.coeffs();
    let mut roots = match deg {
        0 => return Vec::new(),
        1 => vec![-c[0]],
        2 => {
            let (b, cc) = (c[1], c[0]);
            let disc = (b * b - cc * 4.0).sqrt();
            // pick the sign that avoids cancellation
            let q = if (b.conj() * disc).re >= 0.0 {
                -(b + disc) * 0.5
            } else {
                -(b - disc) * 0.5
            };
            if q.norm() == 0.0 {
                vec![C64::zero(), C64::zero()]
            } else {
                vec![q, cc / q]
            }
        }
        _ => {
            let mut h = vec![vec![C64::zero(); deg]; deg];
            for j in 0..deg {
                h[0][j] = -c[deg - 1 - j];
            }
            for i in 1..deg {
                h[i][i - 1] = C64::one();
            }
            hessenberg_eigenvalues(h)
        }
    };
    let dp = m.derivative();
    for r in roots.iter_mut() {
        polish_root(&m, &dp, r);
    }
    roots
}

fn polish_root(p: &Poly<C64>, dp: &Poly<C64>, r: &mut C64) {
    let mut best = p.eval(r).norm();
    for _ in 0..8 {
        let d = dp.eval(r);
        if d.norm() == 0.0 {
            break;
        }
        let cand = *r - p.eval(r) / d;
        let v = p.eval(&cand).norm();
        if v < best {
            best = v;
            *r = cand;
        } else {
            break;
        }
    }
}

/// Eigenvalues of an upper Hessenberg matrix by shifted QR iteration with
/// Givens rotations and deflation.
pub fn hessenberg_eigenvalues(mut h: Vec<Vec<C64>>) -> Vec<C64> {
    let n = h.len();
    let mut eig = Vec::with_capacity(n);
    if n == 0 {
        return eig;
    }
    let mut hi = n - 1;
    let mut iter = 0usize;
    let mut total = 0usize;
    loop {
        if hi == 0 {
            eig.push(h[0][0]);
            break;
        }
        let mut l = hi;
        while l > 0 {
            let s = h[l][l].norm() + h[l - 1][l - 1].norm();
            if h[l][l - 1].norm() <= f64::EPSILON * s.max(f64::MIN_POSITIVE) {
                h[l][l - 1] = C64::zero();
                break;
            }
            l -= 1;
        }
        if l == hi {
            eig.push(h[hi][hi]);
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        total += 1;
        if total > 100 * n {
            // no convergence: report the remaining diagonal, Newton polish follows
            for k in (0..=hi).rev() {
                eig.push(h[k][k]);
            }
            break;
        }
        let a = h[hi - 1][hi - 1];
        let b = h[hi - 1][hi];
        let c = h[hi][hi - 1];
        let d = h[hi][hi];
        let mu = if iter % 10 == 0 {
            d + C64::new(h[hi][hi - 1].norm(), 0.5 * h[hi][hi - 1].norm())
        } else {
            let tr2 = (a + d) * 0.5;
            let disc = (tr2 * tr2 - (a * d - b * c)).sqrt();
            let m1 = tr2 + disc;
            let m2 = tr2 - disc;
            if (m1 - d).norm() < (m2 - d).norm() {
                m1
            } else {
                m2
            }
        };
        for k in l..=hi {
            h[k][k] -= mu;
        }
        let mut rots = Vec::with_capacity(hi - l);
        for k in l..hi {
            let x = h[k][k];
            let y = h[k + 1][k];
            let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
            let (cs, sn) = if r == 0.0 {
                (C64::one(), C64::zero())
            } else {
                (x / r, y / r)
            };
            for j in k..=hi {
                let p = h[k][j];
                let q = h[k + 1][j];
                h[k][j] = cs.conj() * p + sn.conj() * q;
                h[k + 1][j] = -sn * p + cs * q;
            }
            rots.push((cs, sn));
        }
        for (idx, k) in (l..hi).enumerate() {
            let (cs, sn) = rots[idx];
            let top = (k + 2).min(hi);
            for i in l..=top {
                let p = h[i][k];
                let q = h[i][k + 1];
                h[i][k] = p * cs + q * sn;
                h[i][k + 1] = -p * sn.conj() + q * cs.conj();
            }
        }
        for k in l..=hi {
            h[k][k] += mu;
        }
    }
    eig
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::CQ;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn arithmetic_and_division() {
        let p = Poly::from_roots(&[c(1.0), c(-2.0), c(3.0)]);
        let (q, r) = p.div_rem(&Poly::linear(c(3.0)));
        assert!(r.norm_inf() < 1e-14);
        assert_eq!(q.degree(), Some(2));
        let back = &q * &Poly::linear(c(3.0));
        assert!((&back - &p).norm_inf() < 1e-14);
    }

    #[test]
    fn exact_gcd_and_multiplicity() {
        let one = CQ::from_i64(1);
        let two = CQ::from_i64(2);
        let a = &Poly::linear(one.clone()).pow(2) * &Poly::linear(two.clone());
        let b = &Poly::linear(one.clone()) * &Poly::linear(-two.clone());
        assert_eq!(a.gcd(&b), Poly::linear(one.clone()));
        assert_eq!(a.root_multiplicity(&one, 0.0), 2);
        assert_eq!(a.root_multiplicity(&-one, 0.0), 0);
    }

    #[test]
    fn taylor_shift_matches_evaluation() {
        let p = Poly::new(vec![c(1.0), c(-2.0), c(0.5), c(3.0)]);
        let a = c(0.7);
        let s = p.taylor_shift(&a);
        for x in [-1.0, 0.0, 0.3, 2.0] {
            assert!((s.eval(&c(x)) - p.eval(&c(x + 0.7))).norm() < 1e-12);
        }
    }

    #[test]
    fn companion_roots_recover_known_roots() {
        let want = [
            c(-2.0),
            C64::new(0.5, 1.0),
            C64::new(0.5, -1.0),
            c(3.0),
            C64::new(-1.0, 0.25),
        ];
        let p = Poly::from_roots(&want);
        let mut got = p.roots();
        assert_eq!(got.len(), 5);
        for w in want {
            let (i, d) = got
                .iter()
                .enumerate()
                .map(|(i, g)| (i, (g - w).norm()))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            assert!(d < 1e-12, "root {w} missed by {d}");
            got.remove(i);
        }
    }

    #[test]
    fn quadratic_roots_without_cancellation() {
        let p = Poly::from_roots(&[c(1e-8), c(1e8)]);
        let mut r: Vec<f64> = p.roots().iter().map(|z| z.re).collect();
        r.sort_by(f64::total_cmp);
        assert!((r[0] - 1e-8).abs() < 1e-20);
        assert!((r[1] - 1e8).abs() < 1e-6);
    }
}

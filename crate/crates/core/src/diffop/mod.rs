//! Polynomial and rational algebra for the fundamental differential
//! operator of a critical point: quasi-polynomials `T_i`, first-order
//! factors, expansion, exponents, and the classical Van Vleck extraction.
//!
//! Everything here is generic over [`Scalar`], so the same code runs in
//! exact Gaussian-rational arithmetic when the data allow it.

mod classical;
mod operator;
mod rational;

pub use classical::{van_vleck_extract, VanVleck, VanVleckJson, VAN_VLECK_TOL};
pub use operator::{
    build_fundamental, expand_operator, expected_conjugated_exponents, expected_exponents,
    falling_factorial, ExponentProfile, LinearDiffOp, LinearDiffOpJson, SingularPoint,
    SingularityReport, PRINCIPAL_PART_TOL,
};
pub use rational::RationalFn;
pub(crate) use operator::pole_jet;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::rootdata::WeightSystem;
use crate::scalar::{Scalar, C64};

/// A [`WeightSystem`] with its numbers converted to the coefficient field.
#[derive(Clone, Debug, PartialEq)]
pub struct OpData<F: Scalar> {
    pub r: usize,
    pub z: Vec<F>,
    pub m: Vec<Vec<F>>,
    pub l: Vec<usize>,
    pub m_inf: Vec<F>,
}

impl<F: Scalar> OpData<F> {
    /// `None` when an exact field cannot represent the data.
    pub fn from_ws(ws: &WeightSystem) -> Option<Self> {
        let conv = |c: &C64| F::from_c64(*c);
        let z = ws.z().iter().map(conv).collect::<Option<Vec<F>>>()?;
        let m = ws
            .m()
            .iter()
            .map(|row| row.iter().map(conv).collect::<Option<Vec<F>>>())
            .collect::<Option<Vec<_>>>()?;
        let r = ws.rank();
        let l = ws.l().0.clone();
        let m_inf = (0..=r)
            .map(|i| {
                let sum = m.iter().fold(F::zero(), |acc, row| acc + row[i].clone());
                let here = if i < r { l[i] as i64 } else { 0 };
                let before = if i > 0 { l[i - 1] as i64 } else { 0 };
                sum - F::from_i64(here) + F::from_i64(before)
            })
            .collect();
        Some(OpData { r, z, m, l, m_inf })
    }

    pub fn n(&self) -> usize {
        self.z.len()
    }

    /// `(Λ_s, α_i)`, 0-based `s`, 1-based `i`.
    pub fn pairing(&self, s: usize, i: usize) -> F {
        self.m[s][i - 1].clone() - self.m[s][i].clone()
    }

    /// `T_i = Π_s (x - z_s)^{-m_{s,i}}`, 1-based `i`.
    pub fn t_quasi(&self, i: usize) -> QuasiPoly<F> {
        QuasiPoly {
            z: self.z.clone(),
            lambda: self.m.iter().map(|row| -row[i - 1].clone()).collect(),
            poly: Poly::one(),
        }
    }
}

/// `f(x) · Π_s (x - z_s)^{λ_s}`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuasiPoly<F: Scalar> {
    pub z: Vec<F>,
    pub lambda: Vec<F>,
    pub poly: Poly<F>,
}

impl<F: Scalar> QuasiPoly<F> {
    pub fn new(z: Vec<F>, lambda: Vec<F>, poly: Poly<F>) -> Self {
        assert_eq!(z.len(), lambda.len());
        QuasiPoly { z, lambda, poly }
    }

    pub fn from_poly(poly: Poly<F>) -> Self {
        QuasiPoly {
            z: Vec::new(),
            lambda: Vec::new(),
            poly,
        }
    }

    pub fn times_poly(&self, p: &Poly<F>) -> Self {
        QuasiPoly {
            z: self.z.clone(),
            lambda: self.lambda.clone(),
            poly: &self.poly * p,
        }
    }

    /// Value with the branch of each `(x - z_s)^λ` whose cut leaves `z_s`
    /// in the direction pointing away from `anchor`.
    pub fn eval_branch(&self, x: C64, anchor: C64) -> C64 {
        let mut logv = C64::new(0.0, 0.0);
        for (zs, lam) in self.z.iter().zip(&self.lambda) {
            let zs = zs.to_c64();
            let lam = lam.to_c64();
            if lam == C64::new(0.0, 0.0) {
                continue;
            }
            logv += lam * branch_log(x - zs, anchor - zs);
        }
        self.poly.eval_c64(x) * logv.exp()
    }
}

/// `log w` continuous on the half-plane around `reference`, i.e. with the
/// cut along `-reference`.
pub fn branch_log(w: C64, reference: C64) -> C64 {
    let rot = w / reference;
    C64::new(w.norm().ln(), rot.arg() + reference.arg())
}

/// `ln'(q) = f'/f + Σ_s λ_s / (x - z_s)`.
pub fn log_derivative<F: Scalar>(q: &QuasiPoly<F>) -> Result<RationalFn<F>> {
    if q.poly.is_zero() {
        return Err(Error::ZeroInput);
    }
    let mut acc = RationalFn::log_derivative_of(&q.poly);
    for (zs, lam) in q.z.iter().zip(&q.lambda) {
        if !lam.is_zero() {
            acc = acc.add(&RationalFn::simple_pole(lam.clone(), zs.clone()));
        }
    }
    Ok(acc)
}

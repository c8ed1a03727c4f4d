//! Rational functions with a factored denominator.
//!
//! The denominator is kept as a product of monic "atoms" with positive
//! exponents. Every rational function met when composing first-order
//! factors has its poles among a small set of atoms (the linear factors
//! `x - z_s` and the polynomials `y_i`), so sums never need a gcd and the
//! pole structure stays visible in floating point.

use crate::poly::Poly;
use crate::scalar::{Scalar, C64};
use num_traits::Zero;

#[derive(Clone, Debug)]
pub struct RationalFn<F: Scalar> {
    num: Poly<F>,
    den: Vec<(Poly<F>, u32)>,
}

impl<F: Scalar> RationalFn<F> {
    pub fn zero() -> Self {
        RationalFn {
            num: Poly::zero(),
            den: Vec::new(),
        }
    }

    pub fn from_poly(p: Poly<F>) -> Self {
        RationalFn {
            num: p,
            den: Vec::new(),
        }
    }

    pub fn constant(c: F) -> Self {
        RationalFn::from_poly(Poly::constant(c))
    }

    /// `num / prod atom^exp`; atoms are made monic (their leading
    /// coefficients move into the numerator) and constant atoms are folded in.
    pub fn new(num: Poly<F>, atoms: Vec<(Poly<F>, u32)>) -> Self {
        let mut out = RationalFn {
            num,
            den: Vec::new(),
        };
        for (a, e) in atoms {
            if e == 0 {
                continue;
            }
            let lc = a.leading();
            assert!(!lc.is_zero(), "zero polynomial in a denominator");
            let inv = F::one() / lc;
            for _ in 0..e {
                out.num = out.num.scale(&inv);
            }
            if a.degree() == Some(0) {
                continue;
            }
            out.push_atom(a.monic(), e);
        }
        out
    }

    /// `c / (x - a)`
    pub fn simple_pole(c: F, a: F) -> Self {
        RationalFn::new(Poly::constant(c), vec![(Poly::linear(a), 1)])
    }

    /// `p' / p`
    pub fn log_derivative_of(p: &Poly<F>) -> Self {
        if p.degree().unwrap_or(0) == 0 {
            return RationalFn::zero();
        }
        RationalFn::new(p.derivative(), vec![(p.clone(), 1)])
    }

    fn push_atom(&mut self, a: Poly<F>, e: u32) {
        if let Some(slot) = self.den.iter_mut().find(|(b, _)| *b == a) {
            slot.1 += e;
        } else {
            self.den.push((a, e));
        }
    }

    pub fn numerator(&self) -> &Poly<F> {
        &self.num
    }

    pub fn atoms(&self) -> &[(Poly<F>, u32)] {
        &self.den
    }

    /// Expanded (monic) denominator.
    pub fn denominator(&self) -> Poly<F> {
        self.den
            .iter()
            .fold(Poly::one(), |acc, (a, e)| &acc * &a.pow(*e))
    }

    pub fn denominator_degree(&self) -> usize {
        self.den
            .iter()
            .map(|(a, e)| a.degree().unwrap_or(0) * *e as usize)
            .sum()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Numerator over a denominator raised to the given atom exponents
    /// (each at least the current one).
    fn lift_to(&self, target: &[(Poly<F>, u32)]) -> Poly<F> {
        let mut n = self.num.clone();
        for (a, e) in target {
            let own = self
                .den
                .iter()
                .find(|(b, _)| b == a)
                .map(|(_, k)| *k)
                .unwrap_or(0);
            if *e > own {
                n = &n * &a.pow(e - own);
            }
        }
        n
    }

    fn common_atoms(&self, other: &Self) -> Vec<(Poly<F>, u32)> {
        let mut out = self.den.clone();
        for (a, e) in &other.den {
            if let Some(slot) = out.iter_mut().find(|(b, _)| b == a) {
                slot.1 = slot.1.max(*e);
            } else {
                out.push((a.clone(), *e));
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        let den = self.common_atoms(other);
        let num = &self.lift_to(&den) + &other.lift_to(&den);
        RationalFn { num, den }.normalized()
    }

    pub fn neg(&self) -> Self {
        RationalFn {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return RationalFn::zero();
        }
        let mut out = RationalFn {
            num: &self.num * &other.num,
            den: self.den.clone(),
        };
        for (a, e) in &other.den {
            out.push_atom(a.clone(), *e);
        }
        out.normalized()
    }

    pub fn scale(&self, c: &F) -> Self {
        RationalFn {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
        .normalized()
    }

    /// `(N/Q)' = (N' P - N Σ e_a a' P/a) / (Q P)` with `P = Π a`.
    pub fn derivative(&self) -> Self {
        if self.den.is_empty() || self.is_zero() {
            return RationalFn::from_poly(self.num.derivative());
        }
        let atoms: Vec<&Poly<F>> = self.den.iter().map(|(a, _)| a).collect();
        let p_all = atoms.iter().fold(Poly::one(), |acc, a| &acc * a);
        let mut num = &self.num.derivative() * &p_all;
        for (idx, (a, e)) in self.den.iter().enumerate() {
            let others = atoms
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != idx)
                .fold(Poly::one(), |acc, (_, b)| &acc * b);
            let term = &(&self.num * &a.derivative()) * &others;
            num = &num - &term.scale(&F::from_i64(*e as i64));
        }
        let den = self.den.iter().map(|(a, e)| (a.clone(), e + 1)).collect();
        RationalFn { num, den }.normalized()
    }

    fn normalized(mut self) -> Self {
        if self.num.is_zero() {
            self.den.clear();
            return self;
        }
        if F::EXACT {
            self.reduce();
        }
        self
    }

    /// Cancels every common factor of numerator and denominator. Atoms are
    /// refined by gcds with the numerator, so the result is fully reduced.
    /// Exact fields only; a no-op in floating point.
    pub fn reduce(&mut self) {
        if !F::EXACT {
            return;
        }
        let mut i = 0;
        while i < self.den.len() {
            let (a, e) = self.den[i].clone();
            if e == 0 || a.degree().unwrap_or(0) == 0 {
                self.den.remove(i);
                continue;
            }
            let g = self.num.gcd(&a);
            if g.degree().unwrap_or(0) == 0 {
                i += 1;
                continue;
            }
            if g == a {
                self.num = self.num.div_rem(&a).0;
                self.den[i].1 -= 1;
                if self.den[i].1 == 0 {
                    self.den.remove(i);
                }
                continue;
            }
            // split a = g * (a/g) and retry with the finer atoms
            let rest = a.div_rem(&g).0.monic();
            self.den[i] = (g, e);
            self.push_atom(rest, e);
        }
    }

    /// Value at `x`; `None` at a pole of the stored representation.
    pub fn eval(&self, x: &F) -> Option<F> {
        let mut d = F::one();
        for (a, e) in &self.den {
            let v = a.eval(x);
            for _ in 0..*e {
                d = d * v.clone();
            }
        }
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(x) / d)
        }
    }

    pub fn eval_c64(&self, x: C64) -> C64 {
        let mut d = C64::new(1.0, 0.0);
        for (a, e) in &self.den {
            d *= a.eval_c64(x).powu(*e);
        }
        self.num.eval_c64(x) / d
    }

    pub fn map<G: Scalar>(&self, f: impl Fn(&F) -> G + Copy) -> RationalFn<G> {
        RationalFn {
            num: self.num.map(f),
            den: self.den.iter().map(|(a, e)| (a.map(f), *e)).collect(),
        }
    }

    pub fn to_c64(&self) -> RationalFn<C64> {
        self.map(|c| c.to_c64())
    }

    /// `lim_{x→a} (x - a)^k f(x)`; `None` if the limit is infinite.
    /// `tol` decides float roots and vanishing Taylor coefficients.
    pub fn limit_at(&self, a: &F, k: usize, tol: f64) -> Option<F> {
        // split each atom as (x-a)^μ · rest
        let mut order = 0usize;
        let mut rest_val = F::one();
        for (atom, e) in &self.den {
            let mu = atom.root_multiplicity(a, tol);
            let mut rest = atom.clone();
            for _ in 0..mu {
                rest = rest.div_rem(&Poly::linear(a.clone())).0;
            }
            order += mu * *e as usize;
            let v = rest.eval(a);
            for _ in 0..*e {
                rest_val = rest_val * v.clone();
            }
        }
        if k > order {
            return Some(F::zero());
        }
        let need = order - k;
        let shifted = self.num.taylor_shift(a);
        let scale = shifted.norm_inf().max(f64::MIN_POSITIVE);
        for j in 0..need {
            let c = shifted.coeff(j);
            let vanishes = if F::EXACT {
                c.is_zero()
            } else {
                c.modulus() <= tol * scale
            };
            if !vanishes {
                return None;
            }
        }
        Some(shifted.coeff(need) / rest_val)
    }

    /// `lim_{x→∞} x^k f(x)`; `None` if infinite.
    pub fn limit_at_infinity(&self, k: usize, tol: f64) -> Option<F> {
        let dq = self.denominator_degree();
        let scale = self.num.norm_inf().max(f64::MIN_POSITIVE);
        for (idx, c) in self.num.coeffs().iter().enumerate() {
            if idx + k > dq {
                // floats: tolerate coefficients that are roundoff of a structural zero
                let vanishes = if F::EXACT {
                    c.is_zero()
                } else {
                    c.modulus() <= tol * scale
                };
                if !vanishes {
                    return None;
                }
            }
        }
        if k > dq {
            return Some(F::zero());
        }
        Some(self.num.coeff(dq - k))
    }
}

/// Equality as functions: `a/b == c/d` iff `a d == c b`.
impl<F: Scalar> PartialEq for RationalFn<F> {
    fn eq(&self, other: &Self) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        &self.num * &other.denominator() == &other.num * &self.denominator()
    }
}

impl<F: Scalar> Zero for RationalFn<F> {
    fn zero() -> Self {
        RationalFn::zero()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl<F: Scalar> std::ops::Add for RationalFn<F> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        RationalFn::add(&self, &rhs)
    }
}

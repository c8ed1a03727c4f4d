//! Coefficient fields.
//!
//! Polynomials, rational functions and differential operators are generic
//! over [`Scalar`], which has two implementations: complex floating point
//! ([`C64`]) and exact Gaussian rationals ([`CQ`]).

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

pub type C64 = Complex<f64>;
pub type CQ = Complex<BigRational>;

/// Largest denominator accepted when recognising a float as a rational.
pub const MAX_DENOMINATOR: i64 = 1_000_000;

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// `true` for exact arithmetic, where `== zero` is a decision procedure.
    const EXACT: bool;

    fn from_i64(v: i64) -> Self;

    /// Converts a float. Exact fields succeed only when the value is, to
    /// within a few ulps, a rational with a small denominator.
    fn from_c64(c: C64) -> Option<Self>;

    fn to_c64(&self) -> C64;

    fn modulus(&self) -> f64 {
        self.to_c64().norm()
    }
}

impl Scalar for C64 {
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        C64::new(v as f64, 0.0)
    }

    fn from_c64(c: C64) -> Option<Self> {
        Some(c)
    }

    fn to_c64(&self) -> C64 {
        *self
    }

    fn modulus(&self) -> f64 {
        self.norm()
    }
}

impl Scalar for CQ {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        CQ::new(
            BigRational::from_integer(BigInt::from(v)),
            BigRational::zero(),
        )
    }

    fn from_c64(c: C64) -> Option<Self> {
        Some(CQ::new(rationalize(c.re)?, rationalize(c.im)?))
    }

    fn to_c64(&self) -> C64 {
        C64::new(ratio_to_f64(&self.re), ratio_to_f64(&self.im))
    }
}

pub fn ratio_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        let n = q.numer().to_f64().unwrap_or(f64::NAN);
        let d = q.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Best rational approximation with denominator at most [`MAX_DENOMINATOR`],
/// accepted only if it reproduces `x` to within four ulps.
pub fn rationalize(x: f64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    if x == x.trunc() && x.abs() < 1e15 {
        return Some(BigRational::from_integer(BigInt::from(x as i64)));
    }
    // continued-fraction convergents
    let tol = 4.0 * f64::EPSILON * x.abs().max(f64::MIN_POSITIVE);
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut rem = x;
    for _ in 0..64 {
        let a = rem.floor();
        if a.abs() > 1e15 {
            break;
        }
        let ai = a as i128;
        let h2 = ai * h1 + h0;
        let k2 = ai * k1 + k0;
        if k2 > MAX_DENOMINATOR as i128 {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        if ((h1 as f64) / (k1 as f64) - x).abs() <= tol {
            return Some(BigRational::new(BigInt::from(h1), BigInt::from(k1)));
        }
        let frac = rem - a;
        if frac.abs() < 1e-300 {
            break;
        }
        rem = 1.0 / frac;
    }
    None
}

/// Integer nearest to a complex value, if it is within `tol` of it.
pub fn nearest_integer(c: C64, tol: f64) -> Option<i64> {
    let k = c.re.round();
    if (c.re - k).abs() < tol && c.im.abs() < tol && k.abs() < 9.0e15 {
        Some(k as i64)
    } else {
        None
    }
}

pub fn is_zero_exact(q: &CQ) -> bool {
    q.re.is_zero() && q.im.is_zero()
}

/// Magnitude of a Gaussian rational as a float, for reporting.
pub fn cq_abs(q: &CQ) -> f64 {
    let re = ratio_to_f64(&q.re.abs());
    let im = ratio_to_f64(&q.im.abs());
    re.hypot(im)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationalize_recognises_small_fractions() {
        assert_eq!(rationalize(0.5), Some(BigRational::new(1.into(), 2.into())));
        assert_eq!(
            rationalize(-1.0 / 3.0),
            Some(BigRational::new((-1).into(), 3.into()))
        );
        assert_eq!(rationalize(2.0), Some(BigRational::from_integer(2.into())));
        assert_eq!(rationalize(std::f64::consts::PI), None);
    }

    #[test]
    fn exact_roundtrip_through_float() {
        let q = CQ::from_c64(C64::new(0.25, -3.5)).unwrap();
        assert_eq!(q.to_c64(), C64::new(0.25, -3.5));
    }

    #[test]
    fn nearest_integer_tolerance() {
        assert_eq!(nearest_integer(C64::new(2.0 + 1e-12, 0.0), 1e-9), Some(2));
        assert_eq!(nearest_integer(C64::new(0.5, 0.0), 1e-9), None);
        assert_eq!(nearest_integer(C64::new(1.0, 1e-6), 1e-9), None);
    }
}

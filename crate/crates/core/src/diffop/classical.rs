use super::OpData;
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::Scalar;
use serde::Serialize;

/// Relative remainder above which `y` is rejected as a Lame function.
pub const VAN_VLECK_TOL: f64 = 1e-9;

/// `F y'' + G y' + H y = 0` with monic `F = Π (x - z_s)`.
#[derive(Clone, Debug, PartialEq)]
pub struct VanVleck<F: Scalar> {
    pub f: Poly<F>,
    pub g: Poly<F>,
    pub h: Poly<F>,
    /// `‖rem‖∞ / ‖F y'' + G y'‖∞` of the division by `y`.
    pub remainder: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct VanVleckJson {
    pub f: Vec<[f64; 2]>,
    pub g: Vec<[f64; 2]>,
    pub h: Vec<[f64; 2]>,
    pub remainder: f64,
}

impl<F: Scalar> VanVleck<F> {
    pub fn to_json(&self) -> VanVleckJson {
        let conv = |p: &Poly<F>| {
            p.coeffs()
                .iter()
                .map(|c| {
                    let c = c.to_c64();
                    [c.re, c.im]
                })
                .collect()
        };
        VanVleckJson {
            f: conv(&self.f),
            g: conv(&self.g),
            h: conv(&self.h),
            remainder: self.remainder,
        }
    }
}

/// Recovers the Van Vleck polynomial of a classical (`r = 1`, `T_1 = 1`)
/// critical point from its polynomial `y`.
pub fn van_vleck_extract<F: Scalar>(data: &OpData<F>, y: &Poly<F>) -> Result<VanVleck<F>> {
    if data.r != 1 || data.m.iter().any(|row| !row[0].is_zero()) {
        return Err(Error::NotClassicalCase(
            "need r = 1 with weight rows (0, -m_s)".into(),
        ));
    }
    if y.is_zero() {
        return Err(Error::ZeroInput);
    }
    let f = data
        .z
        .iter()
        .fold(Poly::one(), |acc, zs| &acc * &Poly::linear(zs.clone()));
    // G = F · Σ (-m_s) / (x - z_s), with -m_s the second weight entry
    let mut g = Poly::zero();
    for (s, zs) in data.z.iter().enumerate() {
        let (cof, _) = f.div_rem(&Poly::linear(zs.clone()));
        g = &g + &cof.scale(&data.m[s][1]);
    }
    let lhs = &(&f * &y.derivative().derivative()) + &(&g * &y.derivative());
    let (q, rem) = lhs.div_rem(y);
    let h = -&q;
    let scale = lhs
        .norm_inf()
        .max(y.norm_inf() * f.norm_inf())
        .max(f64::MIN_POSITIVE);
    let remainder = if F::EXACT && rem.is_zero() {
        0.0
    } else {
        rem.norm_inf() / scale
    };
    if remainder > VAN_VLECK_TOL {
        return Err(Error::NotASolution { remainder });
    }
    let n = data.n();
    if h.degree().is_some_and(|d| d + 2 > n) {
        return Err(Error::NotASolution { remainder });
    }
    Ok(VanVleck { f, g, h, remainder })
}

use crate::diffop::OpData;
use crate::error::{Error, Result};
use crate::master::Coords;
use crate::poly::Poly;
use crate::rootdata::WeightSystem;
use crate::scalar::{Scalar, C64};

/// Root distance below which two float roots are treated as equal.
pub const ROOT_SEPARATION: f64 = 1e-8;

/// Monic polynomials `y_1, ..., y_r`; `y_0 = y_{r+1} = 1` implicitly.
#[derive(Clone, Debug)]
pub struct PolyTuple<F: Scalar> {
    pub polys: Vec<Poly<F>>,
    /// Roots as given, when built from coordinates; recomputing them from
    /// the coefficients costs digits when they cluster.
    known_roots: Option<Coords>,
}

impl<F: Scalar> PartialEq for PolyTuple<F> {
    fn eq(&self, other: &Self) -> bool {
        self.polys == other.polys
    }
}

impl<F: Scalar> PolyTuple<F> {
    pub fn new(polys: Vec<Poly<F>>) -> Self {
        PolyTuple {
            polys,
            known_roots: None,
        }
    }

    pub fn rank(&self) -> usize {
        self.polys.len()
    }

    /// `y_i` for `0 <= i <= r + 1`.
    pub fn y(&self, i: usize) -> Poly<F> {
        if i == 0 || i > self.polys.len() {
            Poly::one()
        } else {
            self.polys[i - 1].clone()
        }
    }

    pub fn to_c64(&self) -> PolyTuple<C64> {
        PolyTuple {
            polys: self.polys.iter().map(|p| p.to_c64()).collect(),
            known_roots: self.known_roots.clone(),
        }
    }

    /// Converts coefficient by coefficient; `None` if some coefficient is
    /// not representable (e.g. not a small-denominator rational).
    pub fn convert<G: Scalar>(&self) -> Option<PolyTuple<G>> {
        let polys = self
            .polys
            .iter()
            .map(|p| {
                p.coeffs()
                    .iter()
                    .map(|c| G::from_c64(c.to_c64()))
                    .collect::<Option<Vec<G>>>()
                    .map(Poly::new)
            })
            .collect::<Option<Vec<_>>>()?;
        Some(PolyTuple::new(polys))
    }

    /// Roots of every `y_i`, grouped by color.
    pub fn roots(&self) -> Coords {
        match &self.known_roots {
            Some(t) => t.clone(),
            None => self.polys.iter().map(|p| p.roots()).collect(),
        }
    }
}

impl PolyTuple<C64> {
    /// `y_i = Π_j (x - t^{(i)}_j)`.
    pub fn from_coords(t: &Coords) -> Self {
        PolyTuple {
            polys: t.iter().map(|g| Poly::from_roots(g)).collect(),
            known_roots: Some(t.clone()),
        }
    }
}

fn min_pairwise(a: &[C64]) -> Option<(f64, C64)> {
    let mut best: Option<(f64, C64)> = None;
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            let d = (a[i] - a[j]).norm();
            if best.is_none_or(|(b, _)| d < b) {
                best = Some((d, a[i]));
            }
        }
    }
    best
}

fn min_cross(a: &[C64], b: &[C64]) -> Option<(f64, C64)> {
    let mut best: Option<(f64, C64)> = None;
    for &x in a {
        for &y in b {
            let d = (x - y).norm();
            if best.is_none_or(|(bd, _)| d < bd) {
                best = Some((d, x));
            }
        }
    }
    best
}

/// Checks that
/// (i) no `y_i` has a multiple root,
/// (ii) consecutive `y_i, y_{i+1}` have no common root,
/// (iii) `y_i(z_s) != 0` whenever `(Λ_s, α_i) != 0`.
///
/// Exact fields decide with gcds and evaluation; floats compare roots
/// against [`ROOT_SEPARATION`].
pub fn check_off_diagonal<F: Scalar>(data: &OpData<F>, y: &PolyTuple<F>) -> Result<()> {
    let r = y.rank();
    let viol =
        |clause: &'static str, detail: String| Err(Error::InvariantViolation { clause, detail });
    let roots: Vec<Vec<C64>> = if F::EXACT { Vec::new() } else { y.roots() };
    for (i, p) in y.polys.iter().enumerate() {
        if p.is_zero() {
            return Err(Error::ZeroInput);
        }
        if F::EXACT {
            if p.gcd(&p.derivative()).degree().unwrap_or(0) > 0 {
                return viol("i", format!("y_{} has a multiple root", i + 1));
            }
        } else if let Some((d, x)) = min_pairwise(&roots[i]) {
            if d <= ROOT_SEPARATION {
                return viol("i", format!("y_{} has roots {x} at distance {d:e}", i + 1));
            }
        }
    }
    for i in 0..r.saturating_sub(1) {
        if F::EXACT {
            if y.polys[i].gcd(&y.polys[i + 1]).degree().unwrap_or(0) > 0 {
                return viol(
                    "ii",
                    format!("y_{} and y_{} have a common root", i + 1, i + 2),
                );
            }
        } else if let Some((d, x)) = min_cross(&roots[i], &roots[i + 1]) {
            if d <= ROOT_SEPARATION {
                return viol(
                    "ii",
                    format!(
                        "y_{} and y_{} share the root {x} (distance {d:e})",
                        i + 1,
                        i + 2
                    ),
                );
            }
        }
    }
    for (i, p) in y.polys.iter().enumerate() {
        for (s, zs) in data.z.iter().enumerate() {
            if data.pairing(s, i + 1).is_zero() {
                continue;
            }
            let bad = if F::EXACT {
                p.eval(zs).is_zero()
            } else {
                let zc = zs.to_c64();
                roots[i].iter().any(|t| (t - zc).norm() <= ROOT_SEPARATION)
            };
            if bad {
                return viol(
                    "iii",
                    format!("y_{} vanishes at z_{} = {}", i + 1, s + 1, zs.to_c64()),
                );
            }
        }
    }
    Ok(())
}

/// The off-diagonal clauses read directly on coordinates `t[i][j]`, each
/// distance required to exceed `margin`.
pub fn check_coords_off_diagonal(ws: &WeightSystem, t: &Coords, margin: f64) -> Result<()> {
    let viol =
        |clause: &'static str, detail: String| Err(Error::InvariantViolation { clause, detail });
    for (i, g) in t.iter().enumerate() {
        if let Some((d, x)) = min_pairwise(g) {
            if d <= margin {
                return viol("i", format!("y_{} has roots {x} at distance {d:e}", i + 1));
            }
        }
    }
    for i in 0..t.len().saturating_sub(1) {
        if let Some((d, x)) = min_cross(&t[i], &t[i + 1]) {
            if d <= margin {
                return viol(
                    "ii",
                    format!(
                        "y_{} and y_{} share the root {x} (distance {d:e})",
                        i + 1,
                        i + 2
                    ),
                );
            }
        }
    }
    for (i, g) in t.iter().enumerate() {
        for (s, &zs) in ws.z().iter().enumerate() {
            if ws.pairing(s, i + 1) == C64::new(0.0, 0.0) {
                continue;
            }
            if let Some(x) = g.iter().find(|x| (**x - zs).norm() <= margin) {
                return viol(
                    "iii",
                    format!("root {x} of y_{} is at z_{} = {zs}", i + 1, s + 1),
                );
            }
        }
    }
    Ok(())
}

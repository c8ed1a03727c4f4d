//! The master function, its critical-point equations and orbit keys.
//!
//! Coordinates are grouped by color: `t[i][j]` is `t^{(i+1)}_{j+1}`.
//! The residual of a point is the vector of left-hand sides of the Bethe
//! ansatz equations,
//!
//! ```text
//! R_{i,j} = Σ_s (Λ_s, α_i)/(t_j - z_s) - Σ_{k≠j} 2/(t_j - t_k) + Σ_{neighbour colors} 1/(t_j - t'_k),
//! ```
//!
//! which is the negative gradient of `log Φ`.

use crate::error::{Error, Result};
use crate::rootdata::WeightSystem;
use crate::scalar::C64;
use nalgebra::DMatrix;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

pub type Coords = Vec<Vec<C64>>;

/// Default max-norm tolerance on the residual.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Default grid spacing of canonical keys.
pub const DEFAULT_QUANTUM: f64 = 1e-6;

fn check_shape(ws: &WeightSystem, t: &Coords) -> Result<()> {
    if t.len() != ws.rank() {
        return Err(Error::InvalidInput(format!(
            "{} coordinate groups for r = {}",
            t.len(),
            ws.rank()
        )));
    }
    for (i, g) in t.iter().enumerate() {
        if g.len() != ws.l().0[i] {
            return Err(Error::InvalidInput(format!(
                "color {} has {} coordinates, l_{} = {}",
                i + 1,
                g.len(),
                i + 1,
                ws.l().0[i]
            )));
        }
    }
    Ok(())
}

pub fn flatten(t: &Coords) -> Vec<C64> {
    t.iter().flatten().copied().collect()
}

pub fn unflatten(v: &[C64], l: &[usize]) -> Coords {
    let mut out = Vec::with_capacity(l.len());
    let mut at = 0;
    for &li in l {
        out.push(v[at..at + li].to_vec());
        at += li;
    }
    out
}

fn nonzero(d: C64, what: impl FnOnce() -> String) -> Result<C64> {
    if d == C64::zero() || !d.re.is_finite() || !d.im.is_finite() {
        Err(Error::SingularConfiguration(what()))
    } else {
        Ok(d)
    }
}

/// A branch of `log Φ`, each factor on the principal branch. Factors with a
/// zero exponent are omitted.
pub fn log_master(ws: &WeightSystem, t: &Coords) -> Result<C64> {
    check_shape(ws, t)?;
    let r = ws.rank();
    let mut acc = C64::zero();
    for i in 0..r {
        for (j, &tj) in t[i].iter().enumerate() {
            for (s, &zs) in ws.z().iter().enumerate() {
                let a = ws.pairing(s, i + 1);
                if a != C64::zero() {
                    let d = nonzero(tj - zs, || format!("t^({})_{} = z_{}", i + 1, j + 1, s + 1))?;
                    acc -= a * d.ln();
                }
            }
            for (k, &tk) in t[i].iter().enumerate().skip(j + 1) {
                let d = nonzero(tj - tk, || {
                    format!("t^({0})_{1} = t^({0})_{2}", i + 1, j + 1, k + 1)
                })?;
                acc += 2.0 * d.ln();
            }
            if i + 1 < r {
                for (k, &u) in t[i + 1].iter().enumerate() {
                    let d = nonzero(tj - u, || {
                        format!("t^({})_{} = t^({})_{}", i + 1, j + 1, i + 2, k + 1)
                    })?;
                    acc -= d.ln();
                }
            }
        }
    }
    Ok(acc)
}

/// Left-hand sides of the Bethe ansatz equations, ordered by `(i, j)`.
pub fn bae_residual(ws: &WeightSystem, t: &Coords) -> Result<Vec<C64>> {
    check_shape(ws, t)?;
    let r = ws.rank();
    let mut out = Vec::with_capacity(ws.l().total());
    for i in 0..r {
        for (j, &tj) in t[i].iter().enumerate() {
            let mut acc = C64::zero();
            for (s, &zs) in ws.z().iter().enumerate() {
                let a = ws.pairing(s, i + 1);
                if a != C64::zero() {
                    acc +=
                        a / nonzero(tj - zs, || format!("t^({})_{} = z_{}", i + 1, j + 1, s + 1))?;
                }
            }
            for (k, &tk) in t[i].iter().enumerate() {
                if k != j {
                    acc -= 2.0
                        / nonzero(tj - tk, || {
                            format!("t^({0})_{1} = t^({0})_{2}", i + 1, j + 1, k + 1)
                        })?;
                }
            }
            for nb in neighbours(i, r) {
                for (k, &u) in t[nb].iter().enumerate() {
                    acc += 1.0
                        / nonzero(tj - u, || {
                            format!("t^({})_{} = t^({})_{}", i + 1, j + 1, nb + 1, k + 1)
                        })?;
                }
            }
            out.push(acc);
        }
    }
    Ok(out)
}

fn neighbours(i: usize, r: usize) -> impl Iterator<Item = usize> {
    let lo = i.checked_sub(1);
    let hi = if i + 1 < r { Some(i + 1) } else { None };
    lo.into_iter().chain(hi)
}

pub fn residual_norm(res: &[C64]) -> f64 {
    res.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// Jacobian of [`bae_residual`]; symmetric (the negative Hessian of `log Φ`).
pub fn bae_jacobian(ws: &WeightSystem, t: &Coords) -> Result<DMatrix<C64>> {
    check_shape(ws, t)?;
    let r = ws.rank();
    let l = ws.l().as_slice();
    let offsets: Vec<usize> = l
        .iter()
        .scan(0, |acc, &x| {
            let o = *acc;
            *acc += x;
            Some(o)
        })
        .collect();
    let total = ws.l().total();
    let mut jac = DMatrix::<C64>::zeros(total, total);
    for i in 0..r {
        for (j, &tj) in t[i].iter().enumerate() {
            let row = offsets[i] + j;
            let mut diag = C64::zero();
            for (s, &zs) in ws.z().iter().enumerate() {
                let a = ws.pairing(s, i + 1);
                if a != C64::zero() {
                    let d = nonzero(tj - zs, || format!("t^({})_{} = z_{}", i + 1, j + 1, s + 1))?;
                    diag -= a / (d * d);
                }
            }
            for (k, &tk) in t[i].iter().enumerate() {
                if k != j {
                    let d = nonzero(tj - tk, || {
                        format!("t^({0})_{1} = t^({0})_{2}", i + 1, j + 1, k + 1)
                    })?;
                    let v = 2.0 / (d * d);
                    diag += v;
                    jac[(row, offsets[i] + k)] = -v;
                }
            }
            for nb in neighbours(i, r) {
                for (k, &u) in t[nb].iter().enumerate() {
                    let d = nonzero(tj - u, || {
                        format!("t^({})_{} = t^({})_{}", i + 1, j + 1, nb + 1, k + 1)
                    })?;
                    let v = 1.0 / (d * d);
                    diag -= v;
                    jac[(row, offsets[nb] + k)] = v;
                }
            }
            jac[(row, row)] = diag;
        }
    }
    Ok(jac)
}

/// Orbit fingerprint: each color's coordinates rounded to a grid of spacing
/// `quantum` and sorted. Invariant under permutations within a color.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey(pub Vec<Vec<(i64, i64)>>);

impl std::fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let groups: Vec<String> = self
            .0
            .iter()
            .map(|g| {
                g.iter()
                    .map(|(a, b)| format!("{a}:{b}"))
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect();
        write!(f, "{}", groups.join("|"))
    }
}

pub fn canonicalize(t: &Coords, quantum: f64) -> CanonicalKey {
    let q = |x: f64| {
        let v = (x / quantum).round();
        // -0 and 0 collapse
        if v == 0.0 {
            0
        } else {
            v as i64
        }
    };
    CanonicalKey(
        t.iter()
            .map(|g| {
                let mut keys: Vec<(i64, i64)> = g.iter().map(|c| (q(c.re), q(c.im))).collect();
                keys.sort_unstable();
                keys
            })
            .collect(),
    )
}

/// Multiplicity as a solution of the Bethe ansatz system. Only the
/// nondegenerate case is decided numerically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Multiplicity {
    Simple(SimpleTag),
    Degenerate(DegenerateTag),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct SimpleTag;

impl TryFrom<u64> for SimpleTag {
    type Error = String;
    fn try_from(v: u64) -> std::result::Result<Self, String> {
        if v == 1 {
            Ok(SimpleTag)
        } else {
            Err(format!("multiplicity {v} must be 1 or \"degenerate\""))
        }
    }
}

impl From<SimpleTag> for u64 {
    fn from(_: SimpleTag) -> u64 {
        1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DegenerateTag {
    #[serde(rename = "degenerate")]
    Degenerate,
}

impl Multiplicity {
    pub const SIMPLE: Multiplicity = Multiplicity::Simple(SimpleTag);
    pub const DEGENERATE: Multiplicity = Multiplicity::Degenerate(DegenerateTag::Degenerate);

    pub fn is_simple(&self) -> bool {
        matches!(self, Multiplicity::Simple(_))
    }
}

/// Threshold on `σ_min / σ_max` of the Jacobian below which a point is
/// reported as degenerate.
pub const DEGENERACY_RATIO: f64 = 1e-6;

pub fn classify_multiplicity(jac: &DMatrix<C64>) -> Multiplicity {
    if jac.nrows() == 0 {
        return Multiplicity::SIMPLE;
    }
    let sv = jac.clone().singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if max > 0.0 && min > DEGENERACY_RATIO * max {
        Multiplicity::SIMPLE
    } else {
        Multiplicity::DEGENERATE
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    #[serde(with = "coords_serde")]
    pub coords: Coords,
    pub residual_norm: f64,
    pub multiplicity: Multiplicity,
}

impl CriticalPoint {
    pub fn key(&self, quantum: f64) -> CanonicalKey {
        canonicalize(&self.coords, quantum)
    }
}

pub(crate) mod coords_serde {
    use super::Coords;
    use crate::scalar::C64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(t: &Coords, s: S) -> Result<S::Ok, S::Error> {
        let raw: Vec<Vec<[f64; 2]>> = t
            .iter()
            .map(|g| g.iter().map(|c| [c.re, c.im]).collect())
            .collect();
        raw.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Coords, D::Error> {
        let raw: Vec<Vec<[f64; 2]>> = Vec::deserialize(d)?;
        Ok(raw
            .into_iter()
            .map(|g| g.into_iter().map(|p| C64::new(p[0], p[1])).collect())
            .collect())
    }
}

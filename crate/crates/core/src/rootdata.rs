//! Root-system bookkeeping for gl(r+1).
//!
//! Weights are kept in gl-coordinates: the row `m[s]` holds the values
//! `m_{s,i} = <Λ_s, e_{i,i}>`, so that the pairing with the simple root
//! `α_i = e*_{i,i} - e*_{i+1,i+1}` is a difference of neighbouring entries.
//! The bilinear form is the standard one, `(e*_{a,a}, e*_{b,b}) = δ_{ab}`.

use crate::error::{Error, Result};
use crate::scalar::{nearest_integer, C64};
use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Tolerance used when deciding that a complex number is an integer.
pub const INTEGER_TOL: f64 = 1e-9;

/// Guardrails for exhaustive loops.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Caps {
    /// Maximum number of `c` vectors visited by [`is_separating`].
    pub separating: u128,
    /// Maximum number of multiplication terms in [`d_dimension`].
    pub compositions: u128,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            separating: 10_000_000,
            compositions: 100_000_000,
        }
    }
}

/// The grading index `l = (l_1, ..., l_r)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Multidegree(pub Vec<usize>);

impl Multidegree {
    pub fn zero(r: usize) -> Self {
        Multidegree(vec![0; r])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// Number of lattice points in the box `0 <= v <= l`.
    pub fn box_size(&self) -> u128 {
        self.0.iter().map(|&x| x as u128 + 1).product()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }
}

/// Problem datum: singular points, gl-weights at each point, and the
/// multidegree. The weight at infinity is derived, never supplied.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "WeightSystemJson", into = "WeightSystemJson")]
pub struct WeightSystem {
    r: usize,
    z: Vec<C64>,
    m: Vec<Vec<C64>>,
    l: Multidegree,
    m_inf: Vec<C64>,
}

impl WeightSystem {
    pub fn new(r: usize, z: Vec<C64>, m: Vec<Vec<C64>>, l: Vec<usize>) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidInput("rank r must be positive".into()));
        }
        if z.is_empty() {
            return Err(Error::InvalidInput(
                "need at least one singular point".into(),
            ));
        }
        if m.len() != z.len() {
            return Err(Error::InvalidInput(format!(
                "m has {} rows, z has {} points",
                m.len(),
                z.len()
            )));
        }
        if let Some(row) = m.iter().find(|row| row.len() != r + 1) {
            return Err(Error::InvalidInput(format!(
                "weight row of length {} for r = {r}",
                row.len()
            )));
        }
        if l.len() != r {
            return Err(Error::InvalidInput(format!(
                "l has {} entries for r = {r}",
                l.len()
            )));
        }
        if z.iter()
            .chain(m.iter().flatten())
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::InvalidInput("non-finite input".into()));
        }
        for a in 0..z.len() {
            for b in a + 1..z.len() {
                if z[a] == z[b] {
                    return Err(Error::InvalidInput(format!(
                        "z_{} = z_{} = {}",
                        a + 1,
                        b + 1,
                        z[a]
                    )));
                }
            }
        }
        let mut m_inf = vec![C64::zero(); r + 1];
        for (i, slot) in m_inf.iter_mut().enumerate() {
            let sum: C64 = m.iter().map(|row| row[i]).sum();
            let here = if i < r { l[i] as f64 } else { 0.0 };
            let before = if i > 0 { l[i - 1] as f64 } else { 0.0 };
            *slot = sum - here + before;
        }
        Ok(WeightSystem {
            r,
            z,
            m,
            l: Multidegree(l),
            m_inf,
        })
    }

    /// The `r = 1` encoding of the second-order problem: the weight row at
    /// `z_s` is `(0, -m_s)`, so `(Λ_s, α_1) = m_s`, `T_1 = 1` and the
    /// exponents at `z_s` are `0` and `m_s + 1`.
    pub fn classical(z: Vec<C64>, m: Vec<C64>, l: usize) -> Result<Self> {
        let rows = m.iter().map(|&ms| vec![C64::zero(), -ms]).collect();
        WeightSystem::new(1, z, rows, vec![l])
    }

    pub fn classical_real(z: &[f64], m: &[f64], l: usize) -> Result<Self> {
        WeightSystem::classical(
            z.iter().map(|&x| C64::new(x, 0.0)).collect(),
            m.iter().map(|&x| C64::new(x, 0.0)).collect(),
            l,
        )
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn n(&self) -> usize {
        self.z.len()
    }

    pub fn z(&self) -> &[C64] {
        &self.z
    }

    pub fn m(&self) -> &[Vec<C64>] {
        &self.m
    }

    pub fn l(&self) -> &Multidegree {
        &self.l
    }

    pub fn m_inf(&self) -> &[C64] {
        &self.m_inf
    }

    /// `(Λ_s, α_i)` with 0-based `s` and 1-based `i`.
    pub fn pairing(&self, s: usize, i: usize) -> C64 {
        self.m[s][i - 1] - self.m[s][i]
    }

    /// `(Λ_∞, α_i)`, 1-based `i`.
    pub fn pairing_inf(&self, i: usize) -> C64 {
        self.m_inf[i - 1] - self.m_inf[i]
    }

    /// Classical exponents `m_s = (Λ_s, α_1)` of an `r = 1` system.
    pub fn classical_exponents(&self) -> Vec<C64> {
        (0..self.n()).map(|s| self.pairing(s, 1)).collect()
    }

    /// A copy with `l` replaced (and `Λ_∞` recomputed).
    pub fn with_l(&self, l: Vec<usize>) -> Result<Self> {
        WeightSystem::new(self.r, self.z.clone(), self.m.clone(), l)
    }
}

#[derive(Serialize, Deserialize)]
struct WeightSystemJson {
    r: usize,
    z: Vec<[f64; 2]>,
    m: Vec<Vec<[f64; 2]>>,
    l: Vec<usize>,
}

impl TryFrom<WeightSystemJson> for WeightSystem {
    type Error = Error;
    fn try_from(j: WeightSystemJson) -> Result<Self> {
        let c = |p: &[f64; 2]| C64::new(p[0], p[1]);
        WeightSystem::new(
            j.r,
            j.z.iter().map(c).collect(),
            j.m.iter().map(|row| row.iter().map(c).collect()).collect(),
            j.l,
        )
    }
}

impl From<WeightSystem> for WeightSystemJson {
    fn from(ws: WeightSystem) -> Self {
        let p = |c: &C64| [c.re, c.im];
        WeightSystemJson {
            r: ws.r,
            z: ws.z.iter().map(p).collect(),
            m: ws.m.iter().map(|row| row.iter().map(p).collect()).collect(),
            l: ws.l.0,
        }
    }
}

/// `(Λ, α_i) = m_row[i] - m_row[i+1]` for 1-based `i`.
pub fn pair_weight_root(m_row: &[C64], i: usize) -> Result<C64> {
    let r = m_row.len().saturating_sub(1);
    if i == 0 || i > r {
        return Err(Error::IndexOutOfRange { index: i, max: r });
    }
    Ok(m_row[i - 1] - m_row[i])
}

/// Recovers `l` from `Σ_s Λ_s - Λ_∞ = Σ_i l_i α_i`.
pub fn admissible_from_sequences(m: &[Vec<C64>], m_inf: &[C64]) -> Result<Multidegree> {
    let width = m_inf.len();
    if width < 2 {
        return Err(Error::InvalidInput(
            "weights need at least two coordinates".into(),
        ));
    }
    if m.iter().any(|row| row.len() != width) {
        return Err(Error::InvalidInput(
            "weight rows and m_inf differ in length".into(),
        ));
    }
    let diff: Vec<C64> = (0..width)
        .map(|j| m.iter().map(|row| row[j]).sum::<C64>() - m_inf[j])
        .collect();
    // coordinate j of Σ l_i α_i is l_j - l_{j-1}
    let mut partial = C64::zero();
    let mut l = Vec::with_capacity(width - 1);
    for (j, d) in diff.iter().enumerate().take(width - 1) {
        partial += d;
        match nearest_integer(partial, INTEGER_TOL) {
            Some(k) if k >= 0 => l.push(k as usize),
            Some(k) => {
                return Err(Error::NonAdmissible(format!(
                    "l_{} = {k} is negative",
                    j + 1
                )))
            }
            None => {
                return Err(Error::NonAdmissible(format!(
                    "l_{} = {partial} is not an integer",
                    j + 1
                )))
            }
        }
    }
    let total = partial + diff[width - 1];
    if total.norm() >= INTEGER_TOL {
        return Err(Error::NonAdmissible(format!(
            "coordinate sums disagree by {total}; difference is not in the root lattice"
        )));
    }
    Ok(Multidegree(l))
}

/// Outcome of the separating test; `witness` is a violating `c` when not separating.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Separation {
    pub separating: bool,
    pub witness: Option<Vec<usize>>,
}

/// Value of `(2Λ_∞ + β, β) + 2 Σ c_i` with `β = Σ c_i α_i`.
pub fn separating_form(m_inf: &[C64], c: &[usize]) -> C64 {
    let r = c.len();
    let mut acc = C64::zero();
    for j in 0..=r {
        let cj = if j < r { c[j] as f64 } else { 0.0 };
        let cprev = if j > 0 { c[j - 1] as f64 } else { 0.0 };
        let beta = cj - cprev;
        acc += (m_inf[j] * 2.0 + beta) * beta;
    }
    acc + 2.0 * c.iter().sum::<usize>() as f64
}

pub fn is_separating(ws: &WeightSystem, caps: &Caps) -> Result<Separation> {
    let l = ws.l();
    let count = l.box_size() - 1;
    if count > caps.separating {
        return Err(Error::ResourceLimit {
            what: "separating check",
            needed: count,
            cap: caps.separating,
        });
    }
    let mut c = vec![0usize; l.rank()];
    while advance(&mut c, l.as_slice()) {
        if separating_form(ws.m_inf(), &c).norm() <= 1e-9 {
            return Ok(Separation {
                separating: false,
                witness: Some(c),
            });
        }
    }
    Ok(Separation {
        separating: true,
        witness: None,
    })
}

/// Whether consecutive differences are nonnegative integers.
pub fn is_dominant_integral(weight: &[C64]) -> bool {
    weight
        .windows(2)
        .all(|w| matches!(nearest_integer(w[0] - w[1], INTEGER_TOL), Some(k) if k >= 0))
}

/// Odometer over the box `0 <= c <= bound`; returns false after the last vector.
fn advance(c: &mut [usize], bound: &[usize]) -> bool {
    for (ci, &bi) in c.iter_mut().zip(bound) {
        if *ci < bi {
            *ci += 1;
            return true;
        }
        *ci = 0;
    }
    false
}

/// Positive roots of gl(r+1) as half-open index ranges `b..a` (0-based),
/// i.e. `α_{b+1} + ... + α_a`.
pub fn positive_roots(r: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for b in 0..r {
        for a in b + 1..=r {
            out.push((b, a));
        }
    }
    out
}

/// Row-major table indexed by the box `0 <= v <= l` (first index fastest).
#[derive(Debug, Clone)]
struct BoxTable {
    dims: Vec<usize>,
    data: Vec<BigUint>,
}

impl BoxTable {
    fn new(l: &[usize]) -> Self {
        let dims: Vec<usize> = l.iter().map(|&x| x + 1).collect();
        let size = dims.iter().product();
        BoxTable {
            dims,
            data: vec![BigUint::zero(); size],
        }
    }

    fn index(&self, v: &[usize]) -> usize {
        let mut idx = 0;
        let mut stride = 1;
        for (x, d) in v.iter().zip(&self.dims) {
            idx += x * stride;
            stride *= d;
        }
        idx
    }

    fn decode(&self, mut idx: usize) -> Vec<usize> {
        self.dims
            .iter()
            .map(|d| {
                let x = idx % d;
                idx /= d;
                x
            })
            .collect()
    }
}

/// Table of Kostant partition values for every `v` in the box below `l`,
/// by the coin-change recurrence over positive roots.
fn kostant_table(r: usize, l: &[usize]) -> BoxTable {
    let mut t = BoxTable::new(l);
    t.data[0] = BigUint::one();
    for (b, a) in positive_roots(r) {
        // indices increase lexicographically compatible with v - root < v
        for idx in 0..t.data.len() {
            let v = t.decode(idx);
            if v[b..a].iter().all(|&x| x >= 1) {
                let mut w = v.clone();
                w[b..a].iter_mut().for_each(|x| *x -= 1);
                let prev = t.data[t.index(&w)].clone();
                if !prev.is_zero() {
                    t.data[idx] += prev;
                }
            }
        }
    }
    t
}

/// Number of PBW monomials of U(n_-) of weight `l`.
pub fn kostant_partitions(r: usize, l: &Multidegree) -> Result<BigUint> {
    if l.rank() != r {
        return Err(Error::InvalidInput(format!(
            "multidegree of rank {} for r = {r}",
            l.rank()
        )));
    }
    let t = kostant_table(r, l.as_slice());
    Ok(t.data.last().cloned().unwrap_or_else(BigUint::one))
}

/// `d(k, l) = dim U(n_-)^{⊗k}[l]`, the k-fold convolution of the Kostant
/// partition function. `k = 0` gives the dimension of the ground field's
/// weight space (1 at `l = 0`, otherwise 0).
pub fn d_dimension(k: usize, r: usize, l: &Multidegree, caps: &Caps) -> Result<BigUint> {
    if l.rank() != r {
        return Err(Error::InvalidInput(format!(
            "multidegree of rank {} for r = {r}",
            l.rank()
        )));
    }
    if k == 0 {
        return Ok(if l.is_zero() {
            BigUint::one()
        } else {
            BigUint::zero()
        });
    }
    let terms_per_pass: u128 = l
        .as_slice()
        .iter()
        .map(|&x| (x as u128 + 1) * (x as u128 + 2) / 2)
        .product();
    let needed = terms_per_pass.saturating_mul(k as u128 - 1);
    if needed > caps.compositions {
        return Err(Error::ResourceLimit {
            what: "composition terms",
            needed,
            cap: caps.compositions,
        });
    }
    let kt = kostant_table(r, l.as_slice());
    let mut acc = kt.clone();
    for _ in 1..k {
        let mut next = BoxTable::new(l.as_slice());
        for vi in 0..next.data.len() {
            let v = next.decode(vi);
            let mut w = vec![0usize; v.len()];
            let mut sum = BigUint::zero();
            loop {
                let left = &acc.data[acc.index(&w)];
                if !left.is_zero() {
                    let rest: Vec<usize> = v.iter().zip(&w).map(|(a, b)| a - b).collect();
                    let right = &kt.data[kt.index(&rest)];
                    if !right.is_zero() {
                        sum += left * right;
                    }
                }
                if !advance(&mut w, &v) {
                    break;
                }
            }
            next.data[vi] = sum;
        }
        acc = next;
    }
    Ok(acc.data.last().cloned().unwrap_or_else(BigUint::one))
}

/// Multiplicity of `L_{m_inf}` in `⊗_s L_{m_s}` (sl2, highest weights as
/// nonnegative integers), by iterated Clebsch–Gordan fusion.
pub fn sl2_multiplicity(m_s: &[u64], m_inf: u64) -> BigUint {
    let total: u64 = m_s.iter().sum();
    if m_inf > total || (total - m_inf) % 2 != 0 {
        return BigUint::zero();
    }
    let mut mult: BTreeMap<u64, BigUint> = BTreeMap::new();
    mult.insert(0, BigUint::one());
    for &m in m_s {
        let mut next: BTreeMap<u64, BigUint> = BTreeMap::new();
        for (&w, c) in &mult {
            for j in 0..=w.min(m) {
                *next.entry(w + m - 2 * j).or_insert_with(BigUint::zero) += c;
            }
        }
        mult = next;
    }
    mult.remove(&m_inf).unwrap_or_else(BigUint::zero)
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

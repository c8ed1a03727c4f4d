//! End-to-end drivers behind the command-line tool: counting, solving,
//! verifying a given orbit, and the classical second-order reproduction.

use crate::diffop::{build_fundamental, van_vleck_extract, OpData, VanVleckJson};
use crate::error::{Error, Result};
use crate::master::{Coords, CriticalPoint};
use crate::rootdata::{
    admissible_from_sequences, d_dimension, is_dominant_integral, is_separating, sl2_multiplicity,
    Caps, WeightSystem, INTEGER_TOL,
};
use crate::scalar::{nearest_integer, C64, CQ};
use crate::solver::{
    certify_orbit, default_starts, solve_multistart, solve_stieltjes_real, OrbitSet, SolveOptions,
};
use crate::verify::{
    check_conjugated_exponents, check_exponents, check_flag, check_tilde_identities,
    is_critical_exact, op_to_c64, ConjugatedReport, ExponentReport, FlagWitness, PolyTuple,
    TildeReport,
};
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};
use std::time::Instant;

/// Header attached to every classical report.
pub const MONIC_NOTE: &str =
    "F = prod_s (x - z_s) is monic; G and H are normalized to F u'' + G u' + H u = 0 with this F";

fn ser_big<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v.to_u64() {
        Some(x) => s.serialize_u64(x),
        None => s.serialize_str(&v.to_string()),
    }
}

fn ser_opt_big<S: Serializer>(v: &Option<BigUint>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(b) => ser_big(b, s),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Level {
    #[default]
    All,
    Flag,
    Tilde,
    Exponents,
}

impl std::str::FromStr for Level {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Level::All),
            "flag" => Ok(Level::Flag),
            "tilde" => Ok(Level::Tilde),
            "exponents" => Ok(Level::Exponents),
            other => Err(Error::InvalidInput(format!("unknown level {other:?}"))),
        }
    }
}

/// Parses `separating=N,compositions=M` (either key may be omitted).
pub fn parse_caps(s: &str) -> Result<Caps> {
    let mut caps = Caps::default();
    for part in s.split(',').filter(|p| !p.trim().is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::InvalidInput(format!("cap {part:?} is not key=value")))?;
        let v: f64 = v
            .trim()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("cap value {v:?}")))?;
        if !(v >= 0.0) || v.fract() != 0.0 {
            return Err(Error::InvalidInput(format!(
                "cap value {v} must be a nonnegative integer"
            )));
        }
        match k.trim() {
            "separating" => caps.separating = v as u128,
            "compositions" => caps.compositions = v as u128,
            other => return Err(Error::InvalidInput(format!("unknown cap {other:?}"))),
        }
    }
    Ok(caps)
}

/// Reads `{"r", "z", "m", "l"}`; `l` may be replaced by the weight at
/// infinity `"m_inf"`, in which case `l` is recovered from it.
pub fn parse_ws(json: &str) -> Result<WeightSystem> {
    let mut v: serde_json::Value =
        serde_json::from_str(json).map_err(|e| Error::InvalidInput(e.to_string()))?;
    if v.get("l").is_none() {
        if let Some(mi) = v.get("m_inf") {
            let pair = |x: &serde_json::Value| -> Result<C64> {
                let p: [f64; 2] = serde_json::from_value(x.clone())
                    .map_err(|e| Error::InvalidInput(format!("weight entry: {e}")))?;
                Ok(C64::new(p[0], p[1]))
            };
            let row = |x: &serde_json::Value| -> Result<Vec<C64>> {
                x.as_array()
                    .ok_or_else(|| Error::InvalidInput("weight must be an array".into()))?
                    .iter()
                    .map(pair)
                    .collect()
            };
            let m_inf = row(mi)?;
            let m = v
                .get("m")
                .and_then(|m| m.as_array())
                .ok_or_else(|| Error::InvalidInput("missing m".into()))?
                .iter()
                .map(row)
                .collect::<Result<Vec<_>>>()?;
            let l = admissible_from_sequences(&m, &m_inf)?;
            v["l"] = serde_json::to_value(&l.0).expect("integers serialize");
        }
    }
    let ws: std::result::Result<WeightSystem, _> = serde_json::from_value(v);
    ws.map_err(|e| Error::InvalidInput(e.to_string()))
}

/// Accepts a critical point object (`{"coords": ...}`) or a bare
/// coordinate array `[[[re, im], ...], ...]`.
pub fn parse_orbit(json: &str) -> Result<Coords> {
    let v: serde_json::Value =
        serde_json::from_str(json).map_err(|e| Error::InvalidInput(e.to_string()))?;
    let raw = v.get("coords").cloned().unwrap_or(v);
    let groups: Vec<Vec<[f64; 2]>> = serde_json::from_value(raw)
        .map_err(|e| Error::InvalidInput(format!("orbit coordinates: {e}")))?;
    Ok(groups
        .into_iter()
        .map(|g| g.into_iter().map(|p| C64::new(p[0], p[1])).collect())
        .collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct CountReport {
    pub r: usize,
    pub n: usize,
    pub l: Vec<usize>,
    #[serde(serialize_with = "ser_big")]
    pub d: BigUint,
    pub separating: Option<bool>,
    pub witness: Option<Vec<usize>>,
    /// Multiplicity of the weight at infinity in the tensor product, for
    /// `r = 1` with dominant integral weights.
    #[serde(serialize_with = "ser_opt_big")]
    pub sl2_delta: Option<BigUint>,
}

pub fn cmd_count(ws: &WeightSystem, caps: &Caps) -> Result<CountReport> {
    let d = d_dimension(ws.n() - 1, ws.rank(), ws.l(), caps)?;
    let (separating, witness) = match is_separating(ws, caps) {
        Ok(s) => (Some(s.separating), s.witness),
        Err(Error::ResourceLimit { .. }) => (None, None),
        Err(e) => return Err(e),
    };
    let mut sl2_delta = None;
    if ws.rank() == 1
        && ws.m().iter().all(|row| is_dominant_integral(row))
        && is_dominant_integral(ws.m_inf())
    {
        let highest: Option<Vec<u64>> = (0..ws.n())
            .map(|s| nearest_integer(ws.pairing(s, 1), INTEGER_TOL).map(|k| k as u64))
            .collect();
        let inf = nearest_integer(ws.pairing_inf(1), INTEGER_TOL);
        if let (Some(h), Some(i)) = (highest, inf) {
            sl2_delta = Some(sl2_multiplicity(&h, i as u64));
        }
    }
    Ok(CountReport {
        r: ws.rank(),
        n: ws.n(),
        l: ws.l().0.clone(),
        d,
        separating,
        witness,
        sl2_delta,
    })
}

/// Short per-orbit verification record used inside solve and classical reports.
#[derive(Clone, Debug, Serialize)]
pub struct OrbitSummary {
    pub exact_path: bool,
    pub exponents_match: bool,
    pub exponent_deviation: Option<f64>,
    pub flag_residual: Option<f64>,
    pub tilde_residual: Option<f64>,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub passed: bool,
    pub level: String,
    pub critical_point: CriticalPoint,
    /// Exponents were checked in exact rational arithmetic.
    pub exact_path: bool,
    pub exponents: Option<ExponentReport>,
    pub conjugated_exponents: Option<ConjugatedReport>,
    pub flag: Option<FlagWitness>,
    pub tilde: Option<TildeReport>,
    pub failures: Vec<String>,
}

impl VerifyReport {
    pub fn summary(&self) -> OrbitSummary {
        OrbitSummary {
            exact_path: self.exact_path,
            exponents_match: self.exponents.is_some() && self.conjugated_exponents.is_some(),
            exponent_deviation: self.exponents.as_ref().map(|e| e.max_deviation),
            flag_residual: self.flag.as_ref().map(|f| f.max_residual()),
            tilde_residual: self.tilde.as_ref().map(|t| t.max_residual()),
            failures: self.failures.clone(),
        }
    }
}

fn record<T>(r: Result<T>, what: &str, failures: &mut Vec<String>) -> Option<T> {
    match r {
        Ok(v) => Some(v),
        Err(e) => {
            failures.push(format!("{what}: {e}"));
            None
        }
    }
}

/// Certifies `coords` (no polishing) and runs the requested checks on its
/// fundamental operator. Exponents use exact arithmetic when the data and
/// the polynomials `y_i` are small-denominator rationals that pass the
/// exact criticality test, and floating point otherwise.
pub fn verify_point(
    ws: &WeightSystem,
    coords: &Coords,
    level: Level,
    tol: f64,
    polish: usize,
) -> Result<VerifyReport> {
    let cp = certify_orbit(ws, coords, tol, polish)?;
    let y = PolyTuple::from_coords(&cp.coords);
    let fdata = OpData::<C64>::from_ws(ws).expect("floats always convert");
    let exact = OpData::<CQ>::from_ws(ws)
        .and_then(|d| y.convert::<CQ>().map(|ye| (d, ye)))
        .and_then(|(d, ye)| matches!(is_critical_exact(&d, &ye), Ok(true)).then_some((d, ye)));
    let mut failures = Vec::new();
    let (fop, exponents, conjugated) = match &exact {
        Some((d, ye)) => {
            let op = build_fundamental(d, ye)?;
            let (e, c) = if matches!(level, Level::All | Level::Exponents) {
                (
                    record(check_exponents(d, &op), "exponents", &mut failures),
                    record(
                        check_conjugated_exponents(d, &op),
                        "conjugated exponents",
                        &mut failures,
                    ),
                )
            } else {
                (None, None)
            };
            (op_to_c64(&op), e, c)
        }
        None => {
            let op = build_fundamental(&fdata, &y)?;
            let (e, c) = if matches!(level, Level::All | Level::Exponents) {
                (
                    record(check_exponents(&fdata, &op), "exponents", &mut failures),
                    record(
                        check_conjugated_exponents(&fdata, &op),
                        "conjugated exponents",
                        &mut failures,
                    ),
                )
            } else {
                (None, None)
            };
            (op, e, c)
        }
    };
    let flag = if matches!(level, Level::All | Level::Flag) {
        record(check_flag(&fdata, &y, &fop), "flag", &mut failures)
    } else {
        None
    };
    let tilde = if matches!(level, Level::All | Level::Tilde) {
        record(
            check_tilde_identities(&fdata, &y, &fop),
            "tilde identities",
            &mut failures,
        )
    } else {
        None
    };
    let level_name = match level {
        Level::All => "all",
        Level::Flag => "flag",
        Level::Tilde => "tilde",
        Level::Exponents => "exponents",
    };
    Ok(VerifyReport {
        passed: failures.is_empty(),
        level: level_name.into(),
        critical_point: cp,
        exact_path: exact.is_some(),
        exponents,
        conjugated_exponents: conjugated,
        flag,
        tilde,
        failures,
    })
}

fn summarize(ws: &WeightSystem, cp: &CriticalPoint, tol: f64, level: Level) -> OrbitSummary {
    match verify_point(ws, &cp.coords, level, tol, 0) {
        Ok(rep) => rep.summary(),
        Err(e) => OrbitSummary {
            exact_path: false,
            exponents_match: false,
            exponent_deviation: None,
            flag_residual: None,
            tilde_residual: None,
            failures: vec![e.to_string()],
        },
    }
}

#[derive(Clone, Debug)]
pub struct SolveArgs {
    pub starts: Option<u64>,
    pub seed: u64,
    pub opts: SolveOptions,
    pub real_classical: bool,
    /// Run the operator checks on every orbit.
    pub verify: bool,
}

impl Default for SolveArgs {
    fn default() -> Self {
        SolveArgs {
            starts: None,
            seed: 0,
            opts: SolveOptions::default(),
            real_classical: false,
            verify: true,
        }
    }
}

/// Self-contained record of a run: re-running with the embedded data and
/// seed reproduces everything except `timing_ms`.
#[derive(Clone, Debug, Serialize)]
pub struct ExperimentReport {
    pub command: String,
    pub ws: WeightSystem,
    pub seed: u64,
    pub starts: Option<u64>,
    pub tol: f64,
    pub quantum: f64,
    pub solver: String,
    /// A violating vector when the data are not separating.
    pub witness: Option<Vec<usize>>,
    pub result: OrbitSet,
    pub verification: Vec<OrbitSummary>,
    pub timing_ms: u64,
}

pub fn cmd_solve(ws: &WeightSystem, args: &SolveArgs) -> Result<ExperimentReport> {
    let clock = Instant::now();
    let (set, solver, starts) = if args.real_classical {
        (solve_stieltjes_real(ws, &args.opts)?, "stieltjes", None)
    } else {
        let set = solve_multistart(ws, args.starts, args.seed, &args.opts)?;
        let starts = args.starts.unwrap_or_else(|| default_starts(&set.bound));
        (set, "multistart", Some(starts))
    };
    let verification = if args.verify {
        set.orbits
            .iter()
            .map(|cp| summarize(ws, cp, args.opts.tol, Level::All))
            .collect()
    } else {
        Vec::new()
    };
    Ok(ExperimentReport {
        command: "solve".into(),
        ws: ws.clone(),
        seed: args.seed,
        starts,
        tol: args.opts.tol,
        quantum: args.opts.quantum,
        solver: solver.into(),
        witness: is_separating(ws, &args.opts.caps).ok().and_then(|s| s.witness),
        result: set,
        verification,
        timing_ms: clock.elapsed().as_millis() as u64,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassicalOrbit {
    pub orbit: CriticalPoint,
    pub van_vleck: VanVleckJson,
    pub summary: OrbitSummary,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassicalReport {
    pub command: String,
    pub normalization: String,
    pub ws: WeightSystem,
    #[serde(serialize_with = "ser_big")]
    pub expected_count: BigUint,
    pub found: usize,
    pub count_ok: bool,
    pub orbits: Vec<ClassicalOrbit>,
    pub timing_ms: u64,
}

impl ClassicalReport {
    pub fn passed(&self) -> bool {
        self.count_ok && self.orbits.iter().all(|o| o.summary.failures.is_empty())
    }
}

/// The second-order reproduction: exhaustive real solve, Van Vleck
/// polynomial and exponent check of every orbit, and the count.
pub fn cmd_classical(ws: &WeightSystem, opts: &SolveOptions) -> Result<ClassicalReport> {
    let clock = Instant::now();
    let set = solve_stieltjes_real(ws, opts)?;
    // the classical equation only sees the pairings
    let pairings: Vec<C64> = (0..ws.n()).map(|s| ws.pairing(s, 1)).collect();
    let cws = WeightSystem::classical(ws.z().to_vec(), pairings, ws.l().0[0])?;
    let cdata = OpData::<C64>::from_ws(&cws).expect("floats always convert");
    let mut orbits = Vec::with_capacity(set.orbits.len());
    for cp in &set.orbits {
        let y = crate::poly::Poly::from_roots(&cp.coords[0]);
        let vv = van_vleck_extract(&cdata, &y)?;
        orbits.push(ClassicalOrbit {
            orbit: cp.clone(),
            van_vleck: vv.to_json(),
            summary: summarize(ws, cp, opts.tol, Level::Exponents),
        });
    }
    let found = orbits.len();
    let count_ok = BigUint::from(found) == set.bound;
    Ok(ClassicalReport {
        command: "classical".into(),
        normalization: MONIC_NOTE.into(),
        ws: ws.clone(),
        expected_count: set.bound,
        found,
        count_ok,
        orbits,
        timing_ms: clock.elapsed().as_millis() as u64,
    })
}

fn fmt_c(c: &C64) -> String {
    // adding zero folds -0 into +0
    format!("{:.17e}{:+.17e}i", c.re + 0.0, c.im + 0.0)
}

fn fmt_coords(t: &Coords) -> String {
    t.iter()
        .map(|g| g.iter().map(fmt_c).collect::<Vec<_>>().join(";"))
        .collect::<Vec<_>>()
        .join("|")
}

pub fn solve_csv(rep: &ExperimentReport) -> String {
    let mut out = String::from("orbit,residual_norm,multiplicity,coords\n");
    for (i, o) in rep.result.orbits.iter().enumerate() {
        let mult = if o.multiplicity.is_simple() {
            "1"
        } else {
            "degenerate"
        };
        out.push_str(&format!(
            "{i},{:e},{mult},{}\n",
            o.residual_norm,
            fmt_coords(&o.coords)
        ));
    }
    out
}

pub fn classical_csv(rep: &ClassicalReport) -> String {
    let mut out = format!(
        "# {}\norbit,residual_norm,roots,van_vleck_h\n",
        rep.normalization
    );
    for (i, o) in rep.orbits.iter().enumerate() {
        let h: Vec<String> = o
            .van_vleck
            .h
            .iter()
            .map(|c| fmt_c(&C64::new(c[0], c[1])))
            .collect();
        out.push_str(&format!(
            "{i},{:e},{},{}\n",
            o.orbit.residual_norm,
            fmt_coords(&o.orbit.coords),
            h.join(";")
        ));
    }
    out
}

pub fn count_csv(rep: &CountReport) -> String {
    let sep = rep
        .separating
        .map(|b| b.to_string())
        .unwrap_or_else(|| "unknown".into());
    let delta = rep
        .sl2_delta
        .as_ref()
        .map(|d| d.to_string())
        .unwrap_or_default();
    format!("d,separating,sl2_delta\n{},{sep},{delta}\n", rep.d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn count_examples() {
        let ws = WeightSystem::classical_real(&[-1.0, 0.0, 1.0], &[-1.0, -1.0, -1.0], 2).unwrap();
        assert_eq!(
            cmd_count(&ws, &Caps::default()).unwrap().d,
            BigUint::from(3u8)
        );
        let ws0 = WeightSystem::classical_real(&[-1.0, 0.0, 1.0], &[-1.0, -1.0, -1.0], 0).unwrap();
        assert_eq!(
            cmd_count(&ws0, &Caps::default()).unwrap().d,
            BigUint::from(1u8)
        );
        // pairings (1, 1, 1), l = 1
        let rows = vec![vec![c(1.0), c(0.0)]; 3];
        let ws1 = WeightSystem::new(1, vec![c(0.0), c(1.0), c(2.0)], rows, vec![1]).unwrap();
        let rep = cmd_count(&ws1, &Caps::default()).unwrap();
        assert_eq!(rep.d, BigUint::from(2u8));
        assert_eq!(rep.sl2_delta, Some(BigUint::from(2u8)));
    }

    #[test]
    fn solve_l0_single_empty_orbit() {
        let ws = WeightSystem::classical_real(&[-1.0, 1.0], &[-1.0, -1.0], 0).unwrap();
        let rep = cmd_solve(&ws, &SolveArgs::default()).unwrap();
        assert_eq!(rep.result.orbits.len(), 1);
        assert!(rep.result.orbits[0].coords[0].is_empty());
    }

    #[test]
    fn classical_jacobi_h_values() {
        for l in 1..=4usize {
            let (al, be) = (0.5, 1.0);
            let ws =
                WeightSystem::classical_real(&[1.0, -1.0], &[-(al + 1.0), -(be + 1.0)], l).unwrap();
            let rep = cmd_classical(&ws, &SolveOptions::default()).unwrap();
            assert!(
                rep.passed(),
                "{:?}",
                rep.orbits
                    .iter()
                    .map(|o| &o.summary.failures)
                    .collect::<Vec<_>>()
            );
            assert_eq!(rep.found, 1);
            let h = rep.orbits[0].van_vleck.h[0][0];
            let lf = l as f64;
            assert!((h + lf * (lf + al + be + 1.0)).abs() < 1e-9, "l={l} h={h}");
        }
    }

    #[test]
    fn verify_tampered_orbit_is_not_critical() {
        let ws = WeightSystem::classical_real(&[1.0, -1.0], &[-1.0, -1.0], 2).unwrap();
        let s = (1.0f64 / 3.0).sqrt();
        let good = vec![vec![c(-s), c(s)]];
        let rep = verify_point(&ws, &good, Level::All, 1e-10, 0).unwrap();
        // y = x^2 - 1/3 has rational coefficients, so the exact path applies
        assert!(rep.passed && rep.exact_path, "{:?}", rep.failures);
        let bad = vec![vec![c(-s + 1e-2), c(s)]];
        let err = verify_point(&ws, &bad, Level::All, 1e-10, 0).unwrap_err();
        assert!(matches!(err, Error::NotCritical { .. }));
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn parse_helpers() {
        let caps = parse_caps("separating=10,compositions=1e3").unwrap();
        assert_eq!((caps.separating, caps.compositions), (10, 1000));
        assert!(parse_caps("bogus=1").is_err());
        assert_eq!("tilde".parse::<Level>().unwrap(), Level::Tilde);
        let t = parse_orbit(r#"{"coords": [[[0.5, 0.0]]], "residual_norm": 0.0}"#).unwrap();
        assert_eq!(t, vec![vec![c(0.5)]]);
        let t = parse_orbit("[[], [[1.0, 2.0]]]").unwrap();
        assert!(matches!(parse_ws("{"), Err(Error::InvalidInput(_))));
        let ws = parse_ws(r#"{"r":1,"z":[[1,0],[-1,0]],"m":[[[0,0],[1,0]],[[0,0],[1,0]]],"m_inf":[[-2,0],[4,0]]}"#).unwrap();
        assert_eq!(ws.l().0, vec![2]);
        let bad = r#"{"r":1,"z":[[1,0],[-1,0]],"m":[[[0,0],[1,0]],[[0,0],[1,0]]],"m_inf":[[-1.5,0],[3.5,0]]}"#;
        assert!(matches!(parse_ws(bad), Err(Error::NonAdmissible(_))));
        assert_eq!(t[1][0], C64::new(1.0, 2.0));
    }
}

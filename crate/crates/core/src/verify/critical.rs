use super::offdiag::{check_off_diagonal, PolyTuple};
use crate::diffop::OpData;
use crate::error::{Error, Result};
use crate::master::{
    bae_jacobian, bae_residual, classify_multiplicity, residual_norm, CriticalPoint,
};
use crate::poly::Poly;
use crate::rootdata::WeightSystem;
use crate::scalar::{Scalar, C64};

/// Polynomial form of the Bethe ansatz equations of color `i` (1-based):
///
/// ```text
/// P_i = Z [Σ_s a_s/(x - z_s)] y_{i-1} y_{i+1} y_i' + Z (y_{i-1} y_{i+1})' y_i' - Z y_{i-1} y_{i+1} y_i''
/// ```
///
/// with `a_s = (Λ_s, α_i)` and `Z = Π_{a_s != 0} (x - z_s)`. At a root of an
/// off-diagonal `y_i` the equations of that color hold iff `P_i` vanishes,
/// so the tuple is critical iff every `y_i` divides `P_i`.
pub fn bae_polynomial<F: Scalar>(data: &OpData<F>, y: &PolyTuple<F>, i: usize) -> Poly<F> {
    let active: Vec<usize> = (0..data.n())
        .filter(|&s| !data.pairing(s, i).is_zero())
        .collect();
    let zpoly = active.iter().fold(Poly::one(), |acc, &s| {
        &acc * &Poly::linear(data.z[s].clone())
    });
    let mut sum = Poly::zero();
    for &s in &active {
        let (cof, _) = zpoly.div_rem(&Poly::linear(data.z[s].clone()));
        sum = &sum + &cof.scale(&data.pairing(s, i));
    }
    let (prev, next, yi) = (y.y(i - 1), y.y(i + 1), y.y(i));
    let nb = &prev * &next;
    let d1 = yi.derivative();
    let d2 = d1.derivative();
    let a = &(&sum * &nb) * &d1;
    let b = &(&zpoly * &nb.derivative()) * &d1;
    let c = &(&zpoly * &nb) * &d2;
    &(&a + &b) - &c
}

/// Remainders `P_i mod y_i`; all zero iff the tuple is critical.
pub fn bae_remainders<F: Scalar>(data: &OpData<F>, y: &PolyTuple<F>) -> Vec<Poly<F>> {
    (1..=y.rank())
        .map(|i| bae_polynomial(data, y, i).div_rem(&y.y(i)).1)
        .collect()
}

/// Exact criticality test for an off-diagonal tuple.
pub fn is_critical_exact<F: Scalar>(data: &OpData<F>, y: &PolyTuple<F>) -> Result<bool> {
    check_off_diagonal(data, y)?;
    Ok(bae_remainders(data, y).iter().all(|r| r.is_zero()))
}

/// Takes the roots of each `y_i` as coordinates and certifies them as a
/// critical point with the Bethe ansatz residual.
pub fn operator_to_critical_point(
    ws: &WeightSystem,
    y: &PolyTuple<C64>,
    tol: f64,
) -> Result<CriticalPoint> {
    let data = OpData::<C64>::from_ws(ws).expect("floats always convert");
    if y.rank() != ws.rank() {
        return Err(Error::InvalidInput(format!(
            "{} polynomials for r = {}",
            y.rank(),
            ws.rank()
        )));
    }
    for (i, (p, &li)) in y.polys.iter().zip(&ws.l().0).enumerate() {
        if p.degree() != Some(li) {
            return Err(Error::InvalidInput(format!(
                "deg y_{} != l_{} = {li}",
                i + 1,
                i + 1
            )));
        }
    }
    check_off_diagonal(&data, y)?;
    let coords = y.roots();
    let res = bae_residual(ws, &coords)?;
    let norm = residual_norm(&res);
    if !(norm <= tol) {
        return Err(Error::NotCritical {
            residual: norm,
            tol,
            residuals: res.iter().map(|c| [c.re, c.im]).collect(),
        });
    }
    let multiplicity = classify_multiplicity(&bae_jacobian(ws, &coords)?);
    Ok(CriticalPoint {
        coords,
        residual_norm: norm,
        multiplicity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::master::canonicalize;
    use crate::scalar::CQ;

    fn q(n: i64) -> CQ {
        CQ::from_i64(n)
    }

    #[test]
    fn jacobi_linear_exact() {
        // α = 1, β = 1/2
        let ws = WeightSystem::classical_real(&[1.0, -1.0], &[-2.0, -1.5], 1).unwrap();
        let data = OpData::<CQ>::from_ws(&ws).unwrap();
        let root = (q(1) / q(2) - q(1)) / (q(1) + q(1) / q(2) + q(2));
        assert!(
            is_critical_exact(&data, &PolyTuple::new(vec![Poly::linear(root.clone())])).unwrap()
        );
        assert!(!is_critical_exact(
            &data,
            &PolyTuple::new(vec![Poly::linear(root + q(1) / q(10))])
        )
        .unwrap());

        let y = PolyTuple::new(vec![Poly::linear(C64::new(-1.0 / 7.0, 0.0))]);
        let cp = operator_to_critical_point(&ws, &y, 1e-12).unwrap();
        assert!(cp.residual_norm < 1e-14);
        assert!(cp.multiplicity.is_simple());
    }

    #[test]
    fn legendre_cubic_exact() {
        let ws = WeightSystem::classical_real(&[1.0, -1.0], &[-1.0, -1.0], 3).unwrap();
        let data = OpData::<CQ>::from_ws(&ws).unwrap();
        // P_3 ∝ x³ - 3x/5
        let y = Poly::new(vec![q(0), -q(3) / q(5), q(0), q(1)]);
        assert!(is_critical_exact(&data, &PolyTuple::new(vec![y])).unwrap());
    }

    #[test]
    fn round_trip_key() {
        let ws = WeightSystem::classical_real(&[1.0, -1.0], &[-1.0, -1.0], 2).unwrap();
        let s = (1.0f64 / 3.0).sqrt();
        let t = vec![vec![C64::new(s, 0.0), C64::new(-s, 0.0)]];
        let cp = operator_to_critical_point(&ws, &PolyTuple::from_coords(&t), 1e-10).unwrap();
        assert_eq!(cp.key(1e-6), canonicalize(&t, 1e-6));
    }

    #[test]
    fn rejects_off_diagonal_and_non_critical() {
        let ws = WeightSystem::classical_real(&[1.0, -1.0], &[-1.0, -1.0], 2).unwrap();
        let y = PolyTuple::new(vec![Poly::from_roots(&[
            C64::new(0.2, 0.0),
            C64::new(0.2, 0.0),
        ])]);
        assert!(matches!(
            operator_to_critical_point(&ws, &y, 1e-10),
            Err(Error::InvariantViolation { clause: "i", .. })
        ));
        let y = PolyTuple::new(vec![Poly::from_roots(&[
            C64::new(0.2, 0.0),
            C64::new(-0.5, 0.0),
        ])]);
        match operator_to_critical_point(&ws, &y, 1e-10) {
            Err(Error::NotCritical { residuals, .. }) => assert_eq!(residuals.len(), 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn r2_exact_criterion_matches_residual() {
        // r = 2, one point per color with a zero pairing at the second z
        let c = |x: f64| C64::new(x, 0.0);
        let ws = WeightSystem::new(
            2,
            vec![c(0.0), c(1.0)],
            vec![
                vec![c(0.0), c(-1.0), c(-2.0)],
                vec![c(0.0), c(0.0), c(-1.0)],
            ],
            vec![1, 1],
        )
        .unwrap();
        let data = OpData::<CQ>::from_ws(&ws).unwrap();
        // compare the exact verdict with the float residual on a few rational tuples
        for (a, b) in [(q(1) / q(3), q(2)), (q(-1), q(1) / q(2)), (q(3), q(5))] {
            let y = PolyTuple::new(vec![Poly::linear(a.clone()), Poly::linear(b.clone())]);
            let exact = is_critical_exact(&data, &y).unwrap();
            let t = vec![vec![a.to_c64()], vec![b.to_c64()]];
            let res = residual_norm(&bae_residual(&ws, &t).unwrap());
            assert_eq!(exact, res < 1e-12, "{a:?} {b:?} residual {res}");
        }
    }
}

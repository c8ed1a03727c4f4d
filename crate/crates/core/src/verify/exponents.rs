use crate::diffop::{
    expected_conjugated_exponents, expected_exponents, log_derivative, ExponentProfile,
    LinearDiffOp, OpData, SingularPoint, SingularityReport,
};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::{Scalar, C64};
use serde::Serialize;

/// Float tolerance for exponent multisets, measured on the coefficients
/// of the monic indicial polynomial.
pub const EXPONENT_TOL: f64 = 1e-7;

#[derive(Clone, Debug, Serialize)]
pub struct ExponentReport {
    pub exact: bool,
    /// Largest coefficient difference between the computed indicial
    /// polynomial and the one with the expected roots (0 when exact).
    pub max_deviation: f64,
    pub profile: ExponentProfile,
    pub singularities: SingularityReport,
}

fn fmt_list(v: &[C64]) -> String {
    let parts: Vec<String> = v.iter().map(|c| format!("{c}")).collect();
    format!("[{}]", parts.join(", "))
}

fn compare<F: Scalar>(
    op: &LinearDiffOp<F>,
    point: &SingularPoint<F>,
    expected: &[F],
    label: String,
) -> Result<f64> {
    let ind = op.indicial_polynomial(point)?;
    let want = Poly::from_roots(expected);
    let dev = if F::EXACT {
        if ind == want {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        let scale = want.norm_inf().max(1.0);
        (0..=expected.len())
            .map(|k| (ind.coeff(k).to_c64() - want.coeff(k).to_c64()).norm() / scale)
            .fold(0.0, f64::max)
    };
    if !(dev <= EXPONENT_TOL) {
        return Err(Error::ExponentMismatch {
            point: label,
            expected: fmt_list(&expected.iter().map(|e| e.to_c64()).collect::<Vec<_>>()),
            got: fmt_list(&ind.roots()),
        });
    }
    Ok(dev)
}

fn check_lists<F: Scalar>(
    data: &OpData<F>,
    op: &LinearDiffOp<F>,
    expect: impl Fn(Option<usize>) -> Vec<F>,
) -> Result<(f64, ExponentProfile)> {
    let mut worst: f64 = 0.0;
    for s in 0..data.n() {
        let dev = compare(
            op,
            &SingularPoint::Finite(data.z[s].clone()),
            &expect(Some(s)),
            format!("z{s}"),
        )?;
        worst = worst.max(dev);
    }
    worst = worst.max(compare(
        op,
        &SingularPoint::Infinity,
        &expect(None),
        "inf".into(),
    )?);
    Ok((worst, op.exponent_profile(&data.z)?))
}

/// Exponents of the fundamental operator at every `z_s` and at infinity
/// against the prescribed lists, plus absence of singular points outside `z`.
pub fn check_exponents<F: Scalar>(
    data: &OpData<F>,
    op: &LinearDiffOp<F>,
) -> Result<ExponentReport> {
    let (max_deviation, profile) = check_lists(data, op, |p| expected_exponents(data, p))?;
    let singularities = op.singularities_outside(&data.z);
    if let Some(t) = singularities.poles_outside.first() {
        return Err(Error::ExponentMismatch {
            point: format!("{t}"),
            expected: "regular point".into(),
            got: "pole of the coefficients".into(),
        });
    }
    Ok(ExponentReport {
        exact: F::EXACT,
        max_deviation,
        profile,
        singularities,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ConjugatedReport {
    pub exact: bool,
    pub max_deviation: f64,
    pub profile: ExponentProfile,
}

/// Exponents of `T_1^{-1} D T_1`: `{0, m_{s,1} - m_{s,2} + 1, ...}` at `z_s`
/// and `{-l_1, -m_{∞,1} + m_{∞,2} - 1 - l_1, ...}` at infinity.
pub fn check_conjugated_exponents<F: Scalar>(
    data: &OpData<F>,
    op: &LinearDiffOp<F>,
) -> Result<ConjugatedReport> {
    let conj = op.conjugate(&log_derivative(&data.t_quasi(1))?);
    let (max_deviation, profile) =
        check_lists(data, &conj, |p| expected_conjugated_exponents(data, p))?;
    Ok(ConjugatedReport {
        exact: F::EXACT,
        max_deviation,
        profile,
    })
}

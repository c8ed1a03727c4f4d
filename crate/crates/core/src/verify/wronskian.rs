use crate::scalar::C64;
use nalgebra::DMatrix;

/// `Wr(f_1, ..., f_k)` from jets: `jets[j][m] = f_j^{(m)}` at one point,
/// with derivative orders taken from `rows` (normally `0..k`).
pub fn wronskian_rows(jets: &[&[C64]], rows: &[usize]) -> C64 {
    let k = jets.len();
    assert_eq!(rows.len(), k, "need one derivative order per function");
    if k == 0 {
        return C64::new(1.0, 0.0);
    }
    let m = DMatrix::from_fn(k, k, |i, j| jets[j][rows[i]]);
    m.determinant()
}

pub fn wronskian(jets: &[&[C64]]) -> C64 {
    let rows: Vec<usize> = (0..jets.len()).collect();
    wronskian_rows(jets, &rows)
}

/// Hadamard bound `Π_rows ‖row‖₂`, the natural scale of [`wronskian`].
pub fn wronskian_scale(jets: &[&[C64]]) -> f64 {
    (0..jets.len())
        .map(|m| jets.iter().map(|j| j[m].norm_sqr()).sum::<f64>().sqrt())
        .product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn exponentials() {
        // Wr(e^{ax}, e^{bx}) = (b - a) e^{(a+b)x} at x = 0
        let (a, b) = (c(0.5, 1.0), c(-2.0, 0.3));
        let fa = [c(1.0, 0.0), a, a * a];
        let fb = [c(1.0, 0.0), b, b * b];
        assert!((wronskian(&[&fa, &fb]) - (b - a)).norm() < 1e-15);
        assert_eq!(wronskian(&[&fa, &fa]), c(0.0, 0.0));
    }

    fn jet() -> impl Strategy<Value = Vec<C64>> {
        prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0).prop_map(|(a, b)| c(a, b)), 3)
    }

    proptest! {
        #[test]
        fn skew_symmetric(f in jet(), g in jet(), h in jet()) {
            let w = wronskian(&[&f, &g, &h]);
            let swapped = wronskian(&[&g, &f, &h]);
            prop_assert!((w + swapped).norm() <= 1e-10 * (1.0 + wronskian_scale(&[&f, &g, &h])));
        }

        #[test]
        fn scales_linearly(f in jet(), g in jet(), s in (-2.0f64..2.0, -2.0f64..2.0)) {
            let s = c(s.0, s.1);
            let fs: Vec<C64> = f.iter().map(|v| v * s).collect();
            let w = wronskian(&[&f[..2], &g[..2]]);
            let ws = wronskian(&[&fs[..2], &g[..2]]);
            prop_assert!((ws - s * w).norm() <= 1e-10 * (1.0 + wronskian_scale(&[&fs[..2], &g[..2]])));
        }

        #[test]
        fn repeated_column_vanishes(f in jet(), g in jet()) {
            prop_assert!(wronskian(&[&f, &g, &f]).norm() <= 1e-10 * (1.0 + wronskian_scale(&[&f, &g, &f])));
        }
    }
}

//! Adaptive Dormand–Prince 5(4) for complex linear systems along a
//! straight segment in the complex plane.

use crate::error::{Error, Result};
use crate::scalar::C64;

#[derive(Clone, Copy, Debug)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
    /// Error is measured norm-wise over consecutive blocks of this many
    /// components (1 = component-wise); `atol` is relative to each block's
    /// initial size.
    pub block: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions {
            rtol: 1e-13,
            atol: 1e-15,
            max_steps: 200_000,
            block: 1,
        }
    }
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integrates `dw/dx = f(x, w)` from `x0` to `x1` along the segment.
pub fn integrate_segment<Rhs>(
    mut f: Rhs,
    x0: C64,
    x1: C64,
    w0: &[C64],
    opts: OdeOptions,
) -> Result<Vec<C64>>
where
    Rhs: FnMut(C64, &[C64]) -> Vec<C64>,
{
    let dx = x1 - x0;
    let n = w0.len();
    if dx.norm() == 0.0 || n == 0 {
        return Ok(w0.to_vec());
    }
    let block = opts.block.max(1);
    let scale0 = w0.iter().map(|c| c.norm()).fold(0.0, f64::max);
    // absolute tolerance per block, from its own initial size
    let atol: Vec<f64> = w0
        .chunks(block)
        .map(|b| {
            let s = b.iter().map(|c| c.norm()).fold(0.0, f64::max);
            opts.atol * if s > 0.0 { s } else { scale0.max(1e-300) }
        })
        .collect();
    let mut s = 0.0f64;
    let mut h = 0.05f64;
    let mut w = w0.to_vec();
    let mut k: Vec<Vec<C64>> = vec![vec![C64::new(0.0, 0.0); n]; 7];
    let mut steps = 0;
    while s < 1.0 {
        if steps >= opts.max_steps {
            return Err(Error::PathThroughSingularity(format!(
                "step limit on segment {x0} -> {x1}"
            )));
        }
        steps += 1;
        h = h.min(1.0 - s);
        for st in 0..7 {
            let mut arg = w.clone();
            for (j, a) in A[st].iter().enumerate().take(st) {
                if *a != 0.0 {
                    for (v, kk) in arg.iter_mut().zip(&k[j]) {
                        *v += kk * (h * a);
                    }
                }
            }
            let x = x0 + dx * (s + C[st] * h);
            k[st] = f(x, &arg).into_iter().map(|v| v * dx).collect();
        }
        let mut err: f64 = 0.0;
        let mut next = w.clone();
        let mut local = vec![0.0f64; n];
        for i in 0..n {
            let mut hi = C64::new(0.0, 0.0);
            let mut lo = C64::new(0.0, 0.0);
            for st in 0..7 {
                hi += k[st][i] * B5[st];
                lo += k[st][i] * B4[st];
            }
            next[i] = w[i] + hi * h;
            local[i] = ((hi - lo) * h).norm();
        }
        for (bi, start) in (0..n).step_by(block).enumerate() {
            let end = (start + block).min(n);
            let size = (start..end)
                .map(|i| w[i].norm().max(next[i].norm()))
                .fold(0.0, f64::max);
            let e = local[start..end].iter().fold(0.0f64, |a, &b| a.max(b));
            err = err.max(e / (atol[bi] + opts.rtol * size));
        }
        if !err.is_finite() {
            h *= 0.1;
            if h < 1e-14 {
                return Err(Error::PathThroughSingularity(format!(
                    "non-finite values on segment {x0} -> {x1}"
                )));
            }
            continue;
        }
        if err <= 1.0 {
            s += h;
            w = next;
        }
        let fac = if err == 0.0 {
            5.0
        } else {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        };
        h *= fac;
        if h < 1e-14 {
            return Err(Error::PathThroughSingularity(format!(
                "step underflow on segment {x0} -> {x1}"
            )));
        }
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_along_complex_segment() {
        let lam = C64::new(0.3, -1.2);
        let x1 = C64::new(2.0, 1.5);
        let w = integrate_segment(
            |_, w| vec![lam * w[0]],
            C64::new(0.0, 0.0),
            x1,
            &[C64::new(1.0, 0.0)],
            OdeOptions::default(),
        )
        .unwrap();
        let want = (lam * x1).exp();
        assert!((w[0] - want).norm() < 1e-11 * want.norm());
    }

    #[test]
    fn power_function_near_pole() {
        // w' = (a/x) w, w(1) = 1 -> w = x^a, path staying away from 0
        let a = C64::new(0.5, 0.25);
        let x1 = C64::new(0.0, 1.0);
        let w = integrate_segment(
            |x, w| vec![a / x * w[0]],
            C64::new(1.0, 0.0),
            x1,
            &[C64::new(1.0, 0.0)],
            OdeOptions::default(),
        )
        .unwrap();
        let want = (a * x1.ln()).exp();
        assert!((w[0] - want).norm() < 1e-11);
    }

    #[test]
    fn small_block_keeps_its_own_accuracy() {
        // two decoupled exponentials, one 1e12 times smaller than the other
        let (a, b) = (C64::new(0.7, 0.0), C64::new(-1.3, 0.4));
        let x1 = C64::new(1.5, -0.5);
        let w0 = [C64::new(1e6, 0.0), C64::new(1e-6, 0.0)];
        let w = integrate_segment(
            |_, w| vec![a * w[0], b * w[1]],
            C64::new(0.0, 0.0),
            x1,
            &w0,
            OdeOptions {
                block: 1,
                ..OdeOptions::default()
            },
        )
        .unwrap();
        let want = w0[1] * (b * x1).exp();
        assert!((w[1] - want).norm() < 1e-11 * want.norm());
    }
}

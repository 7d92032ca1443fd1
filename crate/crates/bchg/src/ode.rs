//! Adaptive Dormand–Prince 5(4) for complex-valued systems `y' = f(t, y)`.

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dp5Options {
    /// Relative tolerance per component.
    pub rtol: f64,
    /// Components are measured against `max(|y_i|, floor·‖y‖_∞)`, so small entries of a large state
    /// do not force tiny steps.
    pub floor: f64,
    pub h_init: f64,
    pub h_min: f64,
    pub max_steps: usize,
}

impl Default for Dp5Options {
    fn default() -> Self {
        Dp5Options { rtol: 1e-10, floor: 1e-8, h_init: 0.0, h_min: 1e-12, max_steps: 2_000_000 }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Dp5Stats {
    pub accepted: usize,
    pub rejected: usize,
    /// Sum of accepted local error estimates, relative to the state norm.
    pub local_error: f64,
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
// difference between the fifth- and fourth-order weights
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Integrates from `(t0, y0)` and returns the state at each of `outputs` (increasing, `≥ t0`).
pub fn integrate<F>(
    mut f: F,
    t0: f64,
    y0: &[Complex64],
    outputs: &[f64],
    opts: &Dp5Options,
) -> Result<(Vec<Vec<Complex64>>, Dp5Stats)>
where
    F: FnMut(f64, &[Complex64], &mut [Complex64]),
{
    let n = y0.len();
    let mut y = y0.to_vec();
    let mut t = t0;
    let mut k: Vec<Vec<Complex64>> = vec![vec![Complex64::new(0.0, 0.0); n]; 7];
    let mut tmp = vec![Complex64::new(0.0, 0.0); n];
    let mut stats = Dp5Stats::default();
    let mut out = Vec::with_capacity(outputs.len());
    let Some(&t_end) = outputs.last() else {
        return Ok((out, stats));
    };
    let span = (t_end - t0).max(0.0);
    let mut h = if opts.h_init > 0.0 { opts.h_init } else { (span * 1e-3).max(1e-6) };
    f(t, &y, &mut k[0]);
    let mut next_out = 0;
    let mut steps = 0;
    while next_out < outputs.len() {
        while next_out < outputs.len() && outputs[next_out] <= t {
            out.push(y.clone());
            next_out += 1;
        }
        if next_out == outputs.len() {
            break;
        }
        let target = outputs[next_out];
        steps += 1;
        if steps > opts.max_steps {
            return Err(Error::StiffnessFailure { t });
        }
        let hit = t + h >= target - 1e-14 * target.abs().max(1.0);
        let h_step = if hit { target - t } else { h };
        for s in 1..7 {
            for i in 0..n {
                let mut acc = y[i];
                for (j, kj) in k.iter().enumerate().take(s) {
                    if A[s][j] != 0.0 {
                        acc += kj[i] * (h_step * A[s][j]);
                    }
                }
                tmp[i] = acc;
            }
            f(t + C[s] * h_step, &tmp, &mut k[s]);
        }
        // tmp now holds the fifth-order solution (the last stage is evaluated there)
        let scale = y.iter().chain(tmp.iter()).map(|z| z.norm()).fold(0.0, f64::max) * opts.floor;
        let mut err: f64 = 0.0;
        for i in 0..n {
            let mut e = Complex64::new(0.0, 0.0);
            for (j, kj) in k.iter().enumerate() {
                if E[j] != 0.0 {
                    e += kj[i] * E[j];
                }
            }
            let sc = y[i].norm().max(tmp[i].norm()).max(scale).max(f64::MIN_POSITIVE);
            err = err.max((e * h_step).norm() / (opts.rtol * sc));
        }
        if !err.is_finite() {
            h *= 0.25;
            if h < opts.h_min {
                return Err(Error::StiffnessFailure { t });
            }
            stats.rejected += 1;
            continue;
        }
        if err <= 1.0 {
            t = if hit { target } else { t + h_step };
            std::mem::swap(&mut y, &mut tmp);
            k.swap(0, 6);
            stats.accepted += 1;
            stats.local_error += err * opts.rtol;
            let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            if !hit || h_step >= h {
                h = h_step * fac;
            }
        } else {
            stats.rejected += 1;
            h = h_step * (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
            if h < opts.h_min * t.abs().max(1.0) {
                return Err(Error::StiffnessFailure { t });
            }
        }
    }
    Ok((out, stats))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn exponential() {
        let lam = c(-0.7, 2.0);
        let (ys, st) = integrate(
            |_, y, dy| dy[0] = y[0] * lam,
            0.0,
            &[c(1.0, 0.0)],
            &[0.5, 1.0, 3.0],
            &Dp5Options::default(),
        )
        .unwrap();
        for (y, t) in ys.iter().zip([0.5, 1.0, 3.0]) {
            let e = (lam * t).exp();
            assert!((y[0] - e).norm() < 1e-9 * e.norm(), "{t}");
        }
        assert!(st.accepted > 10);
    }

    #[test]
    fn harmonic_oscillator_conserves_energy() {
        let (ys, _) = integrate(
            |_, y, dy| {
                dy[0] = y[1];
                dy[1] = -y[0];
            },
            0.0,
            &[c(1.0, 0.0), c(0.0, 0.0)],
            &[10.0],
            &Dp5Options { rtol: 1e-12, ..Default::default() },
        )
        .unwrap();
        assert!((ys[0][0].re - 10f64.cos()).abs() < 1e-10);
        assert!((ys[0][1].re + 10f64.sin()).abs() < 1e-10);
    }

    #[test]
    fn outputs_at_start_are_the_initial_state() {
        let (ys, st) = integrate(|_, _, dy| dy[0] = c(1.0, 0.0), 2.0, &[c(3.0, 0.0)], &[2.0, 2.0], &Dp5Options::default()).unwrap();
        assert_eq!(ys, vec![vec![c(3.0, 0.0)]; 2]);
        assert_eq!(st.accepted, 0);
    }

    #[test]
    fn time_dependent_rhs() {
        // y' = y/t from t = 1: y = t
        let (ys, _) = integrate(|t, y, dy| dy[0] = y[0] / t, 1.0, &[c(1.0, 0.0)], &[7.5], &Dp5Options::default()).unwrap();
        assert!((ys[0][0].re - 7.5).abs() < 1e-9);
    }
}

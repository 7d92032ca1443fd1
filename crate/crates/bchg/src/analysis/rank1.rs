//! Rank-one reference values, computed without the series or orbit engines.
//!
//! In rank one `F_λ` solves `F'' + (m_s coth x + 2 m_l coth 2x) F' = (λ² − ρ²) F`, `F(0) = 1`,
//! `F'(0) = 0` (for `p = 2`; other `p` follow by rescaling). Two independent routes:
//! a Taylor start at the origin continued by Richardson-extrapolated RK4, and the Gauss function
//! `cosh(x)^{−2a} ₂F₁(a, c − b; c; tanh² x)` with `a = (ρ+λ)/2`, `b = (ρ−λ)/2`, `c = (m_s+m_l+1)/2`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const TAYLOR_TERMS: usize = 48;
const START: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rank1Value {
    pub value: Complex64,
    pub err_est: f64,
}

/// Parameters `(a, b, c)` with `F_λ(x) = ₂F₁(a, b; c; −sinh² x)` for `p = 2`.
pub fn gauss_params(m_s: f64, m_l: f64, lambda: Complex64) -> (Complex64, Complex64, f64) {
    let rho = m_s / 2.0 + m_l;
    ((lambda + rho) / 2.0, (-lambda + rho) / 2.0, (m_s + m_l + 1.0) / 2.0)
}

/// `2^{2j} B_{2j} / (2j)!`, the coefficient of `x^{2j−1}` in `coth x`, via `ζ(2j)`.
fn coth_coeff(j: usize) -> f64 {
    if j == 0 {
        return 1.0;
    }
    let s = 2 * j as i32;
    let zeta = match j {
        1 => PI * PI / 6.0,
        2 => PI.powi(4) / 90.0,
        _ => {
            let n = 400;
            let head: f64 = (1..=n).rev().map(|k| (k as f64).powi(-s)).sum();
            head + (n as f64).powi(1 - s) / f64::from(s - 1) - 0.5 * (n as f64).powi(-s)
        }
    };
    let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
    sign * 2.0 * zeta / PI.powi(s)
}

/// Coefficients `f_n` of `F(x) = Σ f_n x^{2n}`.
pub fn taylor_coefficients(m_s: f64, m_l: f64, lambda: Complex64, terms: usize) -> Result<Vec<Complex64>> {
    let rho = m_s / 2.0 + m_l;
    let e = lambda * lambda - rho * rho;
    let alpha: Vec<f64> = (0..terms).map(|j| coth_coeff(j) * (m_s + m_l * 4f64.powi(j as i32))).collect();
    let mut f = vec![Complex64::new(1.0, 0.0)];
    for n in 1..terms {
        let nn = n as f64;
        let den = 2.0 * nn * (2.0 * nn - 1.0 + alpha[0]);
        if den.abs() < 1e-12 {
            return Err(Error::Domain(format!("indicial resonance at order {n}")));
        }
        let mut acc = e * f[n - 1];
        for j in 1..n {
            acc -= f[n - j] * (alpha[j] * 2.0 * (n - j) as f64);
        }
        f.push(acc / den);
    }
    Ok(f)
}

fn taylor_start(coef: &[Complex64], x: f64) -> (Complex64, Complex64) {
    let mut val = Complex64::new(0.0, 0.0);
    let mut der = Complex64::new(0.0, 0.0);
    for (n, c) in coef.iter().enumerate().rev() {
        val = val * (x * x) + c;
        if n > 0 {
            der = der * (x * x) + c * (2.0 * n as f64);
        }
    }
    (val, der * x)
}

fn rk4(m_s: f64, m_l: f64, e: Complex64, y0: (Complex64, Complex64), x0: f64, x1: f64, n: usize) -> Complex64 {
    let h = (x1 - x0) / n as f64;
    let drift = |x: f64| m_s / x.tanh() + 2.0 * m_l / (2.0 * x).tanh();
    let rhs = |x: f64, y: Complex64, d: Complex64| (d, e * y - d * drift(x));
    let (mut y, mut d) = y0;
    for i in 0..n {
        let x = x0 + i as f64 * h;
        let (k1y, k1d) = rhs(x, y, d);
        let (k2y, k2d) = rhs(x + h / 2.0, y + k1y * (h / 2.0), d + k1d * (h / 2.0));
        let (k3y, k3d) = rhs(x + h / 2.0, y + k2y * (h / 2.0), d + k2d * (h / 2.0));
        let (k4y, k4d) = rhs(x + h, y + k3y * h, d + k3d * h);
        y += (k1y + k2y * 2.0 + k3y * 2.0 + k4y) * (h / 6.0);
        d += (k1d + k2d * 2.0 + k3d * 2.0 + k4d) * (h / 6.0);
    }
    y
}

/// ODE route for `p = 2`: Taylor series to `x = 0.1`, then RK4 at `n` and `2n` steps with
/// Richardson extrapolation, doubling `n` until the estimate meets `tol`.
fn ode_p2(m_s: f64, m_l: f64, lambda: Complex64, x: f64, tol: f64) -> Result<Rank1Value> {
    let x = x.abs();
    let coef = taylor_coefficients(m_s, m_l, lambda, TAYLOR_TERMS)?;
    if x <= START {
        let (v, _) = taylor_start(&coef, x);
        let last = coef[TAYLOR_TERMS - 1] * x.powi(2 * TAYLOR_TERMS as i32 - 2);
        return Ok(Rank1Value { value: v, err_est: last.norm() });
    }
    let start = taylor_start(&coef, START);
    let rho = m_s / 2.0 + m_l;
    let e = lambda * lambda - rho * rho;
    let scale = 1.0 + e.norm().sqrt() + m_s.abs() + m_l.abs();
    let mut n = ((x - START) * scale * 50.0).ceil().max(16.0) as usize;
    let mut coarse = rk4(m_s, m_l, e, start, START, x, n);
    loop {
        let fine = rk4(m_s, m_l, e, start, START, x, 2 * n);
        let err = (fine - coarse).norm() / 15.0;
        let value = fine + (fine - coarse) / 15.0;
        if err <= tol * value.norm().max(1e-300) {
            return Ok(Rank1Value { value, err_est: err });
        }
        if n > 1 << 22 {
            return Err(Error::StiffnessFailure { t: x });
        }
        n *= 2;
        coarse = fine;
    }
}

/// `₂F₁(a, b; c; z)` by direct summation, `|z| < 1`.
pub fn hyp2f1(a: Complex64, b: Complex64, c: f64, z: f64) -> Result<Complex64> {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for k in 0..2_000_000usize {
        let kf = k as f64;
        if (c + kf).abs() < 1e-14 {
            return Err(Error::Domain("c is a nonpositive integer".into()));
        }
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * z;
        sum += term;
        // the tail is geometric once the term ratio has settled near z
        if k > 8 && term.norm() <= 1e-17 * sum.norm() * (1.0 - z.abs()) {
            return Ok(sum);
        }
    }
    Err(Error::Truncation { height: 2_000_000, tail: term.norm() })
}

fn gauss_p2(m_s: f64, m_l: f64, lambda: Complex64, x: f64) -> Result<Complex64> {
    let (a, b, c) = gauss_params(m_s, m_l, lambda);
    let th = x.tanh();
    let pre = (-2.0 * a * x.cosh().ln()).exp();
    Ok(pre * hyp2f1(a, Complex64::new(c, 0.0) - b, c, th * th)?)
}

/// `F_λ(m; x)` in rank one from the ODE route; `p` is the long-root norm.
pub fn rank1_oracle(m_s: f64, m_l: f64, lambda: Complex64, x: f64, p: f64) -> Result<Rank1Value> {
    let v = ode_p2(m_s, m_l, lambda * (2.0 / p), x * p / 2.0, 1e-12)?;
    Ok(v)
}

/// `F_λ(m; x)` in rank one from the Gauss function.
pub fn rank1_gauss(m_s: f64, m_l: f64, lambda: Complex64, x: f64, p: f64) -> Result<Complex64> {
    gauss_p2(m_s, m_l, lambda * (2.0 / p), (x * p / 2.0).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn coth_coefficients() {
        // coth x = 1/x + x/3 − x³/45 + 2x⁵/945 − …
        assert_relative_eq!(coth_coeff(1), 1.0 / 3.0, epsilon = 1e-15);
        assert_relative_eq!(coth_coeff(2), -1.0 / 45.0, epsilon = 1e-15);
        assert_relative_eq!(coth_coeff(3), 2.0 / 945.0, epsilon = 1e-16);
        assert_relative_eq!(coth_coeff(4), -1.0 / 4725.0, max_relative = 1e-13);
    }

    #[test]
    fn free_case_is_cosh() {
        for x in [0.05, 0.7, 2.0] {
            let v = rank1_oracle(0.0, 0.0, c(1.3, 0.4), x, 2.0).unwrap();
            let want = (c(1.3, 0.4) * x).cosh();
            assert!((v.value - want).norm() < 1e-10 * want.norm(), "{x}");
            let g = rank1_gauss(0.0, 0.0, c(1.3, 0.4), x, 2.0).unwrap();
            assert!((g - want).norm() < 1e-11 * want.norm(), "{x}");
        }
    }

    #[test]
    fn rho_point_is_one() {
        for (ms, ml) in [(4.0, 3.0), (4.0, -1.0), (1.0, 0.5)] {
            let rho = ms / 2.0 + ml;
            for x in [0.3, 1.5, 3.0] {
                let v = rank1_oracle(ms, ml, c(rho, 0.0), x, 2.0).unwrap();
                assert!((v.value - 1.0).norm() < 1e-10, "{ms} {ml} {x}: {}", v.value);
            }
        }
    }

    #[test]
    fn routes_agree() {
        for (ms, ml, l) in [(4.0, 3.0, c(2.5, 0.0)), (4.0, -1.0, c(0.3, 1.1)), (2.5, 0.7, c(-1.2, 2.0)), (1.0, 0.0, c(0.0, 3.0))] {
            for x in [0.2, 1.0, 2.5] {
                let a = rank1_oracle(ms, ml, l, x, 2.0).unwrap().value;
                let b = rank1_gauss(ms, ml, l, x, 2.0).unwrap();
                assert!((a - b).norm() < 1e-10 * b.norm().max(1e-3), "{ms} {ml} {l} {x}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn long_norm_rescaling() {
        // with p = 1 the short root is x/2, so F^{(1)}_λ(x) = F^{(2)}_{2λ}(x/2)
        let a = rank1_oracle(2.0, 1.0, c(0.7, 0.0), 1.4, 1.0).unwrap().value;
        let b = rank1_oracle(2.0, 1.0, c(1.4, 0.0), 0.7, 2.0).unwrap().value;
        assert_relative_eq!(a.re, b.re, max_relative = 1e-12);
    }

    #[test]
    fn taylor_head_matches_gauss_series() {
        // F = ₂F₁(a, b; c; −sinh² x) = 1 − (ab/c) x² + O(x⁴)
        let l = c(1.7, 0.2);
        let f = taylor_coefficients(3.0, 0.5, l, 8).unwrap();
        let (a, b, cc) = gauss_params(3.0, 0.5, l);
        assert!((f[1] + a * b / cc).norm() < 1e-14);
        let near = rank1_gauss(3.0, 0.5, l, 0.05, 2.0).unwrap();
        let series: Complex64 = f.iter().enumerate().map(|(n, v)| v * 0.05f64.powi(2 * n as i32)).sum();
        assert!((near - series).norm() < 1e-14);
    }
}

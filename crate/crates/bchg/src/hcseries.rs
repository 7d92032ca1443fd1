//! Harish-Chandra series: the `Γ_μ` recursion, `Φ_λ` and the c-function expansion of `F_λ`.
//!
//! Lattice points are stored by simple coordinates `ν`, with `μ = 2ν`. The
//! recursion is
//!
//! `⟨μ, μ−2λ⟩ Γ_μ = 2 Σ_α m_α Σ_{n≥1} Γ_{μ−2nα} ⟨μ + ρ − 2nα − λ, α⟩`,
//!
//! where the inner sum runs over `n` with `ν − nα` still in the cone.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cfunc::c_function;
use crate::error::{Error, Result};
use crate::multiplicity::{rho, Multiplicity};
use crate::rootsys::{dot, pair_c, RootSystem};

/// Entries allowed in a dense table; bounds the reachable height in rank three and up.
const TABLE_BUDGET: usize = 1 << 22;
pub const MAX_HEIGHT: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesOptions {
    /// Initial truncation height.
    pub height: usize,
    /// Target relative tail; the height is doubled until it is met (when `adaptive`).
    pub tol: f64,
    pub adaptive: bool,
    /// Smallest accepted `min_k σ_k(x)`.
    pub min_margin: f64,
}

impl Default for SeriesOptions {
    fn default() -> Self {
        SeriesOptions { height: 60, tol: 1e-13, adaptive: true, min_margin: 0.05 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesValue {
    pub value: Complex64,
    pub height: usize,
    /// Absolute tail estimate.
    pub tail: f64,
    pub wall_margin: f64,
}

struct RootData {
    coords: Vec<f64>,
    offset: usize,
    simple: Vec<u32>,
    mult: f64,
    norm2: f64,
    rho_dot: f64,
    lambda_dot: Complex64,
}

/// `Γ_{2ν}(m;λ)` for all `ν` of height at most `max_height`, dense in simple coordinates.
#[derive(Debug, Clone)]
pub struct GammaTable {
    rank: usize,
    max_height: usize,
    side: usize,
    coeffs: Vec<Complex64>,
    genericity_margin: f64,
}

impl GammaTable {
    pub fn new(rs: &RootSystem, m: &Multiplicity, lambda: &[Complex64], max_height: usize) -> Result<Self> {
        let cap = height_cap(rs.rank());
        if max_height > cap {
            return Err(Error::Invalid(format!("height {max_height} exceeds the table budget ({cap}) in rank {}", rs.rank())));
        }
        let r = rs.rank();
        let side = max_height + 1;
        let m = m.for_rank(r);
        let rh = rho(rs, &m);
        let mut strides = vec![1usize; r];
        for k in 1..r {
            strides[k] = strides[k - 1] * side;
        }
        let roots: Vec<RootData> = rs
            .positive_roots()
            .iter()
            .filter(|a| m.of(a.class) != 0.0)
            .map(|a| RootData {
                coords: a.coords.clone(),
                offset: a.simple.iter().zip(&strides).map(|(&c, &s)| c as usize * s).sum(),
                simple: a.simple.clone(),
                mult: m.of(a.class),
                norm2: a.norm2,
                rho_dot: dot(&rh, &a.coords),
                lambda_dot: a.eval_c(lambda),
            })
            .collect();
        let lam_norm = lambda.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let mut coeffs = vec![Complex64::new(0.0, 0.0); side.pow(r as u32)];
        coeffs[0] = Complex64::new(1.0, 0.0);
        let mut genericity_margin = f64::INFINITY;
        let mut nu = vec![0u32; r];
        for h in 1..=max_height {
            first_composition(&mut nu, h as u32);
            loop {
                let idx: usize = nu.iter().zip(&strides).map(|(&c, &s)| c as usize * s).sum();
                let mu: Vec<f64> = rs.from_simple(&nu).into_iter().map(|v| 2.0 * v).collect();
                let mu2 = dot(&mu, &mu);
                let den = Complex64::new(mu2, 0.0) - pair_c(lambda, &mu) * 2.0;
                let scale = 1.0 + mu2 + mu2.sqrt() * lam_norm;
                genericity_margin = genericity_margin.min(den.norm() / scale);
                if den.norm() < 1e-8 * scale {
                    return Err(Error::NonGenericSpectral { nu: nu.clone() });
                }
                let mut acc = Complex64::new(0.0, 0.0);
                for a in &roots {
                    let mu_dot = dot(&mu, &a.coords);
                    let base = a.lambda_dot * -1.0 + mu_dot + a.rho_dot;
                    let mut n = 1usize;
                    let mut sub = Complex64::new(0.0, 0.0);
                    while nu.iter().zip(&a.simple).all(|(&v, &s)| v as usize >= n * s as usize) {
                        let g = coeffs[idx - n * a.offset];
                        sub += g * (base - 2.0 * n as f64 * a.norm2);
                        n += 1;
                    }
                    acc += sub * a.mult;
                }
                coeffs[idx] = acc * 2.0 / den;
                if !next_composition(&mut nu) {
                    break;
                }
            }
        }
        Ok(GammaTable { rank: r, max_height, side, coeffs, genericity_margin })
    }

    pub fn max_height(&self) -> usize {
        self.max_height
    }

    /// Smallest `|⟨μ, μ−2λ⟩|`, relative to its scale, seen while filling the table.
    pub fn genericity_margin(&self) -> f64 {
        self.genericity_margin
    }

    pub fn get(&self, nu: &[u32]) -> Option<Complex64> {
        if nu.len() != self.rank || nu.iter().map(|&c| c as usize).sum::<usize>() > self.max_height {
            return None;
        }
        let mut idx = 0;
        let mut stride = 1;
        for &c in nu {
            idx += c as usize * stride;
            stride *= self.side;
        }
        Some(self.coeffs[idx])
    }

    /// Entries grouped by height.
    pub fn shells(&self) -> Vec<Vec<(Vec<u32>, Complex64)>> {
        let mut out = vec![Vec::new(); self.max_height + 1];
        let mut nu = vec![0u32; self.rank];
        for (h, shell) in out.iter_mut().enumerate() {
            first_composition(&mut nu, h as u32);
            loop {
                let g = self.get(&nu).expect("in range");
                shell.push((nu.clone(), g));
                if !next_composition(&mut nu) {
                    break;
                }
            }
        }
        out
    }
}

/// Largest table height that fits the entry budget in rank `r`.
pub fn height_cap(r: usize) -> usize {
    let side = (TABLE_BUDGET as f64).powf(1.0 / r as f64).floor() as usize;
    MAX_HEIGHT.min(side.saturating_sub(1))
}

// Compositions of `h` into `nu.len()` parts, in reverse lexicographic order.
fn first_composition(nu: &mut [u32], h: u32) {
    nu.iter_mut().for_each(|c| *c = 0);
    nu[0] = h;
}

fn next_composition(nu: &mut [u32]) -> bool {
    let r = nu.len();
    if r == 1 {
        return false;
    }
    // move one unit from the first nonzero slot before the last to its right neighbour,
    // collecting everything behind it
    let last = nu[r - 1];
    nu[r - 1] = 0;
    let Some(k) = (0..r - 1).rev().find(|&k| nu[k] > 0) else {
        nu[r - 1] = last;
        return false;
    };
    nu[k] -= 1;
    nu[k + 1] = last + 1;
    true
}

/// Partial sums `Σ_{height(ν) ≤ h} Γ_{2ν} e^{−2ν(x)}` by shell.
fn shell_sums(table: &GammaTable, rs: &RootSystem, x: &[f64]) -> Vec<Complex64> {
    let h2 = rs.long_norm();
    // e^{−2σ_k(x)} with σ_k(x) = (p/2)(x_k − x_{k−1})
    let q: Vec<f64> = (0..rs.rank())
        .map(|k| (-h2 * (x[k] - if k > 0 { x[k - 1] } else { 0.0 })).exp())
        .collect();
    table
        .shells()
        .into_iter()
        .map(|shell| {
            shell
                .into_iter()
                .map(|(nu, g)| g * nu.iter().zip(&q).map(|(&n, &qk)| qk.powi(n as i32)).product::<f64>())
                .sum()
        })
        .collect()
}

fn tail_of(shells: &[Complex64], margin: f64) -> f64 {
    let g = (-2.0 * margin).exp();
    let n = shells.len();
    let last = shells[n - 1].norm().max(if n > 1 { shells[n - 2].norm() } else { 0.0 });
    last * g / (1.0 - g)
}

/// `Σ_ν Γ_{2ν} e^{−2ν(x)}`, the series part of `Φ_λ` without its exponential prefactor.
fn phi_series(rs: &RootSystem, m: &Multiplicity, lambda: &[Complex64], x: &[f64], opts: &SeriesOptions) -> Result<SeriesValue> {
    let margin = rs.wall_margin(x);
    if !(margin >= opts.min_margin) {
        return Err(Error::WallTooClose { margin, min: opts.min_margin });
    }
    let cap = height_cap(rs.rank());
    let mut height = opts.height.min(cap).max(2);
    loop {
        let table = GammaTable::new(rs, m, lambda, height)?;
        let shells = shell_sums(&table, rs, x);
        let sum: Complex64 = shells.iter().sum();
        let tail = tail_of(&shells, margin);
        let done = tail <= opts.tol * sum.norm() || !opts.adaptive || height >= cap;
        if done {
            return Ok(SeriesValue { value: sum, height, tail, wall_margin: margin });
        }
        height = (2 * height).min(cap);
    }
}

/// `Φ_λ(m;x) = e^{(λ−ρ)(x)} Σ_ν Γ_{2ν} e^{−2ν(x)}` for `x` in the open positive chamber.
pub fn phi(rs: &RootSystem, m: &Multiplicity, lambda: &[Complex64], x: &[f64], opts: &SeriesOptions) -> Result<SeriesValue> {
    let s = phi_series(rs, m, lambda, x, opts)?;
    let rh = rho(rs, m);
    let e = (pair_c(lambda, x) - dot(&rh, x)).exp();
    Ok(SeriesValue { value: s.value * e, tail: s.tail * e.norm(), ..s })
}

/// Whether no root is orthogonal to `λ`, i.e. the Weyl orbit of `λ` is free.
pub fn is_regular_spectral(rs: &RootSystem, lambda: &[Complex64]) -> bool {
    let scale = 1.0 + lambda.iter().map(|z| z.norm()).fold(0.0, f64::max);
    rs.positive_roots().iter().all(|a| a.eval_c(lambda).norm() > 1e-8 * scale)
}

/// `F_λ = Σ_w c(m;wλ) Φ_{wλ}` at the dominant representative of `x`.
///
/// The returned `tail` is an absolute error estimate covering truncation and cancellation.
pub fn f_series(rs: &RootSystem, m: &Multiplicity, lambda: &[Complex64], x: &[f64], opts: &SeriesOptions) -> Result<SeriesValue> {
    let m = m.for_rank(rs.rank());
    if !is_regular_spectral(rs, lambda) {
        return Err(Error::DegenerateOrbit);
    }
    let (xd, _) = rs.dominant_representative(x);
    let rh = rho(rs, &m);
    let terms: Vec<Result<(Complex64, f64, usize, f64)>> = rs
        .weyl_group()
        .par_iter()
        .map(|w| {
            let wl = w.act_c(lambda);
            let c = c_function(rs, &m, &wl)?;
            if c.is_pole() {
                return Err(Error::NonGenericSpectral { nu: vec![] });
            }
            if c.is_zero() {
                return Ok((Complex64::new(0.0, 0.0), 0.0, 0, f64::INFINITY));
            }
            let s = phi_series(rs, &m, &wl, &xd, opts)?;
            let pre = (c.log + pair_c(&wl, &xd) - dot(&rh, &xd)).exp();
            Ok((pre * s.value, pre.norm() * s.tail, s.height, s.wall_margin))
        })
        .collect();
    let mut value = Complex64::new(0.0, 0.0);
    let mut tail = 0.0;
    let mut mass = 0.0;
    let mut height = 0;
    let mut margin = rs.wall_margin(&xd);
    for t in terms {
        let (v, e, h, mg) = t?;
        value += v;
        tail += e;
        mass += v.norm();
        height = height.max(h);
        margin = margin.min(mg);
    }
    tail += 64.0 * f64::EPSILON * mass;
    Ok(SeriesValue { value, height, tail, wall_margin: margin })
}

//! Complex log-gamma, the c-function and the `b₀` nonsingularity test.
//!
//! `c̃(m;λ) = Π 2^{−λ_α} Γ(λ_α) / [Γ(λ_α/2 + m_α/4 + 1/2) Γ(λ_α/2 + m_α/4 + m_{2α}/2)]`
//! over the short and middle positive roots, and `c(m;λ) = c̃(m;λ)/c̃(m;ρ(m))`.
//! Coincident poles inside one root factor are cancelled by taking the limit in `λ_α`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multiplicity::{rho, Multiplicity};
use crate::rootsys::{to_complex, RootClass, RootSystem};

/// Distance to a non-positive integer below which a gamma argument counts as a pole.
pub const POLE_TOL: f64 = 1e-10;

const LANCZOS_G: f64 = 5.242_187_5;
#[allow(clippy::excessive_precision)]
const LANCZOS: [f64; 14] = [
    57.156_235_665_862_923_5,
    -59.597_960_355_475_491_2,
    14.136_097_974_741_747_1,
    -0.491_913_816_097_620_199,
    0.339_946_499_848_118_887e-4,
    0.465_236_289_270_485_756e-4,
    -0.983_744_753_048_795_646e-4,
    0.158_088_703_224_912_494e-3,
    -0.210_264_441_724_104_883e-3,
    0.217_439_618_115_212_643e-3,
    -0.164_318_106_536_763_890e-3,
    0.844_182_239_838_527_433e-4,
    -0.261_908_384_015_814_087e-4,
    0.368_991_826_595_316_234e-5,
];

/// Index `n` if `z` is within `tol` of `−n` for some `n ≥ 0`.
pub fn near_pole(z: Complex64, tol: f64) -> Option<i64> {
    let n = (-z.re).round();
    if n >= 0.0 && (z.re + n).abs() <= tol && z.im.abs() <= tol {
        Some(n as i64)
    } else {
        None
    }
}

/// `log Γ(z)` on some branch, so that `exp` of it is `Γ(z)`.
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    if let Some(n) = near_pole(z, 1e-12) {
        return Err(Error::PoleAt(-n));
    }
    Ok(log_gamma_unchecked(z))
}

#[allow(clippy::excessive_precision)]
fn log_gamma_unchecked(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // Γ(z) Γ(1−z) = π / sin(πz)
        let s = (z * PI).sin();
        return Complex64::new(PI.ln(), 0.0) - s.ln() - log_gamma_unchecked(1.0 - z);
    }
    let t = z + LANCZOS_G;
    let head = (z + 0.5) * t.ln() - t;
    let mut ser = Complex64::new(0.999_999_999_999_997_092, 0.0);
    for (k, c) in LANCZOS.iter().enumerate() {
        ser += c / (z + (k + 1) as f64);
    }
    head + (ser * 2.506_628_274_631_000_5 / z).ln()
}

pub fn gamma(z: Complex64) -> Result<Complex64> {
    log_gamma(z).map(Complex64::exp)
}

/// Result of a gamma-product evaluation.
///
/// `order > 0` is a pole, `order < 0` a zero; for `order == 0` the value is
/// `exp(log)`, with coincident poles cancelled. `pole_hits` counts gamma
/// arguments that sat on a pole.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CValue {
    pub log: Complex64,
    pub order: i32,
    pub pole_hits: u32,
}

impl CValue {
    pub fn is_pole(&self) -> bool {
        self.order > 0
    }

    pub fn is_zero(&self) -> bool {
        self.order < 0
    }

    pub fn value(&self) -> Complex64 {
        match self.order {
            0 => self.log.exp(),
            o if o < 0 => Complex64::new(0.0, 0.0),
            _ => Complex64::new(f64::INFINITY, 0.0),
        }
    }

    /// `log |value|`, usable when the value itself would overflow.
    pub fn log_scale(&self) -> f64 {
        self.log.re
    }
}

/// Product of `Γ(a z + b)^{±1}` factors sharing one variable `z`.
struct RootFactor {
    log: Complex64,
    order: i32,
    hits: u32,
}

impl RootFactor {
    fn new() -> Self {
        RootFactor { log: Complex64::new(0.0, 0.0), order: 0, hits: 0 }
    }

    fn push(&mut self, a: f64, arg: Complex64, exponent: i32) {
        match near_pole(arg, POLE_TOL) {
            Some(n) => {
                // Γ(a z + b) ≈ (−1)^n / (n! a δ) near the pole, δ the offset in z
                let log_fact: f64 = (1..=n).map(|k| (k as f64).ln()).sum();
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                let residue = Complex64::new(sign / a, 0.0).ln() - log_fact;
                self.log += residue * f64::from(exponent);
                self.order += exponent;
                self.hits += 1;
            }
            None => self.log += log_gamma_unchecked(arg) * f64::from(exponent),
        }
    }
}

/// `c̃(m;λ)` in log form.
pub fn ctilde(rs: &RootSystem, m: &Multiplicity, lambda: &[Complex64]) -> CValue {
    let m = m.for_rank(rs.rank());
    let mut log = Complex64::new(0.0, 0.0);
    let mut order = 0;
    let mut pole_hits = 0;
    for a in rs.positive_roots().iter().filter(|a| a.class != RootClass::Long) {
        let z = a.coroot_pairing(lambda);
        let ma = m.of(a.class);
        let m2a = m.doubled(a.class);
        let mut f = RootFactor::new();
        f.push(1.0, z, 1);
        f.push(0.5, z / 2.0 + ma / 4.0 + 0.5, -1);
        f.push(0.5, z / 2.0 + ma / 4.0 + m2a / 2.0, -1);
        log += f.log - z * std::f64::consts::LN_2;
        order += f.order;
        pole_hits += f.hits;
    }
    CValue { log, order, pole_hits }
}

/// `c(m;λ) = c̃(m;λ)/c̃(m;ρ(m))`.
///
/// Fails with `NotRegular` when any gamma factor of `c̃(m;ρ(m))` sits on a pole:
/// there the normalisation is a limit in `m` (for `m = 0` it is `1/|W|`, not 1),
/// which a fixed-`m` evaluation cannot resolve.
pub fn c_function(rs: &RootSystem, m: &Multiplicity, lambda: &[Complex64]) -> Result<CValue> {
    let norm = ctilde(rs, m, &to_complex(&rho(rs, m)));
    if norm.pole_hits != 0 || !norm.log.re.is_finite() {
        return Err(Error::NotRegular);
    }
    let num = ctilde(rs, m, lambda);
    Ok(CValue { log: num.log - norm.log, ..num })
}

/// Whether the leading asymptotic coefficient is nonzero at `λ0`; defined only when `m_s ≠ 0`.
pub fn b0_nonsingular(rs: &RootSystem, m: &Multiplicity, lambda0: &[Complex64]) -> Result<bool> {
    let m = m.for_rank(rs.rank());
    if m.short == 0.0 {
        return Err(Error::Unsupported("the b0 criterion is only available when m_s ≠ 0".into()));
    }
    for a in rs.positive_roots() {
        let z = a.coroot_pairing(lambda0) / 2.0;
        let args: Vec<Complex64> = match a.class {
            RootClass::Short => vec![z + m.short / 4.0 + 0.5, z + m.short / 4.0 + m.long / 2.0],
            RootClass::Middle => vec![z + m.middle / 4.0 + 0.5, z + m.middle / 4.0],
            RootClass::Long => vec![],
        };
        if args.into_iter().any(|g| near_pole(g, POLE_TOL).is_some()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Sufficient regularity guard: `m_s + m_l ≥ 0` and, in rank above one, `m_m ≥ 0`.
pub fn in_mc0(m: &Multiplicity, rank: usize) -> bool {
    m.short + m.long >= 0.0 && (rank == 1 || m.middle >= 0.0)
}

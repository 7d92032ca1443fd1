//! Cherednik operators, the orbit ODE for `G_λ`, symmetrisation to `F_λ`, and the deformed functions.
//!
//! Along a ray `t ↦ t·x̂` the values `g_w(t) = G_λ(t·w x̂)`, `w ∈ W`, satisfy the linear system
//!
//! `g_w' = (ρ+λ)(w x̂) g_w + Σ_α m_α k(α(w x̂), t) (g_{r_α w} − g_w)`, `k(a, t) = a / (1 − e^{−2ta})`,
//!
//! which has a regular singular point at `t = 0`. It is started from a Frobenius series and continued
//! with an adaptive Runge–Kutta method.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hcseries::{f_series, height_cap, is_regular_spectral, SeriesOptions};
use crate::multiplicity::{deform, in_m0, rho, Deformation, Multiplicity};
use crate::ode::{integrate, Dp5Options, Dp5Stats};
use crate::rootsys::{dot, norm, RootSystem};

const FROBENIUS_ORDER: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Auto,
    Series,
    Ode,
    /// Closed-form value, e.g. at `x = 0`.
    Exact,
    Oracle,
}

impl Method {
    pub fn label(self) -> &'static str {
        match self {
            Method::Auto => "auto",
            Method::Series => "series",
            Method::Ode => "ode",
            Method::Exact => "exact",
            Method::Oracle => "oracle",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Method::Auto),
            "series" => Ok(Method::Series),
            "ode" => Ok(Method::Ode),
            _ => Err(Error::Invalid(format!("unknown method {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalOptions {
    pub method: Method,
    /// Target relative accuracy.
    pub tol: f64,
    /// Initial series truncation height.
    pub height: usize,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions { method: Method::Auto, tol: 1e-8, height: 60 }
    }
}

impl EvalOptions {
    pub fn ode(tol: f64) -> Self {
        EvalOptions { method: Method::Ode, tol, ..Default::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub value: Complex64,
    pub method: Method,
    /// Absolute error estimate.
    pub err_est: f64,
    /// Size of any perturbation applied to the evaluation point. The ODE handles singular
    /// directions directly, so this is zero unless a caller perturbs on purpose.
    pub perturbation: f64,
}

impl EvalResult {
    fn exact(value: f64) -> Self {
        EvalResult { value: Complex64::new(value, 0.0), method: Method::Exact, err_est: 0.0, perturbation: 0.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeformedEval {
    pub base: Multiplicity,
    pub deformation: Deformation,
    pub lambda: Vec<Complex64>,
    pub x: Vec<f64>,
    pub value: Complex64,
    pub method: Method,
    pub err_est: f64,
}

/// `u(x) = Π_j cosh(β_j(x)/2)`.
pub fn u(rs: &RootSystem, x: &[f64]) -> f64 {
    let p = rs.long_norm();
    x.iter().map(|&xj| (p * xj / 2.0).cosh()).product()
}

/// `v(x) = Π_{i<j} cosh((β_j − β_i)(x)/2) cosh((β_j + β_i)(x)/2)`.
pub fn v(rs: &RootSystem, x: &[f64]) -> f64 {
    let p = rs.long_norm();
    let mut out = 1.0;
    for j in 0..x.len() {
        for i in 0..j {
            out *= (p * (x[j] - x[i]) / 2.0).cosh() * (p * (x[j] + x[i]) / 2.0).cosh();
        }
    }
    out
}

/// `log u`, stable for large arguments.
pub fn log_u(rs: &RootSystem, x: &[f64]) -> f64 {
    let p = rs.long_norm();
    x.iter().map(|&xj| log_cosh(p * xj / 2.0)).sum()
}

pub fn log_v(rs: &RootSystem, x: &[f64]) -> f64 {
    let p = rs.long_norm();
    let mut out = 0.0;
    for j in 0..x.len() {
        for i in 0..j {
            out += log_cosh(p * (x[j] - x[i]) / 2.0) + log_cosh(p * (x[j] + x[i]) / 2.0);
        }
    }
    out
}

fn log_cosh(a: f64) -> f64 {
    let a = a.abs();
    a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2
}

/// `u⁻¹ ∂_ξ u = ½ Σ_j β_j(ξ) tanh(β_j(x)/2)`.
pub fn dlog_u(rs: &RootSystem, x: &[f64], xi: &[f64]) -> f64 {
    let p = rs.long_norm();
    0.5 * x.iter().zip(xi).map(|(&xj, &s)| p * s * (p * xj / 2.0).tanh()).sum::<f64>()
}

/// `v⁻¹ ∂_ξ v`, the middle-root analogue of [`dlog_u`].
pub fn dlog_v(rs: &RootSystem, x: &[f64], xi: &[f64]) -> f64 {
    let p = rs.long_norm();
    let mut out = 0.0;
    for j in 0..x.len() {
        for i in 0..j {
            out += p * (xi[j] - xi[i]) * (p * (x[j] - x[i]) / 2.0).tanh()
                + p * (xi[j] + xi[i]) * (p * (x[j] + x[i]) / 2.0).tanh();
        }
    }
    0.5 * out
}

/// `a / (1 − e^{−2ta})`, including its limit `1/(2t)` at `a = 0`.
fn kernel(a: f64, t: f64) -> f64 {
    let z = 2.0 * t * a;
    if z.abs() < 1e-5 {
        (1.0 + z / 2.0 + z * z / 12.0) / (2.0 * t)
    } else {
        a / -(-z).exp_m1()
    }
}

/// Bernoulli numbers with `B_1 = +1/2`, so that `z/(1 − e^{−z}) = Σ B_n zⁿ/n!`.
fn bernoulli_plus(n: usize) -> Vec<f64> {
    let mut b = vec![0.0; n + 1];
    b[0] = 1.0;
    for k in 1..=n {
        // Σ_{j<k} C(k+1, j) B_j = −(k+1) B_k with the B_1 = −1/2 convention
        let mut acc = 0.0;
        let mut binom = 1.0;
        for (j, bj) in b.iter().enumerate().take(k) {
            acc += binom * bj;
            binom *= (k + 1 - j) as f64 / (j + 1) as f64;
        }
        b[k] = -acc / (k + 1) as f64;
    }
    if n >= 1 {
        b[1] = 0.5;
    }
    b
}

struct Coupling {
    target: usize,
    mult: f64,
    a: f64,
}

/// The orbit system for fixed `(m, λ, x̂)`.
pub struct OrbitSystem {
    couplings: Vec<Vec<Coupling>>,
    diag: Vec<Complex64>,
    t0: f64,
    m0_norm: f64,
}

impl OrbitSystem {
    /// `dir` need not be normalised or regular.
    pub fn new(rs: &RootSystem, m: &Multiplicity, lambda: &[Complex64], dir: &[f64]) -> Result<Self> {
        let r = rs.rank();
        if lambda.len() != r || dir.len() != r {
            return Err(Error::Invalid(format!("expected vectors of length {r}")));
        }
        let m = m.for_rank(r);
        if !in_m0(&m, r) {
            return Err(Error::Domain(format!("{m} is not in M0; the orbit system is only set up there")));
        }
        let len = norm(dir);
        if !(len > 0.0) || !len.is_finite() {
            return Err(Error::Invalid("direction must be a nonzero finite vector".into()));
        }
        let xh: Vec<f64> = dir.iter().map(|v| v / len).collect();
        let rh = rho(rs, &m);
        let group = rs.weyl_group();
        let mut couplings = Vec::with_capacity(group.len());
        let mut diag = Vec::with_capacity(group.len());
        for w in group {
            let wx = w.act(&xh);
            let mut cs = Vec::new();
            for a in rs.positive_roots() {
                let ma = m.of(a.class);
                if ma == 0.0 {
                    continue;
                }
                let target = rs.weyl_position(&a.reflection().compose(w)).expect("group is closed");
                cs.push(Coupling { target, mult: ma, a: a.eval(&wx) });
            }
            couplings.push(cs);
            let d: Complex64 = lambda.iter().zip(&rh).zip(&wx).map(|((l, p), x)| (l + p) * x).sum();
            diag.push(d);
        }
        let lam_norm = lambda.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let t0 = 0.1 / (1.0 + lam_norm + norm(&rh) + rs.long_norm());
        let m0_norm = couplings.iter().map(|cs| cs.iter().map(|c| c.mult.abs()).sum::<f64>()).fold(0.0, f64::max);
        Ok(OrbitSystem { couplings, diag, t0, m0_norm })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    fn rhs(&self, t: f64, y: &[Complex64], dy: &mut [Complex64]) {
        for (w, cs) in self.couplings.iter().enumerate() {
            let yw = y[w];
            let mut acc = self.diag[w] * yw;
            for c in cs {
                acc += (y[c.target] - yw) * (c.mult * kernel(c.a, t));
            }
            dy[w] = acc;
        }
    }

    // (M_n g)_w = Σ_α m_α c_n(a) (g_{r_α w} − g_w) (+ diag for n = 1)
    fn apply_m(&self, n: usize, coef: &[f64], g: &[Complex64], out: &mut [Complex64]) {
        for (w, cs) in self.couplings.iter().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for c in cs {
                acc += (g[c.target] - g[w]) * (c.mult * coef[n] * c.a.powi(n as i32));
            }
            if n == 1 {
                acc += self.diag[w] * g[w];
            }
            out[w] = acc;
        }
    }

    /// Frobenius coefficients `g_k`, `k ≤ order`, of the solution with `g(0) = 𝟙`.
    pub fn frobenius(&self, order: usize) -> Result<Vec<Vec<Complex64>>> {
        let n = self.dim();
        let b = bernoulli_plus(order);
        // c_n(a) = B_n 2^{n−1} aⁿ / n!, without the aⁿ
        let mut coef = vec![0.0; order + 1];
        let mut fact = 1.0;
        for k in 0..=order {
            if k > 0 {
                fact *= k as f64;
            }
            coef[k] = b[k] * 2f64.powi(k as i32 - 1) / fact;
        }
        let mut gs = vec![vec![Complex64::new(1.0, 0.0); n]];
        let mut tmp = vec![Complex64::new(0.0, 0.0); n];
        for k in 1..=order {
            let mut rhs = vec![Complex64::new(0.0, 0.0); n];
            for j in 1..=k {
                self.apply_m(j, &coef, &gs[k - j], &mut tmp);
                rhs.iter_mut().zip(&tmp).for_each(|(r, t)| *r += t);
            }
            gs.push(self.solve_shifted(k as f64, &coef, &rhs).ok_or(Error::ResonanceAtZero(k))?);
        }
        Ok(gs)
    }

    // (kI − M_0) g = b by conjugate gradients; kI − M_0 is Hermitian with spectrum ≥ k on M0
    fn solve_shifted(&self, k: f64, coef: &[f64], b: &[Complex64]) -> Option<Vec<Complex64>> {
        let n = b.len();
        let apply = |x: &[Complex64], out: &mut [Complex64]| {
            self.apply_m(0, coef, x, out);
            for (o, xi) in out.iter_mut().zip(x) {
                *o = *xi * k - *o;
            }
        };
        let bn: f64 = b.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let mut x = vec![Complex64::new(0.0, 0.0); n];
        if bn == 0.0 {
            return Some(x);
        }
        let mut r = b.to_vec();
        let mut p = r.clone();
        let mut ap = vec![Complex64::new(0.0, 0.0); n];
        let mut rr: f64 = bn * bn;
        let max_iter = 10 * n + 100;
        for _ in 0..max_iter {
            apply(&p, &mut ap);
            let pap: Complex64 = p.iter().zip(&ap).map(|(a, b)| a.conj() * b).sum();
            if !(pap.re > 0.0) {
                return None;
            }
            let alpha = rr / pap.re;
            for i in 0..n {
                x[i] += p[i] * alpha;
                r[i] -= ap[i] * alpha;
            }
            let rr_new: f64 = r.iter().map(|z| z.norm_sqr()).sum();
            if rr_new.sqrt() <= 1e-16 * bn {
                return Some(x);
            }
            let beta = rr_new / rr;
            for i in 0..n {
                p[i] = r[i] + p[i] * beta;
            }
            rr = rr_new;
        }
        let resid = rr.sqrt() / bn;
        (resid < 1e-12).then_some(x)
    }

    /// Orbit vectors `g(t)` at each of `ts` (nondecreasing, `≥ 0`), with a relative error estimate.
    pub fn solve(&self, ts: &[f64], rtol: f64) -> Result<(Vec<Vec<Complex64>>, f64)> {
        let n = self.dim();
        if ts.windows(2).any(|w| w[1] < w[0]) || ts.iter().any(|&t| !(t >= 0.0)) {
            return Err(Error::Invalid("output times must be nonnegative and sorted".into()));
        }
        let gs = self.frobenius(FROBENIUS_ORDER)?;
        let series_at = |t: f64| -> Vec<Complex64> {
            let mut out = vec![Complex64::new(0.0, 0.0); n];
            let mut tk = 1.0;
            for g in &gs {
                out.iter_mut().zip(g).for_each(|(o, gi)| *o += gi * tk);
                tk *= t;
            }
            out
        };
        let gmax = |v: &[Complex64]| v.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let t0 = self.t0;
        let last = gs.last().expect("order ≥ 1");
        let series_err = gmax(last) * t0.powi(FROBENIUS_ORDER as i32) / gmax(&series_at(t0)).max(f64::MIN_POSITIVE);
        let split = ts.partition_point(|&t| t <= t0);
        let mut out: Vec<Vec<Complex64>> = ts[..split].iter().map(|&t| series_at(t)).collect();
        if split == ts.len() {
            return Ok((out, series_err));
        }
        let y0 = series_at(t0);
        let opts = Dp5Options { rtol, h_init: t0 / (4.0 + self.m0_norm), ..Default::default() };
        let (ys, stats): (Vec<Vec<Complex64>>, Dp5Stats) = integrate(|t, y, dy| self.rhs(t, y, dy), t0, &y0, &ts[split..], &opts)?;
        out.extend(ys);
        Ok((out, series_err + stats.local_error))
    }
}

fn check_dims(rs: &RootSystem, lambda: &[Complex64], x: &[f64]) -> Result<()> {
    let r = rs.rank();
    if lambda.len() != r || x.len() != r {
        return Err(Error::Invalid(format!("rank {r} needs lambda and x of length {r}")));
    }
    if x.iter().any(|v| !v.is_finite()) || lambda.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Invalid("non-finite input".into()));
    }
    Ok(())
}

/// The whole orbit `G_λ(w x)`, `w ∈ W`, indexed like [`RootSystem::weyl_group`].
pub fn g_orbit(rs: &RootSystem, m: &Multiplicity, lambda: &[Complex64], x: &[f64], tol: f64) -> Result<(Vec<Complex64>, f64)> {
    check_dims(rs, lambda, x)?;
    let len = norm(x);
    if len == 0.0 {
        if !in_m0(&m.for_rank(rs.rank()), rs.rank()) {
            return Err(Error::Domain(format!("{m} is not in M0")));
        }
        return Ok((vec![Complex64::new(1.0, 0.0); rs.weyl_order()], 0.0));
    }
    let sys = OrbitSystem::new(rs, m, lambda, x)?;
    let (mut vals, err) = sys.solve(&[len], tol)?;
    let g = vals.pop().expect("one output");
    let scale = g.iter().map(|z| z.norm()).fold(0.0, f64::max);
    Ok((g, err * scale))
}

/// `G_λ(m; x)` from the orbit ODE.
pub fn g_ode(rs: &RootSystem, m: &Multiplicity, lambda: &[Complex64], x: &[f64], tol: f64) -> Result<EvalResult> {
    if norm(x) == 0.0 {
        check_dims(rs, lambda, x)?;
        return Ok(EvalResult::exact(1.0));
    }
    let (g, err) = g_orbit(rs, m, lambda, x, tol)?;
    Ok(EvalResult { value: g[0], method: Method::Ode, err_est: err, perturbation: 0.0 })
}

/// `F_λ(m; x)` as the orbit average of the ODE solution.
pub fn f_ode(rs: &RootSystem, m: &Multiplicity, lambda: &[Complex64], x: &[f64], tol: f64) -> Result<EvalResult> {
    if norm(x) == 0.0 {
        check_dims(rs, lambda, x)?;
        return Ok(EvalResult::exact(1.0));
    }
    let (g, err) = g_orbit(rs, m, lambda, x, tol)?;
    let value = g.iter().sum::<Complex64>() / g.len() as f64;
    Ok(EvalResult { value, method: Method::Ode, err_est: err, perturbation: 0.0 })
}

/// `F_λ(m; t·x̂)` for every `t` in `ts` from a single integration along the ray.
pub fn f_ray(rs: &RootSystem, m: &Multiplicity, lambda: &[Complex64], dir: &[f64], ts: &[f64], tol: f64) -> Result<Vec<Complex64>> {
    check_dims(rs, lambda, dir)?;
    let sys = OrbitSystem::new(rs, m, lambda, dir)?;
    let (vals, _) = sys.solve(ts, tol)?;
    Ok(vals.into_iter().map(|g| g.iter().sum::<Complex64>() / g.len() as f64).collect())
}

/// Whether auto dispatch tries the series first.
fn series_preferred(rs: &RootSystem, lambda: &[Complex64], x: &[f64]) -> bool {
    let (xd, _) = rs.dominant_representative(x);
    rs.rank() <= 2 && height_cap(rs.rank()) >= 40 && rs.wall_margin(&xd) >= 0.3 && is_regular_spectral(rs, lambda)
}

fn f_by_series(rs: &RootSystem, m: &Multiplicity, lambda: &[Complex64], x: &[f64], opts: &EvalOptions) -> Result<EvalResult> {
    let so = SeriesOptions { height: opts.height, tol: (opts.tol * 1e-2).max(1e-15), ..Default::default() };
    let s = f_series(rs, m, lambda, x, &so)?;
    Ok(EvalResult { value: s.value, method: Method::Series, err_est: s.tail, perturbation: 0.0 })
}

/// `F_λ(m; x)`: the Harish-Chandra series when it applies, otherwise the orbit ODE.
pub fn f_eval(rs: &RootSystem, m: &Multiplicity, lambda: &[Complex64], x: &[f64], opts: &EvalOptions) -> Result<EvalResult> {
    check_dims(rs, lambda, x)?;
    let m = m.for_rank(rs.rank());
    if !in_m0(&m, rs.rank()) {
        return Err(Error::Domain(format!("{m} is not in M0")));
    }
    if x.iter().all(|&v| v == 0.0) {
        return Ok(EvalResult::exact(1.0));
    }
    let ode_tol = (opts.tol * 1e-2).max(1e-13);
    match opts.method {
        Method::Series => f_by_series(rs, &m, lambda, x, opts),
        Method::Ode => f_ode(rs, &m, lambda, x, ode_tol),
        _ => {
            if series_preferred(rs, lambda, x) {
                if let Ok(r) = f_by_series(rs, &m, lambda, x, opts) {
                    if r.err_est <= opts.tol * r.value.norm() {
                        return Ok(r);
                    }
                }
            }
            f_ode(rs, &m, lambda, x, ode_tol)
        }
    }
}

/// `G_λ(m; x)`; only the ODE engine computes `G`.
pub fn g_eval(rs: &RootSystem, m: &Multiplicity, lambda: &[Complex64], x: &[f64], opts: &EvalOptions) -> Result<EvalResult> {
    check_dims(rs, lambda, x)?;
    if opts.method == Method::Series {
        return Err(Error::Unsupported("G is only available from the ODE engine".into()));
    }
    g_ode(rs, m, lambda, x, (opts.tol * 1e-2).max(1e-13))
}

fn deformed_factor(rs: &RootSystem, d: Deformation, x: &[f64]) -> f64 {
    let mut e = 0.0;
    if d.ell != 0.0 {
        e -= d.ell * log_u(rs, x);
    }
    if d.ell_tilde != 0.0 {
        e -= d.ell_tilde * log_v(rs, x);
    }
    e.exp()
}

fn deformed_mult(rs: &RootSystem, m: &Multiplicity, d: Deformation) -> Result<Multiplicity> {
    let md = deform(&m.for_rank(rs.rank()), d).for_rank(rs.rank());
    if !in_m0(&md, rs.rank()) {
        return Err(Error::Domain(format!("deformed multiplicity {md} is not in M0")));
    }
    Ok(md)
}

/// `F_{ℓ,ℓ̃,λ}(m) = u^{−ℓ} v^{−ℓ̃} F_λ(m(ℓ,ℓ̃))`.
pub fn f_deformed(
    rs: &RootSystem,
    m: &Multiplicity,
    d: Deformation,
    lambda: &[Complex64],
    x: &[f64],
    opts: &EvalOptions,
) -> Result<DeformedEval> {
    let md = deformed_mult(rs, m, d)?;
    let r = f_eval(rs, &md, lambda, x, opts)?;
    let k = deformed_factor(rs, d, x);
    Ok(DeformedEval {
        base: *m,
        deformation: d,
        lambda: lambda.to_vec(),
        x: x.to_vec(),
        value: r.value * k,
        method: r.method,
        err_est: r.err_est * k,
    })
}

/// `G_{ℓ,ℓ̃,λ}(m) = u^{−ℓ} v^{−ℓ̃} G_λ(m(ℓ,ℓ̃))`.
pub fn g_deformed(
    rs: &RootSystem,
    m: &Multiplicity,
    d: Deformation,
    lambda: &[Complex64],
    x: &[f64],
    opts: &EvalOptions,
) -> Result<DeformedEval> {
    let md = deformed_mult(rs, m, d)?;
    let r = g_eval(rs, &md, lambda, x, opts)?;
    let k = deformed_factor(rs, d, x);
    Ok(DeformedEval {
        base: *m,
        deformation: d,
        lambda: lambda.to_vec(),
        x: x.to_vec(),
        value: r.value * k,
        method: r.method,
        err_est: r.err_est * k,
    })
}

/// `f_Σ(m; x) = Σ_α m_α (2 − m_α − 2m_{2α}) ⟨α,α⟩ / (e^α − e^{−α})²`.
pub fn f_sigma(rs: &RootSystem, m: &Multiplicity, x: &[f64]) -> Result<f64> {
    let m = m.for_rank(rs.rank());
    let mut out = 0.0;
    for a in rs.positive_roots() {
        let ma = m.of(a.class);
        if ma == 0.0 {
            continue;
        }
        let ax = a.eval(x);
        if ax.abs() < 1e-8 {
            return Err(Error::SingularPoint);
        }
        let s = 2.0 * ax.sinh();
        out += ma * (2.0 - ma - 2.0 * m.doubled(a.class)) * a.norm2 / (s * s);
    }
    Ok(out)
}

const D1: [f64; 4] = [4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0];
const D2: [f64; 4] = [8.0 / 5.0, -1.0 / 5.0, 8.0 / 315.0, -1.0 / 560.0];
const D2_CENTER: f64 = -205.0 / 72.0;

fn shifted(x: &[f64], dir: &[f64], s: f64) -> Vec<f64> {
    x.iter().zip(dir).map(|(a, b)| a + s * b).collect()
}

/// `∂_ξ f(x)` by an eighth-order central difference.
pub fn directional_derivative<F>(f: &F, x: &[f64], xi: &[f64], h: f64) -> Result<Complex64>
where
    F: Fn(&[f64]) -> Result<Complex64>,
{
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, c) in D1.iter().enumerate() {
        let s = (k + 1) as f64 * h;
        acc += (f(&shifted(x, xi, s))? - f(&shifted(x, xi, -s))?) * *c;
    }
    Ok(acc / h)
}

/// `Σ_j ∂_j² f(x)` by eighth-order central differences.
pub fn laplacian_fd<F>(f: &F, x: &[f64], h: f64) -> Result<Complex64>
where
    F: Fn(&[f64]) -> Result<Complex64>,
{
    let r = x.len();
    let f0 = f(x)?;
    let mut acc = f0 * (D2_CENTER * r as f64);
    for j in 0..r {
        let mut e = vec![0.0; r];
        e[j] = 1.0;
        for (k, c) in D2.iter().enumerate() {
            let s = (k + 1) as f64 * h;
            acc += (f(&shifted(x, &e, s))? + f(&shifted(x, &e, -s))?) * *c;
        }
    }
    Ok(acc / (h * h))
}

/// A finite-difference step suited to functions growing like `e^{(|λ| + |ρ|)|x|}`.
pub fn default_fd_step(rs: &RootSystem, m: &Multiplicity, lambda: &[Complex64]) -> f64 {
    let rh = norm(&rho(rs, &m.for_rank(rs.rank())));
    let ln = lambda.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    (0.25 / (1.0 + ln + rh)).min(0.05)
}

/// `T_ξ(m) f (x)`: the derivative by central differences, the reflection terms exactly.
pub fn cherednik_apply<F>(rs: &RootSystem, m: &Multiplicity, xi: &[f64], f: &F, x: &[f64], h: f64) -> Result<Complex64>
where
    F: Fn(&[f64]) -> Result<Complex64>,
{
    let m = m.for_rank(rs.rank());
    if rs.positive_roots().iter().any(|a| a.eval(x).abs() < 1e-6) {
        return Err(Error::SingularPoint);
    }
    let fx = f(x)?;
    let mut out = directional_derivative(f, x, xi, h)? - fx * dot(&rho(rs, &m), xi);
    for a in rs.positive_roots() {
        let ma = m.of(a.class);
        if ma == 0.0 {
            continue;
        }
        let ax = a.eval(x);
        let coef = ma * a.eval(xi) / -(-2.0 * ax).exp_m1();
        out += (fx - f(&a.reflection().act(x))?) * coef;
    }
    Ok(out)
}

/// `L(m) f = Σ ∂_j² f + Σ_α m_α coth α(x) ⟨∇f, α⟩`, by finite differences.
pub fn l_operator<F>(rs: &RootSystem, m: &Multiplicity, f: &F, x: &[f64], h: f64) -> Result<Complex64>
where
    F: Fn(&[f64]) -> Result<Complex64>,
{
    let m = m.for_rank(rs.rank());
    let mut out = laplacian_fd(f, x, h)?;
    for a in rs.positive_roots() {
        let ma = m.of(a.class);
        if ma == 0.0 {
            continue;
        }
        let ax = a.eval(x);
        if ax.abs() < 1e-6 {
            return Err(Error::SingularPoint);
        }
        out += directional_derivative(f, x, &a.coords, h)? * (ma / ax.tanh());
    }
    Ok(out)
}

/// `|L(m)F + ⟨ρ,ρ⟩F − ⟨λ,λ⟩F| / |F|` at `x`, with `F` from the ODE engine at tolerance `tol`.
pub fn laplacian_residual(rs: &RootSystem, m: &Multiplicity, lambda: &[Complex64], x: &[f64], h: f64, tol: f64) -> Result<f64> {
    check_dims(rs, lambda, x)?;
    let m = m.for_rank(rs.rank());
    let f = |y: &[f64]| f_ode(rs, &m, lambda, y, tol).map(|r| r.value);
    let fx = f(x)?;
    let rh = rho(rs, &m);
    let ll: Complex64 = lambda.iter().map(|z| z * z).sum();
    let lf = l_operator(rs, &m, &f, x, h)?;
    Ok((lf + fx * dot(&rh, &rh) - fx * ll).norm() / fx.norm())
}

/// `max_ξ |T_ξ G_λ − λ(ξ) G_λ| / |G_λ(x)|` over the coordinate directions.
pub fn cherednik_residual(rs: &RootSystem, m: &Multiplicity, lambda: &[Complex64], x: &[f64], h: f64, tol: f64) -> Result<f64> {
    check_dims(rs, lambda, x)?;
    let g = |y: &[f64]| g_ode(rs, m, lambda, y, tol).map(|r| r.value);
    let gx = g(x)?;
    let mut worst: f64 = 0.0;
    for j in 0..rs.rank() {
        let mut xi = vec![0.0; rs.rank()];
        xi[j] = 1.0;
        let t = cherednik_apply(rs, m, &xi, &g, x, h)?;
        worst = worst.max((t - gx * lambda[j]).norm() / gx.norm());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::to_complex;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn u_and_v_basics() {
        let rs1 = RootSystem::new(1, 2.0).unwrap();
        assert_eq!(u(&rs1, &[0.0]), 1.0);
        assert!((u(&rs1, &[0.7]) - 0.7f64.cosh()).abs() < 1e-15);
        assert_eq!(v(&rs1, &[0.7]), 1.0);
        let rs = RootSystem::new(3, 2.0).unwrap();
        let x = [0.3, -1.1, 0.8];
        assert!((log_u(&rs, &x) - u(&rs, &x).ln()).abs() < 1e-13);
        assert!((log_v(&rs, &x) - v(&rs, &x).ln()).abs() < 1e-13);
        for w in rs.weyl_group() {
            assert!((u(&rs, &w.act(&x)) - u(&rs, &x)).abs() < 1e-12);
            assert!((v(&rs, &w.act(&x)) - v(&rs, &x)).abs() < 1e-10);
        }
        // log u − ½Σβ_j(x) → −r log 2
        let far = [30.0, 40.0, 55.0];
        let half: f64 = far.iter().map(|t| t * 2.0 / 2.0).sum();
        assert!((log_u(&rs, &far) - half + 3.0 * 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn log_derivatives_match_differences() {
        let rs = RootSystem::new(3, 1.5).unwrap();
        let x = [0.4, 0.9, -0.3];
        let xi = [0.2, -0.5, 1.0];
        let h = 1e-5;
        let fd = |f: &dyn Fn(&[f64]) -> f64| (f(&shifted(&x, &xi, h)) - f(&shifted(&x, &xi, -h))) / (2.0 * h);
        assert!((dlog_u(&rs, &x, &xi) - fd(&|y| log_u(&rs, y))).abs() < 1e-8);
        assert!((dlog_v(&rs, &x, &xi) - fd(&|y| log_v(&rs, y))).abs() < 1e-8);
    }

    #[test]
    fn kernel_is_smooth_through_zero() {
        let t = 0.7;
        for a in [-1e-7_f64, 0.0, 1e-7, 3e-6, 1e-4] {
            let exact = if a == 0.0 { 1.0 / (2.0 * t) } else { a / (1.0 - (-2.0 * t * a).exp()) };
            assert!((kernel(a, t) - exact).abs() < 1e-9, "{a}");
        }
        assert!(kernel(-50.0, 30.0).abs() < 1e-300);
    }

    #[test]
    fn bernoulli_values() {
        let b = bernoulli_plus(8);
        let expect = [1.0, 0.5, 1.0 / 6.0, 0.0, -1.0 / 30.0, 0.0, 1.0 / 42.0, 0.0, -1.0 / 30.0];
        for (x, y) in b.iter().zip(expect) {
            assert!((x - y).abs() < 1e-14);
        }
    }

    #[test]
    fn free_case_is_an_exponential() {
        let rs = RootSystem::new(2, 2.0).unwrap();
        let lam = [c(0.6, 0.4), c(-1.3, 0.2)];
        let x = [0.7, -1.2];
        let g = g_ode(&rs, &Multiplicity::ZERO, &lam, &x, 1e-12).unwrap();
        let e = (lam[0] * x[0] + lam[1] * x[1]).exp();
        assert!((g.value - e).norm() < 1e-10 * e.norm());
        let f = f_eval(&rs, &Multiplicity::ZERO, &lam, &x, &EvalOptions::default()).unwrap();
        let avg: Complex64 = rs.weyl_group().iter().map(|w| (lam[0] * w.act(&x)[0] + lam[1] * w.act(&x)[1]).exp()).sum::<Complex64>() / 8.0;
        assert!((f.value - avg).norm() < 1e-9 * avg.norm());
    }

    #[test]
    fn minus_rho_gives_the_constant() {
        let rs = RootSystem::new(2, 2.0).unwrap();
        let m = Multiplicity::new(1.5, 2.0, -0.5);
        let lam: Vec<Complex64> = rho(&rs, &m).iter().map(|v| c(-v, 0.0)).collect();
        let (g, _) = g_orbit(&rs, &m, &lam, &[0.9, 2.3], 1e-11).unwrap();
        assert!(g.iter().all(|z| (z - 1.0).norm() < 1e-9));
    }

    #[test]
    fn rho_point_and_origin() {
        let rs = RootSystem::new(2, 2.0).unwrap();
        let m = Multiplicity::new(2.0, 2.0, 1.0);
        let lam = to_complex(&rho(&rs, &m));
        let r = f_eval(&rs, &m, &lam, &[0.8, 1.7], &EvalOptions::default()).unwrap();
        assert!((r.value - 1.0).norm() < 1e-8, "{r:?}");
        let z = f_eval(&rs, &m, &lam, &[0.0, 0.0], &EvalOptions::default()).unwrap();
        assert_eq!(z.value, c(1.0, 0.0));
        assert_eq!(z.method, Method::Exact);
    }

    #[test]
    fn frobenius_start_matches_integration() {
        let rs = RootSystem::new(2, 2.0).unwrap();
        let m = Multiplicity::new(3.0, 1.0, -1.0);
        let sys = OrbitSystem::new(&rs, &m, &[c(0.4, 0.3), c(1.1, 0.0)], &[0.3, 1.0]).unwrap();
        let (a, _) = sys.solve(&[0.5 * sys.t0], 1e-12).unwrap();
        let (b, _) = sys.solve(&[0.25 * sys.t0, 0.5 * sys.t0], 1e-12).unwrap();
        for (x, y) in a[0].iter().zip(&b[1]) {
            assert!((x - y).norm() < 1e-14);
        }
        // continuing the ODE from the series start reproduces a longer series evaluation
        let (ray, _) = sys.solve(&[sys.t0 * 0.9, 3.0 * sys.t0], 1e-12).unwrap();
        let gs = sys.frobenius(16).unwrap();
        let t = 3.0 * sys.t0;
        for w in 0..sys.dim() {
            let s: Complex64 = gs.iter().enumerate().map(|(k, g)| g[w] * t.powi(k as i32)).sum();
            assert!((ray[1][w] - s).norm() < 1e-11);
        }
    }

    #[test]
    fn series_and_ode_agree() {
        let rs = RootSystem::new(2, 2.0).unwrap();
        let m = Multiplicity::new(2.0, 2.0, 1.0);
        let lam = [c(1.31, 0.1), c(2.73, -0.2)];
        let x = [0.8, 1.7];
        let s = f_eval(&rs, &m, &lam, &x, &EvalOptions { method: Method::Series, ..Default::default() }).unwrap();
        let o = f_eval(&rs, &m, &lam, &x, &EvalOptions { method: Method::Ode, tol: 1e-10, ..Default::default() }).unwrap();
        assert!((s.value - o.value).norm() < 1e-8 * s.value.norm(), "{s:?} {o:?}");
    }

    #[test]
    fn non_generic_sample_point_falls_back_to_ode() {
        let rs = RootSystem::new(2, 2.0).unwrap();
        let m = Multiplicity::new(2.0, 2.0, 1.0);
        let lam = [c(1.3, 0.0), c(2.7, 0.0)];
        let r = f_eval(&rs, &m, &lam, &[0.8, 1.7], &EvalOptions::default()).unwrap();
        assert_eq!(r.method, Method::Ode);
        let near = f_eval(&rs, &m, &[c(1.3 + 1e-6, 0.0), c(2.7, 0.0)], &[0.8, 1.7], &EvalOptions { method: Method::Series, ..Default::default() }).unwrap();
        assert!((r.value - near.value).norm() < 1e-4 * r.value.norm());
    }

    #[test]
    fn outside_m0_is_a_domain_error() {
        let rs = RootSystem::new(1, 2.0).unwrap();
        let r = f_eval(&rs, &Multiplicity::new(-3.0, 0.0, 1.0), &[c(1.0, 0.0)], &[1.0], &EvalOptions::default());
        assert!(matches!(r, Err(Error::Domain(_))));
    }

    #[test]
    fn residuals_are_small() {
        let rs = RootSystem::new(2, 2.0).unwrap();
        let m = Multiplicity::new(2.0, 2.0, 1.0);
        let lam = [c(1.3, 0.0), c(2.7, 0.0)];
        let x = [0.8, 1.7];
        let h = default_fd_step(&rs, &m, &lam);
        let lr = laplacian_residual(&rs, &m, &lam, &x, h, 1e-12).unwrap();
        assert!(lr < 1e-5, "{lr}");
        let cr = cherednik_residual(&rs, &m, &lam, &x, h, 1e-12).unwrap();
        assert!(cr < 1e-5 * (1.0 + 3.0), "{cr}");
    }

    #[test]
    fn f_sigma_symmetry_identity() {
        let rs = RootSystem::new(3, 2.0).unwrap();
        let m = Multiplicity::new(2.0, 1.0, 3.0);
        let x = [0.3, 0.8, 1.5];
        for (ell, lt) in [(0.7, 0.0), (-1.3, 0.5), (2.2, -0.25)] {
            let lhs = f_sigma(&rs, &deform(&m, Deformation::new(ell, lt)), &x).unwrap()
                - f_sigma(&rs, &deform(&m, Deformation::new(0.0, lt)), &x).unwrap();
            let s: f64 = x.iter().map(|t| 1.0 / t.cosh().powi(2)).sum();
            let rhs = ell * (ell + 1.0 - m.long) * s;
            assert!((lhs - rhs).abs() < 1e-10 * (1.0 + rhs.abs()), "{ell}: {lhs} vs {rhs}");
        }
        assert_eq!(f_sigma(&rs, &Multiplicity::ZERO, &x).unwrap(), 0.0);
    }

    #[test]
    fn deformed_matches_definition() {
        let rs = RootSystem::new(2, 2.0).unwrap();
        let m = Multiplicity::new(2.0, 1.0, 1.0);
        let d = Deformation::new(0.5, 0.25);
        let lam = [c(0.7, 0.0), c(1.9, 0.0)];
        let x = [0.4, 1.1];
        let o = EvalOptions::ode(1e-10);
        let fd = f_deformed(&rs, &m, d, &lam, &x, &o).unwrap();
        let plain = f_eval(&rs, &deform(&m, d), &lam, &x, &o).unwrap();
        let k = u(&rs, &x).powf(-0.5) * v(&rs, &x).powf(-0.25);
        assert!((fd.value - plain.value * k).norm() < 1e-12 * fd.value.norm());
        let triv = f_deformed(&rs, &m, Deformation::NONE, &lam, &x, &o).unwrap();
        assert_eq!(triv.value, f_eval(&rs, &m, &lam, &x, &o).unwrap().value);
        // symmetrisation of G
        let mut avg = Complex64::new(0.0, 0.0);
        for w in rs.weyl_group() {
            avg += g_deformed(&rs, &m, d, &lam, &w.inverse().act(&x), &o).unwrap().value;
        }
        avg /= rs.weyl_order() as f64;
        assert!((avg - fd.value).norm() < 1e-8 * fd.value.norm());
    }
}

//! Cross-engine consistency: normalization, series against ODE, rank one against the reference
//! ODE, eigen-equation residuals, and the `ℓ ↦ m_l − 1 − ℓ` symmetry.

use num_complex::Complex64;

use super::estimates::{draw_mult, fmt_cvec, fmt_m, fmt_vec, run_check, Claim, SuiteConfig};
use super::rank1::rank1_oracle;
use super::report::CheckReport;
use super::sampling::Draw;
use crate::error::Result;
use crate::evaluator::{
    cherednik_residual, default_fd_step, f_deformed, f_eval, f_sigma, g_orbit, laplacian_residual, EvalOptions, Method,
};
use crate::multiplicity::{deform, ell_range, rho, Deformation, MSet, Multiplicity};
use crate::rootsys::{to_complex, RootSystem};

pub const NORMALIZATION_TOL: f64 = 1e-8;
pub const CROSS_ENGINE_TOL: f64 = 1e-6;
pub const RANK1_TOL: f64 = 1e-7;
pub const RESIDUAL_TOL: f64 = 1e-5;
pub const SYMMETRY_TOL: f64 = 1e-8;
pub const F_SIGMA_TOL: f64 = 1e-10;

fn systems(cfg: &SuiteConfig, ranks: &[usize]) -> Result<Vec<RootSystem>> {
    ranks.iter().map(|&r| RootSystem::new(r, cfg.long_norm)).collect()
}

/// A regular point of the open chamber with consecutive gaps in `[lo, hi]`.
fn draw_interior(d: &mut Draw, r: usize, lo: f64, hi: f64) -> Vec<f64> {
    let mut acc = 0.0;
    (0..r)
        .map(|_| {
            acc += d.range(lo, hi);
            acc
        })
        .collect()
}

fn draw_lambda(d: &mut Draw, r: usize) -> Vec<Complex64> {
    (0..r).map(|_| Complex64::new(d.range(-2.5, 2.5), d.range(-1.5, 1.5))).collect()
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

pub fn normalization(cfg: &SuiteConfig) -> Result<CheckReport> {
    let sys = systems(cfg, &[1, 2, 3])?;
    Ok(run_check(
        "normalization F(0) = 1, F_rho = 1",
        "M1",
        "F_lambda(0) must equal 1 exactly; |F_rho(m)(x) - 1| on a 5x5 grid",
        30,
        30,
        cfg.seed,
        NORMALIZATION_TOL,
        |i, d| {
            let rs = &sys[i % sys.len()];
            let r = rs.rank();
            let m = draw_mult(d, MSet::M1, r);
            let lambda = draw_lambda(d, r);
            let params = format!("r={r} m={} lambda={}", fmt_m(&m), fmt_cvec(&lambda));
            let run = || {
                let opts = EvalOptions { tol: 1e-10, ..Default::default() };
                let at0 = f_eval(rs, &m, &lambda, &vec![0.0; r], &opts)?.value;
                let exact = if at0 == Complex64::new(1.0, 0.0) { 0.0 } else { 1.0 };
                let mut out = vec![Claim::le_scaled("F(0) == 1", exact, 0.0, 1.0)];
                let rh = to_complex(&rho(rs, &m));
                let mut worst: f64 = 0.0;
                for a in 0..5 {
                    for b in 0..5 {
                        let x: Vec<f64> = [0.4 * a as f64, 0.4 * b as f64, 0.7][..r].to_vec();
                        let f = f_eval(rs, &m, &rh, &x, &opts)?.value;
                        worst = worst.max((f - 1.0).norm());
                    }
                }
                out.push(Claim::le_scaled("max |F_rho(x) - 1|", worst, 0.0, 1.0));
                Ok(out)
            };
            (params, run())
        },
    ))
}

pub fn series_vs_ode(cfg: &SuiteConfig) -> Result<CheckReport> {
    let sys = systems(cfg, &[1, 2])?;
    Ok(run_check(
        "series vs ODE",
        "M1",
        "|F_series - mean_w G_ode(wx)| / |F| at generic lambda and interior x",
        31,
        40,
        cfg.seed,
        CROSS_ENGINE_TOL,
        |i, d| {
            let rs = &sys[i % sys.len()];
            let r = rs.rank();
            let m = draw_mult(d, MSet::M1, r);
            let lambda = draw_lambda(d, r);
            let x = draw_interior(d, r, 0.4, 1.5);
            let params = format!("r={r} m={} lambda={} x={}", fmt_m(&m), fmt_cvec(&lambda), fmt_vec(&x));
            let run = || {
                let s = f_eval(rs, &m, &lambda, &x, &EvalOptions { method: Method::Series, tol: 1e-11, ..Default::default() })?;
                let (g, _) = g_orbit(rs, &m, &lambda, &x, cfg.ode_tol)?;
                let avg = g.iter().sum::<Complex64>() / g.len() as f64;
                Ok(vec![Claim::le_scaled("relative difference", rel(s.value, avg), 0.0, 1.0)])
            };
            (params, run())
        },
    ))
}

pub fn rank1_vs_series(cfg: &SuiteConfig) -> Result<CheckReport> {
    let rs = RootSystem::new(1, cfg.long_norm)?;
    let p = cfg.long_norm;
    Ok(run_check(
        "rank one oracle vs series",
        "M1",
        "reference ODE against the series on 20 points of [0.2, 3]; sample 0 has m = (4, -1)",
        32,
        10,
        cfg.seed,
        RANK1_TOL,
        |i, d| {
            let m = if i == 0 { Multiplicity::new(4.0, 0.0, -1.0) } else { draw_mult(d, MSet::M1, 1) };
            let lambda = Complex64::new(d.range(0.1, 3.0), d.range(-1.5, 1.5));
            let params = format!("m={} lambda={lambda}", fmt_m(&m));
            let run = || {
                let mut worst: f64 = 0.0;
                for k in 0..20 {
                    let x = 0.2 + 2.8 * k as f64 / 19.0;
                    let o = rank1_oracle(m.short, m.long, lambda, x, p)?;
                    let s = f_eval(&rs, &m, &[lambda], &[x], &EvalOptions { method: Method::Series, tol: 1e-11, ..Default::default() })?;
                    worst = worst.max(rel(s.value, o.value));
                }
                Ok(vec![Claim::le_scaled("max relative difference", worst, 0.0, 1.0)])
            };
            (params, run())
        },
    ))
}

pub fn residuals(cfg: &SuiteConfig) -> Result<CheckReport> {
    let sys = systems(cfg, &cfg.ranks)?;
    Ok(run_check(
        "eigen-equation residuals",
        "M1",
        "Cherednik residual <= 1e-5 (1 + |lambda|), Laplacian residual <= 1e-5, eighth-order differences",
        33,
        12,
        cfg.seed,
        RESIDUAL_TOL,
        |i, d| {
            let rs = &sys[i % sys.len()];
            let r = rs.rank();
            let m = draw_mult(d, MSet::M1, r);
            let lambda = draw_lambda(d, r);
            let x = draw_interior(d, r, 0.3, 1.0);
            let params = format!("r={r} m={} lambda={} x={}", fmt_m(&m), fmt_cvec(&lambda), fmt_vec(&x));
            let run = || {
                let h = default_fd_step(rs, &m, &lambda);
                let nl = lambda.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                let c = cherednik_residual(rs, &m, &lambda, &x, h, cfg.ode_tol)?;
                let l = laplacian_residual(rs, &m, &lambda, &x, h, cfg.ode_tol)?;
                Ok(vec![
                    Claim::le_scaled("Cherednik residual / (1 + |lambda|)", c / (1.0 + nl), 0.0, 1.0),
                    Claim::le_scaled("Laplacian residual", l, 0.0, 1.0),
                ])
            };
            (params, run())
        },
    ))
}

pub fn ell_symmetry(cfg: &SuiteConfig) -> Result<CheckReport> {
    let sys = systems(cfg, &cfg.ranks)?;
    Ok(run_check(
        "F_{ell} = F_{m_l - 1 - ell}",
        "m in M+, ell in [ell_min - 1, ell_max], ellTilde in [0, 1]",
        "relative difference of the two deformed functions",
        34,
        50,
        cfg.seed,
        SYMMETRY_TOL,
        |i, d| {
            let rs = &sys[i % sys.len()];
            let r = rs.rank();
            let m = draw_mult(d, MSet::MPlus, r);
            let (lo, hi) = ell_range(&m);
            let ell = d.range(lo - 1.0, hi);
            let ell_tilde = if r == 1 { 0.0 } else { d.range(0.0, 1.0) };
            let lambda = draw_lambda(d, r);
            let x: Vec<f64> = d.vec(r, -1.5, 1.5);
            let params = format!("r={r} m={} ell={ell} ellTilde={ell_tilde} lambda={} x={}", fmt_m(&m), fmt_cvec(&lambda), fmt_vec(&x));
            let run = || {
                let opts = EvalOptions::ode(1e-10);
                let a = f_deformed(rs, &m, Deformation::new(ell, ell_tilde), &lambda, &x, &opts)?.value;
                let b = f_deformed(rs, &m, Deformation::new(m.long - 1.0 - ell, ell_tilde), &lambda, &x, &opts)?.value;
                Ok(vec![Claim::le_scaled("relative difference", rel(a, b), 0.0, 1.0)])
            };
            (params, run())
        },
    ))
}

pub fn f_sigma_identity(cfg: &SuiteConfig) -> Result<CheckReport> {
    let sys = systems(cfg, &cfg.ranks)?;
    let p = cfg.long_norm;
    Ok(run_check(
        "f_Sigma shift identity",
        "any m, ell, ellTilde",
        "f(m(ell, ellTilde)) - f(m(0, ellTilde)) = (p/2)^2 ell (ell + 1 - m_l) sum_j cosh^-2(p x_j / 2)",
        35,
        100,
        cfg.seed,
        F_SIGMA_TOL,
        |i, d| {
            let rs = &sys[i % sys.len()];
            let r = rs.rank();
            let m = Multiplicity::new(d.range(-3.0, 4.0), d.range(-2.0, 3.0), d.range(-2.0, 3.0)).for_rank(r);
            let ell = d.range(-3.0, 3.0);
            let ell_tilde = if r == 1 { 0.0 } else { d.range(-1.0, 1.0) };
            let x = draw_interior(d, r, 0.1, 1.2);
            let params = format!("r={r} m={} ell={ell} ellTilde={ell_tilde} x={}", fmt_m(&m), fmt_vec(&x));
            let run = || {
                let lhs = f_sigma(rs, &deform(&m, Deformation::new(ell, ell_tilde)), &x)?
                    - f_sigma(rs, &deform(&m, Deformation::new(0.0, ell_tilde)), &x)?;
                let s: f64 = x.iter().map(|t| 1.0 / (p * t / 2.0).cosh().powi(2)).sum();
                let rhs = (p / 2.0).powi(2) * ell * (ell + 1.0 - m.long) * s;
                let err = (lhs - rhs).abs() / (1.0 + rhs.abs());
                Ok(vec![Claim::le_scaled("pointwise error", err, 0.0, 1.0)])
            };
            (params, run())
        },
    ))
}

/// All cross-engine checks, in a fixed order.
pub fn engine_suite(cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    Ok(vec![
        normalization(cfg)?,
        series_vs_ode(cfg)?,
        rank1_vs_series(cfg)?,
        residuals(cfg)?,
        ell_symmetry(cfg)?,
        f_sigma_identity(cfg)?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn engine_suite_passes() {
        for r in engine_suite(&SuiteConfig::default()).unwrap() {
            assert!(r.passed, "{r:#?}");
        }
    }
}

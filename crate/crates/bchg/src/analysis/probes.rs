//! Empirical boundedness along rays: `sup |F|` stays below `√|W|` for `Re λ` well inside the hull,
//! and `|F|` passes `10³` before `t = 40` for `λ` well outside it.

use num_complex::Complex64;

use super::estimates::{draw_dominant, draw_mult, fmt_cvec, fmt_m, fmt_vec, hull_scale, run_check, unit, Claim, Ctx, SuiteConfig};
use super::hull::{growth_direction, hull_margin, ray_sup};
use super::report::CheckReport;
use super::sampling::Draw;
use crate::error::Result;
use crate::multiplicity::{ell_range, rho, rho_hull, Deformation, MSet, Multiplicity};
use crate::rootsys::{norm, RootSystem};

/// Required distance from the hull boundary, relative to `|h|`.
pub const PROBE_MARGIN: f64 = 0.05;
pub const INSIDE_T_MAX: f64 = 20.0;
pub const OUTSIDE_T_MAX: f64 = 40.0;
pub const BLOWUP: f64 = 1e3;
const INSIDE_TOL: f64 = 1e-6;
const PROBE_ODE_TOL: f64 = 1e-10;

/// `m ∈ M1`, shifted so that `|ρ(m)| ≥ 4` (which makes `e^{40·0.05|ρ|}` comfortably above `10³`).
fn draw_probe_mult(d: &mut Draw, rs: &RootSystem) -> Multiplicity {
    let mut m = draw_mult(d, MSet::M1, rs.rank());
    while norm(&rho(rs, &m)) < 4.0 {
        m.short += 1.0;
    }
    m
}

/// `m ∈ M+` with `m_l ≥ 1`, a deformation with `ℓ ∈ ]ℓ_min − 1, ℓ_max[`, `ℓ̃ ∈ ]0, 1.5]`.
fn draw_deformed(d: &mut Draw, rs: &RootSystem) -> (Multiplicity, Deformation) {
    let r = rs.rank();
    let mut m = draw_mult(d, MSet::MPlus, r);
    m.long = 1.0 + d.range(0.0, 2.0);
    // stay a little away from both open ends of ]ℓ_min − 1, ℓ_max[
    let frac = 0.02 + 0.96 * d.unit();
    let ell_tilde = if r == 1 { 0.0 } else { d.range(0.05, 1.5) };
    let at = |m: &Multiplicity| {
        let (lo, hi) = ell_range(m);
        Deformation::new(lo - 1.0 + (hi - lo + 1.0) * frac, ell_tilde)
    };
    while norm(&rho_hull(rs, &m, at(&m))) < 4.0 {
        m.short += 1.0;
    }
    let dfm = at(&m);
    (m, dfm)
}

/// A real point at distance at least `PROBE_MARGIN·|h|` inside `C(h)`.
fn draw_inside(d: &mut Draw, rs: &RootSystem, h: &[f64]) -> Vec<f64> {
    let dir = d.vec(rs.rank(), -1.0, 1.0);
    let want = PROBE_MARGIN * norm(h);
    let mut s = hull_scale(rs, h, &dir) * d.unit();
    let mut xi: Vec<f64> = dir.iter().map(|v| v * s).collect();
    while hull_margin(rs, h, &xi) < want {
        s *= 0.8;
        xi = dir.iter().map(|v| v * s).collect();
    }
    xi
}

/// A real point whose growth rate `max ⟨ξ⁺ − h, x̂⟩` exceeds `PROBE_MARGIN·|h|`.
fn draw_outside(d: &mut Draw, rs: &RootSystem, h: &[f64]) -> Vec<f64> {
    let dir = d.vec(rs.rank(), -1.0, 1.0);
    let want = PROBE_MARGIN * norm(h);
    let mut s = hull_scale(rs, h, &dir) * (1.0 + d.range(0.0, 0.5));
    loop {
        let xi: Vec<f64> = dir.iter().map(|v| v * s).collect();
        if growth_direction(rs, h, &xi).is_some_and(|(_, rate)| rate >= want) {
            return xi;
        }
        s *= 1.1;
    }
}

fn probe_dirs(d: &mut Draw, r: usize) -> Vec<Vec<f64>> {
    let spread: Vec<f64> = (1..=r).map(|j| j as f64).collect();
    let mut last = vec![0.0; r];
    last[r - 1] = 1.0;
    vec![unit(draw_dominant(d, r, 1.0)), unit(spread), last]
}

fn inside_check(cx: &Ctx, deformed: bool) -> CheckReport {
    let cfg = cx.cfg;
    let (name, hyp) = if deformed {
        ("bounded inside C(rho(m(2 ellTilde))) (deformed)", "m in M+, m_l >= 1, ell in ]ell_min-1, ell_max[, ellTilde > 0")
    } else {
        ("bounded inside C(rho(m))", "M1")
    };
    run_check(
        name,
        hyp,
        "sup over t in [0, 20] step 0.5 on three dominant rays of |F| (deformed: |u^-ell v^-ellTilde F|) <= sqrt|W|; Re lambda at distance >= 0.05|h| inside the hull",
        if deformed { 21 } else { 20 },
        cfg.probes,
        cfg.seed,
        INSIDE_TOL,
        |i, d| {
            let rs = cx.rs(i);
            let r = rs.rank();
            let (m, dfm) = if deformed { draw_deformed(d, rs) } else { (draw_probe_mult(d, rs), Deformation::NONE) };
            let h = if deformed { rho_hull(rs, &m, dfm) } else { rho(rs, &m) };
            let re = draw_inside(d, rs, &h);
            let lambda: Vec<Complex64> = re.iter().map(|&a| Complex64::new(a, d.range(-3.0, 3.0))).collect();
            let dirs = probe_dirs(d, r);
            let params = format!("r={r} m={} d=({} {}) lambda={}", fmt_m(&m), dfm.ell, dfm.ell_tilde, fmt_cvec(&lambda));
            let run = || {
                let ts: Vec<f64> = (0..=40).map(|k| k as f64 * INSIDE_T_MAX / 40.0).collect();
                let mut sup: f64 = 0.0;
                for dir in &dirs {
                    let vals = ray_sup(rs, &m, dfm, &lambda, dir, &ts, PROBE_ODE_TOL)?;
                    sup = vals.into_iter().fold(sup, f64::max);
                }
                let bound = (rs.weyl_order() as f64).sqrt();
                Ok(vec![Claim::le_scaled("sup |F| <= sqrt|W|", sup, bound, bound)])
            };
            (params, run())
        },
    )
}

fn outside_check(cx: &Ctx, deformed: bool) -> CheckReport {
    let cfg = cx.cfg;
    let (name, hyp) = if deformed {
        ("unbounded outside C(rho(m(2 ellTilde))) (deformed)", "m in M+, m_l >= 1, ell in ]ell_min-1, ell_max[, ellTilde > 0")
    } else {
        ("unbounded outside C(rho(m))", "M1")
    };
    run_check(
        name,
        hyp,
        "real lambda with growth rate >= 0.05|h|; |F| on the fastest-growing dominant ray must exceed 1e3 by t = 40",
        if deformed { 23 } else { 22 },
        cfg.probes,
        cfg.seed,
        0.0,
        |i, d| {
            let rs = cx.rs(i);
            let r = rs.rank();
            let (m, dfm) = if deformed { draw_deformed(d, rs) } else { (draw_probe_mult(d, rs), Deformation::NONE) };
            let h = if deformed { rho_hull(rs, &m, dfm) } else { rho(rs, &m) };
            let re = draw_outside(d, rs, &h);
            let (dir, rate) = growth_direction(rs, &h, &re).expect("outside by construction");
            let lambda: Vec<Complex64> = re.iter().map(|&a| Complex64::new(a, 0.0)).collect();
            let params = format!(
                "r={r} m={} d=({} {}) lambda={} dir={} rate={rate}",
                fmt_m(&m),
                dfm.ell,
                dfm.ell_tilde,
                fmt_vec(&re),
                fmt_vec(&dir)
            );
            let run = || {
                let ts: Vec<f64> = (0..=40).map(|k| k as f64 * OUTSIDE_T_MAX / 40.0).collect();
                let vals = ray_sup(rs, &m, dfm, &lambda, &dir, &ts, PROBE_ODE_TOL)?;
                let peak = vals.into_iter().fold(0.0, f64::max);
                Ok(vec![Claim::le_scaled("1e3 <= max_{t<=40} |F|", BLOWUP, peak, BLOWUP)])
            };
            (params, run())
        },
    )
}

/// Inside and outside probes, undeformed and deformed, `cfg.probes` samples each.
pub fn boundedness_suite(cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let cx = Ctx::new(cfg)?;
    Ok(vec![inside_check(&cx, false), outside_check(&cx, false), inside_check(&cx, true), outside_check(&cx, true)])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn drawn_points_have_the_margin() {
        let rs = RootSystem::new(3, 2.0).unwrap();
        let h = rho(&rs, &Multiplicity::new(2.0, 1.0, 1.0));
        let s = super::super::sampling::Sampler::new(3, 0, 24);
        for i in 0..100 {
            let u = s.point(i);
            let inside = draw_inside(&mut Draw::new(&u), &rs, &h);
            assert!(hull_margin(&rs, &h, &inside) >= PROBE_MARGIN * norm(&h));
            let outside = draw_outside(&mut Draw::new(&u), &rs, &h);
            assert!(growth_direction(&rs, &h, &outside).unwrap().1 >= PROBE_MARGIN * norm(&h));
        }
    }

    #[test]
    fn deformed_draws_meet_the_hypotheses() {
        let s = super::super::sampling::Sampler::new(5, 0, 24);
        for r in 1..=3 {
            let rs = RootSystem::new(r, 2.0).unwrap();
            for i in 0..50 {
                let u = s.point(i);
                let (m, d) = draw_deformed(&mut Draw::new(&u), &rs);
                let q = super::super::hull::is_bounded(&rs, &m, &[Complex64::new(0.0, 0.0); 3][..r], Some(d));
                assert!(q.hypotheses_ok, "{m} {d:?} {}", q.note);
            }
        }
    }

    #[test]
    fn small_probe_suite_passes() {
        let cfg = SuiteConfig { probes: 6, ..Default::default() };
        for r in boundedness_suite(&cfg).unwrap() {
            assert!(r.passed, "{} {:?}", r.check_name, r.witnesses);
        }
    }
}

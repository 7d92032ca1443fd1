//! The estimate suite: each known inequality for `F_λ`, `G_λ` and their deformations, tested on
//! sampled parameters that satisfy exactly the hypotheses under which it is proved.

use num_complex::Complex64;
use rayon::prelude::*;

use super::hull::in_hull;
use super::report::{CheckReport, SampleRow};
use super::sampling::{Draw, Sampler};
use crate::error::Result;
use crate::evaluator::{default_fd_step, directional_derivative, f_ode, g_orbit, log_u, log_v};
use crate::multiplicity::catalog::catalog;
use crate::multiplicity::{deform, ell_range, rho, rho_hull, Deformation, MSet, Multiplicity};
use crate::rootsys::{dot, norm, to_complex, RootSystem};

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub samples: usize,
    /// Ranks are cycled through by sample index.
    pub ranks: Vec<usize>,
    pub long_norm: f64,
    /// Allowed relative violation for the inequalities.
    pub slack: f64,
    /// Allowed relative error of the finite-difference gradient in the Harnack identity.
    pub harnack_tol: f64,
    /// Relative tolerance handed to the ODE engine.
    pub ode_tol: f64,
    /// Samples per boundedness probe check.
    pub probes: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 42,
            samples: 200,
            ranks: vec![1, 2, 3],
            long_norm: 2.0,
            slack: 1e-9,
            harnack_tol: 1e-7,
            ode_tol: 1e-12,
            probes: 50,
        }
    }
}

/// One inequality `lhs ≤ rhs`; the violation is `(lhs − rhs) / scale`.
pub(crate) struct Claim {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub scale: f64,
}

impl Claim {
    pub fn le(name: &'static str, lhs: f64, rhs: f64) -> Self {
        Claim { name, lhs, rhs, scale: lhs.abs().max(rhs.abs()) }
    }

    pub fn le_scaled(name: &'static str, lhs: f64, rhs: f64, scale: f64) -> Self {
        Claim { name, lhs, rhs, scale }
    }
}

pub(crate) type Outcome = (String, Result<Vec<Claim>>);

/// Runs `f` on `samples` sampled points in parallel and collects the rows in sample order.
#[allow(clippy::too_many_arguments)]
pub(crate) fn run_check<F>(
    name: &str,
    hypothesis: &str,
    note: &str,
    stream: u64,
    samples: usize,
    seed: u64,
    tol: f64,
    f: F,
) -> CheckReport
where
    F: Fn(usize, &mut Draw) -> Outcome + Sync,
{
    let sampler = Sampler::new(seed, stream, 24);
    let results: Vec<(usize, Outcome)> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let u = sampler.point(i);
            (i, f(i, &mut Draw::new(&u)))
        })
        .collect();
    let mut rows = Vec::new();
    let mut errors = Vec::new();
    for (i, (params, res)) in results {
        match res {
            Ok(claims) => rows.extend(claims.into_iter().map(|c| {
                let scale = if c.scale > 0.0 { c.scale } else { f64::MIN_POSITIVE };
                SampleRow {
                    check: name.to_string(),
                    id: i,
                    hypothesis: hypothesis.to_string(),
                    params: params.clone(),
                    claim: c.name.to_string(),
                    lhs: c.lhs,
                    rhs: c.rhs,
                    margin: c.rhs - c.lhs,
                    violation: (c.lhs - c.rhs) / scale,
                }
            })),
            Err(e) => errors.push(format!("#{i} {params}: {e}")),
        }
    }
    CheckReport::from_rows(name, hypothesis, samples, tol, rows, errors, note)
}

pub(crate) fn fmt_vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(" "))
}

pub(crate) fn fmt_cvec(v: &[Complex64]) -> String {
    let parts: Vec<String> = v.iter().map(|z| if z.im == 0.0 { z.re.to_string() } else { format!("{}{:+}i", z.re, z.im) }).collect();
    format!("[{}]", parts.join(" "))
}

pub(crate) fn fmt_m(m: &Multiplicity) -> String {
    format!("({} {} {})", m.short, m.middle, m.long)
}

/// A multiplicity drawn from a box inside `set`.
pub(crate) fn draw_mult(d: &mut Draw, set: MSet, rank: usize) -> Multiplicity {
    let mm = d.range(0.0, 3.0);
    let m = match set {
        MSet::M3 => {
            let l = -d.range(0.0, 2.0);
            Multiplicity::new(-2.0 * l + d.range(0.0, 3.0), mm, l)
        }
        MSet::M2 => {
            let l = d.range(0.0, 3.0);
            Multiplicity::new(-l + d.range(0.0, 4.0), mm, l)
        }
        MSet::M1 => {
            let l = d.range(-1.5, 2.5);
            let s = (-2.0 * l).max(0.0) + d.range(0.1, 4.0);
            Multiplicity::new(s, 0.1 + mm, l)
        }
        _ => Multiplicity::new(d.range(0.0, 4.0), mm, d.range(0.0, 3.0)),
    };
    m.for_rank(rank)
}

pub(crate) fn draw_cvec(d: &mut Draw, r: usize, re: f64, im: f64) -> Vec<Complex64> {
    (0..r).map(|_| Complex64::new(d.range(-re, re), if im > 0.0 { d.range(-im, im) } else { 0.0 })).collect()
}

/// A point of the closed chamber with coordinates in `[0, hi]`.
pub(crate) fn draw_dominant(d: &mut Draw, r: usize, hi: f64) -> Vec<f64> {
    let mut v = d.vec(r, 0.0, hi);
    v.sort_by(f64::total_cmp);
    v
}

pub(crate) fn unit(v: Vec<f64>) -> Vec<f64> {
    let n = norm(&v);
    if n == 0.0 {
        let mut e = vec![0.0; v.len()];
        e[v.len() - 1] = 1.0;
        return e;
    }
    v.into_iter().map(|x| x / n).collect()
}

/// `(G_λ(x), F_λ(x))` and the whole orbit `G_λ(w x)`.
fn gf(rs: &RootSystem, m: &Multiplicity, lambda: &[Complex64], x: &[f64], tol: f64) -> Result<(Complex64, Complex64, Vec<Complex64>)> {
    let (g, _) = g_orbit(rs, m, lambda, x, tol)?;
    let f = g.iter().sum::<Complex64>() / g.len() as f64;
    Ok((g[0], f, g))
}

fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn re(v: &[Complex64]) -> Vec<f64> {
    v.iter().map(|z| z.re).collect()
}

pub(crate) struct Ctx<'a> {
    pub cfg: &'a SuiteConfig,
    pub systems: Vec<RootSystem>,
}

impl<'a> Ctx<'a> {
    pub fn new(cfg: &'a SuiteConfig) -> Result<Self> {
        let systems = cfg.ranks.iter().map(|&r| RootSystem::new(r, cfg.long_norm)).collect::<Result<Vec<_>>>()?;
        Ok(Ctx { cfg, systems })
    }

    pub fn rs(&self, i: usize) -> &RootSystem {
        &self.systems[i % self.systems.len()]
    }

    /// Alternates between two sets independently of the rank cycle.
    pub fn alt(&self, i: usize, a: MSet, b: MSet) -> MSet {
        if (i / self.systems.len()).is_multiple_of(2) {
            a
        } else {
            b
        }
    }
}

fn check_positivity(cx: &Ctx) -> CheckReport {
    let cfg = cx.cfg;
    run_check(
        "(i) positivity, |G_l| <= G_Re(l)",
        "M+ or M3",
        "real lambda: G and F real and positive; complex lambda: modulus bounded by the real part's value",
        1,
        cfg.samples,
        cfg.seed,
        cfg.slack,
        |i, d| {
            let rs = cx.rs(i);
            let r = rs.rank();
            let m = draw_mult(d, cx.alt(i, MSet::MPlus, MSet::M3), r);
            let lambda = draw_cvec(d, r, 2.0, 3.0);
            let x = d.vec(r, -1.5, 1.5);
            let params = format!("r={r} m={} lambda={} x={}", fmt_m(&m), fmt_cvec(&lambda), fmt_vec(&x));
            let run = || {
                let (g, f, _) = gf(rs, &m, &lambda, &x, cfg.ode_tol)?;
                let (gr, fr, _) = gf(rs, &m, &to_complex(&re(&lambda)), &x, cfg.ode_tol)?;
                Ok(vec![
                    Claim::le_scaled("G_Re(l) > 0", -gr.re, 0.0, gr.norm()),
                    Claim::le_scaled("Im G_Re(l) = 0", gr.im.abs(), 0.0, gr.norm()),
                    Claim::le_scaled("F_Re(l) > 0", -fr.re, 0.0, fr.norm()),
                    Claim::le("|G_l| <= G_Re(l)", g.norm(), gr.re),
                    Claim::le("|F_l| <= F_Re(l)", f.norm(), fr.re),
                ])
            };
            (params, run())
        },
    )
}

fn check_basic2(cx: &Ctx) -> CheckReport {
    let cfg = cx.cfg;
    run_check(
        "(ii) G_l <= G_0 e^{max w l(x)}",
        "M+ or M3",
        "real lambda",
        2,
        cfg.samples,
        cfg.seed,
        cfg.slack,
        |i, d| {
            let rs = cx.rs(i);
            let r = rs.rank();
            let m = draw_mult(d, cx.alt(i, MSet::MPlus, MSet::M3), r);
            let lambda = d.vec(r, -2.0, 2.0);
            let x = d.vec(r, -1.5, 1.5);
            let params = format!("r={r} m={} lambda={} x={}", fmt_m(&m), fmt_vec(&lambda), fmt_vec(&x));
            let run = || {
                let (g, f, _) = gf(rs, &m, &to_complex(&lambda), &x, cfg.ode_tol)?;
                let (g0, f0, _) = gf(rs, &m, &to_complex(&vec![0.0; r]), &x, cfg.ode_tol)?;
                let e = rs.max_orbit_pairing(&lambda, &x).exp();
                Ok(vec![
                    Claim::le("G_l <= G_0 e^max", g.re, g0.re * e),
                    Claim::le("F_l <= F_0 e^max", f.re, f0.re * e),
                ])
            };
            (params, run())
        },
    )
}

fn check_basic3(cx: &Ctx) -> CheckReport {
    let cfg = cx.cfg;
    run_check(
        "(iii) G_{l+mu} <= G_mu e^{max w l(x)}",
        "M+ or M3",
        "real lambda, dominant mu",
        3,
        cfg.samples,
        cfg.seed,
        cfg.slack,
        |i, d| {
            let rs = cx.rs(i);
            let r = rs.rank();
            let m = draw_mult(d, cx.alt(i, MSet::MPlus, MSet::M3), r);
            let lambda = d.vec(r, -2.0, 2.0);
            let mu = draw_dominant(d, r, 2.0);
            let x = d.vec(r, -1.5, 1.5);
            let params = format!("r={r} m={} lambda={} mu={} x={}", fmt_m(&m), fmt_vec(&lambda), fmt_vec(&mu), fmt_vec(&x));
            let run = || {
                let (g, f, _) = gf(rs, &m, &to_complex(&add(&lambda, &mu)), &x, cfg.ode_tol)?;
                let (gm, fm, _) = gf(rs, &m, &to_complex(&mu), &x, cfg.ode_tol)?;
                let e = rs.max_orbit_pairing(&lambda, &x).exp();
                Ok(vec![
                    Claim::le("G_{l+mu} <= G_mu e^max", g.re, gm.re * e),
                    Claim::le("F_{l+mu} <= F_mu e^max", f.re, fm.re * e),
                ])
            };
            (params, run())
        },
    )
}

fn check_opdam(cx: &Ctx) -> CheckReport {
    let cfg = cx.cfg;
    run_check(
        "(iv) |G_l| <= sqrt|W| e^{max Re w l(x)}",
        "M2 or M3",
        "complex lambda",
        4,
        cfg.samples,
        cfg.seed,
        cfg.slack,
        |i, d| {
            let rs = cx.rs(i);
            let r = rs.rank();
            let m = draw_mult(d, cx.alt(i, MSet::M2, MSet::M3), r);
            let lambda = draw_cvec(d, r, 2.0, 3.0);
            let x = d.vec(r, -1.5, 1.5);
            let params = format!("r={r} m={} lambda={} x={}", fmt_m(&m), fmt_cvec(&lambda), fmt_vec(&x));
            let run = || {
                let (g, f, _) = gf(rs, &m, &lambda, &x, cfg.ode_tol)?;
                let bound = (rs.weyl_order() as f64).sqrt() * rs.max_orbit_pairing(&re(&lambda), &x).exp();
                Ok(vec![Claim::le("|G_l| <= bound", g.norm(), bound), Claim::le("|F_l| <= bound", f.norm(), bound)])
            };
            (params, run())
        },
    )
}

fn check_subadditivity(cx: &Ctx) -> CheckReport {
    let cfg = cx.cfg;
    run_check(
        "(v) subadditivity sandwich",
        "M3",
        "F(x+x1) e^{min_w (rho-l)(w x1)} <= F(x) <= F(x+x1) e^{max_w (rho-l)(w x1)}, real lambda",
        5,
        cfg.samples,
        cfg.seed,
        cfg.slack,
        |i, d| {
            let rs = cx.rs(i);
            let r = rs.rank();
            let m = draw_mult(d, MSet::M3, r);
            let lambda = d.vec(r, -2.0, 2.0);
            let x = d.vec(r, -1.5, 1.5);
            let x1 = d.vec(r, -1.0, 1.0);
            let params = format!("r={r} m={} lambda={} x={} x1={}", fmt_m(&m), fmt_vec(&lambda), fmt_vec(&x), fmt_vec(&x1));
            let run = || {
                let l = to_complex(&lambda);
                let f = f_ode(rs, &m, &l, &x, cfg.ode_tol)?.value.re;
                let f1 = f_ode(rs, &m, &l, &add(&x, &x1), cfg.ode_tol)?.value.re;
                let rl: Vec<f64> = rho(rs, &m).iter().zip(&lambda).map(|(a, b)| a - b).collect();
                let k = rs.max_orbit_pairing(&rl, &x1);
                Ok(vec![Claim::le("lower", f1 * (-k).exp(), f), Claim::le("upper", f, f1 * k.exp())])
            };
            (params, run())
        },
    )
}

fn check_harnack(cx: &Ctx) -> CheckReport {
    let cfg = cx.cfg;
    run_check(
        "(vi) local Harnack gradient identity",
        "M+ or M3",
        "d_xi F(x) = |W|^-1 sum_w (l-rho)(w xi) G(w x), x in the closed chamber; eighth-order differences",
        6,
        cfg.samples,
        cfg.seed,
        cfg.harnack_tol,
        |i, d| {
            let rs = cx.rs(i);
            let r = rs.rank();
            let m = draw_mult(d, cx.alt(i, MSet::MPlus, MSet::M3), r);
            let lambda = d.vec(r, -2.0, 2.0);
            let mut x = draw_dominant(d, r, 1.5);
            // every fifth point on a wall of the chamber
            if i % 5 == 0 {
                x[0] = 0.0;
            }
            let xi = unit(d.vec(r, -1.0, 1.0));
            let params = format!("r={r} m={} lambda={} x={} xi={}", fmt_m(&m), fmt_vec(&lambda), fmt_vec(&x), fmt_vec(&xi));
            let run = || {
                let l = to_complex(&lambda);
                let h = default_fd_step(rs, &m, &l);
                let f = |y: &[f64]| f_ode(rs, &m, &l, y, cfg.ode_tol).map(|v| v.value);
                let fd = directional_derivative(&f, &x, &xi, h)?;
                let (_, fx, g) = gf(rs, &m, &l, &x, cfg.ode_tol)?;
                let lr: Vec<f64> = lambda.iter().zip(rho(rs, &m)).map(|(a, b)| a - b).collect();
                let nw = rs.weyl_order() as f64;
                let mut sum = Complex64::new(0.0, 0.0);
                let mut scale = fx.norm();
                for (w, gw) in rs.weyl_group().iter().zip(&g) {
                    let c = dot(&lr, &w.act(&xi));
                    sum += gw * c / nw;
                    scale += (gw * c).norm() / nw;
                }
                Ok(vec![Claim::le_scaled("|FD - formula|", (fd - sum).norm(), 0.0, scale)])
            };
            (params, run())
        },
    )
}

fn check_monotone(cx: &Ctx) -> CheckReport {
    let cfg = cx.cfg;
    let ts: Vec<f64> = (0..=20).map(|k| 0.25 * k as f64).collect();
    run_check(
        "(vii) e^{K t} F(x + t xi) nondecreasing",
        "M+ or M3",
        "K = max_w (rho-l)(w xi), |xi| = 1, t in [0, 5] step 0.25; every tenth sample has l = 0, x = 0",
        7,
        cfg.samples,
        cfg.seed,
        cfg.slack,
        |i, d| {
            let rs = cx.rs(i);
            let r = rs.rank();
            let m = draw_mult(d, cx.alt(i, MSet::MPlus, MSet::M3), r);
            let special = i % 10 == 0;
            let lambda = if special { vec![0.0; r] } else { d.vec(r, -2.0, 2.0) };
            let x = if special { vec![0.0; r] } else { d.vec(r, -1.5, 1.5) };
            let xi = if special { unit(draw_dominant(d, r, 1.0)) } else { unit(d.vec(r, -1.0, 1.0)) };
            let params = format!("r={r} m={} lambda={} x={} xi={}", fmt_m(&m), fmt_vec(&lambda), fmt_vec(&x), fmt_vec(&xi));
            let run = || {
                let l = to_complex(&lambda);
                let rl: Vec<f64> = rho(rs, &m).iter().zip(&lambda).map(|(a, b)| a - b).collect();
                let k = rs.max_orbit_pairing(&rl, &xi);
                let vals: Vec<f64> = ts
                    .iter()
                    .map(|&t| {
                        let y: Vec<f64> = x.iter().zip(&xi).map(|(a, b)| a + t * b).collect();
                        f_ode(rs, &m, &l, &y, cfg.ode_tol).map(|v| v.value.re * (k * t).exp())
                    })
                    .collect::<Result<_>>()?;
                Ok(vals.windows(2).map(|w| Claim::le_scaled("f(t) <= f(t+dt)", w[0], w[1], w[0].abs())).collect())
            };
            (params, run())
        },
    )
}

/// `u^{−ℓ}(x) v^{−ℓ̃}(x)`.
fn uv_factor(rs: &RootSystem, dfm: Deformation, x: &[f64]) -> f64 {
    (-dfm.ell * log_u(rs, x) - dfm.ell_tilde * log_v(rs, x)).exp()
}

fn check_deformed(cx: &Ctx) -> CheckReport {
    let cfg = cx.cfg;
    run_check(
        "(viii) deformed estimates (a)-(c)",
        "m in M+, ellTilde >= -m_m/2; (a) ell <= ell_max; (b) ell in [ell_min-1, ell_max]; (c) also m_l >= 1, ellTilde >= 0",
        "(a) sqrt|W| bound for G (and for F when ell >= ell_min-1); (b) positivity and the three basic estimates for F, and for G when ell >= ell_min; (c) sandwich with exponent (l + rho(m(2 ellTilde)))(x1), dominant l, regular dominant x1. The factor u^-ell v^-ellTilde is common to both sides in (a) and (b).",
        8,
        cfg.samples,
        cfg.seed,
        cfg.slack,
        |i, d| {
            let rs = cx.rs(i);
            let r = rs.rank();
            let part = (i / cx.systems.len()) % 3;
            let mut m = draw_mult(d, MSet::MPlus, r);
            if part == 2 {
                m.long = 1.0 + d.range(0.0, 2.0);
            }
            let (lo, hi) = ell_range(&m);
            let et_lo = if part == 2 || r == 1 { 0.0 } else { -m.middle / 2.0 };
            let ell_tilde = if r == 1 { 0.0 } else { d.range(et_lo, 1.5) };
            let ell = if part == 0 { d.range(lo - 2.0, hi) } else { d.range(lo - 1.0, hi) };
            let dfm = Deformation::new(ell, ell_tilde);
            let md = deform(&m, dfm).for_rank(r);
            let x = d.vec(r, -1.5, 1.5);
            let sqrt_w = (rs.weyl_order() as f64).sqrt();
            match part {
                0 => {
                    let lambda = draw_cvec(d, r, 2.0, 3.0);
                    let params = format!("(a) r={r} m={} ell={ell} ellTilde={ell_tilde} lambda={} x={}", fmt_m(&m), fmt_cvec(&lambda), fmt_vec(&x));
                    let run = || {
                        let (g, f, _) = gf(rs, &md, &lambda, &x, cfg.ode_tol)?;
                        let bound = sqrt_w * rs.max_orbit_pairing(&re(&lambda), &x).exp();
                        let mut out = vec![Claim::le("|G_{ell,ellT,l}| <= sqrt|W| u^-ell v^-ellT e^max", g.norm(), bound)];
                        if ell >= lo - 1.0 {
                            out.push(Claim::le("|F_{ell,ellT,l}| <= sqrt|W| u^-ell v^-ellT e^max", f.norm(), bound));
                        }
                        Ok(out)
                    };
                    (params, run())
                }
                1 => {
                    let lambda = draw_cvec(d, r, 2.0, 3.0);
                    let lr = re(&lambda);
                    let mu = draw_dominant(d, r, 2.0);
                    let params = format!(
                        "(b) r={r} m={} ell={ell} ellTilde={ell_tilde} lambda={} mu={} x={}",
                        fmt_m(&m),
                        fmt_cvec(&lambda),
                        fmt_vec(&mu),
                        fmt_vec(&x)
                    );
                    let run = || {
                        let (g, f, _) = gf(rs, &md, &lambda, &x, cfg.ode_tol)?;
                        let (gr, fr, _) = gf(rs, &md, &to_complex(&lr), &x, cfg.ode_tol)?;
                        let (g0, f0, _) = gf(rs, &md, &to_complex(&vec![0.0; r]), &x, cfg.ode_tol)?;
                        let (gs, fs, _) = gf(rs, &md, &to_complex(&add(&lr, &mu)), &x, cfg.ode_tol)?;
                        let (gm, fm, _) = gf(rs, &md, &to_complex(&mu), &x, cfg.ode_tol)?;
                        let e = rs.max_orbit_pairing(&lr, &x).exp();
                        let mut out = vec![
                            Claim::le_scaled("F_{ell,ellT,Re l} > 0", -fr.re, 0.0, fr.norm()),
                            Claim::le("|F_l| <= F_Re(l)", f.norm(), fr.re),
                            Claim::le("F_Re(l) <= F_0 e^max", fr.re, f0.re * e),
                            Claim::le("F_{Re l+mu} <= F_mu e^max", fs.re, fm.re * e),
                        ];
                        if ell >= lo {
                            out.extend([
                                Claim::le_scaled("G_{ell,ellT,Re l} > 0", -gr.re, 0.0, gr.norm()),
                                Claim::le("|G_l| <= G_Re(l)", g.norm(), gr.re),
                                Claim::le("G_Re(l) <= G_0 e^max", gr.re, g0.re * e),
                                Claim::le("G_{Re l+mu} <= G_mu e^max", gs.re, gm.re * e),
                            ]);
                        }
                        Ok(out)
                    };
                    (params, run())
                }
                _ => {
                    let lambda = draw_dominant(d, r, 2.0);
                    let mut acc = 0.0;
                    let x1: Vec<f64> = (0..r)
                        .map(|_| {
                            acc += d.range(0.05, 0.6);
                            acc
                        })
                        .collect();
                    let params = format!(
                        "(c) r={r} m={} ell={ell} ellTilde={ell_tilde} lambda={} x={} x1={}",
                        fmt_m(&m),
                        fmt_vec(&lambda),
                        fmt_vec(&x),
                        fmt_vec(&x1)
                    );
                    let run = || {
                        let l = to_complex(&lambda);
                        let xx = add(&x, &x1);
                        let f = f_ode(rs, &md, &l, &x, cfg.ode_tol)?.value.re * uv_factor(rs, dfm, &x);
                        let f1 = f_ode(rs, &md, &l, &xx, cfg.ode_tol)?.value.re * uv_factor(rs, dfm, &xx);
                        let k = dot(&add(&lambda, &rho_hull(rs, &m, dfm)), &x1);
                        Ok(vec![Claim::le("lower", f1 * (-k).exp(), f), Claim::le("upper", f, f1 * k.exp())])
                    };
                    (params, run())
                }
            }
        },
    )
}

/// Largest `s` with `s·ξ ∈ C(h)`.
pub(crate) fn hull_scale(rs: &RootSystem, h: &[f64], xi: &[f64]) -> f64 {
    let (xd, _) = rs.dominant_representative(xi);
    let ch = rs.simple_coords(h);
    let cx = rs.simple_coords(&xd);
    ch.iter().zip(&cx).filter(|(_, &c)| c > 0.0).map(|(a, c)| a / c).fold(f64::INFINITY, f64::min)
}

fn check_spherical(cx: &Ctx) -> CheckReport {
    let cfg = cx.cfg;
    let entries: Vec<_> = catalog()
        .into_iter()
        .filter(|e| e.base.long == 1.0 && e.deform.ell_tilde == 0.0 && e.rank <= 3 && e.deform.ell == 0.0)
        .collect();
    let systems: Vec<RootSystem> = entries.iter().map(|e| RootSystem::new(e.rank, cfg.long_norm).expect("rank ≤ 3")).collect();
    run_check(
        "(ix) |u^-ell F_l(m(ell))| <= 1 on C(rho(m)) + i a*",
        "Hermitian catalog entry (m_l = 1, ellTilde = 0), any real ell",
        "ell drawn from [-ell_max-1, ell_max+1]; Re lambda on a segment from 0 to the hull boundary, every eighth sample a vertex",
        9,
        cfg.samples,
        cfg.seed,
        cfg.slack,
        |i, d| {
            let k = i % entries.len();
            let (e, rs) = (&entries[k], &systems[k]);
            let r = rs.rank();
            let m = e.base;
            let (_, hi) = ell_range(&m);
            let ell = d.range(-hi - 1.0, hi + 1.0);
            let h = rho(rs, &m);
            let lr: Vec<f64> = if i % 8 == 0 {
                let w = &rs.weyl_group()[d.pick(rs.weyl_order())];
                w.act(&h)
            } else {
                let dir = d.vec(r, -1.0, 1.0);
                let s = hull_scale(rs, &h, &dir) * d.unit();
                dir.iter().map(|v| v * s).collect()
            };
            debug_assert!(in_hull(rs, &h, &lr));
            let lambda: Vec<Complex64> = lr.iter().map(|&a| Complex64::new(a, d.range(-3.0, 3.0))).collect();
            let x = d.vec(r, -1.5, 1.5);
            let params = format!("{} ell={ell} lambda={} x={}", e.name, fmt_cvec(&lambda), fmt_vec(&x));
            let run = || {
                let md = deform(&m, Deformation::new(ell, 0.0)).for_rank(r);
                let f = f_ode(rs, &md, &lambda, &x, cfg.ode_tol)?.value;
                Ok(vec![Claim::le_scaled("|phi_{ell,l}| <= 1", f.norm() * uv_factor(rs, Deformation::new(ell, 0.0), &x), 1.0, 1.0)])
            };
            (params, run())
        },
    )
}

/// Checks (i)–(ix), in order.
pub fn estimate_suite(cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let cx = Ctx::new(cfg)?;
    let checks: [fn(&Ctx) -> CheckReport; 9] = [
        check_positivity,
        check_basic2,
        check_basic3,
        check_opdam,
        check_subadditivity,
        check_harnack,
        check_monotone,
        check_deformed,
        check_spherical,
    ];
    Ok(checks.iter().map(|c| c(&cx)).collect())
}

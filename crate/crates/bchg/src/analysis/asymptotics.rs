//! Growth of `F_λ` along rays: the two-sided estimate against `Π(1+α(x)) e^{(λ−ρ)(x)}` and the
//! limit of `F_λ e^{−(λ−ρ)(x)}` at regular `λ`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::report::{CheckReport, SampleRow};
use crate::cfunc::{b0_nonsingular, c_function};
use crate::error::{Error, Result};
use crate::evaluator::{f_ode, f_ray, log_u, log_v};
use crate::hcseries::is_regular_spectral;
use crate::multiplicity::{deform, ell_range, rho, rho_hull, Deformation, MSet, Multiplicity};
use crate::rootsys::{dot, norm, to_complex, RootClass, RootSystem};

/// Ratio spread allowed by [`sharp_ratio`]; the implied constants are not known, so this is a heuristic.
pub const RATIO_BOUND: f64 = 50.0;
/// Allowed relative variation of the ratio over the last third of the grid (heuristic).
pub const SETTLE_TOL: f64 = 0.2;
/// Agreement of the ratio at the last grid point with `c(m;λ0)` for strictly dominant `λ0`.
pub const C_LIMIT_TOL: f64 = 1e-3;

const ODE_TOL: f64 = 1e-11;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SharpRatio {
    pub ts: Vec<f64>,
    pub ratios: Vec<f64>,
    /// The limit of the ratio when `λ0` is strictly dominant and the direction regular:
    /// `c(m(ℓ,ℓ̃); λ0)`, times `2^{rℓ + r(r−1)ℓ̃}` for a deformation.
    pub c_limit: Option<f64>,
    pub report: CheckReport,
}

/// Hypotheses of the two-sided estimate: `m ∈ M3` interior undeformed; with a deformation,
/// `m ∈ M+`, `ℓ ∈ ]ℓ_min, ℓ_max[` and `ℓ̃ ≥ 0` (`> 0` when `m_m = 0`).
fn sharp_hypotheses(m: &Multiplicity, d: Option<Deformation>, rank: usize) -> std::result::Result<String, String> {
    match d {
        None => {
            let interior = m.long < 0.0 && m.short + 2.0 * m.long > 0.0 && (rank == 1 || m.middle > 0.0);
            if interior {
                Ok("M3 interior".into())
            } else {
                Err(format!("{m} is not in the interior of M3"))
            }
        }
        Some(d) => {
            let (lo, hi) = ell_range(m);
            let et_ok = rank == 1 || if m.middle > 0.0 { d.ell_tilde >= 0.0 } else { d.ell_tilde > 0.0 };
            if MSet::MPlus.contains(m, rank) && d.ell > lo && d.ell < hi && et_ok {
                Ok("m in M+, ell in ]ell_min, ell_max[, ellTilde >= 0".into())
            } else {
                Err(format!("deformation {d:?} of {m} outside the hypotheses"))
            }
        }
    }
}

/// `Π_{α ∈ Σ⁰} (1 + α(x))` over short and middle roots orthogonal to `λ0`.
fn poly_factor(rs: &RootSystem, lambda0: &[f64], x: &[f64]) -> f64 {
    let scale = 1.0 + norm(lambda0);
    rs.positive_roots()
        .iter()
        .filter(|a| a.class != RootClass::Long && dot(&a.coords, lambda0).abs() <= 1e-12 * scale)
        .map(|a| 1.0 + a.eval(x))
        .product()
}

/// Records `F / (Π_{Σ⁰}(1+α(x)) e^{(λ0−ρ)(x)})` along `x0 + t·x̂`; with a deformation `F` is
/// `F_{ℓ,ℓ̃,λ0}(m)` and `ρ` is `ρ(m(2ℓ̃))`.
///
/// Passes when the ratio stays within a factor [`RATIO_BOUND`], settles to within [`SETTLE_TOL`]
/// over the last third of `ts`, and, for strictly dominant `λ0`, is within [`C_LIMIT_TOL`] of
/// `c(m;λ0)` at the last point.
pub fn sharp_ratio(
    rs: &RootSystem,
    m: &Multiplicity,
    lambda0: &[f64],
    x0: &[f64],
    dir: &[f64],
    ts: &[f64],
    d: Option<Deformation>,
) -> Result<SharpRatio> {
    let r = rs.rank();
    let m = m.for_rank(r);
    if lambda0.len() != r || x0.len() != r || dir.len() != r || ts.len() < 3 {
        return Err(Error::Invalid("sharp_ratio needs rank-length vectors and at least three grid points".into()));
    }
    let (ld, _) = rs.dominant_representative(lambda0);
    if ld.iter().zip(lambda0).any(|(a, b)| (a - b).abs() > 1e-12) {
        return Err(Error::Domain("lambda0 must be dominant".into()));
    }
    let hyp = sharp_hypotheses(&m, d, r).map_err(Error::Domain)?;
    let dfm = d.unwrap_or(Deformation::NONE);
    let md = deform(&m, dfm).for_rank(r);
    let rh = if d.is_some() { rho_hull(rs, &m, dfm) } else { rho(rs, &m) };
    let lr: Vec<f64> = lambda0.iter().zip(&rh).map(|(a, b)| a - b).collect();
    let l = to_complex(lambda0);
    let mut ratios = Vec::with_capacity(ts.len());
    for &t in ts {
        let x: Vec<f64> = x0.iter().zip(dir).map(|(a, b)| a + t * b).collect();
        let f = f_ode(rs, &md, &l, &x, ODE_TOL)?.value.re;
        let log_k = -dfm.ell * log_u(rs, &x) - dfm.ell_tilde * log_v(rs, &x) - dot(&lr, &x);
        ratios.push(f * log_k.exp() / poly_factor(rs, lambda0, &x));
    }
    let strict = rs.positive_roots().iter().all(|a| a.eval(lambda0) > 1e-12);
    // u^{−ℓ} v^{−ℓ̃} contributes 2^{rℓ + r(r−1)ℓ̃} to the limit
    let c_limit = if strict && rs.is_regular(dir, 1e-9) {
        let k = (r as f64 * dfm.ell + (r * (r - 1)) as f64 * dfm.ell_tilde) * std::f64::consts::LN_2;
        Some(c_function(rs, &md, &l)?.value().re * k.exp())
    } else {
        None
    };

    let params = |t: f64| {
        format!("r={r} m=({} {} {}) d=({} {}) lambda0={:?} x0={:?} dir={:?} t={t}", m.short, m.middle, m.long, dfm.ell, dfm.ell_tilde, lambda0, x0, dir)
    };
    let row = |claim: &str, t: f64, lhs: f64, rhs: f64| SampleRow {
        check: "sharp_ratio".into(),
        id: 0,
        hypothesis: hyp.clone(),
        params: params(t),
        claim: claim.to_string(),
        lhs,
        rhs,
        margin: rhs - lhs,
        violation: (lhs - rhs) / rhs,
    };
    let mut rows = Vec::new();
    let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let spread = if lo > 0.0 { hi / lo } else { f64::INFINITY };
    let t_last = *ts.last().expect("nonempty");
    rows.push(row("max/min ratio", t_last, spread, RATIO_BOUND));
    let tail = &ratios[ratios.len() - ratios.len().div_ceil(3)..];
    let (tl, th) = tail.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    let settle = if tl > 0.0 { (th - tl) / tl } else { f64::INFINITY };
    rows.push(row("last-third variation", t_last, settle, SETTLE_TOL));
    if let Some(c) = c_limit {
        let last = *ratios.last().expect("nonempty");
        rows.push(row("|ratio/c - 1|", t_last, (last / c - 1.0).abs(), C_LIMIT_TOL));
    }
    let report = CheckReport::from_rows(
        "sharp_ratio",
        &hyp,
        ts.len(),
        0.0,
        rows,
        vec![],
        "ratio bound and settling thresholds are heuristics",
    );
    Ok(SharpRatio { ts: ts.to_vec(), ratios, c_limit, report })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct B0Probe {
    pub ts: Vec<f64>,
    /// `F_{λ0}(t x̂) e^{−(λ0−ρ)(t x̂)}`.
    pub normalized: Vec<f64>,
    pub c_value: f64,
    pub c_vanishes: bool,
    pub report: CheckReport,
}

/// Probes `F_{λ0}(t x̂) e^{−(λ0−ρ)(t x̂)} → c(m;λ0)` for regular real dominant `λ0`, or its decay
/// to zero where `c(m;λ0)` vanishes. The limit is checked to `1e−4·max(1, |c|)` at `t_end`. With `eta`, also checks `|F_{λ0+iη}| ≤ F_{λ0}` on the ray
/// (only for `m ∈ M+ ∪ M3`, where that estimate is known).
pub fn b0_probe(rs: &RootSystem, m: &Multiplicity, lambda0: &[f64], dir: &[f64], t_end: f64, eta: Option<&[f64]>) -> Result<B0Probe> {
    let r = rs.rank();
    let m = m.for_rank(r);
    let l = to_complex(lambda0);
    if !is_regular_spectral(rs, &l) {
        return Err(Error::Unsupported("b0_probe needs a regular lambda0".into()));
    }
    if !rs.is_regular(dir, 1e-9) {
        return Err(Error::Invalid("the probe direction must be regular".into()));
    }
    let dir: Vec<f64> = dir.iter().map(|v| v / norm(dir)).collect();
    let c = c_function(rs, &m, &l)?;
    let c_vanishes = c.is_zero();
    // the gamma product cannot vanish without the leading coefficient degenerating
    if c_vanishes && m.short != 0.0 && b0_nonsingular(rs, &m, &l)? {
        return Err(Error::Invalid("c vanishes although b0 is nonsingular".into()));
    }
    let n = 50usize;
    let ts: Vec<f64> = (0..=n).map(|k| t_end * k as f64 / n as f64).collect();
    let fs = f_ray(rs, &m, &l, &dir, &ts, ODE_TOL)?;
    let rh = rho(rs, &m);
    let lr: Vec<f64> = lambda0.iter().zip(&rh).map(|(a, b)| a - b).collect();
    let normalized: Vec<f64> = fs
        .iter()
        .zip(&ts)
        .map(|(f, &t)| {
            let x: Vec<f64> = dir.iter().map(|v| v * t).collect();
            f.re * (-dot(&lr, &x)).exp()
        })
        .collect();
    let hyp = if MSet::MPlus.contains(&m, r) || MSet::M3.contains(&m, r) { "M+ or M3" } else { "M0" };
    let mk = |claim: &str, lhs: f64, rhs: f64, scale: f64| SampleRow {
        check: "b0_probe".into(),
        id: 0,
        hypothesis: hyp.into(),
        params: format!("r={r} m=({} {} {}) lambda0={:?} dir={:?} t={t_end}", m.short, m.middle, m.long, lambda0, dir),
        claim: claim.into(),
        lhs,
        rhs,
        margin: rhs - lhs,
        violation: (lhs - rhs) / scale,
    };
    let last = *normalized.last().expect("nonempty");
    let c_value = c.value().re;
    let mut rows = vec![if c_vanishes {
        mk("|normalized| -> 0", last.abs(), 1e-4, 1e-4)
    } else {
        let tol = 1e-4 * c_value.abs().max(1.0);
        mk("|normalized - c|", (last - c_value).abs(), tol, tol)
    }];
    if let Some(eta) = eta {
        if hyp != "M0" {
            let lc: Vec<Complex64> = lambda0.iter().zip(eta).map(|(a, b)| Complex64::new(*a, *b)).collect();
            let gs = f_ray(rs, &m, &lc, &dir, &ts, ODE_TOL)?;
            for ((g, f), &t) in gs.iter().zip(&fs).zip(&ts) {
                let mut row = mk("|F_{l0+i eta}| <= F_l0", g.norm(), f.re, f.re.abs().max(g.norm()));
                row.params.push_str(&format!(" t={t}"));
                rows.push(row);
            }
        }
    }
    let report = CheckReport::from_rows("b0_probe", hyp, ts.len(), 1e-9, rows, vec![], "");
    Ok(B0Probe { ts, normalized, c_value, c_vanishes, report })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strictly_dominant_ratio_tends_to_c() {
        let rs = RootSystem::new(2, 2.0).unwrap();
        let m = Multiplicity::new(3.0, 1.0, -1.0);
        let ts: Vec<f64> = (0..=25).map(f64::from).collect();
        let s = sharp_ratio(&rs, &m, &[0.6, 1.5], &[0.1, 0.3], &[0.45, 0.9], &ts, None).unwrap();
        assert!(s.report.passed, "{:?} {:?}", s.report.witnesses, s.ratios);
        assert!(s.c_limit.unwrap() > 0.0);
    }

    #[test]
    fn deformed_ratio_tends_to_scaled_c() {
        let rs = RootSystem::new(2, 2.0).unwrap();
        let m = Multiplicity::new(2.0, 1.0, 1.0);
        let ts: Vec<f64> = (0..=25).map(f64::from).collect();
        let d = Some(Deformation::new(0.6, 0.25));
        let s = sharp_ratio(&rs, &m, &[0.6, 1.5], &[0.1, 0.3], &[0.45, 0.9], &ts, d).unwrap();
        assert!(s.report.passed, "{:?} {:?} {:?}", s.report.witnesses, s.ratios, s.c_limit);
    }

    #[test]
    fn zero_parameter_ratio_is_bounded() {
        let rs = RootSystem::new(1, 2.0).unwrap();
        let m = Multiplicity::new(4.0, 0.0, -1.0);
        let ts: Vec<f64> = (0..=25).map(f64::from).collect();
        let s = sharp_ratio(&rs, &m, &[0.0], &[0.2], &[1.0], &ts, None).unwrap();
        assert!(s.report.passed, "{:?} {:?}", s.report.witnesses, s.ratios);
        assert!(s.c_limit.is_none());
    }

    #[test]
    fn refuses_outside_hypotheses() {
        let rs = RootSystem::new(1, 2.0).unwrap();
        let ts = [0.0, 1.0, 2.0];
        assert!(sharp_ratio(&rs, &Multiplicity::new(2.0, 0.0, 1.0), &[0.5], &[0.1], &[1.0], &ts, None).is_err());
        assert!(sharp_ratio(&rs, &Multiplicity::new(3.0, 0.0, -1.0), &[-0.5], &[0.1], &[1.0], &ts, None).is_err());
    }

    #[test]
    fn limit_is_c_for_regular_lambda() {
        let rs = RootSystem::new(2, 2.0).unwrap();
        let m = Multiplicity::new(2.0, 2.0, 1.0);
        let p = b0_probe(&rs, &m, &[1.2, 3.0], &[1.0, 2.0], 25.0, Some(&[0.3, -0.8])).unwrap();
        assert!(p.report.passed, "{:?}", p.report.witnesses);
        assert!(!p.c_vanishes);
    }

    #[test]
    fn vanishing_c_gives_decay() {
        let rs = RootSystem::new(1, 2.0).unwrap();
        let m = Multiplicity::new(-4.0, 0.0, 5.0);
        let p = b0_probe(&rs, &m, &[1.0], &[1.0], 25.0, None).unwrap();
        assert!(p.c_vanishes);
        assert!(p.report.passed, "{:?} {:?}", p.report.witnesses, p.normalized.last());
    }

    #[test]
    fn singular_lambda_is_unsupported() {
        let rs = RootSystem::new(2, 2.0).unwrap();
        let m = Multiplicity::new(2.0, 2.0, 1.0);
        assert!(matches!(b0_probe(&rs, &m, &[1.0, 1.0], &[0.5, 1.0], 25.0, None), Err(Error::Unsupported(_))));
    }
}

//! Membership in the convex hull `C(h)` of a Weyl orbit, and the boundedness classifiers built on it.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::evaluator::{log_u, log_v, OrbitSystem};
use crate::multiplicity::{deform, ell_range, rho, rho_hull, Deformation, MSet, Multiplicity};
use crate::rootsys::{dot, norm, real_part, RootSystem};

/// Boundary band for hull membership, relative to `1 + |h|`.
pub const HULL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Bounded,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct HullQuery {
    pub m: Multiplicity,
    pub deformation: Option<Deformation>,
    pub lambda: Vec<Complex64>,
    /// `None` where the classifier refuses to answer.
    pub verdict: Option<Verdict>,
    pub hull_vector: Vec<f64>,
    /// What the hull test says regardless of hypotheses.
    pub in_hull: bool,
    pub hypotheses_ok: bool,
    /// Set when the verdict is not backed by the boundedness theorem.
    pub advisory: bool,
    pub note: String,
}

/// Signed distance from `xi` to the boundary of `C(h)`: positive inside, negative outside
/// (outside it is the separating rate `max ⟨ξ⁺ − h, x̂⟩` over unit dominant `x̂`, which is at most
/// the Euclidean distance).
pub fn hull_margin(rs: &RootSystem, h: &[f64], xi: &[f64]) -> f64 {
    let (xd, _) = rs.dominant_representative(xi);
    let diff: Vec<f64> = h.iter().zip(&xd).map(|(a, b)| a - b).collect();
    let c = rs.simple_coords(&diff);
    if c.iter().all(|&v| v >= 0.0) {
        // facets through the dominant vertex have normals ϖ_k = (2/p)(0,…,0,1,…,1)
        let p = rs.long_norm();
        let r = rs.rank();
        (0..r)
            .map(|k| c[k] / (2.0 / p * ((r - k) as f64).sqrt()))
            .fold(f64::INFINITY, f64::min)
    } else {
        let minus: Vec<f64> = diff.iter().map(|v| -v).collect();
        -norm(&project_dominant(&minus))
    }
}

/// `ξ ∈ C(h)` by the dominance criterion: `h − ξ⁺` is a nonnegative combination of simple roots.
pub fn in_hull(rs: &RootSystem, h: &[f64], xi: &[f64]) -> bool {
    let (xd, _) = rs.dominant_representative(xi);
    let diff: Vec<f64> = h.iter().zip(&xd).map(|(a, b)| a - b).collect();
    let tol = HULL_TOL * (1.0 + norm(h));
    rs.simple_coords(&diff).iter().all(|&c| c >= -tol)
}

/// Euclidean projection onto the closed chamber `0 ≤ x_1 ≤ … ≤ x_r` (pool adjacent violators,
/// then clamp at zero).
pub fn project_dominant(v: &[f64]) -> Vec<f64> {
    let mut blocks: Vec<(f64, usize)> = Vec::with_capacity(v.len());
    for &x in v {
        blocks.push((x, 1));
        while blocks.len() > 1 {
            let (b, nb) = blocks[blocks.len() - 1];
            let (a, na) = blocks[blocks.len() - 2];
            if a <= b {
                break;
            }
            blocks.truncate(blocks.len() - 2);
            blocks.push(((a * na as f64 + b * nb as f64) / (na + nb) as f64, na + nb));
        }
    }
    blocks.into_iter().flat_map(|(x, n)| std::iter::repeat_n(x.max(0.0), n)).collect()
}

/// The unit dominant direction along which `F_λ` grows fastest, with that rate. `None` inside the hull.
pub fn growth_direction(rs: &RootSystem, h: &[f64], xi: &[f64]) -> Option<(Vec<f64>, f64)> {
    let (xd, _) = rs.dominant_representative(xi);
    let diff: Vec<f64> = xd.iter().zip(h).map(|(a, b)| a - b).collect();
    let pr = project_dominant(&diff);
    let n = norm(&pr);
    if n <= HULL_TOL * (1.0 + norm(h)) {
        return None;
    }
    Some((pr.iter().map(|v| v / n).collect(), dot(&diff, &pr) / n))
}

/// Hypotheses of the boundedness theorem for the undeformed function.
fn undeformed_hypotheses(m: &Multiplicity, rank: usize) -> (bool, String) {
    if MSet::M1.contains(m, rank) {
        (true, "m in M1".into())
    } else {
        (false, format!("{m} is not in M1"))
    }
}

/// Hypotheses for `F_{ℓ,ℓ̃,λ}`: `m ∈ M+`, `m_l ≥ 1`, `ℓ̃ ≥ 0` (`> 0` when `m_m = 0`),
/// `ℓ ∈ ]ℓ_min − 1, ℓ_max[`.
fn deformed_hypotheses(m: &Multiplicity, d: Deformation, rank: usize) -> (bool, String) {
    let (lo, hi) = ell_range(m);
    let mut bad = Vec::new();
    if !MSet::MPlus.contains(m, rank) {
        bad.push(format!("{m} is not in M+"));
    }
    if m.long < 1.0 {
        bad.push("m_l < 1".to_string());
    }
    if rank > 1 {
        let ok = if m.middle > 0.0 { d.ell_tilde >= 0.0 } else { d.ell_tilde > 0.0 };
        if !ok {
            bad.push("ellTilde outside its range".to_string());
        }
    }
    if !(d.ell > lo - 1.0 && d.ell < hi) {
        bad.push(format!("ell = {} outside ]{}, {}[", d.ell, lo - 1.0, hi));
    }
    if bad.is_empty() {
        (true, "m in M+, m_l >= 1, ell in ]ell_min-1, ell_max[".into())
    } else {
        (false, bad.join("; "))
    }
}

/// Classifies boundedness of `F_λ(m)`, or of `F_{ℓ,ℓ̃,λ}(m)` when a deformation is given.
pub fn is_bounded(rs: &RootSystem, m: &Multiplicity, lambda: &[Complex64], d: Option<Deformation>) -> HullQuery {
    let rank = rs.rank();
    let m = m.for_rank(rank);
    let re = real_part(lambda);
    let (h, (ok, mut note)) = match d {
        None => (rho(rs, &m), undeformed_hypotheses(&m, rank)),
        Some(d) => (rho_hull(rs, &m, d), deformed_hypotheses(&m, d, rank)),
    };
    let inside = in_hull(rs, &h, &re);
    let hull_verdict = if inside { Verdict::Bounded } else { Verdict::Unbounded };
    let at_ell_max = d.is_some_and(|d| rank > 1 && d.ell == ell_range(&m).1);
    let verdict = if at_ell_max {
        note = "ell = ell_max in rank > 1: boundedness criterion not established".into();
        None
    } else {
        Some(hull_verdict)
    };
    HullQuery {
        m,
        deformation: d,
        lambda: lambda.to_vec(),
        verdict,
        hull_vector: h,
        in_hull: inside,
        hypotheses_ok: ok && !at_ell_max,
        advisory: !ok || at_ell_max,
        note,
    }
}

/// `sup_t |u^{−ℓ} v^{−ℓ̃} F_λ(m(ℓ,ℓ̃); t x̂)|` over `ts`, from one integration along the ray.
pub fn ray_sup(
    rs: &RootSystem,
    m: &Multiplicity,
    d: Deformation,
    lambda: &[Complex64],
    dir: &[f64],
    ts: &[f64],
    tol: f64,
) -> Result<Vec<f64>> {
    let md = deform(&m.for_rank(rs.rank()), d).for_rank(rs.rank());
    let sys = OrbitSystem::new(rs, &md, lambda, dir)?;
    let (vals, _) = sys.solve(ts, tol)?;
    Ok(vals
        .iter()
        .zip(ts)
        .map(|(g, &t)| {
            let f = g.iter().sum::<Complex64>() / g.len() as f64;
            let x: Vec<f64> = dir.iter().map(|v| v * t).collect();
            let mut e = 0.0;
            if d.ell != 0.0 {
                e -= d.ell * log_u(rs, &x);
            }
            if d.ell_tilde != 0.0 {
                e -= d.ell_tilde * log_v(rs, &x);
            }
            f.norm() * e.exp()
        })
        .collect())
}

//! Geometric parameter values: Hermitian symmetric spaces (where `m_l = 1`)
//! and the small K-types of `sp(p,1)`, `so(2r,1)` and `so(p,q)`.
//!
//! Each entry records `ρ(m(2ℓ̃))` with the root normalisation used in the
//! literature for that case, so comparisons never depend on a hidden choice of `p`.

use serde::{Deserialize, Serialize};

use super::{deform, ell_range, Deformation, Multiplicity};
use crate::error::{Error, Result};

/// Unit in which [`CatalogEntry::rho`] is expressed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RhoBasis {
    /// Multiples of the short roots `β_j / 2` (the `e_j` coordinates when `p = 2`).
    Short,
    /// Multiples of the long roots `β_j`.
    Long,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    pub rank: usize,
    #[serde(rename = "baseMult")]
    pub base: Multiplicity,
    pub deform: Deformation,
    #[serde(rename = "sigmaTauMult")]
    pub sigma_tau: Multiplicity,
    #[serde(rename = "rhoCoords")]
    pub rho: Vec<f64>,
    #[serde(rename = "rhoBasis")]
    pub rho_basis: RhoBasis,
    /// `m_l − 1 − ℓ`, which gives the same function.
    #[serde(rename = "mirrorEll")]
    pub mirror_ell: f64,
    /// Whether `ℓ` lies in `[ℓ_min − 1, ℓ_max]`.
    #[serde(rename = "ellInRange")]
    pub ell_in_range: bool,
    #[serde(rename = "mirrorInRange")]
    pub mirror_in_range: bool,
    #[serde(rename = "sourceNote")]
    pub source: String,
}

impl CatalogEntry {
    #[allow(clippy::too_many_arguments)]
    fn new(
        name: String,
        rank: usize,
        base: Multiplicity,
        d: Deformation,
        sigma_tau: Multiplicity,
        rho: Vec<f64>,
        rho_basis: RhoBasis,
        source: &str,
    ) -> Self {
        let base = base.for_rank(rank);
        let sigma_tau = sigma_tau.for_rank(rank);
        let mirror_ell = base.long - 1.0 - d.ell;
        let (lo, hi) = ell_range(&base);
        let inside = |l: f64| lo - 1.0 <= l && l <= hi;
        CatalogEntry {
            name,
            rank,
            base,
            deform: d,
            sigma_tau,
            rho,
            rho_basis,
            mirror_ell,
            ell_in_range: inside(d.ell),
            mirror_in_range: inside(mirror_ell),
            source: source.to_string(),
        }
    }

    /// Multiplicity the deformed function is built from, `deform(base)`.
    pub fn deformed(&self) -> Multiplicity {
        deform(&self.base, self.deform).for_rank(self.rank)
    }

    /// `ρ(m(2ℓ̃))` in `e`-coordinates for long-root norm `p`.
    pub fn rho_e_coords(&self, p: f64) -> Vec<f64> {
        let scale = match self.rho_basis {
            RhoBasis::Short => p / 2.0,
            RhoBasis::Long => p,
        };
        self.rho.iter().map(|c| c * scale).collect()
    }
}

fn hermitian(name: String, rank: usize, m: Multiplicity, rho: Vec<f64>, ell: f64) -> CatalogEntry {
    let d = Deformation::new(ell, 0.0);
    let label = if ell == 0.0 { name } else { format!("{name}, tau_{ell}") };
    CatalogEntry::new(label, rank, m, d, deform(&m, d), rho, RhoBasis::Short, "Hermitian symmetric space, m_l = 1")
}

/// `SU(p,q)` with `p ≤ q`; type `C_p` when `p = q`.
pub fn su(p: usize, q: usize, ell: f64) -> Result<CatalogEntry> {
    if p == 0 || p > q {
        return Err(Error::Invalid("SU(p,q) needs 1 ≤ p ≤ q".into()));
    }
    let m = Multiplicity::new(2.0 * (q - p) as f64, 2.0, 1.0);
    let rho = (1..=p).map(|j| (q - p) as f64 + 2.0 * j as f64 - 1.0).collect();
    Ok(hermitian(format!("SU({p},{q})"), p, m, rho, ell))
}

/// `SO_0(p,2)`, type `C_2`.
pub fn so0_p2(p: usize, ell: f64) -> Result<CatalogEntry> {
    if p < 3 {
        return Err(Error::Invalid("SO_0(p,2) needs p ≥ 3".into()));
    }
    let m = Multiplicity::new(0.0, p as f64 - 2.0, 1.0);
    Ok(hermitian(format!("SO_0({p},2)"), 2, m, vec![1.0, p as f64 - 1.0], ell))
}

/// `SO*(2n)`, of rank `⌊n/2⌋`.
pub fn so_star(n: usize, ell: f64) -> Result<CatalogEntry> {
    if n < 4 {
        return Err(Error::Invalid("SO*(2n) needs n ≥ 4".into()));
    }
    let rank = n / 2;
    let (m, rho) = if n.is_multiple_of(2) {
        (Multiplicity::new(0.0, 4.0, 1.0), (1..=rank).map(|j| 4.0 * j as f64 - 3.0).collect())
    } else {
        (Multiplicity::new(4.0, 4.0, 1.0), (1..=rank).map(|j| 4.0 * j as f64 - 1.0).collect())
    };
    Ok(hermitian(format!("SO*({})", 2 * n), rank, m, rho, ell))
}

/// `Sp(n,R)`, type `C_n`.
pub fn sp_real(n: usize, ell: f64) -> Result<CatalogEntry> {
    if n == 0 {
        return Err(Error::Invalid("Sp(n,R) needs n ≥ 1".into()));
    }
    let m = Multiplicity::new(0.0, 1.0, 1.0);
    Ok(hermitian(format!("Sp({n},R)"), n, m, (1..=n).map(|j| j as f64).collect(), ell))
}

pub fn e6(ell: f64) -> CatalogEntry {
    hermitian("e6(-14)".into(), 2, Multiplicity::new(8.0, 6.0, 1.0), vec![5.0, 11.0], ell)
}

pub fn e7(ell: f64) -> CatalogEntry {
    hermitian("e7(-25)".into(), 3, Multiplicity::new(0.0, 8.0, 1.0), vec![1.0, 9.0, 17.0], ell)
}

/// `sp(p,1)` with the small K-type `τ_n`: `ℓ_n = n + 1`.
pub fn sp_p1(p: usize, n: usize) -> Result<CatalogEntry> {
    if p < 2 || n == 0 {
        return Err(Error::Invalid("sp(p,1) needs p ≥ 2 and n ≥ 1".into()));
    }
    let (pf, nf) = (p as f64, n as f64);
    let base = Multiplicity::new(4.0 * (pf - 1.0), 0.0, 3.0);
    let d = Deformation::new(nf + 1.0, 0.0);
    let sigma = Multiplicity::new(4.0 * pf - 2.0 + 2.0 * nf, 0.0, 1.0 - 2.0 * nf);
    Ok(CatalogEntry::new(
        format!("sp({p},1), tau_{n}"),
        1,
        base,
        d,
        sigma,
        vec![2.0 * pf + 1.0],
        RhoBasis::Short,
        "small K-type of Sp(p,1); rho = (2p+1) alpha, alpha short",
    ))
}

/// `so(2r,1)` with `τ_s^±`: base `(0, 2r−1)` on `{±α/2, ±α}` and `ℓ_s = −s`.
pub fn so_2r1(r: usize, s: usize) -> Result<CatalogEntry> {
    if r < 2 || s == 0 {
        return Err(Error::Invalid("so(2r,1) needs r ≥ 2 and s ≥ 1".into()));
    }
    let (rf, sf) = (r as f64, s as f64);
    let base = Multiplicity::new(0.0, 0.0, 2.0 * rf - 1.0);
    let d = Deformation::new(-sf, 0.0);
    let sigma = Multiplicity::new(-2.0 * sf, 0.0, 2.0 * rf + 2.0 * sf - 1.0);
    Ok(CatalogEntry::new(
        format!("so({},1), tau_{s}", 2 * r),
        1,
        base,
        d,
        sigma,
        vec![rf - 0.5],
        RhoBasis::Long,
        "small K-type of Spin(2r,1); rho = (r-1/2) alpha, alpha long",
    ))
}

/// `so(p,q)`, `p > q ≥ 3`; case 1 is `τ = 1 ⊗ σ`, case 2 is `τ = σ ⊗ 1` (needs `p` even, `q` odd).
pub fn so_pq(p: usize, q: usize, case: u8) -> Result<CatalogEntry> {
    if q < 3 || p <= q {
        return Err(Error::Invalid("so(p,q) needs p > q ≥ 3".into()));
    }
    let k = (p - q) as f64;
    let base = Multiplicity::new(0.0, 0.0, k);
    let (d, sigma) = match case {
        1 => (Deformation::new(0.0, 0.5), Multiplicity::new(0.0, 1.0, k)),
        2 if p.is_multiple_of(2) && q % 2 == 1 => (Deformation::new(k, 0.5), Multiplicity::new(2.0 * k, 1.0, -k)),
        2 => return Err(Error::Invalid("case 2 needs p even and q odd".into())),
        _ => return Err(Error::Invalid("case must be 1 or 2".into())),
    };
    let rho = (1..=q).map(|j| k / 2.0 + (j - 1) as f64).collect();
    Ok(CatalogEntry::new(
        format!("so({p},{q}), case {case}"),
        q,
        base,
        d,
        sigma,
        rho,
        RhoBasis::Long,
        "spin small K-type of Spin(p,q); rho_{G/K} = rho(m(2 ell~))",
    ))
}

/// The fixed list of concrete instances.
pub fn catalog() -> Vec<CatalogEntry> {
    let ok = |e: Result<CatalogEntry>| e.expect("catalog parameters are valid");
    vec![
        ok(su(1, 3, 0.0)),
        ok(su(2, 2, 0.0)),
        ok(su(2, 3, 0.0)),
        ok(su(2, 4, 1.0)),
        ok(su(3, 4, 0.0)),
        ok(so0_p2(5, 0.0)),
        ok(so_star(5, 0.0)),
        ok(so_star(7, 0.0)),
        ok(so_star(8, 0.0)),
        ok(so_star(10, 0.0)),
        ok(so_star(10, 2.0)),
        ok(sp_real(2, 0.0)),
        ok(sp_real(3, 0.0)),
        e6(0.0),
        e6(-3.0),
        e7(0.0),
        ok(sp_p1(2, 1)),
        ok(sp_p1(3, 2)),
        ok(so_2r1(2, 1)),
        ok(so_2r1(3, 1)),
        ok(so_2r1(3, 2)),
        ok(so_pq(7, 3, 1)),
        ok(so_pq(8, 3, 2)),
    ]
}

/// Builds an entry from a family name such as `"sp(2,1)"`, `"SU(2,4)"` or `"e6(-14)"`.
///
/// `n` selects `τ_n` for `sp(p,1)` and `s` for `so(2r,1)`; `case` selects the `so(p,q)` K-type;
/// `ell` is the line-bundle parameter for Hermitian spaces.
pub fn lookup(name: &str, n: Option<usize>, case: Option<u8>, ell: Option<f64>) -> Result<CatalogEntry> {
    let compact: String = name.chars().filter(|c| !c.is_whitespace()).collect();
    let ell = ell.unwrap_or(0.0);
    let (head, args) = match compact.find('(') {
        Some(i) if compact.ends_with(')') => (&compact[..i], &compact[i + 1..compact.len() - 1]),
        _ => return Err(Error::Invalid(format!("cannot parse group name {name:?}"))),
    };
    let parts: Vec<&str> = args.split(',').collect();
    let int = |s: &str| s.parse::<usize>().map_err(|_| Error::Invalid(format!("bad parameter {s:?} in {name:?}")));
    match (head, parts.as_slice()) {
        ("SU", [p, q]) => su(int(p)?, int(q)?, ell),
        ("SO_0" | "SO0", [p, "2"]) => so0_p2(int(p)?, ell),
        ("SO*", [two_n]) => {
            let v = int(two_n)?;
            if v % 2 != 0 {
                return Err(Error::Invalid("SO*(2n) needs an even argument".into()));
            }
            so_star(v / 2, ell)
        }
        ("Sp", [k, "R"]) => sp_real(int(k)?, ell),
        ("e6" | "E6", ["-14"]) => Ok(e6(ell)),
        ("e7" | "E7", ["-25"]) => Ok(e7(ell)),
        ("sp", [p, "1"]) => sp_p1(int(p)?, n.unwrap_or(1)),
        ("so", [a, b]) => {
            let (a, b) = (int(a)?, int(b)?);
            if b == 1 {
                if a % 2 != 0 {
                    return Err(Error::Invalid("so(2r,1) needs an even first argument".into()));
                }
                so_2r1(a / 2, n.unwrap_or(1))
            } else {
                so_pq(a, b, case.unwrap_or(1))
            }
        }
        _ => Err(Error::Invalid(format!("unknown group {name:?}"))),
    }
}

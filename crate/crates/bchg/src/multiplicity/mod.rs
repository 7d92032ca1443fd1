//! Multiplicity triples, their classification, `ρ(m)` and the `(ℓ, ℓ̃)` deformation.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rootsys::{RootClass, RootSystem};

pub mod catalog;

pub use catalog::{catalog, CatalogEntry, RhoBasis};

/// Values `(m_s, m_m, m_l)` on short, middle and long roots.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Multiplicity {
    pub short: f64,
    pub middle: f64,
    pub long: f64,
}

impl Multiplicity {
    pub const fn new(short: f64, middle: f64, long: f64) -> Self {
        Multiplicity { short, middle, long }
    }

    pub const ZERO: Multiplicity = Multiplicity::new(0.0, 0.0, 0.0);

    /// Stores `m_m = 0` in rank one, where there are no middle roots.
    pub fn for_rank(self, rank: usize) -> Self {
        if rank == 1 {
            Multiplicity { middle: 0.0, ..self }
        } else {
            self
        }
    }

    pub fn of(&self, class: RootClass) -> f64 {
        match class {
            RootClass::Short => self.short,
            RootClass::Middle => self.middle,
            RootClass::Long => self.long,
        }
    }

    /// `m_{2α}`: the long multiplicity for short roots, zero otherwise.
    pub fn doubled(&self, class: RootClass) -> f64 {
        match class {
            RootClass::Short => self.long,
            _ => 0.0,
        }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.short, self.middle, self.long]
    }
}

impl fmt::Display for Multiplicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.short, self.middle, self.long)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum MSet {
    #[serde(rename = "M+")]
    MPlus,
    M0,
    M1,
    M2,
    M3,
    MC0,
}

impl MSet {
    pub const ALL: [MSet; 6] = [MSet::MPlus, MSet::M0, MSet::M1, MSet::M2, MSet::M3, MSet::MC0];

    pub fn label(self) -> &'static str {
        match self {
            MSet::MPlus => "M+",
            MSet::M0 => "M0",
            MSet::M1 => "M1",
            MSet::M2 => "M2",
            MSet::M3 => "M3",
            MSet::MC0 => "MC0",
        }
    }

    pub fn contains(self, m: &Multiplicity, rank: usize) -> bool {
        let (s, l) = (m.short, m.long);
        // middle-root conditions are vacuous in rank one
        let mid = |ok: bool| rank == 1 || ok;
        match self {
            MSet::MPlus => s >= 0.0 && l >= 0.0 && mid(m.middle >= 0.0),
            MSet::M0 | MSet::MC0 => s + l >= 0.0 && mid(m.middle >= 0.0),
            MSet::M1 => s > 0.0 && s + 2.0 * l > 0.0 && mid(m.middle > 0.0),
            MSet::M2 => l >= 0.0 && s + l >= 0.0 && mid(m.middle >= 0.0),
            MSet::M3 => l <= 0.0 && s + 2.0 * l >= 0.0 && mid(m.middle >= 0.0),
        }
    }
}

impl fmt::Display for MSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

pub fn classify(m: &Multiplicity, rank: usize) -> Vec<MSet> {
    MSet::ALL.into_iter().filter(|s| s.contains(m, rank)).collect()
}

pub fn in_m0(m: &Multiplicity, rank: usize) -> bool {
    MSet::M0.contains(m, rank)
}

/// `ρ(m)_j = (p/2)(m_s/2 + m_l + (j−1) m_m)`.
pub fn rho(rs: &RootSystem, m: &Multiplicity) -> Vec<f64> {
    let m = m.for_rank(rs.rank());
    let h = rs.long_norm() / 2.0;
    (0..rs.rank()).map(|j| h * (m.short / 2.0 + m.long + j as f64 * m.middle)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Deformation {
    pub ell: f64,
    #[serde(rename = "ellTilde")]
    pub ell_tilde: f64,
}

impl Deformation {
    pub const NONE: Deformation = Deformation { ell: 0.0, ell_tilde: 0.0 };

    pub const fn new(ell: f64, ell_tilde: f64) -> Self {
        Deformation { ell, ell_tilde }
    }

    pub fn is_trivial(&self) -> bool {
        self.ell == 0.0 && self.ell_tilde == 0.0
    }
}

/// `m(ℓ, ℓ̃) = (m_s + 2ℓ, m_m + 2ℓ̃, m_l − 2ℓ)`.
pub fn deform(m: &Multiplicity, d: Deformation) -> Multiplicity {
    Multiplicity::new(m.short + 2.0 * d.ell, m.middle + 2.0 * d.ell_tilde, m.long - 2.0 * d.ell)
}

/// As [`deform`], rejecting results outside `M0`.
pub fn deform_checked(m: &Multiplicity, d: Deformation, rank: usize) -> Result<Multiplicity> {
    let out = deform(m, d).for_rank(rank);
    if in_m0(&out, rank) {
        Ok(out)
    } else {
        Err(Error::Domain(format!("m(ℓ, ℓ̃) = {out} is not in M0")))
    }
}

/// `(ℓ_min, ℓ_max) = (−m_s/2, m_s/2 + m_l)`.
pub fn ell_range(m: &Multiplicity) -> (f64, f64) {
    (-m.short / 2.0, m.short / 2.0 + m.long)
}

/// Writes `m0 ∈ M+ ∪ M3` as `m(ℓ, 0)` with `m ∈ M+` and `m_l = 0`.
pub fn decompose_m1(m0: &Multiplicity, rank: usize) -> Option<(Multiplicity, f64)> {
    if !(MSet::MPlus.contains(m0, rank) || MSet::M3.contains(m0, rank)) {
        return None;
    }
    let base = Multiplicity::new(m0.short + m0.long, m0.middle, 0.0).for_rank(rank);
    Some((base, -m0.long / 2.0))
}

/// `ρ(m(0, 2ℓ̃))`, the hull vector for deformed boundedness questions.
pub fn rho_hull(rs: &RootSystem, m: &Multiplicity, d: Deformation) -> Vec<f64> {
    rho(rs, &deform(m, Deformation::new(0.0, 2.0 * d.ell_tilde)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn labels(m: Multiplicity, r: usize) -> Vec<&'static str> {
        classify(&m, r).into_iter().map(MSet::label).collect()
    }

    #[test]
    fn classification_examples() {
        assert_eq!(labels(Multiplicity::new(2.0, 2.0, 1.0), 2), ["M+", "M0", "M1", "M2", "MC0"]);
        assert_eq!(labels(Multiplicity::new(4.0, 1.0, -1.0), 2), ["M0", "M1", "M3", "MC0"]);
        assert!(labels(Multiplicity::new(1.0, 0.0, -2.0), 2).is_empty());
        // rank one ignores m_m
        assert!(MSet::M1.contains(&Multiplicity::new(1.0, -5.0, 0.0), 1));
    }

    #[test]
    fn rho_examples() {
        let rs1 = RootSystem::new(1, 2.0).unwrap();
        assert_eq!(rho(&rs1, &Multiplicity::ZERO), vec![0.0]);
        let rs2 = RootSystem::new(2, 2.0).unwrap();
        assert_eq!(rho(&rs2, &Multiplicity::new(2.0, 2.0, 1.0)), vec![2.0, 4.0]);
    }

    #[test]
    fn rho_is_half_sum() {
        let rs = RootSystem::new(3, 1.7).unwrap();
        let m = Multiplicity::new(1.3, 0.4, -0.2);
        let mut half = [0.0; 3];
        for a in rs.positive_roots() {
            for (h, c) in half.iter_mut().zip(&a.coords) {
                *h += 0.5 * m.of(a.class) * c;
            }
        }
        for (a, b) in half.iter().zip(rho(&rs, &m)) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn deformation_examples() {
        for n in 0..4 {
            let d = Deformation::new(f64::from(n) + 1.0, 0.0);
            let out = deform(&Multiplicity::new(4.0, 0.0, 3.0), d);
            assert_eq!(out, Multiplicity::new(6.0 + 2.0 * f64::from(n), 0.0, 1.0 - 2.0 * f64::from(n)));
        }
        let so = deform(&Multiplicity::new(0.0, 0.0, 3.0), Deformation::new(0.0, 0.5));
        assert_eq!(so, Multiplicity::new(0.0, 1.0, 3.0));
        let m = Multiplicity::new(1.0, 2.0, 3.0);
        assert_eq!(deform(&m, Deformation::NONE), m);
        assert!(deform_checked(&m, Deformation::new(0.0, -1.5), 2).is_err());
    }

    #[test]
    fn ell_range_examples() {
        assert_eq!(ell_range(&Multiplicity::new(4.0, 0.0, 3.0)), (-2.0, 5.0));
        assert_eq!(ell_range(&Multiplicity::new(4.0, 4.0, 1.0)), (-2.0, 3.0));
        assert_eq!(ell_range(&Multiplicity::new(8.0, 6.0, 1.0)), (-4.0, 5.0));
    }

    #[test]
    fn decomposition_examples() {
        let (m, l) = decompose_m1(&Multiplicity::new(4.0, 1.0, -1.0), 2).unwrap();
        assert_eq!((m, l), (Multiplicity::new(3.0, 1.0, 0.0), 0.5));
        let (lo, hi) = ell_range(&m);
        assert!(lo < l && l < hi);
        let (m, l) = decompose_m1(&Multiplicity::new(2.0, 2.0, 1.0), 2).unwrap();
        assert_eq!((m, l), (Multiplicity::new(3.0, 2.0, 0.0), -0.5));
        assert!(decompose_m1(&Multiplicity::new(1.0, 0.0, -2.0), 2).is_none());
    }

    #[test]
    fn deformed_rho_shift() {
        let rs = RootSystem::new(3, 2.0).unwrap();
        let m = Multiplicity::new(3.0, 1.5, 0.5);
        let d = Deformation::new(0.7, 0.3);
        let lhs = rho_hull(&rs, &m, d);
        let base = rho(&rs, &deform(&m, d));
        let long = rs.sum_long();
        let mid = rs.sum_middle_pairs();
        for j in 0..3 {
            let rhs = base[j] + d.ell / 2.0 * long[j] + d.ell_tilde / 2.0 * mid[j];
            assert!((lhs[j] - rhs).abs() < 1e-13);
        }
    }

    fn mult() -> impl Strategy<Value = Multiplicity> {
        (-6.0f64..6.0, -3.0f64..3.0, -6.0f64..6.0).prop_map(|(s, m, l)| Multiplicity::new(s, m, l))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(2000))]

        #[test]
        fn inclusions(m in mult(), r in 1usize..4) {
            let has = |s: MSet| s.contains(&m, r);
            prop_assert!(!has(MSet::MPlus) || has(MSet::M2));
            prop_assert!(!has(MSet::M2) || has(MSet::M0));
            prop_assert!(!has(MSet::M1) || has(MSet::M0));
            prop_assert!(!has(MSet::M3) || has(MSet::M0));
        }

        #[test]
        fn positive_coefficient_lemma(m in mult(), t in -50.0f64..50.0) {
            if MSet::MPlus.contains(&m, 2) || MSet::M3.contains(&m, 2) {
                prop_assert!(m.short / 2.0 + m.long / (1.0 + t.exp()) >= -1e-12);
            }
            if MSet::M2.contains(&m, 2) || MSet::M3.contains(&m, 2) {
                let e = t.exp();
                prop_assert!(m.short / 2.0 + m.long * (1.0 + e * e) / ((1.0 + e) * (1.0 + e)) >= -1e-12);
            }
        }

        #[test]
        fn deform_preserves_sum(m in mult(), l in -4.0f64..4.0, lt in -2.0f64..2.0) {
            let a = deform(&m, Deformation::new(l, lt));
            // exact for dyadic inputs; within an ulp otherwise
            prop_assert!((a.short + a.long - (m.short + m.long)).abs() <= 4.0 * f64::EPSILON * 16.0);
            let b = deform(&deform(&m, Deformation::new(l, 0.0)), Deformation::new(0.0, lt));
            prop_assert_eq!(a, b);
        }

        #[test]
        fn deform_exact_on_dyadics(s in -24i32..24, mm in -8i32..8, l in -24i32..24, e in -16i32..16) {
            let m = Multiplicity::new(f64::from(s) / 4.0, f64::from(mm) / 4.0, f64::from(l) / 4.0);
            let a = deform(&m, Deformation::new(f64::from(e) / 8.0, 0.0));
            prop_assert_eq!(a.short + a.long, m.short + m.long);
        }

        #[test]
        fn rho_dominant_on_m_plus(m in mult(), r in 1usize..5) {
            let rs = RootSystem::new(r, 2.0).unwrap();
            let p = rho(&rs, &m);
            if MSet::MPlus.contains(&m, r) {
                prop_assert!(p[0] >= 0.0 && p.windows(2).all(|w| w[0] <= w[1]));
            }
            if MSet::M1.contains(&m, r) {
                prop_assert!(p.iter().any(|&c| c != 0.0));
            }
        }

        #[test]
        fn decomposition_round_trip(m in mult(), r in 1usize..4) {
            let m = m.for_rank(r);
            if let Some((base, l)) = decompose_m1(&m, r) {
                prop_assert!(MSet::MPlus.contains(&base, r));
                let (lo, hi) = ell_range(&base);
                prop_assert!(lo <= l && l <= hi);
                let back = deform(&base, Deformation::new(l, 0.0));
                prop_assert!((back.short - m.short).abs() < 1e-12 && (back.long - m.long).abs() < 1e-12);
                if MSet::M1.contains(&m, r) {
                    prop_assert!(lo < l && l < hi);
                }
            }
        }

        #[test]
        fn mc0_stable_under_ell(m in mult(), l in -5.0f64..5.0) {
            let d = deform(&m, Deformation::new(l, 0.0));
            prop_assert_eq!(MSet::MC0.contains(&m, 2), MSet::MC0.contains(&d, 2));
        }
    }
}

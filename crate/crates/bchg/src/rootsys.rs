//! The BC_r root system in the orthonormal basis `e_j = β_j / p`.
//!
//! Positive roots come in three classes: short `(p/2) e_j`, middle
//! `(p/2)(e_j ± e_i)` for `i < j`, and long `p e_j`. The Weyl group is the
//! hyperoctahedral group of signed permutations. The closed positive chamber
//! is `0 ≤ x_1 ≤ … ≤ x_r`.

use std::collections::HashMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest rank the library accepts; orbit sums grow like `2^r r!`.
pub const MAX_RANK: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RootClass {
    Short,
    Middle,
    Long,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Root {
    pub class: RootClass,
    pub coords: Vec<f64>,
    /// Coordinates in the simple-root basis; always nonnegative integers for positive roots.
    pub simple: Vec<u32>,
    /// `⟨α, α⟩`.
    pub norm2: f64,
    reflection: SignedPerm,
}

impl Root {
    /// `α(x)`.
    pub fn eval(&self, x: &[f64]) -> f64 {
        dot(&self.coords, x)
    }

    pub fn eval_c(&self, lambda: &[Complex64]) -> Complex64 {
        lambda.iter().zip(&self.coords).map(|(l, a)| l * a).sum()
    }

    /// `λ_α = ⟨λ, α⟩ / ⟨α, α⟩`.
    pub fn coroot_pairing(&self, lambda: &[Complex64]) -> Complex64 {
        self.eval_c(lambda) / self.norm2
    }

    pub fn reflection(&self) -> &SignedPerm {
        &self.reflection
    }
}

/// A signed permutation acting by `(w v)[perm[i]] = sign[i] * v[i]`,
/// i.e. `w e_i = sign[i] e_{perm[i]}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignedPerm {
    pub perm: Vec<usize>,
    pub sign: Vec<i8>,
}

impl SignedPerm {
    pub fn identity(r: usize) -> Self {
        SignedPerm { perm: (0..r).collect(), sign: vec![1; r] }
    }

    pub fn rank(&self) -> usize {
        self.perm.len()
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| p == i) && self.sign.iter().all(|&s| s == 1)
    }

    pub fn act(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; v.len()];
        for i in 0..v.len() {
            out[self.perm[i]] = f64::from(self.sign[i]) * v[i];
        }
        out
    }

    pub fn act_c(&self, v: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
        for i in 0..v.len() {
            out[self.perm[i]] = v[i] * f64::from(self.sign[i]);
        }
        out
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &SignedPerm) -> SignedPerm {
        let r = self.rank();
        let mut perm = vec![0; r];
        let mut sign = vec![1; r];
        for i in 0..r {
            let j = other.perm[i];
            perm[i] = self.perm[j];
            sign[i] = other.sign[i] * self.sign[j];
        }
        SignedPerm { perm, sign }
    }

    pub fn inverse(&self) -> SignedPerm {
        let r = self.rank();
        let mut perm = vec![0; r];
        let mut sign = vec![1; r];
        for i in 0..r {
            perm[self.perm[i]] = i;
            sign[self.perm[i]] = self.sign[i];
        }
        SignedPerm { perm, sign }
    }
}

#[derive(Debug, Clone)]
pub struct RootSystem {
    rank: usize,
    long_norm: f64,
    roots: Vec<Root>,
    weyl: Vec<SignedPerm>,
    weyl_index: HashMap<SignedPerm, usize>,
}

impl RootSystem {
    pub fn new(rank: usize, long_norm: f64) -> Result<Self> {
        if rank == 0 {
            return Err(Error::Invalid("rank must be positive".into()));
        }
        if rank > MAX_RANK {
            return Err(Error::Invalid(format!("rank {rank} exceeds the supported maximum {MAX_RANK}")));
        }
        if !(long_norm > 0.0) || !long_norm.is_finite() {
            return Err(Error::Invalid("long root norm must be positive".into()));
        }
        let h = long_norm / 2.0;
        let mut roots = Vec::with_capacity(rank * (rank + 1));
        let unit = |j: usize, s: f64| {
            let mut v = vec![0.0; rank];
            v[j] = s;
            v
        };
        for j in 0..rank {
            roots.push(make_root(RootClass::Short, unit(j, h), long_norm, flip(rank, j)));
        }
        for j in 0..rank {
            for i in 0..j {
                let mut minus = vec![0.0; rank];
                minus[j] = h;
                minus[i] = -h;
                roots.push(make_root(RootClass::Middle, minus, long_norm, swap(rank, i, j, 1)));
                let mut plus = vec![0.0; rank];
                plus[j] = h;
                plus[i] = h;
                roots.push(make_root(RootClass::Middle, plus, long_norm, swap(rank, i, j, -1)));
            }
        }
        for j in 0..rank {
            roots.push(make_root(RootClass::Long, unit(j, long_norm), long_norm, flip(rank, j)));
        }
        let weyl = hyperoctahedral(rank);
        let weyl_index = weyl.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        Ok(RootSystem { rank, long_norm, roots, weyl, weyl_index })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// The common norm `p` of the long roots.
    pub fn long_norm(&self) -> f64 {
        self.long_norm
    }

    pub fn positive_roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn roots_of(&self, class: RootClass) -> impl Iterator<Item = &Root> {
        self.roots.iter().filter(move |a| a.class == class)
    }

    /// `σ_1 = β_1/2`, `σ_k = (β_k − β_{k−1})/2`.
    pub fn simple_roots(&self) -> Vec<Vec<f64>> {
        let h = self.long_norm / 2.0;
        (0..self.rank)
            .map(|k| {
                let mut v = vec![0.0; self.rank];
                v[k] = h;
                if k > 0 {
                    v[k - 1] = -h;
                }
                v
            })
            .collect()
    }

    /// Elements of W, identity first.
    pub fn weyl_group(&self) -> &[SignedPerm] {
        &self.weyl
    }

    pub fn weyl_order(&self) -> usize {
        self.weyl.len()
    }

    pub fn weyl_position(&self, w: &SignedPerm) -> Option<usize> {
        self.weyl_index.get(w).copied()
    }

    /// Reorders `v` into the closed chamber `0 ≤ v_1 ≤ … ≤ v_r`; returns `(w v, w)`.
    pub fn dominant_representative(&self, v: &[f64]) -> (Vec<f64>, SignedPerm) {
        let r = self.rank;
        let mut order: Vec<usize> = (0..r).collect();
        order.sort_by(|&a, &b| v[a].abs().total_cmp(&v[b].abs()).then(a.cmp(&b)));
        let mut perm = vec![0; r];
        let mut sign = vec![1; r];
        for (target, &src) in order.iter().enumerate() {
            perm[src] = target;
            sign[src] = if v[src] < 0.0 { -1 } else { 1 };
        }
        let w = SignedPerm { perm, sign };
        (w.act(v), w)
    }

    /// Coefficients `c` with `Σ c_k σ_k = v`.
    pub fn simple_coords(&self, v: &[f64]) -> Vec<f64> {
        let mut c = vec![0.0; self.rank];
        let mut acc = 0.0;
        for k in (0..self.rank).rev() {
            acc += v[k];
            c[k] = 2.0 * acc / self.long_norm;
        }
        c
    }

    /// Inverse of [`simple_coords`](Self::simple_coords) for lattice points.
    pub fn from_simple(&self, n: &[u32]) -> Vec<f64> {
        let h = self.long_norm / 2.0;
        (0..self.rank)
            .map(|j| {
                let next = if j + 1 < self.rank { f64::from(n[j + 1]) } else { 0.0 };
                h * (f64::from(n[j]) - next)
            })
            .collect()
    }

    /// All `ν ∈ Λ` with height at most `max_height`, by height then lexicographically.
    pub fn enumerate_cone(&self, max_height: u32) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        for h in 0..=max_height {
            let mut shell = Vec::new();
            compositions(self.rank, h, &mut vec![], &mut shell);
            shell.sort();
            out.extend(shell);
        }
        out
    }

    /// `min_α |α(x)|` over positive roots.
    pub fn wall_distance(&self, x: &[f64]) -> f64 {
        self.roots.iter().map(|a| a.eval(x).abs()).fold(f64::INFINITY, f64::min)
    }

    /// `min_k σ_k(x)`; positive exactly when `x` is in the open chamber.
    pub fn wall_margin(&self, x: &[f64]) -> f64 {
        let h = self.long_norm / 2.0;
        (0..self.rank)
            .map(|k| h * (x[k] - if k > 0 { x[k - 1] } else { 0.0 }))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn is_regular(&self, x: &[f64], tol: f64) -> bool {
        self.wall_distance(x) > tol
    }

    /// `Σ_j β_j` as a covector.
    pub fn sum_long(&self) -> Vec<f64> {
        vec![self.long_norm; self.rank]
    }

    /// `Σ_{i<j} (β_j ± β_i) = Σ_j 2(j−1) β_j`.
    pub fn sum_middle_pairs(&self) -> Vec<f64> {
        (0..self.rank).map(|j| 2.0 * j as f64 * self.long_norm).collect()
    }

    /// `max_w (wλ)(x)` for real `λ`.
    pub fn max_orbit_pairing(&self, lambda: &[f64], x: &[f64]) -> f64 {
        // the maximum over W is attained by pairing the dominant representatives
        let (l, _) = self.dominant_representative(lambda);
        let (y, _) = self.dominant_representative(x);
        dot(&l, &y)
    }

    /// `min_w (wλ)(x)` for real `λ`.
    pub fn min_orbit_pairing(&self, lambda: &[f64], x: &[f64]) -> f64 {
        -self.max_orbit_pairing(lambda, x)
    }
}

fn make_root(class: RootClass, coords: Vec<f64>, p: f64, reflection: SignedPerm) -> Root {
    let norm2 = dot(&coords, &coords);
    let simple = {
        let mut c = vec![0u32; coords.len()];
        let mut acc = 0.0;
        for k in (0..coords.len()).rev() {
            acc += coords[k];
            c[k] = (2.0 * acc / p).round() as u32;
        }
        c
    };
    Root { class, coords, simple, norm2, reflection }
}

fn flip(r: usize, j: usize) -> SignedPerm {
    let mut w = SignedPerm::identity(r);
    w.sign[j] = -1;
    w
}

fn swap(r: usize, i: usize, j: usize, s: i8) -> SignedPerm {
    let mut w = SignedPerm::identity(r);
    w.perm[i] = j;
    w.perm[j] = i;
    w.sign[i] = s;
    w.sign[j] = s;
    w
}

fn hyperoctahedral(r: usize) -> Vec<SignedPerm> {
    let mut perms = vec![vec![]];
    for k in 0..r {
        let mut next = Vec::new();
        for p in &perms {
            for pos in 0..=k {
                let mut q: Vec<usize> = p.clone();
                q.insert(pos, k);
                next.push(q);
            }
        }
        perms = next;
    }
    perms.sort();
    let mut out = Vec::with_capacity(perms.len() << r);
    for p in perms {
        for bits in 0u32..(1 << r) {
            let sign = (0..r).map(|i| if bits >> i & 1 == 1 { -1 } else { 1 }).collect();
            out.push(SignedPerm { perm: p.clone(), sign });
        }
    }
    out
}

fn compositions(parts: usize, total: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if prefix.len() + 1 == parts {
        let mut v = prefix.clone();
        v.push(total);
        out.push(v);
        return;
    }
    for k in 0..=total {
        prefix.push(k);
        compositions(parts, total - k, prefix, out);
        prefix.pop();
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Bilinear pairing of a complex covector with a real vector.
pub fn pair_c(lambda: &[Complex64], x: &[f64]) -> Complex64 {
    lambda.iter().zip(x).map(|(l, v)| l * v).sum()
}

/// Bilinear (not Hermitian) form on complex covectors.
pub fn dot_c(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn to_complex(v: &[f64]) -> Vec<Complex64> {
    v.iter().map(|&x| Complex64::new(x, 0.0)).collect()
}

pub fn real_part(v: &[Complex64]) -> Vec<f64> {
    v.iter().map(|z| z.re).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn counts() {
        for r in 1..=4 {
            let rs = RootSystem::new(r, 2.0).unwrap();
            assert_eq!(rs.positive_roots().len(), r * (r + 1));
            let fact: usize = (1..=r).product();
            assert_eq!(rs.weyl_order(), (1 << r) * fact);
        }
        assert!(RootSystem::new(0, 2.0).is_err());
        assert!(RootSystem::new(2, 0.0).is_err());
        assert!(RootSystem::new(7, 2.0).is_err());
    }

    #[test]
    fn rank_one_roots() {
        let rs = RootSystem::new(1, 2.0).unwrap();
        let coords: Vec<f64> = rs.positive_roots().iter().map(|a| a.coords[0]).collect();
        assert_eq!(coords, vec![1.0, 2.0]);
        assert_eq!(rs.weyl_order(), 2);
    }

    #[test]
    fn simple_coordinates_of_roots() {
        let rs = RootSystem::new(3, 2.0).unwrap();
        let s = rs.simple_roots();
        assert_eq!(rs.simple_coords(&s[0]), vec![1.0, 0.0, 0.0]);
        for a in rs.roots_of(RootClass::Long) {
            let j = a.coords.iter().position(|&c| c != 0.0).unwrap();
            let expect: Vec<u32> = (0..3).map(|k| if k <= j { 2 } else { 0 }).collect();
            assert_eq!(a.simple, expect);
        }
        // (β_3 + β_1)/2 = 2σ_1 + σ_2 + σ_3
        let a = rs.positive_roots().iter().find(|a| a.coords == vec![1.0, 0.0, 1.0]).unwrap();
        assert_eq!(a.simple, vec![2, 1, 1]);
        for a in rs.positive_roots() {
            let back = rs.from_simple(&a.simple);
            assert_eq!(back, a.coords);
        }
    }

    #[test]
    fn weyl_examples() {
        let rs = RootSystem::new(2, 2.0).unwrap();
        assert!(rs.weyl_group()[0].is_identity());
        let mut flip1 = SignedPerm::identity(2);
        flip1.sign[0] = -1;
        assert_eq!(flip1.act(&[1.5, -0.3]), vec![-1.5, -0.3]);
        let (d, w) = rs.dominant_representative(&[-3.0, 1.0]);
        assert_eq!(d, vec![1.0, 3.0]);
        assert_eq!(w.act(&[-3.0, 1.0]), d);
        assert!(rs.dominant_representative(&[0.0, 0.0]).1.is_identity());
        assert!(rs.dominant_representative(&[2.0, 2.0]).1.is_identity());
    }

    #[test]
    fn group_closure_and_root_permutation() {
        for r in 1..=3 {
            let rs = RootSystem::new(r, 2.0).unwrap();
            let all: Vec<Vec<f64>> = rs
                .positive_roots()
                .iter()
                .flat_map(|a| [a.coords.clone(), a.coords.iter().map(|c| -c).collect()])
                .collect();
            for a in rs.weyl_group() {
                assert_eq!(a.compose(&a.inverse()), SignedPerm::identity(r));
                for b in rs.weyl_group() {
                    assert!(rs.weyl_position(&a.compose(b)).is_some());
                }
                for root in &all {
                    let image = a.act(root);
                    assert!(all.iter().any(|b| b.iter().zip(&image).all(|(x, y)| (x - y).abs() < 1e-12)));
                }
            }
            let ws = rs.weyl_group();
            for a in ws.iter().take(6) {
                for b in ws.iter().step_by(3) {
                    for c in ws.iter().step_by(5) {
                        assert_eq!(a.compose(&b.compose(c)), a.compose(b).compose(c));
                    }
                }
            }
        }
    }

    #[test]
    fn reflections_match_formula() {
        let rs = RootSystem::new(3, 2.5).unwrap();
        let x = [0.3, -1.2, 2.1];
        for a in rs.positive_roots() {
            let k = 2.0 * a.eval(&x) / a.norm2;
            let expect: Vec<f64> = x.iter().zip(&a.coords).map(|(xi, ai)| xi - k * ai).collect();
            let got = a.reflection().act(&x);
            for (e, g) in expect.iter().zip(&got) {
                assert!((e - g).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn cone_enumeration() {
        let rs = RootSystem::new(2, 2.0).unwrap();
        assert_eq!(rs.enumerate_cone(0), vec![vec![0, 0]]);
        assert_eq!(rs.enumerate_cone(1), vec![vec![0, 0], vec![0, 1], vec![1, 0]]);
        assert_eq!(rs.enumerate_cone(10).len(), 66);
        let rs3 = RootSystem::new(3, 2.0).unwrap();
        assert_eq!(rs3.enumerate_cone(7).len(), 120);
    }

    #[test]
    fn middle_sum_identity() {
        let rs = RootSystem::new(4, 2.0).unwrap();
        let mut direct = vec![0.0; 4];
        for a in rs.roots_of(RootClass::Middle) {
            for (d, c) in direct.iter_mut().zip(&a.coords) {
                *d += 2.0 * c;
            }
        }
        assert_eq!(direct, rs.sum_middle_pairs());
    }

    proptest! {
        #[test]
        fn weyl_preserves_norm(v in prop::collection::vec(-10.0f64..10.0, 3), k in 0usize..48) {
            let rs = RootSystem::new(3, 2.0).unwrap();
            let w = &rs.weyl_group()[k];
            prop_assert!((norm(&w.act(&v)) - norm(&v)).abs() < 1e-14);
        }

        #[test]
        fn dominant_is_invariant(v in prop::collection::vec(-10.0f64..10.0, 3), k in 0usize..48) {
            let rs = RootSystem::new(3, 2.0).unwrap();
            let (d, w) = rs.dominant_representative(&v);
            prop_assert!(d.windows(2).all(|p| p[0] <= p[1]) && d[0] >= 0.0);
            prop_assert_eq!(w.act(&v), d.clone());
            prop_assert_eq!(rs.dominant_representative(&d).0, d.clone());
            let moved = rs.weyl_group()[k].act(&v);
            prop_assert_eq!(rs.dominant_representative(&moved).0, d);
        }

        #[test]
        fn simple_coords_round_trip(v in prop::collection::vec(-10.0f64..10.0, 3), p in 0.5f64..4.0) {
            let rs = RootSystem::new(3, p).unwrap();
            let c = rs.simple_coords(&v);
            let s = rs.simple_roots();
            let mut back = [0.0; 3];
            for (ck, sk) in c.iter().zip(&s) {
                for (b, x) in back.iter_mut().zip(sk) {
                    *b += ck * x;
                }
            }
            for (a, b) in back.iter().zip(&v) {
                prop_assert!((a - b).abs() < 1e-12);
            }
        }

        #[test]
        fn orbit_max_matches_brute_force(l in prop::collection::vec(-5.0f64..5.0, 3), x in prop::collection::vec(-5.0f64..5.0, 3)) {
            let rs = RootSystem::new(3, 2.0).unwrap();
            let brute = rs.weyl_group().iter().map(|w| dot(&w.act(&l), &x)).fold(f64::NEG_INFINITY, f64::max);
            prop_assert!((brute - rs.max_orbit_pairing(&l, &x)).abs() < 1e-12);
        }
    }
}

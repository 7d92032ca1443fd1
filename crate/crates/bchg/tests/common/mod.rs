//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use bchg::rootsys::RootSystem;
use minilp::{ComparisonOp, OptimizationDirection, Problem};

/// `ξ ∈ conv{w h}` by linear feasibility over the explicit orbit: `μ ≥ 0`, `Σ μ_w = 1`,
/// `Σ μ_w (w h) = ξ`.
pub fn hull_lp(rs: &RootSystem, h: &[f64], xi: &[f64]) -> bool {
    let orbit: Vec<Vec<f64>> = rs.weyl_group().iter().map(|w| w.act(h)).collect();
    let mut pb = Problem::new(OptimizationDirection::Minimize);
    let vars: Vec<_> = orbit.iter().map(|_| pb.add_var(0.0, (0.0, f64::INFINITY))).collect();
    let ones: Vec<_> = vars.iter().map(|&v| (v, 1.0)).collect();
    pb.add_constraint(ones.as_slice(), ComparisonOp::Eq, 1.0);
    for j in 0..rs.rank() {
        let row: Vec<_> = vars.iter().zip(&orbit).map(|(&v, p)| (v, p[j])).collect();
        pb.add_constraint(row.as_slice(), ComparisonOp::Eq, xi[j]);
    }
    match pb.solve() {
        Ok(_) => true,
        Err(minilp::Error::Infeasible) => false,
        Err(e) => panic!("LP failed: {e}"),
    }
}

/// `(1/|W|) Σ_w e^{(wλ)(x)}`, which is `F_λ(0; x)`.
pub fn free_f(rs: &RootSystem, lambda: &[f64], x: &[f64]) -> f64 {
    let s: f64 = rs.weyl_group().iter().map(|w| w.act(lambda).iter().zip(x).map(|(a, b)| a * b).sum::<f64>().exp()).sum();
    s / rs.weyl_order() as f64
}

/// `F_{2.5}((4, 0, 3); 1.0)` in rank one, from an independent 30-digit computation of the Gauss
/// function representation.
pub const GOLDEN_RANK1: f64 = 0.356749699853049154809673539024;

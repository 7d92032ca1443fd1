mod common;

use bchg::analysis::hull::in_hull;
use bchg::analysis::rank1::rank1_gauss;
use bchg::evaluator::{f_eval, EvalOptions, Method};
use bchg::multiplicity::{rho, Multiplicity};
use bchg::rootsys::{to_complex, RootSystem};
use num_complex::Complex64;
use proptest::prelude::*;

#[test]
fn free_case_is_the_orbit_average() {
    for r in 1..=3 {
        let rs = RootSystem::new(r, 2.0).unwrap();
        let lam: Vec<f64> = [0.7, 1.9, 2.6][..r].to_vec();
        let x: Vec<f64> = [0.35, 0.8, 1.4][..r].to_vec();
        let f = f_eval(&rs, &Multiplicity::ZERO, &to_complex(&lam), &x, &EvalOptions::ode(1e-11)).unwrap().value;
        let want = common::free_f(&rs, &lam, &x);
        assert!((f.re - want).abs() < 1e-8 * want && f.im.abs() < 1e-8 * want, "r={r}: {f} vs {want}");
    }
}

#[test]
fn rank_one_matches_gauss_function() {
    let rs = RootSystem::new(1, 2.0).unwrap();
    for (ms, ml) in [(4.0, -1.0), (1.5, 0.0), (3.0, 2.5), (0.5, 0.3)] {
        let m = Multiplicity::new(ms, 0.0, ml);
        for lam in [Complex64::new(0.4, 0.0), Complex64::new(1.7, -0.8), Complex64::new(0.0, 2.0)] {
            for x in [0.25, 0.9, 2.0] {
                let g = rank1_gauss(ms, ml, lam, x, 2.0).unwrap();
                let f = f_eval(&rs, &m, &[lam], &[x], &EvalOptions { method: Method::Ode, tol: 1e-11, ..Default::default() }).unwrap().value;
                assert!((f - g).norm() < 1e-8 * g.norm(), "m=({ms},{ml}) lam={lam} x={x}: {f} vs {g}");
            }
        }
    }
}

#[test]
fn long_norm_rescaling() {
    // F^{(p)}_λ(x) = F^{(2)}_{2λ/p}(p x / 2)
    let m = Multiplicity::new(2.0, 1.0, 0.5);
    let lam = [Complex64::new(0.6, 0.2), Complex64::new(1.4, 0.0)];
    let x = [0.3, 1.1];
    let p = 3.0;
    let a = f_eval(&RootSystem::new(2, p).unwrap(), &m, &lam, &x, &EvalOptions::ode(1e-11)).unwrap().value;
    let lam2: Vec<Complex64> = lam.iter().map(|z| z * (2.0 / p)).collect();
    let x2: Vec<f64> = x.iter().map(|v| v * p / 2.0).collect();
    let b = f_eval(&RootSystem::new(2, 2.0).unwrap(), &m, &lam2, &x2, &EvalOptions::ode(1e-11)).unwrap().value;
    assert!((a - b).norm() < 1e-9 * b.norm(), "{a} vs {b}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn hull_test_agrees_with_lp(
        r in 1usize..=3,
        ms in 0.1f64..4.0,
        mm in 0.1f64..3.0,
        ml in 0.0f64..2.0,
        xi in proptest::collection::vec(-6.0f64..6.0, 3),
    ) {
        let rs = RootSystem::new(r, 2.0).unwrap();
        let h = rho(&rs, &Multiplicity::new(ms, mm, ml));
        let xi = &xi[..r];
        let lp = common::hull_lp(&rs, &h, xi);
        let fast = in_hull(&rs, &h, xi);
        if lp != fast {
            // only allowed inside the boundary band
            let m = bchg::analysis::hull::hull_margin(&rs, &h, xi);
            prop_assert!(m.abs() < 1e-7, "h={h:?} xi={xi:?} margin={m}");
        }
    }
}

//! F_λ(m; x) through the series, the ODE, and the automatic choice.
use bchg::evaluator::{f_eval, g_eval, EvalOptions, Method};
use bchg::multiplicity::Multiplicity;
use bchg::rootsys::RootSystem;
use num_complex::Complex64;

fn main() -> bchg::Result<()> {
    let rs = RootSystem::new(2, 2.0)?;
    let m = Multiplicity::new(2.0, 2.0, 1.0);
    let lambda = [Complex64::new(1.31, 0.4), Complex64::new(2.73, -0.2)];
    let x = [0.8, 1.7];
    for method in [Method::Series, Method::Ode, Method::Auto] {
        let r = f_eval(&rs, &m, &lambda, &x, &EvalOptions { method, tol: 1e-10, ..Default::default() })?;
        println!("{:<6} F = {:.12}  ({} , err {:.1e})", method.label(), r.value, r.method.label(), r.err_est);
    }
    let g = g_eval(&rs, &m, &lambda, &x, &EvalOptions::ode(1e-10))?;
    println!("G = {:.12}", g.value);
    Ok(())
}

//! The deformed functions F_{ℓ,ℓ̃,λ} and the ℓ ↦ m_l − 1 − ℓ symmetry.
use bchg::evaluator::{f_deformed, EvalOptions};
use bchg::multiplicity::{Deformation, Multiplicity};
use bchg::rootsys::{to_complex, RootSystem};

fn main() -> bchg::Result<()> {
    let rs = RootSystem::new(2, 2.0)?;
    let m = Multiplicity::new(2.0, 1.0, 3.0);
    let lambda = to_complex(&[0.7, 1.9]);
    let x = [0.4, 1.1];
    let o = EvalOptions::ode(1e-10);
    for ell in [0.5, -0.75] {
        let a = f_deformed(&rs, &m, Deformation::new(ell, 0.25), &lambda, &x, &o)?;
        let b = f_deformed(&rs, &m, Deformation::new(m.long - 1.0 - ell, 0.25), &lambda, &x, &o)?;
        println!("ell = {ell}: {:.12}  mirror: {:.12}", a.value.re, b.value.re);
    }
    Ok(())
}

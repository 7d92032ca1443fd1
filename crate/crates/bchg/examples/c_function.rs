//! The c-function, including a multiplicity where it vanishes.
use bchg::cfunc::{b0_nonsingular, c_function};
use bchg::multiplicity::Multiplicity;
use bchg::rootsys::{to_complex, RootSystem};

fn main() -> bchg::Result<()> {
    let rs = RootSystem::new(2, 2.0)?;
    let m = Multiplicity::new(2.0, 2.0, 1.0);
    for lam in [[2.0, 4.0], [1.2, 3.1], [0.3, 0.9]] {
        let c = c_function(&rs, &m, &to_complex(&lam))?;
        println!("c(m; {lam:?}) = {:.6}  b0 nonsingular: {}", c.value(), b0_nonsingular(&rs, &m, &to_complex(&lam))?);
    }
    // m outside M1: the short-root factor has a pole in the denominator at λ = 1
    let rs1 = RootSystem::new(1, 2.0)?;
    let c = c_function(&rs1, &Multiplicity::new(-4.0, 0.0, 5.0), &to_complex(&[1.0]))?;
    println!("rank one, m = (-4, 5), lambda = 1: zero = {}", c.is_zero());
    Ok(())
}

//! The rank-one reference values: Taylor-started ODE and the Gauss function.
use bchg::analysis::rank1::{rank1_gauss, rank1_oracle};
use num_complex::Complex64;

fn main() -> bchg::Result<()> {
    let lambda = Complex64::new(2.5, 0.0);
    let o = rank1_oracle(4.0, 3.0, lambda, 1.0, 2.0)?;
    let g = rank1_gauss(4.0, 3.0, lambda, 1.0, 2.0)?;
    println!("ODE   {:.15} (err {:.1e})", o.value.re, o.err_est);
    println!("2F1   {:.15}", g.re);
    Ok(())
}

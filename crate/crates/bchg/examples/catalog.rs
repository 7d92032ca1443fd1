//! Geometric parameter values for symmetric spaces and small K-types.
use bchg::multiplicity::catalog::{catalog, lookup};

fn main() -> bchg::Result<()> {
    for e in catalog() {
        println!("{:<22} r={} base={} ell={} -> {}  rho={:?}", e.name, e.rank, e.base, e.deform.ell, e.sigma_tau, e.rho);
    }
    let e = lookup("sp(3,1)", Some(2), None, None)?;
    println!("\n{}", serde_json::to_string_pretty(&e).unwrap());
    Ok(())
}

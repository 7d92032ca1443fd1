//! Which sets a multiplicity belongs to, its ρ, and the (ℓ, ℓ̃) deformation.
use bchg::multiplicity::{classify, deform, ell_range, rho, rho_hull, Deformation, Multiplicity};
use bchg::rootsys::RootSystem;

fn main() -> bchg::Result<()> {
    let rs = RootSystem::new(2, 2.0)?;
    let m = Multiplicity::new(4.0, 1.0, -1.0);
    let sets: Vec<_> = classify(&m, 2).iter().map(|s| s.label()).collect();
    let (lo, hi) = ell_range(&m);
    println!("m = {m}: {} ; ell in [{lo}, {hi}] ; rho = {:?}", sets.join(" "), rho(&rs, &m));

    let base = Multiplicity::new(2.0, 1.0, 2.0);
    let d = Deformation::new(1.0, 0.5);
    println!("m(ell, ellTilde) = {}", deform(&base, d));
    println!("hull vector rho(m(2 ellTilde)) = {:?}", rho_hull(&rs, &base, d));
    Ok(())
}

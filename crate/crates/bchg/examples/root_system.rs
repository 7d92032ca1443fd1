//! Positive roots, the Weyl group and dominance for BC_3.
use bchg::rootsys::RootSystem;

fn main() -> bchg::Result<()> {
    let rs = RootSystem::new(3, 2.0)?;
    println!("|Σ+| = {}, |W| = {}", rs.positive_roots().len(), rs.weyl_order());
    for a in rs.positive_roots() {
        println!("{:?} {:?} simple={:?} <a,a>={}", a.class, a.coords, a.simple, a.norm2);
    }
    let x = [-1.5, 0.2, -0.7];
    let (dom, w) = rs.dominant_representative(&x);
    println!("dominant representative of {x:?}: {dom:?} (w = {w:?})");
    println!("simple coordinates: {:?}", rs.simple_coords(&dom));
    Ok(())
}

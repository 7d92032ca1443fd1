//! F_λ0 e^{−(λ0−ρ)(x)} along a ray, compared with the c-function limit.
use bchg::analysis::asymptotics::{b0_probe, sharp_ratio};
use bchg::multiplicity::Multiplicity;
use bchg::rootsys::RootSystem;

fn main() -> bchg::Result<()> {
    let rs = RootSystem::new(2, 2.0)?;
    let m = Multiplicity::new(3.0, 1.0, -1.0);
    let ts: Vec<f64> = (0..=25).map(|k| k as f64).collect();
    let s = sharp_ratio(&rs, &m, &[0.6, 1.5], &[0.1, 0.3], &[0.45, 0.9], &ts, None)?;
    println!("ratio at t = 0, 10, 25: {:.6} {:.6} {:.6}; c limit {:?}", s.ratios[0], s.ratios[10], s.ratios[25], s.c_limit);
    println!("passed: {}", s.report.passed);

    let p = b0_probe(&rs, &Multiplicity::new(2.0, 2.0, 1.0), &[1.2, 3.0], &[1.0, 2.0], 25.0, None)?;
    println!("b0 probe: last {:.8} vs c = {:.8}", p.normalized.last().unwrap(), p.c_value);
    Ok(())
}

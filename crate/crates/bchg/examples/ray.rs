//! One integration along a ray gives F at many points.
use bchg::evaluator::f_ray;
use bchg::multiplicity::Multiplicity;
use bchg::rootsys::{to_complex, RootSystem};

fn main() -> bchg::Result<()> {
    let rs = RootSystem::new(3, 2.0)?;
    let m = Multiplicity::new(1.0, 1.0, 0.5);
    let lambda = to_complex(&[0.5, 1.0, 2.0]);
    let ts: Vec<f64> = (0..=10).map(|k| k as f64).collect();
    let vals = f_ray(&rs, &m, &lambda, &[1.0, 2.0, 3.0], &ts, 1e-10)?;
    for (t, v) in ts.iter().zip(vals) {
        println!("t = {t:>4}: F = {:.10e}", v.re);
    }
    Ok(())
}

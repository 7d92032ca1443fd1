//! Hull classification of boundedness, and what happens along a ray on either side.
use bchg::analysis::hull::{growth_direction, ray_sup};
use bchg::analysis::is_bounded;
use bchg::multiplicity::{rho, Deformation, Multiplicity};
use bchg::rootsys::{to_complex, RootSystem};

fn main() -> bchg::Result<()> {
    let rs = RootSystem::new(2, 2.0)?;
    let m = Multiplicity::new(3.0, 1.0, 0.5);
    let h = rho(&rs, &m);
    let ts: Vec<f64> = (0..=20).map(|k| 2.0 * k as f64).collect();
    for k in [0.8, 1.2] {
        let lam: Vec<f64> = h.iter().map(|v| v * k).collect();
        let q = is_bounded(&rs, &m, &to_complex(&lam), None);
        let dir = growth_direction(&rs, &h, &lam).map_or(vec![1.0, 1.0], |(d, _)| d);
        let sup = ray_sup(&rs, &m, Deformation::NONE, &to_complex(&lam), &dir, &ts, 1e-10)?;
        println!("lambda = {k} rho: {:?}, |F| at t = 40: {:.3e}", q.verdict, sup.last().unwrap());
    }
    let q = is_bounded(&rs, &Multiplicity::new(2.0, 0.0, 1.0), &to_complex(&[1.0, 1.5]), Some(Deformation::new(0.5, 0.5)));
    println!("{}", serde_json::to_string_pretty(&q).unwrap());
    Ok(())
}

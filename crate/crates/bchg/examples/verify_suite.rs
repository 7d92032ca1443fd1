//! A reduced estimate suite, printed as text and written as CSV.
use bchg::analysis::{run_suite, SuiteConfig};

fn main() -> bchg::Result<()> {
    let cfg = SuiteConfig { samples: 20, ..Default::default() };
    let s = run_suite("estimates", &cfg)?;
    print!("{}", s.to_text());
    let path = std::env::temp_dir().join("bchg_estimates.csv");
    s.write_csv(std::fs::File::create(&path).expect("temp file"))?;
    println!("rows written to {}", path.display());
    Ok(())
}

//! Executable checks of the known properties of `F_λ` and `G_λ`: inequalities, asymptotics,
//! boundedness, and a rank-one reference implementation.

pub mod asymptotics;
pub mod engines;
pub mod estimates;
pub mod hull;
pub mod probes;
pub mod rank1;
pub mod report;
pub mod sampling;

pub use engines::engine_suite;
pub use estimates::{estimate_suite, SuiteConfig};
pub use hull::{in_hull, is_bounded, HullQuery, Verdict};
pub use probes::boundedness_suite;
pub use rank1::rank1_oracle;
pub use report::{CheckReport, SampleRow, Summary};

use crate::error::{Error, Result};

pub const SUITES: [&str; 4] = ["estimates", "engines", "bounded", "all"];

/// Runs a named suite. `all` is `estimates`, then `engines`, then `bounded`.
pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<Summary> {
    let checks = match name {
        "estimates" => estimate_suite(cfg)?,
        "engines" => engine_suite(cfg)?,
        "bounded" => boundedness_suite(cfg)?,
        "all" => {
            let mut v = estimate_suite(cfg)?;
            v.extend(engine_suite(cfg)?);
            v.extend(boundedness_suite(cfg)?);
            v
        }
        _ => return Err(Error::Invalid(format!("unknown suite {name:?}; expected one of {}", SUITES.join(", ")))),
    };
    Ok(Summary::new(name, cfg.seed, cfg.samples, checks))
}

//! Hypergeometric functions for BC-type root systems.

// `!(a >= b)` is used on purpose so that NaN fails the test.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cfunc;
pub mod cli;
pub mod error;
pub mod evaluator;
pub mod hcseries;
pub mod multiplicity;
pub mod ode;
pub mod rootsys;

pub use error::{Error, Result};

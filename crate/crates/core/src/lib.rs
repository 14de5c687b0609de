//! Exact computations with divisor currents on the complex projective plane:
//! Lelong numbers, upper level sets, and conic covers of those level sets.

pub mod covercheck;
pub mod currents;
pub mod error;
pub mod examples;
pub mod harness;
pub mod io;
pub mod linalg;
pub mod par;
pub mod projgeom;
pub mod proofreplay;
pub mod rational;

pub use error::{Error, Result};
pub use rational::Rational;

//! Seeded instance generation and batch verification of the four-point conic
//! cover property, plus exhaustive sweeps over small line arrangements.

mod gen;
mod run;
mod sweep;

pub use gen::{generate, GenSpec, Generator, Trial, TrialOutcome, WeightScheme, DEFAULT_BIT_CAP};
pub use run::{run_suite, run_valid, Counterexample, RunReport};
pub use sweep::{exhaustive_sweep, ExtremalStats, SweepGrid, SweepHit, WeightGrid, DEFAULT_INSTANCE_CAP};

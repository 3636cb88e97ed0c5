//! Mode distinguishability of discrete-time linear switching systems under
//! sparse sensor and actuator attacks.
//!
//! The crate decides, for every pair of modes, whether an attacker that
//! corrupts at most `σ` sensors and `ρ` actuators can make the two modes
//! produce identical outputs, builds explicit counterexamples when it can,
//! and provides a simulator and a brute-force estimator to check verdicts
//! empirically.

pub mod disting;
pub mod error;
pub mod estimate;
pub mod exactla;
pub mod geocontrol;
pub mod model;
pub mod simulate;

pub use error::{Error, Result};

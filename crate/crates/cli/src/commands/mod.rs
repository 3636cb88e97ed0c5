pub mod analyze;
pub mod discretize;
pub mod estimate;
pub mod simulate;
pub mod witness;

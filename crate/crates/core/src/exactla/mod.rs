//! Matrices over exact rationals or floats, rank/kernel/image, and the
//! subspace lattice (sum, intersection, preimage, inclusion).

mod exact;
mod float;
mod index_set;
mod matrix;
mod scalar;
mod subspace;

pub use index_set::IndexSet;
pub use matrix::Matrix;
pub use scalar::{parse_rational, to_literal, Backend, Field, Rational};
pub use subspace::Subspace;

/// Rank of `m` on its own backend.
pub fn rank<T: Field>(m: &Matrix<T>) -> usize {
    m.rank()
}

pub fn kernel<T: Field>(m: &Matrix<T>) -> Subspace<T> {
    Subspace::kernel(m)
}

pub fn image<T: Field>(m: &Matrix<T>) -> Subspace<T> {
    Subspace::span(m)
}

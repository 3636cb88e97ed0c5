//! Maximal controlled-invariant subspaces and the attacker-absorption tests
//! built on them.
//!
//! For an augmented pair and a sensor set `Γ`, `W_ij,Γ` is the largest
//! subspace `V ⊆ ker(C̄_ij,Γ)` with `A_ij V ⊆ V + Im[B_ij B̂_i B̂_j]`. It is
//! the limit of the decreasing sequence
//!
//! ```text
//! V₀ = ker(C̄),   V_{k+1} = V_k ∩ A⁻¹(V_k + Im B)
//! ```
//!
//! which stabilizes after at most `dim V₀` strict decreases.

use crate::error::{Error, Result};
use crate::exactla::{Field, IndexSet, Matrix, Subspace};
use crate::model::AugmentedPair;

#[derive(Debug, Clone)]
pub struct InvariantResult<T: Field> {
    /// The maximal controlled-invariant subspace.
    pub subspace: Subspace<T>,
    /// Number of recursion steps until the fixed point was confirmed.
    pub iterations: usize,
    /// `V₀ ⊇ V₁ ⊇ … ⊇ V_k = W`.
    pub iterates: Vec<Subspace<T>>,
    /// Removed sensor rows, when computed for an augmented pair.
    pub gamma: IndexSet,
}

pub fn max_controlled_invariant<T: Field>(
    a: &Matrix<T>,
    b_full: &Matrix<T>,
    c_bar: &Matrix<T>,
) -> Result<InvariantResult<T>> {
    let d = a.rows();
    if !a.is_square() || c_bar.cols() != d || b_full.rows() != d {
        return Err(Error::dims(format!(
            "controlled invariant needs square A (got {}×{}), C̄ with {d} columns (got {}) and B with {d} rows (got {})",
            a.rows(),
            a.cols(),
            c_bar.cols(),
            b_full.rows()
        )));
    }
    let im_b = Subspace::span(b_full);
    let mut v = Subspace::kernel(c_bar);
    let mut iterates = vec![v.clone()];
    let mut iterations = 0;
    loop {
        iterations += 1;
        let next = v.intersect(&v.sum(&im_b)?.preimage(a)?)?;
        if next.dim() == v.dim() {
            break;
        }
        v = next;
        iterates.push(v.clone());
    }
    debug_assert!(iterations <= d + 1);
    Ok(InvariantResult {
        subspace: v,
        iterations,
        iterates,
        gamma: IndexSet::empty(),
    })
}

/// `W_ij,Γ` for an augmented pair.
pub fn invariant_for<T: Field>(pair: &AugmentedPair<T>, gamma: &IndexSet) -> Result<InvariantResult<T>> {
    let c_bar = pair.c_restricted(gamma)?;
    let mut res = max_controlled_invariant(&pair.a, &pair.b_full(), &c_bar)?;
    res.gamma = gamma.clone();
    Ok(res)
}

/// Whether `v` is `(A, B)`-controlled invariant: `A·V ⊆ V + Im B`.
pub fn is_controlled_invariant<T: Field>(
    v: &Subspace<T>,
    a: &Matrix<T>,
    b: &Matrix<T>,
) -> Result<bool> {
    v.sum(&Subspace::span(b))?.includes(&v.image_under(a)?)
}

#[derive(Debug, Clone)]
pub struct OmegaStar<T: Field> {
    pub exists: bool,
    /// Equal to `W_ij,Γ` when it exists.
    pub omega: Option<Subspace<T>>,
    pub invariant: InvariantResult<T>,
}

/// Existence of the largest set of initial-state pairs from which the
/// attacker can keep the two outputs equal: exists iff
/// `Im[B_ij B̂_i] ⊆ W_ij,Γ`, and then it equals `W_ij,Γ`.
pub fn omega_star<T: Field>(pair: &AugmentedPair<T>, gamma: &IndexSet) -> Result<OmegaStar<T>> {
    let invariant = invariant_for(pair, gamma)?;
    let forced = Subspace::span(&pair.b.hstack(&pair.bhat_i)?);
    let exists = invariant.subspace.includes(&forced)?;
    Ok(OmegaStar {
        exists,
        omega: exists.then(|| invariant.subspace.clone()),
        invariant,
    })
}

/// Outcome of both absorption inclusions for one `(Γ, Δ_i, Δ_j)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Absorption {
    /// `Im B_ij + Im B̂_i ⊆ W + Im B̂_j`: mode `j`'s attacker can follow any
    /// input and any attack on mode `i`.
    pub j_absorbs_i: bool,
    /// `Im B_ij + Im B̂_j ⊆ W + Im B̂_i`.
    pub i_absorbs_j: bool,
}

impl Absorption {
    /// True when neither attacker can hide the mode.
    pub fn distinguishable(&self) -> bool {
        !self.j_absorbs_i && !self.i_absorbs_j
    }
}

pub fn absorption_with<T: Field>(pair: &AugmentedPair<T>, w: &Subspace<T>) -> Result<Absorption> {
    let im_b = pair.im_b();
    let im_i = pair.im_bhat_i();
    let im_j = pair.im_bhat_j();
    Ok(Absorption {
        j_absorbs_i: w.sum(&im_j)?.includes(&im_b.sum(&im_i)?)?,
        i_absorbs_j: w.sum(&im_i)?.includes(&im_b.sum(&im_j)?)?,
    })
}

pub fn absorption<T: Field>(pair: &AugmentedPair<T>, gamma: &IndexSet) -> Result<(Absorption, InvariantResult<T>)> {
    let inv = invariant_for(pair, gamma)?;
    Ok((absorption_with(pair, &inv.subspace)?, inv))
}

/// Solvability of the compact output relation for `(x₀, D_j)` given any
/// `U`, `D_i`, `W_i`, `W_j`: `Im B_ij + Im B̂_i ⊆ W_ij,Γ + Im B̂_j`.
pub fn solvable<T: Field>(pair: &AugmentedPair<T>, gamma: &IndexSet) -> Result<bool> {
    Ok(absorption(pair, gamma)?.0.j_absorbs_i)
}

use super::LinearMode;
use crate::error::{Error, Result};
use crate::exactla::{Field, IndexSet, Matrix, Subspace};

/// Parallel interconnection of modes `i` and `j` whose output is the
/// difference of the two mode outputs.
///
/// State `(x_i, x_j) ∈ R^{2n}`:
/// `A_ij = diag(A_i, A_j)`, `B_ij = [B_i; B_j]`, `C_ij = [C_i, −C_j]`.
/// The attacked-actuator maps keep only the `Δ` columns of each `B`:
/// `B̂_i = [B_i[:, Δ_i]; 0]`, `B̂_j = [0; B_j[:, Δ_j]]`.
#[derive(Debug, Clone)]
pub struct AugmentedPair<T: Field> {
    pub mode_i: LinearMode<T>,
    pub mode_j: LinearMode<T>,
    pub a: Matrix<T>,
    pub b: Matrix<T>,
    pub c: Matrix<T>,
    pub bhat_i: Matrix<T>,
    pub bhat_j: Matrix<T>,
    pub delta_i: IndexSet,
    pub delta_j: IndexSet,
}

pub fn build_augmented<T: Field>(
    si: &LinearMode<T>,
    sj: &LinearMode<T>,
    delta_i: &IndexSet,
    delta_j: &IndexSet,
) -> Result<AugmentedPair<T>> {
    if si.dims() != sj.dims() {
        return Err(Error::dims(format!(
            "modes {} and {} have dimensions {:?} and {:?}",
            si.id,
            sj.id,
            si.dims(),
            sj.dims()
        )));
    }
    let n = si.n();
    let m = si.m();
    let a = Matrix::block_diag(&si.a, &sj.a);
    let b = si.b.vstack(&sj.b)?;
    let c = si.c.hstack(&-&sj.c)?;
    let bi = si.b.restrict_cols(delta_i, true)?;
    let bj = sj.b.restrict_cols(delta_j, true)?;
    debug_assert!(bi.cols() <= m && bj.cols() <= m);
    let bhat_i = bi.vstack(&Matrix::zeros(n, bi.cols()))?;
    let bhat_j = Matrix::zeros(n, bj.cols()).vstack(&bj)?;
    Ok(AugmentedPair {
        mode_i: si.clone(),
        mode_j: sj.clone(),
        a,
        b,
        c,
        bhat_i,
        bhat_j,
        delta_i: delta_i.clone(),
        delta_j: delta_j.clone(),
    })
}

impl<T: Field> AugmentedPair<T> {
    /// Nominal pair, no attacked actuators.
    pub fn nominal(si: &LinearMode<T>, sj: &LinearMode<T>) -> Result<Self> {
        build_augmented(si, sj, &IndexSet::empty(), &IndexSet::empty())
    }

    /// Dimension of a single mode.
    pub fn n(&self) -> usize {
        self.mode_i.n()
    }

    pub fn m(&self) -> usize {
        self.mode_i.m()
    }

    pub fn p(&self) -> usize {
        self.mode_i.p()
    }

    /// Analysis horizon `τ = 2n`.
    pub fn tau(&self) -> usize {
        2 * self.n()
    }

    /// `C̄_ij,Γ`: `C_ij` with the sensor rows in `Γ` removed.
    pub fn c_restricted(&self, gamma: &IndexSet) -> Result<Matrix<T>> {
        self.c.restrict_rows(gamma)
    }

    /// `[B_ij  B̂_i  B̂_j]`.
    pub fn b_full(&self) -> Matrix<T> {
        Matrix::hcat(2 * self.n(), &[&self.b, &self.bhat_i, &self.bhat_j])
            .expect("augmented blocks share row count")
    }

    pub fn im_b(&self) -> Subspace<T> {
        Subspace::span(&self.b)
    }

    pub fn im_bhat_i(&self) -> Subspace<T> {
        Subspace::span(&self.bhat_i)
    }

    pub fn im_bhat_j(&self) -> Subspace<T> {
        Subspace::span(&self.bhat_j)
    }

    /// Stacked initial state `(x_i, x_j)`.
    pub fn split_state(&self, x0: &[T]) -> (Vec<T>, Vec<T>) {
        let n = self.n();
        (x0[..n].to_vec(), x0[n..].to_vec())
    }
}

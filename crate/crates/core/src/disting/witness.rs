use num_traits::Zero;
use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::error::{Error, Result};
use crate::exactla::{to_literal, Field, IndexSet, Matrix};
use crate::model::io::matrix_literals;
use crate::model::{observability_matrix, AugmentedPair};

/// Initial state pair and cyclic sensor attacks under which two unforced
/// modes produce identical corrupted outputs over `τ` samples.
///
/// Row `t` of `w_i` (`w_j`) is the attack added to mode `i`'s (`j`'s)
/// output at sample `t`; it is supported on `gamma_i` (`gamma_j`).
#[derive(Debug, Clone, PartialEq)]
pub struct Witness<T: Field> {
    /// Stacked `(x_i(0), x_j(0))`.
    pub x0: Vec<T>,
    pub gamma: IndexSet,
    pub gamma_i: IndexSet,
    pub gamma_j: IndexSet,
    pub w_i: Matrix<T>,
    pub w_j: Matrix<T>,
}

impl<T: Field> Witness<T> {
    pub fn tau(&self) -> usize {
        self.w_i.rows()
    }

    pub fn stacked_w_i(&self) -> Vec<T> {
        self.w_i.data().to_vec()
    }

    pub fn stacked_w_j(&self) -> Vec<T> {
        self.w_j.data().to_vec()
    }
}

impl<T: Field> Serialize for Witness<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Witness", 6)?;
        st.serialize_field("x0", &self.x0.iter().map(to_literal).collect::<Vec<_>>())?;
        st.serialize_field("gamma", &self.gamma)?;
        st.serialize_field("gamma_i", &self.gamma_i)?;
        st.serialize_field("gamma_j", &self.gamma_j)?;
        st.serialize_field("w_i", &matrix_literals(&self.w_i))?;
        st.serialize_field("w_j", &matrix_literals(&self.w_j))?;
        st.end()
    }
}

/// Builds the attack pair that cancels `v = O_ij x₀` on the sensors in
/// `Γ`: the `σ` lowest indices go to mode `i` with `w_i = −v`, the rest to
/// mode `j` with `w_j = v`.
///
/// `x0` must be a nonzero vector in the kernel of the observability stack
/// with the `Γ` sensors removed, so `v` vanishes outside `Γ`.
pub fn witness_construct<T: Field>(
    pair: &AugmentedPair<T>,
    gamma: &IndexSet,
    x0: &[T],
    sigma: usize,
) -> Result<Witness<T>> {
    let (n2, p, tau) = (2 * pair.n(), pair.p(), pair.tau());
    if x0.len() != n2 {
        return Err(Error::dims(format!("witness state has {} entries, expected {n2}", x0.len())));
    }
    gamma.check_bound(p)?;
    if gamma.len() > 2 * sigma {
        return Err(Error::InvalidWitness(format!(
            "|Γ| = {} exceeds 2σ = {}",
            gamma.len(),
            2 * sigma
        )));
    }
    if x0.iter().all(Zero::is_zero) {
        return Err(Error::InvalidWitness("initial state is zero".into()));
    }
    let v = observability_matrix(pair, tau).mul_vec(x0)?;
    let scale = v.iter().map(|x| x.to_f64().abs()).fold(0.0, f64::max)
        + x0.iter().map(|x| x.to_f64().abs()).fold(0.0, f64::max);
    for t in 0..tau {
        for k in (0..p).filter(|k| !gamma.contains(*k)) {
            if !v[t * p + k].is_negligible(scale, 1e-9) {
                return Err(Error::InvalidWitness(format!(
                    "initial state is not in the kernel of the stack without sensors {gamma}: sample {t}, sensor {} gives {}",
                    k + 1,
                    v[t * p + k]
                )));
            }
        }
    }
    let (gamma_i, gamma_j) = gamma.split_lowest(sigma);
    let mut w_i = Matrix::zeros(tau, p);
    let mut w_j = Matrix::zeros(tau, p);
    for t in 0..tau {
        for &k in gamma_i.as_slice() {
            w_i[(t, k)] = -v[t * p + k].clone();
        }
        for &k in gamma_j.as_slice() {
            w_j[(t, k)] = v[t * p + k].clone();
        }
    }
    Ok(Witness {
        x0: x0.to_vec(),
        gamma: gamma.clone(),
        gamma_i,
        gamma_j,
        w_i,
        w_j,
    })
}

use super::{AugmentedPair, LinearMode};
use crate::error::Result;
use crate::exactla::{Field, Matrix};

/// `[C; C A; …; C A^{steps−1}]`.
pub fn obs_stack<T: Field>(c: &Matrix<T>, a: &Matrix<T>, steps: usize) -> Matrix<T> {
    let p = c.rows();
    let mut out = Matrix::zeros(steps * p, c.cols());
    let mut block = c.clone();
    for k in 0..steps {
        out.set_block(k * p, 0, &block);
        if k + 1 < steps {
            block = &block * a;
        }
    }
    out
}

/// Block-lower-triangular Toeplitz map from `τ − 1` stacked inputs to `τ`
/// stacked outputs. Block `(r, s)` is `C A^{r−s−1} B` for `r > s`, zero
/// otherwise; the first block row is zero.
pub fn toeplitz<T: Field>(c: &Matrix<T>, a: &Matrix<T>, b: &Matrix<T>, tau: usize) -> Matrix<T> {
    let p = c.rows();
    let m = b.cols();
    let cols = tau.saturating_sub(1) * m;
    let mut out = Matrix::zeros(tau * p, cols);
    if m == 0 || tau < 2 {
        return out;
    }
    // markov[k] = C A^k B
    let mut markov = Vec::with_capacity(tau - 1);
    let mut ak_b = b.clone();
    for _ in 0..tau - 1 {
        markov.push(c * &ak_b);
        ak_b = a * &ak_b;
    }
    for r in 1..tau {
        for s in 0..r {
            out.set_block(r * p, s * m, &markov[r - s - 1]);
        }
    }
    out
}

/// `O_ij` with `steps` block rows: `[C_ij; C_ij A_ij; …]`, size
/// `(steps·p) × 2n`.
pub fn observability_matrix<T: Field>(pair: &AugmentedPair<T>, steps: usize) -> Matrix<T> {
    obs_stack(&pair.c, &pair.a, steps)
}

/// Single-mode observability stack over `steps` samples.
pub fn mode_observability<T: Field>(mode: &LinearMode<T>, steps: usize) -> Matrix<T> {
    obs_stack(&mode.c, &mode.a, steps)
}

/// Single-mode Toeplitz map from stacked inputs (through `b`) to stacked
/// outputs over `tau` samples.
pub fn mode_toeplitz<T: Field>(mode: &LinearMode<T>, b: &Matrix<T>, tau: usize) -> Matrix<T> {
    toeplitz(&mode.c, &mode.a, b, tau)
}

/// `M_U` (through `B_ij`), `M_i` (through `B̂_i`) and `M_j` (through `B̂_j`).
#[derive(Debug, Clone)]
pub struct MarkovMatrices<T: Field> {
    pub m_u: Matrix<T>,
    pub m_i: Matrix<T>,
    pub m_j: Matrix<T>,
}

/// Markov stacks over the pairwise horizon `2n`.
pub fn markov_matrices<T: Field>(pair: &AugmentedPair<T>) -> MarkovMatrices<T> {
    let tau = pair.tau();
    MarkovMatrices {
        m_u: toeplitz(&pair.c, &pair.a, &pair.b, tau),
        m_i: toeplitz(&pair.c, &pair.a, &pair.bhat_i, tau),
        m_j: toeplitz(&pair.c, &pair.a, &pair.bhat_j, tau),
    }
}

/// Matrices of the compact output relation over `τ` samples:
/// `Y = O x₀ + M_U U + M_i D_i + M_j D_j + W_i − W_j`, where `Y = Y_i − Y_j`
/// and `D_i`, `D_j` are the physical actuator attacks of each mode. The
/// minus sign of mode `j`'s contribution is already inside
/// `M_j = [C_ij A^k B̂_j]`, since `C_ij B̂_j = −C_j B_j`.
#[derive(Debug, Clone)]
pub struct StackedOutputMap<T: Field> {
    pub tau: usize,
    pub o: Matrix<T>,
    pub m_u: Matrix<T>,
    pub m_i: Matrix<T>,
    pub m_j: Matrix<T>,
}

pub fn stacked_output_map<T: Field>(pair: &AugmentedPair<T>, tau: usize) -> StackedOutputMap<T> {
    StackedOutputMap {
        tau,
        o: obs_stack(&pair.c, &pair.a, tau),
        m_u: toeplitz(&pair.c, &pair.a, &pair.b, tau),
        m_i: toeplitz(&pair.c, &pair.a, &pair.bhat_i, tau),
        m_j: toeplitz(&pair.c, &pair.a, &pair.bhat_j, tau),
    }
}

impl<T: Field> StackedOutputMap<T> {
    /// Evaluates the right-hand side for stacked vectors.
    #[allow(clippy::too_many_arguments)]
    pub fn evaluate(
        &self,
        x0: &[T],
        u: &[T],
        d_i: &[T],
        d_j: &[T],
        w_i: &[T],
        w_j: &[T],
    ) -> Result<Vec<T>> {
        let mut y = self.o.mul_vec(x0)?;
        let terms = [
            self.m_u.mul_vec(u)?,
            self.m_i.mul_vec(d_i)?,
            self.m_j.mul_vec(d_j)?,
        ];
        for v in terms {
            for (acc, x) in y.iter_mut().zip(v) {
                *acc = acc.clone() + x;
            }
        }
        if w_i.len() != y.len() || w_j.len() != y.len() {
            return Err(crate::Error::dims("sensor attack stacks must have τ·p entries"));
        }
        for ((acc, wi), wj) in y.iter_mut().zip(w_i).zip(w_j) {
            *acc = acc.clone() + wi.clone() - wj.clone();
        }
        Ok(y)
    }
}

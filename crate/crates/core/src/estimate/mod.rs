//! Brute-force secure mode estimation.
//!
//! A mode explains a corrupted trace of `τ = 2n` samples when, after
//! deleting the rows of some `σ` sensors at every sample, the remaining
//! outputs satisfy
//!
//! ```text
//! Y − M_U U = O x₀ + M_Δ D
//! ```
//!
//! for some initial state `x₀` and actuator attack `D` on some `ρ`
//! actuators `Δ`. Every `(mode, Γ, Δ)` is tried, so the cost is
//! `O(N · C(p, ≤σ) · C(m, ≤ρ))` least-squares solves.

use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactla::{to_literal, Backend, Field, IndexSet, Matrix};
use crate::model::{mode_observability, mode_toeplitz, LinearMode, SwitchingSystem};

#[derive(Debug, Clone, Copy)]
pub struct EstimateOptions {
    /// Float backend: a residual counts as zero when
    /// `‖r‖ ≤ rel_tol · ‖Y‖`.
    pub rel_tol: f64,
}

impl Default for EstimateOptions {
    fn default() -> Self {
        EstimateOptions { rel_tol: 1e-8 }
    }
}

/// Deleted sensors and attacked actuators of one explanation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Support {
    pub gamma: IndexSet,
    pub delta: IndexSet,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConsistencyResult<T: Field> {
    pub mode: String,
    pub consistent: bool,
    /// The smallest consistent support, or the one with the least residual
    /// when none is consistent.
    pub best_support: Option<Support>,
    pub x0_estimate: Option<Vec<T>>,
    /// Euclidean norm of the best residual.
    pub residual: f64,
    pub checked_supports: usize,
}

impl<T: Field> Serialize for ConsistencyResult<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("ConsistencyResult", 6)?;
        st.serialize_field("mode", &self.mode)?;
        st.serialize_field("consistent", &self.consistent)?;
        st.serialize_field("best_support", &self.best_support)?;
        st.serialize_field(
            "x0_estimate",
            &self.x0_estimate.as_ref().map(|x| x.iter().map(to_literal).collect::<Vec<_>>()),
        )?;
        st.serialize_field("residual", &self.residual)?;
        st.serialize_field("checked_supports", &self.checked_supports)?;
        st.end()
    }
}

struct Fit<T> {
    support: Support,
    consistent: bool,
    residual: f64,
    x0: Vec<T>,
}

fn fit_support<T: Field>(
    mode: &LinearMode<T>,
    y: &[T],
    u: &[T],
    gamma: &IndexSet,
    delta: &IndexSet,
    tau: usize,
    tol: f64,
) -> Result<Fit<T>> {
    let (n, _, p) = mode.dims();
    let rows = gamma.stacked(p, tau);
    let o = mode_observability(mode, tau);
    let b_delta = mode.b.restrict_cols(delta, true)?;
    let t_delta = mode_toeplitz(mode, &b_delta, tau);
    let known = mode_toeplitz(mode, &mode.b, tau).mul_vec(u)?;
    let a = o.hstack(&t_delta)?.restrict_rows(&rows)?;
    let rhs_full: Vec<T> = y.iter().zip(known).map(|(y, k)| y.clone() - k).collect();
    let rhs = Matrix::column_vector(&rhs_full).restrict_rows(&rows)?.col(0);
    let z = T::least_squares(&a, &rhs, None);
    let fitted = a.mul_vec(&z)?;
    let r: Vec<T> = rhs.iter().zip(fitted).map(|(b, f)| b.clone() - f).collect();
    let residual = r.iter().map(|x| x.to_f64().powi(2)).sum::<f64>().sqrt();
    let consistent = match T::BACKEND {
        Backend::Exact => r.iter().all(Zero::is_zero),
        Backend::Float => residual <= tol,
    };
    Ok(Fit {
        support: Support {
            gamma: gamma.clone(),
            delta: delta.clone(),
        },
        consistent,
        residual,
        x0: z[..n].to_vec(),
    })
}

/// Checks every mode of `sys` against the stacked trace.
///
/// `y` is `τ × p` with `τ = 2n`; `u` has `τ` or `τ − 1` rows of the honest
/// input (only the first `τ − 1` reach the outputs) and is ignored for
/// `m = 0`. Supports are tried by increasing size, lexicographically.
pub fn consistent_modes<T: Field>(
    sys: &SwitchingSystem<T>,
    y: &Matrix<T>,
    u: &Matrix<T>,
    sigma: usize,
    rho: usize,
    opts: &EstimateOptions,
) -> Result<Vec<ConsistencyResult<T>>> {
    let (n, m, p) = (sys.n(), sys.m(), sys.p());
    let tau = 2 * n;
    if y.rows() != tau {
        return Err(Error::WrongHorizon {
            expected: tau,
            got: y.rows(),
        });
    }
    if y.cols() != p {
        return Err(Error::dims(format!("trace has {} sensors, model has p = {p}", y.cols())));
    }
    if m > 0 && (u.cols() != m || u.rows() + 1 < tau) {
        return Err(Error::dims(format!(
            "input is {}×{}, expected at least {}×{m}",
            u.rows(),
            u.cols(),
            tau - 1
        )));
    }
    if sigma >= p {
        return Err(Error::InvalidBudget(format!("σ = {sigma} must be smaller than p = {p}")));
    }
    if rho > m {
        return Err(Error::InvalidBudget(format!("ρ = {rho} exceeds m = {m}")));
    }
    let y_stacked = y.data().to_vec();
    let u_stacked = if m > 0 {
        u.block(0, 0, tau - 1, m).data().to_vec()
    } else {
        Vec::new()
    };
    let ynorm = y_stacked.iter().map(|x| x.to_f64().powi(2)).sum::<f64>().sqrt();
    let tol = opts.rel_tol * ynorm;
    let ascending = |k: usize, max: usize| -> Vec<IndexSet> {
        (0..=max.min(k)).flat_map(|s| IndexSet::combinations(k, s)).collect()
    };
    let gammas = ascending(p, sigma);
    let deltas = ascending(m, rho);
    let supports: Vec<(&IndexSet, &IndexSet)> =
        gammas.iter().flat_map(|g| deltas.iter().map(move |d| (g, d))).collect();
    sys.modes
        .par_iter()
        .map(|mode| -> Result<ConsistencyResult<T>> {
            let fits = supports
                .par_iter()
                .map(|(g, d)| fit_support(mode, &y_stacked, &u_stacked, g, d, tau, tol))
                .collect::<Result<Vec<_>>>()?;
            let best = fits.iter().find(|f| f.consistent).or_else(|| {
                fits.iter()
                    .min_by(|a, b| a.residual.total_cmp(&b.residual))
            });
            let best = best.expect("at least the empty support is tried");
            Ok(ConsistencyResult {
                mode: mode.id.clone(),
                consistent: best.consistent,
                best_support: Some(best.support.clone()),
                x0_estimate: Some(best.x0.clone()),
                residual: best.residual,
                checked_supports: fits.len(),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModeEstimate {
    pub unique: bool,
    pub mode: Option<String>,
    pub consistent: Vec<String>,
    /// Set when a controlled-case answer relies on the input being generic.
    pub caveat: Option<String>,
}

/// The unique consistent mode, if there is one.
pub fn estimate_mode<T: Field>(
    sys: &SwitchingSystem<T>,
    y: &Matrix<T>,
    u: &Matrix<T>,
    sigma: usize,
    rho: usize,
    opts: &EstimateOptions,
) -> Result<ModeEstimate> {
    let results = consistent_modes(sys, y, u, sigma, rho, opts)?;
    let consistent: Vec<String> = results.into_iter().filter(|r| r.consistent).map(|r| r.mode).collect();
    if consistent.is_empty() {
        return Err(Error::NoConsistentMode);
    }
    let unique = consistent.len() == 1;
    let caveat = (sys.m() > 0).then(|| {
        "uniqueness guarantees for systems with inputs assume a generic input sequence; \
         this input was not certified"
            .to_string()
    });
    Ok(ModeEstimate {
        unique,
        mode: unique.then(|| consistent[0].clone()),
        consistent,
        caveat,
    })
}

#[cfg(test)]
mod tests;

//! Switching-system data model: modes, the augmented pair `S_ij`, stacked
//! observability and Markov (Toeplitz) matrices, discretization and model
//! files.

mod augmented;
pub mod boost;
mod discretize;
pub mod io;
mod stacked;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactla::{Field, IndexSet, Matrix};

pub use augmented::{build_augmented, AugmentedPair};
pub use discretize::{discretize, discretize_euler, discretize_zoh, Method};
pub use stacked::{
    markov_matrices, mode_observability, mode_toeplitz, obs_stack, observability_matrix,
    stacked_output_map,
    toeplitz, MarkovMatrices, StackedOutputMap,
};

/// One discrete state: `x(t+1) = A x(t) + B u(t)`, `y(t) = C x(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearMode<T: Field> {
    pub id: String,
    pub a: Matrix<T>,
    pub b: Matrix<T>,
    pub c: Matrix<T>,
}

impl<T: Field> LinearMode<T> {
    pub fn new(id: impl Into<String>, a: Matrix<T>, b: Matrix<T>, c: Matrix<T>) -> Result<Self> {
        let id = id.into();
        let n = a.rows();
        if !a.is_square() {
            return Err(Error::model(
                format!("mode {id}: A"),
                format!("must be square, got {}×{}", a.rows(), a.cols()),
            ));
        }
        if b.rows() != n {
            return Err(Error::model(
                format!("mode {id}: B"),
                format!("has {} rows, expected n = {n}", b.rows()),
            ));
        }
        if c.cols() != n {
            return Err(Error::model(
                format!("mode {id}: C"),
                format!("has {} columns, expected n = {n}", c.cols()),
            ));
        }
        if c.rows() == 0 {
            return Err(Error::model(format!("mode {id}: C"), "needs at least one output (p ≥ 1)"));
        }
        Ok(LinearMode { id, a, b, c })
    }

    /// Autonomous mode: `B` has no columns.
    pub fn autonomous(id: impl Into<String>, a: Matrix<T>, c: Matrix<T>) -> Result<Self> {
        let n = a.rows();
        Self::new(id, a, Matrix::zeros(n, 0), c)
    }

    pub fn n(&self) -> usize {
        self.a.rows()
    }

    pub fn m(&self) -> usize {
        self.b.cols()
    }

    pub fn p(&self) -> usize {
        self.c.rows()
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.n(), self.m(), self.p())
    }

    pub fn is_autonomous(&self) -> bool {
        self.m() == 0 || self.b.is_zero()
    }

    /// Same mode with the input matrix dropped.
    pub fn without_input(&self) -> Self {
        LinearMode {
            id: self.id.clone(),
            a: self.a.clone(),
            b: Matrix::zeros(self.n(), 0),
            c: self.c.clone(),
        }
    }

    pub fn to_f64(&self) -> LinearMode<f64> {
        LinearMode {
            id: self.id.clone(),
            a: self.a.to_f64(),
            b: self.b.to_f64(),
            c: self.c.to_f64(),
        }
    }
}

/// A finite family of linear modes sharing `(n, m, p)`, with the attack
/// budgets and the minimum dwell time.
#[derive(Debug, Clone, PartialEq)]
pub struct SwitchingSystem<T: Field> {
    pub modes: Vec<LinearMode<T>>,
    /// Sensor attack budget σ.
    pub sigma: usize,
    /// Actuator attack budget ρ.
    pub rho: usize,
    /// Minimum dwell time in steps.
    pub dwell: usize,
    /// Free-form provenance notes carried into reports.
    pub notes: Vec<String>,
}

impl<T: Field> SwitchingSystem<T> {
    pub fn new(modes: Vec<LinearMode<T>>, sigma: usize, rho: usize, dwell: usize) -> Result<Self> {
        if modes.len() < 2 {
            return Err(Error::model("modes", "at least two modes required"));
        }
        let dims = modes[0].dims();
        for (k, mode) in modes.iter().enumerate() {
            if mode.dims() != dims {
                let (n, m, p) = dims;
                let (n2, m2, p2) = mode.dims();
                return Err(Error::model(
                    format!("modes[{k}]"),
                    format!("dimensions (n, m, p) = ({n2}, {m2}, {p2}) differ from ({n}, {m}, {p})"),
                ));
            }
            if modes[..k].iter().any(|other| other.id == mode.id) {
                return Err(Error::model(
                    format!("modes[{k}].id"),
                    format!("duplicate mode id {:?}", mode.id),
                ));
            }
        }
        let sys = SwitchingSystem {
            modes,
            sigma,
            rho,
            dwell,
            notes: Vec::new(),
        };
        sys.check_budgets(sigma, rho)?;
        if dwell < 1 {
            return Err(Error::model("dwell", "minimum dwell time must be at least 1"));
        }
        Ok(sys)
    }

    pub fn n(&self) -> usize {
        self.modes[0].n()
    }

    pub fn m(&self) -> usize {
        self.modes[0].m()
    }

    pub fn p(&self) -> usize {
        self.modes[0].p()
    }

    /// Pairwise analysis horizon, `2n` samples.
    pub fn horizon(&self) -> usize {
        2 * self.n()
    }

    /// Load-time budget check: `σ < p` and `ρ ≤ m`. The stricter `2σ < p`
    /// is enforced by the secure deciders.
    pub fn check_budgets(&self, sigma: usize, rho: usize) -> Result<()> {
        if sigma >= self.p() {
            return Err(Error::model(
                "sigma",
                format!("σ = {sigma} must be smaller than p = {}", self.p()),
            ));
        }
        if rho > self.m() {
            return Err(Error::model(
                "rho",
                format!("ρ = {rho} exceeds the number of actuators m = {}", self.m()),
            ));
        }
        Ok(())
    }

    /// Warnings that do not invalidate the model.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.dwell < self.horizon() {
            out.push(format!(
                "dwell time {} is shorter than the analysis horizon 2n = {}; verdicts assume no switch within 2n steps",
                self.dwell,
                self.horizon()
            ));
        }
        out
    }

    pub fn mode(&self, id: &str) -> Result<&LinearMode<T>> {
        self.modes
            .iter()
            .find(|m| m.id == id)
            .ok_or_else(|| Error::model("mode", format!("no mode with id {id:?}")))
    }

    pub fn mode_index(&self, id: &str) -> Result<usize> {
        self.modes
            .iter()
            .position(|m| m.id == id)
            .ok_or_else(|| Error::model("mode", format!("no mode with id {id:?}")))
    }

    /// Unordered pairs `(i, j)`, `i < j`, in mode order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let k = self.modes.len();
        (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect()
    }

    pub fn to_f64(&self) -> SwitchingSystem<f64> {
        SwitchingSystem {
            modes: self.modes.iter().map(LinearMode::to_f64).collect(),
            sigma: self.sigma,
            rho: self.rho,
            dwell: self.dwell,
            notes: self.notes.clone(),
        }
    }
}

/// Attack supports for one augmented pair: sensors `Γ` (`|Γ| ≤ 2σ`) and
/// actuators `Δ_i`, `Δ_j` (`|Δ_k| ≤ ρ`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AttackPattern {
    pub gamma: IndexSet,
    pub delta_i: IndexSet,
    pub delta_j: IndexSet,
}

impl AttackPattern {
    pub fn sensors(gamma: IndexSet) -> Self {
        AttackPattern {
            gamma,
            delta_i: IndexSet::empty(),
            delta_j: IndexSet::empty(),
        }
    }

    pub fn validate(&self, p: usize, m: usize, sigma: usize, rho: usize) -> Result<()> {
        self.gamma.check_bound(p)?;
        self.delta_i.check_bound(m)?;
        self.delta_j.check_bound(m)?;
        if self.gamma.len() > 2 * sigma {
            return Err(Error::InvalidBudget(format!(
                "|Γ| = {} exceeds 2σ = {}",
                self.gamma.len(),
                2 * sigma
            )));
        }
        if self.delta_i.len() > rho || self.delta_j.len() > rho {
            return Err(Error::InvalidBudget(format!(
                "|Δ| exceeds ρ = {rho} in Δ_i = {}, Δ_j = {}",
                self.delta_i, self.delta_j
            )));
        }
        Ok(())
    }
}

impl std::fmt::Display for AttackPattern {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Γ = {}", self.gamma)?;
        if !self.delta_i.is_empty() || !self.delta_j.is_empty() {
            write!(f, ", Δ_i = {}, Δ_j = {}", self.delta_i, self.delta_j)?;
        }
        Ok(())
    }
}

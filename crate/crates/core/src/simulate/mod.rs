//! Trace generation for attacked modes and cyclic-sparse attack synthesis.
//!
//! A trace over `τ` samples follows
//!
//! ```text
//! x(t+1) = A x(t) + B (u(t) + v(t)),   y(t) = C x(t) + w(t),   t = 0..τ−1
//! ```
//!
//! with `w(t)` supported on a fixed sensor set and `v(t)` on a fixed
//! actuator set for the whole horizon.

mod trace_io;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::disting::Witness;
use crate::error::{Error, Result};
use crate::exactla::{Field, IndexSet, Matrix};
use crate::model::{AugmentedPair, LinearMode};

pub use trace_io::{read_json_lines, TraceRecord};

/// Default bound on attack values.
pub const DEFAULT_MAGNITUDE: f64 = 1e3;

/// Generated values are multiples of this step.
const RESOLUTION: i64 = 1000;

/// Supports and generation parameters of a cyclic sparse attack.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttackSpec {
    pub sensor_support: IndexSet,
    pub actuator_support: IndexSet,
    pub magnitude: f64,
    pub seed: u64,
}

/// Realized attack sequences: row `t` of `w` (`τ × p`) corrupts `y(t)`,
/// row `t` of `v` (`τ × m`) corrupts `u(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AttackSignal<T: Field> {
    pub w: Matrix<T>,
    pub v: Matrix<T>,
}

impl<T: Field> AttackSignal<T> {
    pub fn none(tau: usize, p: usize, m: usize) -> Self {
        AttackSignal {
            w: Matrix::zeros(tau, p),
            v: Matrix::zeros(tau, m),
        }
    }

    pub fn sensors_only(w: Matrix<T>, m: usize) -> Self {
        let tau = w.rows();
        AttackSignal {
            w,
            v: Matrix::zeros(tau, m),
        }
    }

    /// Sensors with a nonzero entry at some sample.
    pub fn sensor_support(&self) -> IndexSet {
        support(&self.w)
    }

    pub fn actuator_support(&self) -> IndexSet {
        support(&self.v)
    }
}

fn support<T: Field>(m: &Matrix<T>) -> IndexSet {
    IndexSet::from_zero_based((0..m.cols()).filter(|&c| (0..m.rows()).any(|r| !m[(r, c)].is_zero())))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trace<T: Field> {
    pub mode: String,
    /// `τ + 1` states `x(0..=τ)`.
    pub x: Matrix<T>,
    pub u: Matrix<T>,
    pub y: Matrix<T>,
    pub w: Matrix<T>,
    pub v: Matrix<T>,
}

impl<T: Field> Trace<T> {
    pub fn tau(&self) -> usize {
        self.y.rows()
    }

    /// `[y(0); …; y(τ−1)]`.
    pub fn stacked_y(&self) -> Vec<T> {
        self.y.data().to_vec()
    }

    /// `[u(0); …; u(τ−2)]`, the inputs that reach the observed outputs.
    pub fn stacked_u(&self) -> Vec<T> {
        let k = self.u.cols() * self.tau().saturating_sub(1);
        self.u.data()[..k].to_vec()
    }

    pub fn stacked_v(&self) -> Vec<T> {
        let k = self.v.cols() * self.tau().saturating_sub(1);
        self.v.data()[..k].to_vec()
    }
}

/// Exact recursion of one mode over `tau` samples.
///
/// `u` and `attack.v` have `tau` rows and `m` columns; `attack.w` has `tau`
/// rows and `p` columns. An autonomous mode takes `m = 0` matrices.
pub fn simulate<T: Field>(
    mode: &LinearMode<T>,
    x0: &[T],
    u: &Matrix<T>,
    attack: &AttackSignal<T>,
    tau: usize,
) -> Result<Trace<T>> {
    let (n, m, p) = mode.dims();
    if tau == 0 {
        return Err(Error::dims("horizon τ must be at least 1"));
    }
    if x0.len() != n {
        return Err(Error::dims(format!("initial state has {} entries, expected n = {n}", x0.len())));
    }
    let expect = |name: &str, mat: &Matrix<T>, cols: usize| {
        if mat.shape() != (tau, cols) {
            return Err(Error::dims(format!(
                "{name} is {}×{}, expected {tau}×{cols}",
                mat.rows(),
                mat.cols()
            )));
        }
        Ok(())
    };
    expect("input u", u, m)?;
    expect("sensor attack w", &attack.w, p)?;
    expect("actuator attack v", &attack.v, m)?;
    let mut x = Matrix::zeros(tau + 1, n);
    let mut y = Matrix::zeros(tau, p);
    let mut state = x0.to_vec();
    for t in 0..tau {
        x.set_block(t, 0, &Matrix::from_vec(1, n, state.clone())?);
        let yt = mode.c.mul_vec(&state)?;
        for k in 0..p {
            y[(t, k)] = yt[k].clone() + attack.w[(t, k)].clone();
        }
        let drive: Vec<T> = (0..m).map(|k| u[(t, k)].clone() + attack.v[(t, k)].clone()).collect();
        let ax = mode.a.mul_vec(&state)?;
        let bu = mode.b.mul_vec(&drive)?;
        state = ax.into_iter().zip(bu).map(|(a, b)| a + b).collect();
    }
    x.set_block(tau, 0, &Matrix::from_vec(1, n, state)?);
    Ok(Trace {
        mode: mode.id.clone(),
        x,
        u: u.clone(),
        y,
        w: attack.w.clone(),
        v: attack.v.clone(),
    })
}

/// Unforced, unattacked trace.
pub fn simulate_autonomous<T: Field>(mode: &LinearMode<T>, x0: &[T], tau: usize) -> Result<Trace<T>> {
    let (_, m, p) = mode.dims();
    simulate(mode, x0, &Matrix::zeros(tau, m), &AttackSignal::none(tau, p, m), tau)
}

fn uniform<T: Field>(rng: &mut ChaCha8Rng, magnitude: f64) -> T {
    let bound = (magnitude * RESOLUTION as f64).round() as i64;
    T::from_ratio(rng.gen_range(-bound..=bound), RESOLUTION)
}

fn check_magnitude(magnitude: f64) -> Result<()> {
    if !(magnitude.is_finite() && magnitude > 0.0 && magnitude * (RESOLUTION as f64) < i64::MAX as f64 / 2.0) {
        return Err(Error::InvalidBudget(format!("attack magnitude must be positive and finite, got {magnitude}")));
    }
    Ok(())
}

/// Cyclic attack with uniformly random supports of exactly `σ` sensors and
/// `ρ` actuators and values uniform on `[−magnitude, magnitude]` (in steps
/// of `1/1000`), reproducible from `seed`.
pub fn gen_attack<T: Field>(
    p: usize,
    m: usize,
    sigma: usize,
    rho: usize,
    magnitude: f64,
    tau: usize,
    seed: u64,
) -> Result<(AttackSpec, AttackSignal<T>)> {
    if sigma > 0 && sigma >= p {
        return Err(Error::InvalidBudget(format!("σ = {sigma} must be smaller than p = {p}")));
    }
    if rho > m {
        return Err(Error::InvalidBudget(format!("ρ = {rho} exceeds m = {m}")));
    }
    check_magnitude(magnitude)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sensors = IndexSet::from_zero_based(sample(&mut rng, p, sigma));
    let actuators = IndexSet::from_zero_based(sample(&mut rng, m, rho));
    let mut w = Matrix::zeros(tau, p);
    let mut v = Matrix::zeros(tau, m);
    for t in 0..tau {
        for &k in sensors.as_slice() {
            w[(t, k)] = uniform(&mut rng, magnitude);
        }
        for &k in actuators.as_slice() {
            v[(t, k)] = uniform(&mut rng, magnitude);
        }
    }
    let spec = AttackSpec {
        sensor_support: sensors,
        actuator_support: actuators,
        magnitude,
        seed,
    };
    Ok((spec, AttackSignal { w, v }))
}

/// Random `tau × m` input with entries uniform on `[−magnitude, magnitude]`.
pub fn gen_input<T: Field>(m: usize, tau: usize, magnitude: f64, seed: u64) -> Result<Matrix<T>> {
    check_magnitude(magnitude)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    Ok(Matrix::from_fn(tau, m, |_, _| uniform(&mut rng, magnitude)))
}

/// Random initial state with entries uniform on `[−magnitude, magnitude]`.
pub fn gen_state<T: Field>(n: usize, magnitude: f64, seed: u64) -> Result<Vec<T>> {
    check_magnitude(magnitude)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5851_f42d_4c95_7f2d);
    Ok((0..n).map(|_| uniform(&mut rng, magnitude)).collect())
}

/// Simulates both unforced modes of `pair` from the witness initial states
/// under the witness attacks.
pub fn replay_witness<T: Field>(pair: &AugmentedPair<T>, witness: &Witness<T>) -> Result<(Trace<T>, Trace<T>)> {
    let (n, m, p) = pair.mode_i.dims();
    let tau = witness.tau();
    if witness.x0.len() != 2 * n {
        return Err(Error::InvalidWitness(format!(
            "initial state has {} entries, expected 2n = {}",
            witness.x0.len(),
            2 * n
        )));
    }
    if witness.w_i.shape() != (tau, p) || witness.w_j.shape() != (tau, p) {
        return Err(Error::InvalidWitness(format!("attack sequences must be {tau}×{p}")));
    }
    if !witness.w_i.restrict_cols(&witness.gamma_i, false)?.is_zero()
        || !witness.w_j.restrict_cols(&witness.gamma_j, false)?.is_zero()
    {
        return Err(Error::InvalidWitness("attack leaves its declared sensor support".into()));
    }
    let (xi, xj) = pair.split_state(&witness.x0);
    let u = Matrix::zeros(tau, m);
    let ti = simulate(&pair.mode_i, &xi, &u, &AttackSignal::sensors_only(witness.w_i.clone(), m), tau)?;
    let tj = simulate(&pair.mode_j, &xj, &u, &AttackSignal::sensors_only(witness.w_j.clone(), m), tau)?;
    Ok((ti, tj))
}

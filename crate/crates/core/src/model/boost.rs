//! DC/DC boost converter with three modes: switch open with the diode
//! conducting (1), switch closed (2), switch open with the diode blocking
//! (3). State is (capacitor voltage, inductor current).

use super::io::ModelFile;
use super::{discretize_euler, LinearMode, SwitchingSystem};
use crate::error::Result;
use crate::exactla::{Field, Matrix, Rational};

/// Bundled model file: `R = L = C = 1`, Euler step `h = 1/10`, `σ = 1`,
/// `ρ = 0`.
pub const BUNDLED_JSON: &str = include_str!("../../models/boost.json");

#[derive(Debug, Clone, PartialEq)]
pub struct BoostParams {
    pub r: Rational,
    pub l: Rational,
    pub c: Rational,
    pub h: Rational,
}

impl Default for BoostParams {
    fn default() -> Self {
        BoostParams {
            r: Rational::from_ratio(1, 1),
            l: Rational::from_ratio(1, 1),
            c: Rational::from_ratio(1, 1),
            h: Rational::from_ratio(1, 10),
        }
    }
}

/// Continuous-time modes for the given circuit parameters.
pub fn continuous_modes(params: &BoostParams) -> Result<Vec<LinearMode<Rational>>> {
    let zero = Rational::from_ratio(0, 1);
    let one = Rational::from_ratio(1, 1);
    let rc = -(one.clone() / (params.r.clone() * params.c.clone()));
    let inv_c = one.clone() / params.c.clone();
    let inv_l = one.clone() / params.l.clone();
    let m = |rows: Vec<Vec<Rational>>, cols: usize| Matrix::from_rows(rows, cols);

    let a1 = m(
        vec![
            vec![rc.clone(), inv_c.clone()],
            vec![-inv_l.clone(), zero.clone()],
        ],
        2,
    )?;
    let a2 = m(
        vec![vec![rc.clone(), zero.clone()], vec![zero.clone(), zero.clone()]],
        2,
    )?;
    let b1 = m(vec![vec![zero.clone()], vec![inv_l]], 1)?;
    let b3 = Matrix::zeros(2, 1);
    let c13 = m(
        vec![
            vec![zero.clone(), one.clone()],
            vec![zero.clone(), one.clone()],
            vec![rc.clone(), inv_c.clone()],
        ],
        2,
    )?;
    let c2 = m(
        vec![
            vec![one.clone(), zero.clone()],
            vec![one, zero],
            vec![rc, inv_c],
        ],
        2,
    )?;
    Ok(vec![
        LinearMode::new("1", a1, b1.clone(), c13.clone())?,
        LinearMode::new("2", a2.clone(), b1, c2)?,
        LinearMode::new("3", a2, b3, c13)?,
    ])
}

/// Euler-discretized boost converter with the given budgets.
pub fn boost_system(
    params: &BoostParams,
    sigma: usize,
    rho: usize,
) -> Result<SwitchingSystem<Rational>> {
    let modes = continuous_modes(params)?
        .into_iter()
        .map(|mut mode| {
            let (ad, bd) = discretize_euler(&mode.a, &mode.b, &params.h)?;
            mode.a = ad;
            mode.b = bd;
            Ok(mode)
        })
        .collect::<Result<Vec<_>>>()?;
    SwitchingSystem::new(modes, sigma, rho, 4)
}

pub fn bundled_file() -> ModelFile {
    ModelFile::from_json(BUNDLED_JSON).expect("bundled boost model parses")
}

/// The bundled model on backend `T`.
pub fn bundled<T: Field>() -> Result<SwitchingSystem<T>> {
    bundled_file().system()
}

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactla::{Backend, Field, Matrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Forward Euler, `A_d = I + hA`, `B_d = hB`. Rational in, rational out.
    #[default]
    Euler,
    /// Zero-order hold, `A_d = e^{Ah}`, `B_d = ∫₀ʰ e^{As} ds B`.
    Zoh,
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "euler" => Ok(Method::Euler),
            "zoh" => Ok(Method::Zoh),
            other => Err(Error::Parse {
                location: "discretization".into(),
                message: format!("unknown method {other:?} (expected euler or zoh)"),
            }),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Euler => "euler",
            Method::Zoh => "zoh",
        })
    }
}

fn check_inputs<T: Field>(ac: &Matrix<T>, bc: &Matrix<T>, h: f64) -> Result<()> {
    if h.is_nan() || h <= 0.0 {
        return Err(Error::NonpositiveStep(h.to_string()));
    }
    if !ac.is_square() || bc.rows() != ac.rows() {
        return Err(Error::dims(format!(
            "discretize needs square A and matching B, got {}×{} and {}×{}",
            ac.rows(),
            ac.cols(),
            bc.rows(),
            bc.cols()
        )));
    }
    Ok(())
}

pub fn discretize_euler<T: Field>(
    ac: &Matrix<T>,
    bc: &Matrix<T>,
    h: &T,
) -> Result<(Matrix<T>, Matrix<T>)> {
    check_inputs(ac, bc, h.to_f64())?;
    let ad = &Matrix::identity(ac.rows()) + &ac.scale(h);
    Ok((ad, bc.scale(h)))
}

/// Matrix exponential of the block matrix `[[A, B], [0, 0]]·h` by scaling
/// and squaring a truncated Taylor series.
pub fn discretize_zoh(ac: &Matrix<f64>, bc: &Matrix<f64>, h: f64) -> Result<(Matrix<f64>, Matrix<f64>)> {
    check_inputs(ac, bc, h)?;
    let n = ac.rows();
    let m = bc.cols();
    let mut big = Matrix::zeros(n + m, n + m);
    big.set_block(0, 0, &ac.scale(&h));
    big.set_block(0, n, &bc.scale(&h));

    let norm = (0..big.rows())
        .map(|r| big.row(r).iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scaled = big.scale(&(0.5f64).powi(squarings as i32));

    let mut expm = Matrix::identity(n + m);
    let mut term = Matrix::identity(n + m);
    for k in 1..=30 {
        term = (&term * &scaled).scale(&(1.0 / k as f64));
        expm = &expm + &term;
        if term.max_abs() <= f64::EPSILON * expm.max_abs() {
            break;
        }
    }
    for _ in 0..squarings {
        expm = &expm * &expm;
    }
    Ok((expm.block(0, 0, n, n), expm.block(0, n, n, m)))
}

/// Backend-generic entry point. Zero-order hold produces irrational
/// entries in general, so it is only offered on the float backend.
pub fn discretize<T: Field>(
    ac: &Matrix<T>,
    bc: &Matrix<T>,
    h: &T,
    method: Method,
) -> Result<(Matrix<T>, Matrix<T>)> {
    match method {
        Method::Euler => discretize_euler(ac, bc, h),
        Method::Zoh => {
            if T::BACKEND != Backend::Float {
                return Err(Error::Unsupported(
                    "zoh discretization yields irrational entries; use the float backend".into(),
                ));
            }
            let (ad, bd) = discretize_zoh(&ac.to_f64(), &bc.to_f64(), h.to_f64())?;
            Ok((ad.map(|x| T::from_f64(*x)), bd.map(|x| T::from_f64(*x))))
        }
    }
}

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::Matrix;
use super::{exact, float};

/// Exact rational scalar.
pub type Rational = BigRational;

/// Scalar backend of a matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    /// Arbitrary-precision rationals; every rank and inclusion question is
    /// answered with zero tolerance.
    Exact,
    /// IEEE-754 doubles with singular-value thresholding.
    Float,
}

impl Display for Backend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Backend::Exact => "exact",
            Backend::Float => "float",
        })
    }
}

/// A scalar field together with the rank-revealing kernels the subspace
/// lattice is built on.
///
/// The `tol` arguments only matter to the float backend; `None` selects the
/// default `max(rows, cols) · σ_max · ε` threshold.
pub trait Field:
    Clone
    + Debug
    + Display
    + PartialEq
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const BACKEND: Backend;

    fn from_ratio(num: i64, den: i64) -> Self;

    fn to_f64(&self) -> f64;

    /// Exact on both backends for finite input (rationals take the binary
    /// expansion); non-finite input maps to zero.
    fn from_f64(v: f64) -> Self;

    /// Parses `"3"`, `"-1/2"`, `"−1/2"` (Unicode minus), `"0.1"` or `"2.5e-3"`.
    /// Decimal literals are read exactly on the rational backend.
    fn parse_literal(s: &str) -> Option<Self>;

    /// Whether a nonnegative residual counts as zero relative to `scale`.
    /// The exact backend ignores `rel_tol` and tests for exact zero.
    fn is_negligible(&self, scale: f64, rel_tol: f64) -> bool;

    fn rank(m: &Matrix<Self>, tol: Option<f64>) -> usize;

    /// Columns form a basis of `{x : m x = 0}`.
    fn kernel_basis(m: &Matrix<Self>, tol: Option<f64>) -> Matrix<Self>;

    /// Columns form a basis of the column space of `m`. The exact backend
    /// returns the unique column-reduced echelon basis.
    fn image_basis(m: &Matrix<Self>, tol: Option<f64>) -> Matrix<Self>;

    /// A minimizer of `‖a x − b‖₂`.
    fn least_squares(a: &Matrix<Self>, b: &[Self], tol: Option<f64>) -> Vec<Self>;
}

impl Field for Rational {
    const BACKEND: Backend = Backend::Exact;

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn from_f64(v: f64) -> Self {
        BigRational::from_float(v).unwrap_or_else(Zero::zero)
    }

    fn parse_literal(s: &str) -> Option<Self> {
        parse_rational(s)
    }

    fn is_negligible(&self, _scale: f64, _rel_tol: f64) -> bool {
        self.is_zero()
    }

    fn rank(m: &Matrix<Self>, _tol: Option<f64>) -> usize {
        exact::bareiss_rank(m)
    }

    fn kernel_basis(m: &Matrix<Self>, _tol: Option<f64>) -> Matrix<Self> {
        exact::kernel_basis(m)
    }

    fn image_basis(m: &Matrix<Self>, _tol: Option<f64>) -> Matrix<Self> {
        exact::image_basis(m)
    }

    fn least_squares(a: &Matrix<Self>, b: &[Self], _tol: Option<f64>) -> Vec<Self> {
        exact::least_squares(a, b)
    }
}

impl Field for f64 {
    const BACKEND: Backend = Backend::Float;

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn from_f64(v: f64) -> Self {
        if v.is_finite() {
            v
        } else {
            0.0
        }
    }

    fn parse_literal(s: &str) -> Option<Self> {
        parse_rational(s).map(|r| Field::to_f64(&r))
    }

    fn is_negligible(&self, scale: f64, rel_tol: f64) -> bool {
        self.abs() <= rel_tol * scale.max(1.0)
    }

    fn rank(m: &Matrix<Self>, tol: Option<f64>) -> usize {
        float::rank(m, tol)
    }

    fn kernel_basis(m: &Matrix<Self>, tol: Option<f64>) -> Matrix<Self> {
        float::kernel_basis(m, tol)
    }

    fn image_basis(m: &Matrix<Self>, tol: Option<f64>) -> Matrix<Self> {
        float::image_basis(m, tol)
    }

    fn least_squares(a: &Matrix<Self>, b: &[Self], tol: Option<f64>) -> Vec<Self> {
        float::least_squares(a, b, tol)
    }
}

/// Exact decimal/fraction literal parser shared by both backends.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim().replace('\u{2212}', "-");
    if s.is_empty() {
        return None;
    }
    if let Some((num, den)) = s.split_once('/') {
        let num = parse_decimal(num.trim())?;
        let den = parse_decimal(den.trim())?;
        if den.is_zero() {
            return None;
        }
        return Some(num / den);
    }
    parse_decimal(&s)
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all_digits = format!("{int_part}{frac_part}");
    let numer: BigInt = all_digits.parse().ok()?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut value = if scale >= 0 {
        Rational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    if negative {
        value = -value;
    }
    Some(value)
}

/// Renders a scalar for JSON output: rationals as `"p/q"` strings, floats
/// as their shortest round-trip decimal.
pub fn to_literal<T: Field>(x: &T) -> String {
    x.to_string()
}

//! The Möbius form on pairs of lines in the plane and 1D face frequencies.

use std::f64::consts::LN_2;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::lattice::Rational;
use crate::quadrature::{adaptive_rect, QuadratureError, Rect, Tolerance};

/// Evaluation budget for the 1D cubatures.
pub const DEFAULT_MAX_EVALUATIONS: u64 = 20_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MoebiusError {
    #[error("density is singular at this point")]
    Singular,
    #[error("face index must be >= 1, got {0}")]
    Domain(i64),
    #[error("tolerance must be positive and finite")]
    InvalidTolerance,
    #[error("quadrature budget exceeded: best estimate {value} +/- {error}")]
    BudgetExceeded { value: f64, error: f64 },
    #[error("quadrature failed: {0}")]
    Quadrature(QuadratureError),
}

impl From<QuadratureError> for MoebiusError {
    fn from(e: QuadratureError) -> Self {
        match e {
            QuadratureError::BudgetExceeded { value, error, .. } => {
                MoebiusError::BudgetExceeded { value, error }
            }
            QuadratureError::InvalidTolerance => MoebiusError::InvalidTolerance,
            other => MoebiusError::Quadrature(other),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Exact,
    Quadrature,
    MonteCarlo,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Quadrature => "quadrature",
            Method::MonteCarlo => "mc",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegralEstimate {
    pub value: f64,
    pub abs_error: f64,
    pub method: Method,
    pub samples_or_cells: u64,
}

/// Intersections of two lines with a fixed reference line.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChartPoint1 {
    pub x: f64,
    pub y: f64,
}

/// Doubled angular coordinates of two lines through the origin.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AngularPoint {
    pub phi1: f64,
    pub phi2: f64,
}

pub fn density_1d_chart(p: ChartPoint1) -> Result<f64, MoebiusError> {
    let d = p.x - p.y;
    if d == 0.0 || !d.is_finite() {
        return Err(MoebiusError::Singular);
    }
    Ok(1.0 / (d * d))
}

fn half_difference_sin(p: AngularPoint) -> Result<(f64, f64), MoebiusError> {
    let h = 0.5 * (p.phi1 - p.phi2);
    let (s, c) = h.sin_cos();
    if s.abs() < 1e-300 || !s.is_finite() {
        return Err(MoebiusError::Singular);
    }
    Ok((s, c))
}

/// `cot²((φ₁ − φ₂)/2) / 4`, the angular form as printed.
pub fn density_1d_angular(p: AngularPoint) -> Result<f64, MoebiusError> {
    let (s, c) = half_difference_sin(p)?;
    let cot = c / s;
    Ok(0.25 * cot * cot)
}

/// Exact pullback of `dx dy/(x − y)²` under `x = tan(φ/2)`: `csc²((φ₁ − φ₂)/2) / 4`.
pub fn density_1d_angular_pullback(p: AngularPoint) -> Result<f64, MoebiusError> {
    let (s, _) = half_difference_sin(p)?;
    Ok(0.25 / (s * s))
}

fn check_index(k: i64) -> Result<(), MoebiusError> {
    if k < 1 {
        Err(MoebiusError::Domain(k))
    } else {
        Ok(())
    }
}

/// `(k+1)² / (k(k+2))`, exactly.
pub fn freq_1d_log_argument(k: i64) -> Result<Rational, MoebiusError> {
    check_index(k)?;
    let k = BigInt::from(k);
    let one = BigInt::from(1);
    let two = BigInt::from(2);
    Ok(Rational::new((&k + &one) * (&k + &one), &k * (&k + &two)))
}

/// Relative frequency `ln(1 + 1/(k(k+2)))` of the face with integer length `k`.
pub fn freq_1d_exact(k: i64) -> Result<f64, MoebiusError> {
    check_index(k)?;
    let k = k as f64;
    Ok((1.0 / (k * (k + 2.0))).ln_1p())
}

/// Gauss–Kuzmin probability of the digit `k`.
pub fn gk_frequency(k: i64) -> Result<f64, MoebiusError> {
    Ok(freq_1d_exact(k)? / LN_2)
}

/// `Σ_{k=1}^{K} freq_1d_exact(k) = ln(2(K+1)/(K+2))`.
pub fn freq_1d_partial_sum(k_max: i64) -> Result<f64, MoebiusError> {
    check_index(k_max)?;
    let k = k_max as f64;
    Ok((2.0 * (k + 1.0) / (k + 2.0)).ln())
}

/// Cross-ratio `(c − a)(d − b) / ((c − b)(d − a))`.
pub fn cross_ratio(
    a: &Rational,
    b: &Rational,
    c: &Rational,
    d: &Rational,
) -> Result<Rational, MoebiusError> {
    let den = (c - b) * (d - a);
    if den.is_zero() {
        return Err(MoebiusError::Singular);
    }
    Ok((c - a) * (d - b) / den)
}

/// Cubature of the chart density over `[−1, 0] × [k, k+1]` to absolute tolerance `tol`.
pub fn freq_1d_numeric(k: i64, tol: f64) -> Result<IntegralEstimate, MoebiusError> {
    freq_1d_numeric_with_budget(k, tol, DEFAULT_MAX_EVALUATIONS)
}

pub fn freq_1d_numeric_with_budget(
    k: i64,
    tol: f64,
    max_evaluations: u64,
) -> Result<IntegralEstimate, MoebiusError> {
    check_index(k)?;
    let lo = k as f64;
    let est = adaptive_rect(
        |x, y| 1.0 / ((x - y) * (x - y)),
        Rect::new(-1.0, 0.0, lo, lo + 1.0),
        Tolerance::absolute(tol),
        max_evaluations,
    )?;
    Ok(IntegralEstimate {
        value: est.value,
        abs_error: est.error,
        method: Method::Quadrature,
        samples_or_cells: est.evaluations,
    })
}

/// Mass of all faces: the chart density over `[−1, 0] × [1, ∞)`, via `y = 1/u`.
pub fn total_mass_check() -> Result<IntegralEstimate, MoebiusError> {
    let est = adaptive_rect(
        |x, u| {
            let d = u * x - 1.0;
            1.0 / (d * d)
        },
        Rect::new(-1.0, 0.0, 0.0, 1.0),
        Tolerance::absolute(1e-12),
        DEFAULT_MAX_EVALUATIONS,
    )?;
    Ok(IntegralEstimate {
        value: est.value,
        abs_error: est.error,
        method: Method::Quadrature,
        samples_or_cells: est.evaluations,
    })
}

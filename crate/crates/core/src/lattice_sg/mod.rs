//! The discrete-time lattice sine–Gordon equation
//!
//! ```text
//! u₁₁ · u₀₀ · (1 − q⁴ u₁₀ u₀₁) = u₁₀ u₀₁ − p⁴
//! ```
//!
//! on an elementary square, its constant background `p/q` and the linear
//! waves riding on it.

mod field;
mod linear;

use thiserror::Error;

pub use field::{background_shift, Field2D, ShiftDirection};
pub use linear::{dispersion, group_velocity, linear_residual, plane_wave, PlaneWave};

/// Default pole-proximity tolerance, relative to the background `p/q`.
pub const DEFAULT_SINGULAR_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SgError {
    #[error("lattice parameters must be finite and nonzero (p = {p}, q = {q})")]
    InvalidParams { p: f64, q: f64 },
    #[error("sigma must be positive and finite, got {sigma}")]
    InvalidSigma { sigma: f64 },
    #[error("quad step too close to a pole (denominator {denominator:e}){}", fmt_location(.location))]
    Singular { denominator: f64, location: Option<(i64, i64)> },
    #[error("non-finite field value{}", fmt_location(.location))]
    NonFinite { location: Option<(i64, i64)> },
    #[error("inconsistent window: {0}")]
    Window(String),
    #[error("dispersion relation has a pole at k = {k}")]
    Pole { k: f64 },
    #[error("group velocity has imaginary part {imag:e} at k = {k}")]
    ComplexGroupVelocity { k: f64, imag: f64 },
}

fn fmt_location(location: &Option<(i64, i64)>) -> String {
    match location {
        Some((n, m)) => format!(" at (n, m) = ({n}, {m})"),
        None => String::new(),
    }
}

impl SgError {
    fn at(self, n: i64, m: i64) -> Self {
        match self {
            SgError::Singular { denominator, .. } => SgError::Singular { denominator, location: Some((n, m)) },
            SgError::NonFinite { .. } => SgError::NonFinite { location: Some((n, m)) },
            other => other,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SgParams {
    pub p: f64,
    pub q: f64,
    pub sigma: f64,
}

impl SgParams {
    pub fn new(p: f64, q: f64) -> Result<Self, SgError> {
        if !(p.is_finite() && q.is_finite()) || p == 0.0 || q == 0.0 {
            return Err(SgError::InvalidParams { p, q });
        }
        Ok(SgParams { p, q, sigma: p * p * q * q })
    }

    /// The constant solution `p/q`.
    pub fn background(&self) -> f64 {
        self.p / self.q
    }

    fn p4(&self) -> f64 {
        self.p.powi(4)
    }

    fn q4(&self) -> f64 {
        self.q.powi(4)
    }
}

fn checked(value: f64) -> Result<f64, SgError> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(SgError::NonFinite { location: None })
    }
}

/// `u₁₁` from the other three corners of a square.
pub fn sg_quad_step(u00: f64, u10: f64, u01: f64, params: &SgParams, tol: f64) -> Result<f64, SgError> {
    let inner = 1.0 - params.q4() * u10 * u01;
    if u00.abs() <= tol {
        return Err(SgError::Singular { denominator: u00, location: None });
    }
    if inner.abs() <= tol {
        return Err(SgError::Singular { denominator: inner, location: None });
    }
    checked((u10 * u01 - params.p4()) / (u00 * inner))
}

/// `u₀₁` from `u₀₀, u₁₀, u₁₁` — the same relation solved for the upper-left
/// corner.
pub fn sg_quad_step_upper_left(u00: f64, u10: f64, u11: f64, params: &SgParams, tol: f64) -> Result<f64, SgError> {
    let inner = 1.0 + params.q4() * u00 * u11;
    if u10.abs() <= tol {
        return Err(SgError::Singular { denominator: u10, location: None });
    }
    if inner.abs() <= tol {
        return Err(SgError::Singular { denominator: inner, location: None });
    }
    checked((u00 * u11 + params.p4()) / (u10 * inner))
}

/// Direction in which each new row is filled.
///
/// `Rightward` takes the left column as boundary and fills `n` increasing;
/// its row recurrence amplifies perturbations by `(σ+1)/|σ−1| > 1` per site,
/// so it is only usable on narrow windows. `Leftward` takes the right column
/// and damps by `|σ−1|/(σ+1) < 1`; linear waves travel leftward (negative
/// group velocity), so the right column is the upstream side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sweep {
    Rightward,
    #[default]
    Leftward,
}

/// Fills `[n_min, n_min + row.len()) × [0, boundary.len())` from the bottom
/// row and one boundary column (`boundary[m]` at `n_min` for `Rightward`, at
/// the last column for `Leftward`; `boundary[0]` is ignored in favour of the
/// row). `tol` is relative to `|p/q|`.
pub fn sg_evolve(
    initial_row: &[f64],
    n_min: i64,
    boundary: &[f64],
    sweep: Sweep,
    params: &SgParams,
    tol: f64,
) -> Result<Field2D, SgError> {
    let width = initial_row.len();
    if width < 2 || boundary.is_empty() {
        return Err(SgError::Window(format!("need ≥ 2 columns and ≥ 1 row, got {width} × {}", boundary.len())));
    }
    if let Some(i) = initial_row.iter().position(|v| !v.is_finite()) {
        return Err(SgError::NonFinite { location: Some((n_min + i as i64, 0)) });
    }
    if let Some(m) = boundary.iter().position(|v| !v.is_finite()) {
        return Err(SgError::NonFinite { location: Some((n_min, m as i64)) });
    }
    let abs_tol = tol * params.background().abs();
    let rows = boundary.len();
    let mut field = Field2D::zeros(n_min, width, rows - 1);
    let data = field.values_mut();
    data[..width].copy_from_slice(initial_row);
    for m in 0..rows - 1 {
        let (below, above) = data[m * width..(m + 2) * width].split_at_mut(width);
        match sweep {
            Sweep::Rightward => {
                above[0] = boundary[m + 1];
                for j in 0..width - 1 {
                    above[j + 1] = sg_quad_step(below[j], below[j + 1], above[j], params, abs_tol)
                        .map_err(|e| e.at(n_min + j as i64 + 1, m as i64 + 1))?;
                }
            }
            Sweep::Leftward => {
                above[width - 1] = boundary[m + 1];
                for j in (0..width - 1).rev() {
                    above[j] = sg_quad_step_upper_left(below[j], below[j + 1], above[j + 1], params, abs_tol)
                        .map_err(|e| e.at(n_min + j as i64, m as i64 + 1))?;
                }
            }
        }
    }
    Ok(field)
}

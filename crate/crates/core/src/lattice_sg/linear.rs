//! Linear waves on the background: `(σ−1)(v₀₀ + v₁₁) + (σ+1)(v₁₀ + v₀₁) = 0`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{Field2D, SgError};

/// A mode `z^n Ω^m` with `z = e^{ik}` and `Ω = e^{−iω}`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct PlaneWave {
    pub k: f64,
    pub z: Complex64,
    #[serde(rename = "Omega")]
    pub big_omega: Complex64,
    pub omega: f64,
}

fn check_sigma(sigma: f64) -> Result<(), SgError> {
    if sigma.is_finite() && sigma > 0.0 {
        Ok(())
    } else {
        Err(SgError::InvalidSigma { sigma })
    }
}

/// `Ω = −((σ+1)z + σ−1) / ((σ−1)z + σ+1)`.
///
/// `ω` continues `−Arg Ω` from `ω(0) = −π`. For `σ > 0` both `(σ+1) + (σ−1)e^{∓ik}`
/// have positive real part, so
/// `ω = −π − k + 2·atan2((σ−1) sin k, (σ+1) + (σ−1) cos k)` is continuous in `k`.
pub fn dispersion(k: f64, sigma: f64) -> Result<PlaneWave, SgError> {
    check_sigma(sigma)?;
    let z = Complex64::from_polar(1.0, k);
    let num = (sigma + 1.0) * z + (sigma - 1.0);
    let den = (sigma - 1.0) * z + (sigma + 1.0);
    if den.norm() <= 1e-14 * (sigma + 1.0) {
        return Err(SgError::Pole { k });
    }
    let big_omega = -num / den;
    let omega = -PI - k + 2.0 * ((sigma - 1.0) * k.sin()).atan2(sigma + 1.0 + (sigma - 1.0) * k.cos());
    Ok(PlaneWave { k, z, big_omega, omega })
}

/// `dω/dk = −4σz / ([(σ+1)z + σ−1][(σ−1)z + σ+1])`, which is real on `|z| = 1`.
pub fn group_velocity(k: f64, sigma: f64) -> Result<f64, SgError> {
    check_sigma(sigma)?;
    let z = Complex64::from_polar(1.0, k);
    let den = ((sigma + 1.0) * z + (sigma - 1.0)) * ((sigma - 1.0) * z + (sigma + 1.0));
    if den.norm() <= 1e-14 * (sigma + 1.0).powi(2) {
        return Err(SgError::Pole { k });
    }
    let v = -4.0 * sigma * z / den;
    if v.im.abs() > 1e-10 {
        return Err(SgError::ComplexGroupVelocity { k, imag: v.im });
    }
    Ok(v.re)
}

/// `A·cos(kn − ωm)`, the real part of `A z^n Ω^m`.
pub fn plane_wave(wave: &PlaneWave, amplitude: f64, n: i64, m: i64) -> f64 {
    amplitude * (wave.k * n as f64 - wave.omega * m as f64).cos()
}

/// Largest residual of the linearized equation over all elementary squares.
pub fn linear_residual(v: &Field2D, sigma: f64) -> f64 {
    let mut worst: f64 = 0.0;
    for m in 0..v.m_max() {
        let (lo, hi) = (v.row(m), v.row(m + 1));
        for j in 0..v.width().saturating_sub(1) {
            let r = (sigma - 1.0) * (lo[j] + hi[j + 1]) + (sigma + 1.0) * (lo[j + 1] + hi[j]);
            worst = worst.max(r.abs());
        }
    }
    worst
}

//! Scale ratios, the carrier wavenumber and the coefficients of the discrete
//! NLS equation.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::NlsError;
use crate::lattice_sg::{dispersion, group_velocity, PlaneWave, SgParams};

/// `R(k) = (σ²−1) cos k + σ² + 1`; `|(σ+1)z + σ−1|² = 2R`.
pub(crate) fn modulus_radicand(k: f64, sigma: f64) -> f64 {
    (sigma * sigma - 1.0) * k.cos() + sigma * sigma + 1.0
}

/// `k ∈ (0, π)` with `ω_{,k}(k) = ratio`.
///
/// On `(0, π)` the group velocity `−2σ/R(k)` is monotone between `−1/σ`
/// and `−σ`; the root is bracketed on a scan and bisected. At `σ = 1` the
/// velocity is identically `−1` and `π/2` is returned by convention.
pub fn select_wavenumber(ratio: Rational64, sigma: f64) -> Result<f64, NlsError> {
    let target = ratio.to_f64().unwrap_or(f64::NAN);
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(NlsError::Config(format!("sigma must be positive, got {sigma}")));
    }
    let v = |k: f64| -2.0 * sigma / modulus_radicand(k, sigma);
    if (sigma - 1.0).abs() < 1e-14 {
        return if (target + 1.0).abs() <= 1e-12 {
            Ok(PI / 2.0)
        } else {
            Err(NlsError::NoWavenumber { ratio: target, lo: -1.0, hi: -1.0 })
        };
    }
    const SAMPLES: usize = 2048;
    let ks: Vec<f64> = (0..=SAMPLES).map(|i| PI * i as f64 / SAMPLES as f64).collect();
    let vs: Vec<f64> = ks.iter().map(|k| v(*k)).collect();
    let lo = vs.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = vs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let no_solution = NlsError::NoWavenumber { ratio: target, lo, hi };
    let bracket = (0..SAMPLES).find(|&i| (vs[i] - target) * (vs[i + 1] - target) <= 0.0).ok_or(no_solution.clone())?;
    let (mut a, mut b) = (ks[bracket], ks[bracket + 1]);
    let fa = vs[bracket] - target;
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if (v(mid) - target) * fa > 0.0 {
            a = mid;
        } else {
            b = mid;
        }
        if b - a <= f64::EPSILON * b {
            break;
        }
    }
    let k = 0.5 * (a + b);
    // endpoints of (0, π) are excluded
    if k <= 0.0 || k >= PI || (v(k) - target).abs() > 1e-10 {
        return Err(no_solution);
    }
    Ok(k)
}

/// The constant `S = ρe^{iθ}` making `M1 = SΩ[(σ−1)z + σ+1]` equal to the
/// requested integer, and the matching `M2 = Sz[(σ−1)Ω + σ+1]`.
///
/// `θ = π − atan2((σ+1) sin k, (σ+1) cos k + σ−1) + ℓπ`, `ρ = (−1)^ℓ M1 / √(2R)`;
/// the branch is then normalized so that `ρ > 0` and `θ ∈ [−π, π)`, which
/// makes `S` independent of `ℓ`.
pub fn compute_s(m1: i64, k: f64, sigma: f64, ell: i64) -> Result<(Complex64, f64), NlsError> {
    let radicand = modulus_radicand(k, sigma);
    if radicand.is_nan() || radicand <= 0.0 || m1 == 0 {
        return Err(NlsError::DegenerateModulus { k, sigma });
    }
    let wave = dispersion(k, sigma)?;
    let mut theta = PI - ((sigma + 1.0) * k.sin()).atan2((sigma + 1.0) * k.cos() + sigma - 1.0) + ell as f64 * PI;
    let mut rho = if ell.rem_euclid(2) == 0 { 1.0 } else { -1.0 } * m1 as f64 / (2.0 * radicand).sqrt();
    if rho < 0.0 {
        rho = -rho;
        theta += PI;
    }
    theta = (theta + PI).rem_euclid(2.0 * PI) - PI;
    let s = Complex64::from_polar(rho, theta);
    let (z, om) = (wave.z, wave.big_omega);
    let m1_back = s * om * ((sigma - 1.0) * z + sigma + 1.0);
    let m2 = s * z * ((sigma - 1.0) * om + sigma + 1.0);
    let scale = m1.unsigned_abs() as f64;
    if (m1_back - m1 as f64).norm() > 1e-10 * scale || m2.im.abs() > 1e-10 * scale.max(m2.norm()) {
        return Err(NlsError::DegenerateModulus { k, sigma });
    }
    Ok((s, m2.re))
}

/// Which cubic coefficient drives the reduced equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CubicRule {
    /// `2q⁴(σ²−1) sin³k / R(k)`.
    Printed,
    /// Harmonic balance of the third-order first-harmonic equation.
    #[default]
    HarmonicBalance,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReductionConfig {
    pub n: i64,
    pub k: f64,
    pub params: SgParams,
    pub m1: i64,
    pub m2: i64,
    pub ell: i64,
    pub s: Complex64,
    pub cubic: CubicRule,
}

impl ReductionConfig {
    /// Picks `k` from the ratio `M2/M1` and the constant `S` from `M1`.
    pub fn new(n: i64, params: SgParams, m1: i64, m2: i64, ell: i64, cubic: CubicRule) -> Result<Self, NlsError> {
        if n < 2 {
            return Err(NlsError::Config(format!("N must be at least 2, got {n}")));
        }
        if m1 == 0 {
            return Err(NlsError::Config("M1 must be nonzero".into()));
        }
        let k = select_wavenumber(Rational64::new(m2, m1), params.sigma)?;
        let (s, m2_real) = compute_s(m1, k, params.sigma, ell)?;
        if (m2_real - m2 as f64).abs() > 1e-8 * (m2.abs().max(1) as f64) {
            return Err(NlsError::Config(format!("M2 = {m2} is inconsistent with the computed {m2_real}")));
        }
        Ok(ReductionConfig { n, k, params, m1, m2, ell, s, cubic })
    }

    pub fn epsilon(&self) -> f64 {
        1.0 / self.n as f64
    }

    pub fn wave(&self) -> PlaneWave {
        dispersion(self.k, self.params.sigma).expect("validated at construction")
    }

    pub fn group_velocity(&self) -> f64 {
        group_velocity(self.k, self.params.sigma).expect("validated at construction")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NlsCoeffs {
    pub c1_hat: Complex64,
    pub c2_hat: Complex64,
    /// Printed closed form.
    pub c3_hat: f64,
    /// `4ĉ₁ + ĉ₂`.
    pub combined: f64,
    /// Harmonic-balance cubic coefficient.
    pub c3_balance: f64,
    pub cubic_rule: CubicRule,
}

impl NlsCoeffs {
    /// Cubic coefficient selected by `cubic_rule`.
    pub fn cubic(&self) -> f64 {
        match self.cubic_rule {
            CubicRule::Printed => self.c3_hat,
            CubicRule::HarmonicBalance => self.c3_balance,
        }
    }
}

/// `−M2²(σ²−1) sin k / (4σ)`.
pub fn combined_closed_form(m2: f64, k: f64, sigma: f64) -> f64 {
    -m2 * m2 * (sigma * sigma - 1.0) * k.sin() / (4.0 * sigma)
}

pub fn nls_coefficients_for(params: &SgParams, k: f64, m2: f64, cubic_rule: CubicRule) -> Result<NlsCoeffs, NlsError> {
    let sigma = params.sigma;
    let radicand = modulus_radicand(k, sigma);
    if radicand.abs() <= 1e-14 {
        return Err(NlsError::DegenerateModulus { k, sigma });
    }
    let i = Complex64::i();
    let z = Complex64::from_polar(1.0, k);
    let pre = m2 * m2 * (sigma - 1.0);
    let c1_hat = i * pre * ((sigma + 1.0) * z + sigma + 1.0) / (16.0 * sigma);
    let c2_hat = -i * pre * ((sigma + 1.0) * k.cos() + sigma + 1.0) / (4.0 * sigma);
    let sum = 4.0 * c1_hat + c2_hat;
    let closed = combined_closed_form(m2, k, sigma);
    if sum.im.abs() > 1e-12 * (1.0 + sum.norm()) || (sum.re - closed).abs() > 1e-12 * (1.0 + closed.abs()) {
        return Err(NlsError::Internal(format!("4c1 + c2 = {sum} disagrees with {closed}")));
    }
    let c3_hat = 2.0 * params.q.powi(4) * (sigma * sigma - 1.0) * k.sin().powi(3) / radicand;
    let c3_balance = cubic_balance(params, k)?;
    Ok(NlsCoeffs { c1_hat, c2_hat, c3_hat, combined: sum.re, c3_balance, cubic_rule })
}

pub fn nls_coefficients(config: &ReductionConfig) -> Result<NlsCoeffs, NlsError> {
    nls_coefficients_for(&config.params, config.k, config.m2 as f64, config.cubic)
}

/// Corner order `[u₀₀, u₁₀, u₀₁, u₁₁]` for the per-square harmonic algebra.
type Corners = [Complex64; 4];

/// Symmetric bilinear form of the quadratic part of the shifted quad
/// equation, divided by `p/q`:
/// `(1−σ)v₀₀v₁₁ − (1+σ)v₁₀v₀₁ − σ(v₀₀ + v₁₁)(v₁₀ + v₀₁)`.
fn quadratic_form(a: f64, sigma: f64, x: &Corners, y: &Corners) -> Complex64 {
    let sym = |i: usize, j: usize| 0.5 * (x[i] * y[j] + x[j] * y[i]);
    ((1.0 - sigma) * sym(0, 3) - (1.0 + sigma) * sym(1, 2) - sigma * (sym(0, 1) + sym(0, 2) + sym(3, 1) + sym(3, 2)))
        / a
}

/// Linear symbol on a mode `Z^n W^m`.
fn linear_symbol(sigma: f64, zz: Complex64, ww: Complex64) -> Complex64 {
    (1.0 - sigma) * (1.0 + zz * ww) - (1.0 + sigma) * (zz + ww)
}

/// Nonlinear frequency correction of a uniform wave
/// `u = p/q + ε(φE + c.c.) + ε²(ψ₀ + ψ₂E² + c.c.) + …`, expressed as the
/// coefficient `c` in `i∂φ + … + c φ|φ|² = 0`.
///
/// The quad equation is expanded about `p/q` (divided by `p/q` it reads
/// `L(v) + Q(v, v) − q⁴·(cubic corner products) + …`), the second and zeroth
/// harmonics are solved from `Q(e₁, e₁)` and `Q(e₁, ē₁)`, and the `E¹`
/// component of the third-order forcing is matched against the frequency
/// derivative of the linear symbol.
pub fn cubic_balance(params: &SgParams, k: f64) -> Result<f64, NlsError> {
    let c = cubic_balance_complex(params, k)?;
    if c.im.abs() > 1e-9 * (1.0 + c.norm()) {
        return Err(NlsError::Internal(format!("cubic coefficient is not real: {c}")));
    }
    Ok(c.re)
}

/// [`cubic_balance`] before discarding the (vanishing) imaginary part.
pub fn cubic_balance_complex(params: &SgParams, k: f64) -> Result<Complex64, NlsError> {
    let sigma = params.sigma;
    let a = params.background();
    let wave = dispersion(k, sigma)?;
    let (z, om) = (wave.z, wave.big_omega);
    let e1: Corners = [Complex64::new(1.0, 0.0), z, om, z * om];
    let e1b: Corners = e1.map(|v| v.inv());
    let e2: Corners = e1.map(|v| v * v);
    let second = linear_symbol(sigma, z * z, om * om);
    let zeroth = linear_symbol(sigma, Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0));
    if second.norm() < 1e-12 || zeroth.norm() < 1e-12 {
        return Err(NlsError::DegenerateModulus { k, sigma });
    }
    let psi2 = -quadratic_form(a, sigma, &e1, &e1) / second;
    let psi0 = -2.0 * quadratic_form(a, sigma, &e1, &e1b) / zeroth;
    // cubic part: −q⁴ (v₀₀v₁₁v₁₀ + v₀₀v₁₁v₀₁ + v₀₀v₁₀v₀₁ + v₁₁v₁₀v₀₁)
    let triples = [(0, 3, 1), (0, 3, 2), (0, 1, 2), (3, 1, 2)];
    let resonant: Complex64 =
        triples.iter().map(|&(x, y, w)| e1[x] * e1[y] * e1b[w] + e1[x] * e1b[y] * e1[w] + e1b[x] * e1[y] * e1[w]).sum();
    let psi0_corners: Corners = [psi0; 4];
    let psi2_corners: Corners = e2.map(|v| psi2 * v);
    let forcing = -params.q.powi(4) * resonant
        + 2.0 * quadratic_form(a, sigma, &e1, &psi0_corners)
        + 2.0 * quadratic_form(a, sigma, &e1b, &psi2_corners);
    // ∂/∂W of the linear symbol at W = Ω, times Ω (slow-time derivative)
    let d_symbol = om * ((1.0 - sigma) * z - (1.0 + sigma));
    Ok(Complex64::i() * forcing / d_symbol)
}

//! Slow envelopes and the completely discrete NLS stepping.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Serialize;

use super::{NlsCoeffs, NlsError};
use crate::lattice_sg::SgParams;

/// `φ_{n₂}` for `n₂ = n2_start, n2_start + 1, …` at one slow time.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeRow {
    pub n2_start: i64,
    pub values: Vec<Complex64>,
}

impl EnvelopeRow {
    pub fn new(n2_start: i64, values: Vec<Complex64>) -> Self {
        EnvelopeRow { n2_start, values }
    }

    pub fn from_fn(n2_start: i64, n2_end: i64, f: impl Fn(i64) -> Complex64) -> Self {
        EnvelopeRow { n2_start, values: (n2_start..=n2_end).map(f).collect() }
    }

    pub fn n2_end(&self) -> i64 {
        self.n2_start + self.values.len() as i64 - 1
    }

    pub fn get(&self, n2: i64) -> Option<Complex64> {
        let i = n2 - self.n2_start;
        if i < 0 {
            return None;
        }
        self.values.get(i as usize).copied()
    }

    pub fn max_modulus(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// `max|Δ³φ| / max|φ|`: how far the row is from order-2 slow variation.
    pub fn slow_order2_defect(&self) -> f64 {
        let scale = self.max_modulus();
        if scale == 0.0 || self.values.len() < 4 {
            return 0.0;
        }
        let worst = self.values.windows(4).map(|w| (w[3] - 3.0 * w[2] + 3.0 * w[1] - w[0]).norm()).fold(0.0, f64::max);
        worst / scale
    }

    /// CSV with header `n2,re_phi,im_phi`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n2,re_phi,im_phi\n");
        for (i, v) in self.values.iter().enumerate() {
            let _ = writeln!(out, "{},{:.16e},{:.16e}", self.n2_start + i as i64, v.re, v.im);
        }
        out
    }
}

/// Envelope rows indexed by slow time `m₂ = 0, 1, …`.
#[derive(Debug, Clone, PartialEq)]
pub struct Envelope2D {
    pub rows: Vec<EnvelopeRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HarmonicFields {
    /// `ψ⁽⁰⁾ = (q/p)|φ|²`
    pub psi0: Vec<Vec<f64>>,
    /// `ψ⁽²⁾ = (q/2p)φ²`
    pub psi2: Vec<Vec<Complex64>>,
}

pub fn harmonic_fields(phi: &Envelope2D, params: &SgParams) -> HarmonicFields {
    let r = params.q / params.p;
    HarmonicFields {
        psi0: phi.rows.iter().map(|row| row.values.iter().map(|v| r * v.norm_sqr()).collect()).collect(),
        psi2: phi.rows.iter().map(|row| row.values.iter().map(|v| 0.5 * r * v * v).collect()).collect(),
    }
}

/// Closure of the `n₂` stencil at the row ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Boundary {
    #[default]
    Periodic,
    /// Zero outside the row.
    Zero,
}

fn neighbour(values: &[Complex64], i: usize, offset: i64, boundary: Boundary) -> Complex64 {
    let len = values.len() as i64;
    let j = i as i64 + offset;
    match boundary {
        Boundary::Periodic => values[j.rem_euclid(len) as usize],
        Boundary::Zero if (0..len).contains(&j) => values[j as usize],
        Boundary::Zero => Complex64::new(0.0, 0.0),
    }
}

fn finite_row(n2_start: i64, values: Vec<Complex64>) -> Result<EnvelopeRow, NlsError> {
    if values.iter().all(|v| v.re.is_finite() && v.im.is_finite()) {
        Ok(EnvelopeRow { n2_start, values })
    } else {
        Err(NlsError::NonFinite)
    }
}

/// `φ' = φ + i[(4ĉ₁+ĉ₂)(φ₊₁ + φ₋₁ − 2φ) + c φ|φ|²]`, the explicit solution
/// of the reduced equation for the next slow time.
pub fn nls_step_with(row: &EnvelopeRow, coeffs: &NlsCoeffs, boundary: Boundary) -> Result<EnvelopeRow, NlsError> {
    let v = &row.values;
    if v.len() < 3 {
        return Err(NlsError::Window(format!("NLS step needs ≥ 3 points, got {}", v.len())));
    }
    let (c, cubic) = (coeffs.combined, coeffs.cubic());
    let i = Complex64::i();
    let next = (0..v.len())
        .map(|j| {
            let lap = neighbour(v, j, 1, boundary) + neighbour(v, j, -1, boundary) - 2.0 * v[j];
            v[j] + i * (c * lap + cubic * v[j] * v[j].norm_sqr())
        })
        .collect();
    finite_row(row.n2_start, next)
}

pub fn nls_step(row: &EnvelopeRow, coeffs: &NlsCoeffs) -> Result<EnvelopeRow, NlsError> {
    nls_step_with(row, coeffs, Boundary::Periodic)
}

/// Steps the five-point equation with separate `ĉ₁` (width-two) and `ĉ₂`
/// (width-one) second differences.
pub fn substitute_wide_stencil(
    row: &EnvelopeRow,
    coeffs: &NlsCoeffs,
    boundary: Boundary,
) -> Result<EnvelopeRow, NlsError> {
    let v = &row.values;
    if v.len() < 5 {
        return Err(NlsError::Window(format!("wide stencil needs ≥ 5 points, got {}", v.len())));
    }
    let cubic = coeffs.cubic();
    let i = Complex64::i();
    let next = (0..v.len())
        .map(|j| {
            let wide = neighbour(v, j, 2, boundary) + neighbour(v, j, -2, boundary) - 2.0 * v[j];
            let near = neighbour(v, j, 1, boundary) + neighbour(v, j, -1, boundary) - 2.0 * v[j];
            v[j] + i * (coeffs.c1_hat * wide + coeffs.c2_hat * near + cubic * v[j] * v[j].norm_sqr())
        })
        .collect();
    finite_row(row.n2_start, next)
}

/// Which traveling combination of `n₁`, `m₁` the envelope depends on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// `n₂ = n₁ − m₁`
    Difference,
    /// `n₂ = n₁ + m₁`
    Sum,
}

/// Largest modulus of
/// `M1 z[(σ−1)Ω+σ+1](ψ_{n₁+1} − ψ_{n₁−1}) + M2 Ω[(σ−1)z+σ+1](ψ_{m₁+1} − ψ_{m₁−1})`
/// for `ψ_{n₁,m₁} = φ(n₂)` over `n₁, m₁ ∈ window`.
pub fn residual_order2(
    phi: impl Fn(i64) -> Complex64,
    m1: f64,
    m2: f64,
    k: f64,
    sigma: f64,
    branch: Branch,
    window: std::ops::RangeInclusive<i64>,
) -> Result<f64, NlsError> {
    let wave = crate::lattice_sg::dispersion(k, sigma)?;
    let (z, om) = (wave.z, wave.big_omega);
    let a = m1 * z * ((sigma - 1.0) * om + sigma + 1.0);
    let b = m2 * om * ((sigma - 1.0) * z + sigma + 1.0);
    let psi = |n1: i64, mm: i64| match branch {
        Branch::Difference => phi(n1 - mm),
        Branch::Sum => phi(n1 + mm),
    };
    let mut worst: f64 = 0.0;
    for n1 in window.clone() {
        for mm in window.clone() {
            let r = a * (psi(n1 + 1, mm) - psi(n1 - 1, mm)) + b * (psi(n1, mm + 1) - psi(n1, mm - 1));
            worst = worst.max(r.norm());
        }
    }
    Ok(worst)
}

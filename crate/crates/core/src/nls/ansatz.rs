//! The modulated-wave ansatz on the fine lattice and its inverse, envelope
//! demodulation.
//!
//! Slow variables: `n₂ = (M1·n − M2·m)/N` and `m₂ = m/N²`.

use num_complex::Complex64;

use super::{Envelope2D, EnvelopeRow, NlsError, ReductionConfig};
use crate::lattice_sg::Field2D;

/// Bottom row and upstream (right) boundary column for the leftward sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct AnsatzData {
    pub n_min: i64,
    pub initial_row: Vec<f64>,
    /// Values at `n_max` for `m = 0..=m_max`.
    pub boundary_column: Vec<f64>,
}

/// Cubic Lagrange interpolation through the four samples around `x`.
fn interpolate_row(row: &EnvelopeRow, x: f64) -> Result<Complex64, NlsError> {
    let rel = x - row.n2_start as f64;
    let len = row.values.len();
    if len < 4 || rel < 1.0 || rel > (len - 2) as f64 {
        return Err(NlsError::Window(format!(
            "envelope window [{}, {}] does not cover n2 = {x:.3} with a cubic stencil",
            row.n2_start,
            row.n2_end()
        )));
    }
    let i = (rel.floor() as usize).min(len - 3);
    let t = rel - i as f64;
    let y = &row.values[i - 1..i + 3];
    let w = [
        -t * (t - 1.0) * (t - 2.0) / 6.0,
        (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0,
        -(t + 1.0) * t * (t - 2.0) / 2.0,
        (t + 1.0) * t * (t - 1.0) / 6.0,
    ];
    Ok(y.iter().zip(w).map(|(v, wi)| v * wi).sum())
}

/// `φ` at the fine point `(n, m)`: cubic in `n₂`, linear in `m₂` between the
/// stored slow-time rows.
pub fn envelope_at(envelope: &Envelope2D, config: &ReductionConfig, n: i64, m: i64) -> Result<Complex64, NlsError> {
    let nn = config.n as f64;
    let n2 = (config.m1 as f64 * n as f64 - config.m2 as f64 * m as f64) / nn;
    let m2 = m as f64 / (nn * nn);
    let last = envelope.rows.len().checked_sub(1).ok_or_else(|| NlsError::Window("empty envelope".into()))?;
    if m2 > last as f64 + 1e-12 || m < 0 {
        return Err(NlsError::Window(format!("slow time {m2:.3} beyond the {} stored envelope rows", last + 1)));
    }
    let i0 = (m2.floor() as usize).min(last);
    let f = m2 - i0 as f64;
    let lower = interpolate_row(&envelope.rows[i0], n2)?;
    if f == 0.0 {
        return Ok(lower);
    }
    Ok((1.0 - f) * lower + f * interpolate_row(&envelope.rows[i0 + 1], n2)?)
}

/// `u = p/q + ε²(q/p)|φ|² + 2 Re[εφE + ε²(q/2p)φ²E²]` with `E = e^{i(kn − ωm)}`.
pub fn ansatz_value(phi: Complex64, config: &ReductionConfig, n: i64, m: i64) -> f64 {
    let eps = config.epsilon();
    let wave = config.wave();
    let ratio = config.params.q / config.params.p;
    let e = Complex64::from_polar(1.0, config.k * n as f64 - wave.omega * m as f64);
    config.params.background()
        + eps * eps * ratio * phi.norm_sqr()
        + 2.0 * (eps * phi * e + eps * eps * 0.5 * ratio * phi * phi * e * e).re
}

/// Initial row on `[n_min, n_max]` at `m = 0` and the boundary column at
/// `n_max` for `m = 0..=m_max`, from the envelope's slow-time rows.
pub fn build_ansatz(
    envelope: &Envelope2D,
    config: &ReductionConfig,
    n_min: i64,
    n_max: i64,
    m_max: usize,
) -> Result<AnsatzData, NlsError> {
    if n_max <= n_min {
        return Err(NlsError::Window(format!("empty fine window [{n_min}, {n_max}]")));
    }
    let initial_row = (n_min..=n_max)
        .map(|n| Ok(ansatz_value(envelope_at(envelope, config, n, 0)?, config, n, 0)))
        .collect::<Result<Vec<_>, NlsError>>()?;
    let boundary_column = (0..=m_max as i64)
        .map(|m| Ok(ansatz_value(envelope_at(envelope, config, n_max, m)?, config, n_max, m)))
        .collect::<Result<Vec<_>, NlsError>>()?;
    Ok(AnsatzData { n_min, initial_row, boundary_column })
}

/// Hann weights `½(1 + cos(πj/(N+1)))`, `j = −N..=N`.
fn hann(n: i64) -> Vec<f64> {
    (-n..=n).map(|j| 0.5 * (1.0 + (std::f64::consts::PI * j as f64 / (n + 1) as f64).cos())).collect()
}

/// Fine column whose slow coordinate at row `m` is `n2` (nearest when
/// `M1` does not divide).
pub fn fine_position(config: &ReductionConfig, n2: i64, m: i64) -> i64 {
    let num = config.n * n2 + config.m2 * m;
    (num as f64 / config.m1 as f64).round() as i64
}

/// `φ(n₂) ≈ (1/ε) Σ_j w_j (u_{n+j,m} − p/q) e^{−ik(n+j)} e^{iωm} / Σ_j w_j`
/// with a Hann window of width `2N+1` centred on the fine point of each `n₂`.
pub fn extract_envelope(
    u: &Field2D,
    config: &ReductionConfig,
    m: i64,
    n2_range: std::ops::RangeInclusive<i64>,
) -> Result<EnvelopeRow, NlsError> {
    let weights = hann(config.n);
    let total: f64 = weights.iter().sum();
    let wave = config.wave();
    let a = config.params.background();
    let eps = config.epsilon();
    let time_phase = Complex64::from_polar(1.0, wave.omega * m as f64);
    let start = *n2_range.start();
    let values = n2_range
        .map(|n2| {
            let centre = fine_position(config, n2, m);
            let mut acc = Complex64::new(0.0, 0.0);
            for (w, j) in weights.iter().zip(-config.n..=config.n) {
                let n = centre + j;
                let v = u.get(n, m).ok_or_else(|| {
                    NlsError::Window(format!("demodulation window at n = {n}, m = {m} leaves the field"))
                })?;
                acc += w * (v - a) * Complex64::from_polar(1.0, -config.k * n as f64);
            }
            Ok(acc * time_phase / (total * eps))
        })
        .collect::<Result<Vec<_>, NlsError>>()?;
    Ok(EnvelopeRow::new(start, values))
}

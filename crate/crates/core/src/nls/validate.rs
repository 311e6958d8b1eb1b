//! Far-field check: a full sine–Gordon run seeded with the ansatz against the
//! reduced NLS evolution of the same initial envelope.

use std::time::Instant;

use num_complex::Complex64;
use serde::Serialize;

use super::{
    build_ansatz, extract_envelope, nls_coefficients, nls_step, CubicRule, Envelope2D, EnvelopeRow, NlsCoeffs,
    NlsError, ReductionConfig,
};
use crate::lattice_sg::{sg_evolve, SgParams, Sweep, DEFAULT_SINGULAR_TOL};

/// `φ₀(n₂) = A·exp(−n₂²/(2w²))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianProfile {
    pub amplitude: f64,
    pub width: f64,
}

impl GaussianProfile {
    pub fn value(&self, n2: f64) -> Complex64 {
        Complex64::new(self.amplitude * (-n2 * n2 / (2.0 * self.width * self.width)).exp(), 0.0)
    }

    /// Half-width beyond which `|φ₀| < 10⁻⁶ max|φ₀|`.
    pub fn support_radius(&self) -> f64 {
        self.width * (2.0 * 1e6f64.ln()).sqrt()
    }

    /// Half-width of the comparison window in `n₂`.
    pub fn compare_radius(&self) -> i64 {
        (4.0 * self.width).floor() as i64
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationEntry {
    #[serde(rename = "N")]
    pub n: i64,
    pub k: f64,
    pub sigma: f64,
    #[serde(rename = "M1")]
    pub m1: i64,
    #[serde(rename = "M2")]
    pub m2: i64,
    pub coeffs: NlsCoeffs,
    /// `max|φ_est − φ_NLS| / max|φ₀|` at `m₂ = T`.
    pub error: f64,
    /// Same measure for the extraction at `m = 0` against `φ₀`.
    pub roundtrip_error: f64,
    /// `max|Δ³φ_est| / max|φ_est|` of the extracted final row.
    pub slow_order2_defect: f64,
    /// `(n_min, n_max, m_max)` of the fine field.
    pub fine_window: (i64, i64, usize),
    /// Wall-clock seconds; not part of the serialized report.
    #[serde(skip)]
    pub runtime_s: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub slow_steps: usize,
    pub profile: GaussianProfile,
    pub entries: Vec<ValidationEntry>,
    /// `e(Nᵢ)/e(Nᵢ₊₁)`.
    pub ratios: Vec<f64>,
    /// `e(N)` strictly decreasing (or identically zero).
    pub monotone: bool,
}

/// The reference far-field experiment.
#[derive(Debug, Clone)]
pub struct DemoPreset {
    pub configs: Vec<ReductionConfig>,
    pub profile: GaussianProfile,
    pub slow_steps: usize,
}

/// `p = q = 2^{1/4}` (σ = 2, background 1), `M1 = 1`, `M2 = −1` (so
/// `k = arccos(−1/3)`), Gaussian `φ₀` with amplitude 0.1 and width 24,
/// two slow steps, `N ∈ {8, 12, 16}`.
///
/// The amplitude and width keep the `N`-independent parts of the mismatch
/// (explicit slow-time stepping, demodulation-window bias) below the
/// `O(ε)` reduction error being measured.
pub fn demo_preset(cubic: CubicRule) -> DemoPreset {
    let r = 2f64.powf(0.25);
    let params = SgParams::new(r, r).expect("valid demo parameters");
    let configs = [8, 12, 16]
        .iter()
        .map(|&n| ReductionConfig::new(n, params, 1, -1, 0, cubic).expect("valid demo configuration"))
        .collect();
    DemoPreset { configs, profile: GaussianProfile { amplitude: 0.1, width: 24.0 }, slow_steps: 2 }
}

/// `steps` explicit NLS steps from `phi0`, periodic in `n₂`.
pub fn evolve_envelope(phi0: &EnvelopeRow, coeffs: &NlsCoeffs, steps: usize) -> Result<Envelope2D, NlsError> {
    let mut rows = vec![phi0.clone()];
    for _ in 0..steps {
        let next = nls_step(rows.last().expect("non-empty"), coeffs)?;
        rows.push(next);
    }
    Ok(Envelope2D { rows })
}

fn relative_sup(a: &EnvelopeRow, b: &EnvelopeRow, scale: f64) -> f64 {
    let worst = a
        .values
        .iter()
        .enumerate()
        .map(|(i, v)| (v - b.get(a.n2_start + i as i64).unwrap_or_default()).norm())
        .fold(0.0, f64::max);
    if scale > 0.0 {
        worst / scale
    } else {
        worst
    }
}

fn run_one(config: &ReductionConfig, profile: &GaussianProfile, steps: usize) -> Result<ValidationEntry, NlsError> {
    let start = Instant::now();
    let nn = config.n;
    let m_max = steps * (nn * nn) as usize;
    let support = profile.support_radius();
    let (m1, m2) = (config.m1 as f64, config.m2 as f64);
    // fine extent of the envelope's support over the run
    let corners: Vec<f64> = [0.0, m_max as f64]
        .iter()
        .flat_map(|&m| [-support, support].map(|n2| (nn as f64 * n2 + m2 * m) / m1))
        .collect();
    let lo = corners.iter().cloned().fold(f64::INFINITY, f64::min).floor() as i64 - nn - 2;
    let hi = corners.iter().cloned().fold(f64::NEG_INFINITY, f64::max).ceil() as i64 + nn + 2;
    // boundary-influence margin next to the boundary (right) column
    let margin = m_max as i64;
    let n_max = hi + margin;

    let n2_extent = [lo, n_max]
        .iter()
        .flat_map(|&n| [0.0, m_max as f64].map(|m| ((m1 * n as f64 - m2 * m) / nn as f64).abs()))
        .fold(support, f64::max);
    let half = (n2_extent.ceil() as i64 + 4).max((8.0 * support).ceil() as i64);
    let phi0 = EnvelopeRow::from_fn(-half, half, |n2| profile.value(n2 as f64));
    let coeffs = nls_coefficients(config)?;
    let envelope = evolve_envelope(&phi0, &coeffs, steps)?;

    let data = build_ansatz(&envelope, config, lo, n_max, m_max)?;
    let field =
        sg_evolve(&data.initial_row, lo, &data.boundary_column, Sweep::Leftward, &config.params, DEFAULT_SINGULAR_TOL)?;

    let radius = profile.compare_radius();
    for m in [0, m_max as i64] {
        for n2 in [-radius, radius] {
            let centre = super::fine_position(config, n2, m);
            if centre - nn < lo || centre + nn > n_max - margin {
                return Err(NlsError::Window(format!("comparison point n2 = {n2} at m = {m} falls inside the margin")));
            }
        }
    }
    let scale = phi0.max_modulus();
    let estimate = extract_envelope(&field, config, m_max as i64, -radius..=radius)?;
    let error = relative_sup(&estimate, &envelope.rows[steps], scale);
    let initial = extract_envelope(&field, config, 0, -radius..=radius)?;
    let roundtrip_error = relative_sup(&initial, &phi0, scale);

    Ok(ValidationEntry {
        n: nn,
        k: config.k,
        sigma: config.params.sigma,
        m1: config.m1,
        m2: config.m2,
        coeffs,
        error,
        roundtrip_error,
        slow_order2_defect: estimate.slow_order2_defect(),
        fine_window: (lo, n_max, m_max),
        runtime_s: start.elapsed().as_secs_f64(),
    })
}

/// Runs every configuration (concurrently, one thread each) and reports the
/// envelope mismatch in ascending `N`.
pub fn validate_reduction(
    configs: &[ReductionConfig],
    profile: &GaussianProfile,
    steps: usize,
) -> Result<ValidationReport, NlsError> {
    if configs.is_empty() {
        return Err(NlsError::Config("empty N list".into()));
    }
    if !(profile.width > 0.0 && profile.width.is_finite() && profile.amplitude.is_finite()) {
        return Err(NlsError::Config(format!("invalid profile {profile:?}")));
    }
    let first = &configs[0];
    for c in configs {
        if c.k != first.k || c.params != first.params || c.m1 != first.m1 || c.m2 != first.m2 || c.cubic != first.cubic
        {
            return Err(NlsError::Config("all configurations must share k, sigma, M1, M2 and cubic rule".into()));
        }
    }
    let mut order: Vec<&ReductionConfig> = configs.iter().collect();
    order.sort_by_key(|c| c.n);
    if order.windows(2).any(|w| w[0].n == w[1].n) {
        return Err(NlsError::Config("duplicate N in list".into()));
    }
    let results: Vec<Result<ValidationEntry, NlsError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = order.iter().map(|c| scope.spawn(move || run_one(c, profile, steps))).collect();
        handles.into_iter().map(|h| h.join().expect("validation worker panicked")).collect()
    });
    let entries = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    let ratios: Vec<f64> = entries.windows(2).map(|w| w[0].error / w[1].error).collect();
    let all_zero = entries.iter().all(|e| e.error == 0.0);
    let monotone = all_zero || entries.windows(2).all(|w| w[1].error < w[0].error);
    Ok(ValidationReport { slow_steps: steps, profile: *profile, entries, ratios, monotone })
}

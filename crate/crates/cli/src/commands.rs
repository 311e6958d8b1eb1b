//! One function per subcommand. Each reads its keys from the config, runs
//! the library and returns what goes into the artifacts and the report.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde_json::{json, Map, Value};

use lattice_multiscale::lattice_sg::{
    dispersion, group_velocity, linear_residual, plane_wave, sg_evolve, SgParams, Sweep,
};
use lattice_multiscale::multiscale::{coefficient_table_csv, Rational};
use lattice_multiscale::nls::{
    demo_preset, evolve_envelope, nls_coefficients, validate_reduction, CubicRule, EnvelopeRow, GaussianProfile,
    ReductionConfig,
};

use crate::config::Config;
use crate::error::CliError;

/// Everything a successful run produces besides `report.json` itself.
#[derive(Debug, Default)]
pub struct Outcome {
    pub derived: Map<String, Value>,
    pub metrics: Map<String, Value>,
    /// `(file name, contents)` written to the output directory.
    pub artifacts: Vec<(String, String)>,
    /// Extra wall-clock entries for `timing.json`.
    pub timing: Map<String, Value>,
    /// Set when the run completed but its criterion did not hold.
    pub failure: Option<CliError>,
}

fn to_value(v: impl serde::Serialize) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

/// `p`, `q` or `sigma` (then `p = q = σ^{1/4}`); the default is σ = 2.
fn lattice_params(cfg: &mut Config) -> Result<SgParams, CliError> {
    let sigma: Option<f64> = cfg.optional("sigma")?;
    let params = match sigma {
        Some(_) if cfg.contains("p") || cfg.contains("q") => {
            return Err(CliError::Config("give either sigma or p and q, not both".into()))
        }
        Some(sigma) if sigma > 0.0 && sigma.is_finite() => {
            let r = sigma.powf(0.25);
            SgParams::new(r, r)?
        }
        Some(sigma) => return Err(CliError::Config(format!("sigma must be positive, got {sigma}"))),
        None => {
            let r = 2f64.powf(0.25);
            let p = cfg.get("p", r)?;
            let q = cfg.get("q", r)?;
            SgParams::new(p, q)?
        }
    };
    cfg.echo_derived("resolved_p", params.p);
    cfg.echo_derived("resolved_q", params.q);
    cfg.echo_derived("resolved_sigma", params.sigma);
    Ok(params)
}

fn cubic_rule(cfg: &mut Config) -> Result<CubicRule, CliError> {
    Ok(match cfg.choice("cubic", &["harmonic_balance", "printed"], "harmonic_balance")?.as_str() {
        "printed" => CubicRule::Printed,
        _ => CubicRule::HarmonicBalance,
    })
}

fn reduction_configs(cfg: &mut Config, ns: &[i64]) -> Result<Vec<ReductionConfig>, CliError> {
    let params = lattice_params(cfg)?;
    let m1 = cfg.get("m1", 1i64)?;
    let m2 = cfg.get("m2", -1i64)?;
    let ell = cfg.get("ell", 0i64)?;
    let cubic = cubic_rule(cfg)?;
    ns.iter().map(|&n| Ok(ReductionConfig::new(n, params, m1, m2, ell, cubic)?)).collect()
}

fn profile(cfg: &mut Config) -> Result<GaussianProfile, CliError> {
    let demo = demo_preset(CubicRule::default()).profile;
    let amplitude = cfg.get("amplitude", demo.amplitude)?;
    let width = cfg.get("width", demo.width)?;
    if !(width > 0.0 && width.is_finite() && amplitude.is_finite()) {
        return Err(CliError::Config(format!("invalid Gaussian profile: amplitude {amplitude}, width {width}")));
    }
    Ok(GaussianProfile { amplitude, width })
}

fn carrier(config: &ReductionConfig) -> Map<String, Value> {
    let wave = config.wave();
    let mut m = Map::new();
    m.insert("k".into(), json!(config.k));
    m.insert("omega".into(), json!(wave.omega));
    m.insert("Omega".into(), to_value(wave.big_omega));
    m.insert("group_velocity".into(), json!(config.group_velocity()));
    m.insert("S".into(), to_value(config.s));
    m.insert("M1".into(), json!(config.m1));
    m.insert("M2".into(), json!(config.m2));
    m
}

/// Built-in parameter sets, layered under the config file.
pub fn preset(command: &str, name: &str) -> Result<Config, CliError> {
    if name != "demo" {
        return Err(CliError::Config(format!("unknown preset {name:?}")));
    }
    let demo = demo_preset(CubicRule::default());
    let first = &demo.configs[0];
    let mut c = Config::default();
    c.set("p", first.params.p);
    c.set("q", first.params.q);
    c.set("m1", first.m1);
    c.set("m2", first.m2);
    c.set("cubic", "harmonic_balance");
    match command {
        "validate" => {
            let ns: Vec<String> = demo.configs.iter().map(|c| c.n.to_string()).collect();
            c.set("n_list", ns.join(","));
            c.set("amplitude", demo.profile.amplitude);
            c.set("width", demo.profile.width);
            c.set("steps", demo.slow_steps);
        }
        "nls-run" => {
            c.set("n", first.n);
            c.set("amplitude", demo.profile.amplitude);
            c.set("width", demo.profile.width);
            c.set("steps", demo.slow_steps);
        }
        "coeffs" => c.set("n", first.n),
        _ => return Err(CliError::Config(format!("preset demo is not defined for {command}"))),
    }
    Ok(c)
}

pub fn stirling(cfg: &mut Config) -> Result<Outcome, CliError> {
    let cap = cfg.get("cap", 64usize)?;
    let max_i = cfg.get("max_i", 8usize)?;
    let omega_text = cfg.get("omega", String::from("2"))?;
    cfg.finish()?;
    if max_i > cap {
        return Err(CliError::Config(format!("max_i = {max_i} exceeds the cap {cap}")));
    }
    let omega: Rational =
        omega_text.parse().map_err(|_| CliError::Config(format!("key \"omega\": {omega_text:?} is not a rational")))?;
    let csv = coefficient_table_csv(max_i, &omega)?;
    let mut out = Outcome::default();
    out.derived.insert("omega".into(), json!(omega.to_string()));
    out.metrics.insert("rows".into(), json!(csv.lines().count() - 1));
    out.artifacts.push(("stirling.csv".into(), csv));
    Ok(out)
}

pub fn dispersion_sweep(cfg: &mut Config) -> Result<Outcome, CliError> {
    let params = lattice_params(cfg)?;
    let samples = cfg.get("k_samples", 100usize)?;
    let k_min = cfg.get("k_min", 0.0)?;
    let k_max = cfg.get("k_max", PI)?;
    cfg.finish()?;
    let sigma = params.sigma;
    let mut csv = String::from("k,re_Omega,im_Omega,omega,group_velocity,abs_Omega\n");
    let mut worst: f64 = 0.0;
    for i in 0..samples {
        let k = if samples == 1 { k_min } else { k_min + (k_max - k_min) * i as f64 / (samples - 1) as f64 };
        let w = dispersion(k, sigma)?;
        let v = group_velocity(k, sigma)?;
        let modulus = w.big_omega.norm();
        worst = worst.max((modulus - 1.0).abs());
        let _ = writeln!(
            csv,
            "{k:.16e},{:.16e},{:.16e},{:.16e},{v:.16e},{modulus:.16e}",
            w.big_omega.re, w.big_omega.im, w.omega
        );
    }
    let mut out = Outcome::default();
    out.metrics.insert("samples".into(), json!(samples));
    out.metrics.insert("max_abs_Omega_error".into(), json!(worst));
    out.artifacts.push(("dispersion.csv".into(), csv));
    Ok(out)
}

pub fn sg_run(cfg: &mut Config) -> Result<Outcome, CliError> {
    let params = lattice_params(cfg)?;
    let init = cfg.choice("init", &["plane_wave", "constant"], "plane_wave")?;
    let (amplitude, k) = if init == "plane_wave" {
        (cfg.get("amplitude", 1e-8)?, cfg.get("k", 1.0)?)
    } else {
        if let Some(key) = ["amplitude", "k"].into_iter().find(|key| cfg.contains(key)) {
            return Err(CliError::Config(format!("key {key:?} only applies to init = plane_wave")));
        }
        (0.0, 0.0)
    };
    let n_min = cfg.get("n_min", 0i64)?;
    let width = cfg.get("width", 200usize)?;
    let rows = cfg.get("rows", 200usize)?;
    let sweep = match cfg.choice("sweep", &["leftward", "rightward"], "leftward")?.as_str() {
        "rightward" => Sweep::Rightward,
        _ => Sweep::Leftward,
    };
    let tol = cfg.get("tol", lattice_multiscale::lattice_sg::DEFAULT_SINGULAR_TOL)?;
    cfg.finish()?;
    if width < 2 {
        return Err(CliError::Config(format!("width must be at least 2, got {width}")));
    }
    let a = params.background();
    let n_max = n_min + width as i64 - 1;
    let wave = dispersion(k, params.sigma)?;
    let exact = |n: i64, m: i64| a + plane_wave(&wave, amplitude, n, m);
    let row: Vec<f64> = (n_min..=n_max).map(|n| exact(n, 0)).collect();
    let edge = if sweep == Sweep::Leftward { n_max } else { n_min };
    let column: Vec<f64> = (0..=rows as i64).map(|m| exact(edge, m)).collect();
    let field = sg_evolve(&row, n_min, &column, sweep, &params, tol)?;

    let deviation = field.map(|u| u - a);
    let mut mismatch: f64 = 0.0;
    for m in 0..=rows as i64 {
        for n in n_min..=n_max {
            mismatch = mismatch.max((field.get(n, m).unwrap_or(f64::NAN) - exact(n, m)).abs());
        }
    }
    let mut out = Outcome::default();
    out.derived.insert("background".into(), json!(a));
    if init == "plane_wave" {
        out.derived.insert("omega".into(), json!(wave.omega));
        out.derived.insert("group_velocity".into(), json!(group_velocity(k, params.sigma)?));
    }
    out.metrics.insert("linear_residual".into(), json!(linear_residual(&deviation, params.sigma)));
    out.metrics.insert("max_deviation".into(), json!(deviation.values().iter().map(|v| v.abs()).fold(0.0, f64::max)));
    out.metrics.insert("max_plane_wave_mismatch".into(), json!(mismatch));
    out.artifacts.push(("field.csv".into(), field.to_csv()));
    Ok(out)
}

pub fn nls_run(cfg: &mut Config) -> Result<Outcome, CliError> {
    let n = cfg.get("n", 8i64)?;
    let config = reduction_configs(cfg, &[n])?.remove(0);
    let profile = profile(cfg)?;
    let steps = cfg.get("steps", 2usize)?;
    let default_half = (8.0 * profile.support_radius()).ceil() as i64;
    let half = cfg.get("half_width", default_half)?;
    cfg.finish()?;
    if half < 1 {
        return Err(CliError::Config(format!("half_width must be positive, got {half}")));
    }
    let coeffs = nls_coefficients(&config)?;
    let phi0 = EnvelopeRow::from_fn(-half, half, |n2| profile.value(n2 as f64));
    let envelope = evolve_envelope(&phi0, &coeffs, steps)?;
    let mut csv = String::from("m2,n2,re_phi,im_phi\n");
    for (m2, row) in envelope.rows.iter().enumerate() {
        for (i, v) in row.values.iter().enumerate() {
            let _ = writeln!(csv, "{m2},{},{:.16e},{:.16e}", row.n2_start + i as i64, v.re, v.im);
        }
    }
    let mass = |row: &EnvelopeRow| row.values.iter().map(Complex64::norm_sqr).sum::<f64>();
    let last = envelope.rows.last().expect("initial row is kept");
    let mut out = Outcome { derived: carrier(&config), ..Outcome::default() };
    out.derived.insert("epsilon".into(), json!(config.epsilon()));
    out.derived.insert("coeffs".into(), to_value(coeffs));
    out.metrics.insert("initial_mass".into(), json!(mass(&phi0)));
    out.metrics.insert("final_mass".into(), json!(mass(last)));
    out.metrics.insert("final_max_modulus".into(), json!(last.max_modulus()));
    out.artifacts.push(("envelope.csv".into(), csv));
    Ok(out)
}

pub fn validate(cfg: &mut Config) -> Result<Outcome, CliError> {
    let demo = demo_preset(CubicRule::default());
    let default_ns: Vec<i64> = demo.configs.iter().map(|c| c.n).collect();
    let ns = cfg.list("n_list", &default_ns)?;
    let configs = reduction_configs(cfg, &ns)?;
    let profile = profile(cfg)?;
    let steps = cfg.get("steps", demo.slow_steps)?;
    cfg.finish()?;
    let report = validate_reduction(&configs, &profile, steps)?;

    let mut csv = String::from("N,error,roundtrip_error,slow_order2_defect\n");
    for e in &report.entries {
        let _ = writeln!(csv, "{},{:.16e},{:.16e},{:.16e}", e.n, e.error, e.roundtrip_error, e.slow_order2_defect);
    }
    let mut out = Outcome { derived: carrier(&configs[0]), ..Outcome::default() };
    out.derived.insert("coeffs".into(), to_value(report.entries[0].coeffs));
    out.metrics.insert("validation".into(), to_value(&report));
    for e in &report.entries {
        out.timing.insert(format!("N={}", e.n), json!(e.runtime_s));
    }
    out.artifacts.push(("validation.csv".into(), csv));
    if !report.monotone {
        let errors: Vec<String> = report.entries.iter().map(|e| format!("e({}) = {:e}", e.n, e.error)).collect();
        out.failure = Some(CliError::Convergence(format!("e(N) is not decreasing: {}", errors.join(", "))));
    }
    Ok(out)
}

pub fn coeffs(cfg: &mut Config) -> Result<Outcome, CliError> {
    let n = cfg.get("n", 8i64)?;
    let config = reduction_configs(cfg, &[n])?.remove(0);
    cfg.finish()?;
    let coeffs = nls_coefficients(&config)?;
    let mut out = Outcome { derived: carrier(&config), ..Outcome::default() };
    out.derived.insert("epsilon".into(), json!(config.epsilon()));
    out.derived.insert("coeffs".into(), to_value(coeffs));
    Ok(out)
}

//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
//!
//! Runtime budgets are part of each criterion.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lattice_multiscale::lattice_sg::{
    dispersion, group_velocity, sg_evolve, Field2D, SgParams, Sweep, DEFAULT_SINGULAR_TOL,
};
use lattice_multiscale::multiscale::{
    forward_difference, shift_one_scale, shift_two_scale, Direction, GridFunction1D, GridFunction2D, Rational,
    SecondScaleOrder, ShiftMode, StirlingCache,
};
use lattice_multiscale::nls::{
    build_ansatz, combined_closed_form, compute_s, cubic_balance_complex, demo_preset, extract_envelope,
    nls_coefficients_for, nls_step_with, residual_order2, select_wavenumber, substitute_wide_stencil,
    validate_reduction, Boundary, Branch, CubicRule, Envelope2D, EnvelopeRow, ReductionConfig,
};

type Check = Result<String, String>;

/// Name, runtime budget in seconds, check.
type Criterion = (&'static str, f64, fn() -> Check);

fn q(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn poly(coeffs: &[Rational], x: &Rational) -> Rational {
    coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    q(rng.gen_range(-50..=50), rng.gen_range(1..=12))
}

fn multiscale_exactness() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut checks = 0;
    for _ in 0..50 {
        let coeffs: Vec<Rational> = (0..3).map(|_| random_rational(&mut rng)).collect();
        let base = rng.gen_range(-6i64..=6);
        for n in 2..=10i64 {
            let g = GridFunction1D::from_fn(base - 1, base + 1, |i| poly(&coeffs, &q(n * i, 1)));
            for dir in [Direction::Forward, Direction::Backward] {
                let got = shift_one_scale(&g, base, n, 2, ShiftMode::Symmetric, dir).map_err(|e| e.to_string())?;
                let truth = poly(&coeffs, &q(n * base + dir.sign(), 1));
                ensure(got == truth, || format!("N={n}, {coeffs:?}: {got} != {truth}"))?;
                checks += 1;
            }
        }
    }
    Ok(format!("{checks} exact shifts"))
}

/// `(Δ⁰f, …, Δ⁴f)` at `x` with spacing `h`, by direct evaluation.
fn differences(coeffs: &[Rational], x: i64, h: i64) -> Vec<Rational> {
    let f = GridFunction1D::from_fn(0, 4, |j| poly(coeffs, &q(x + j * h, 1)));
    (0..=4).map(|k| forward_difference(&f, k).unwrap().values()[0].clone()).collect()
}

fn coefficient_duality() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let cache = StirlingCache::new(4);
    let mut checks = 0;
    for _ in 0..30 {
        let coeffs: Vec<Rational> = (0..5).map(|_| random_rational(&mut rng)).collect();
        let x = rng.gen_range(-10i64..=10);
        for n in 2..=10i64 {
            let fine = differences(&coeffs, x, 1);
            let coarse = cache.transfer(&fine, &q(n, 1)).map_err(|e| e.to_string())?;
            ensure(coarse == differences(&coeffs, x, n), || format!("fine→coarse wrong at N={n}"))?;
            let back = cache.transfer(&coarse, &q(1, n)).map_err(|e| e.to_string())?;
            ensure(back == fine, || format!("round trip not identity at N={n}"))?;
            checks += 1;
        }
    }
    Ok(format!("{checks} exact round trips"))
}

/// Exact residual of the two-scale shift on `G(x₁, x₂)` at the coarse point
/// `(1, −2)`; the fine neighbour is `G(1 + M1/N, −2 + M2/N²)`.
fn two_scale_residual(
    g: impl Fn(&Rational, &Rational) -> Rational,
    n: i64,
    second: SecondScaleOrder,
) -> Result<Rational, String> {
    let (m1, m2, base) = (1, 1, (1i64, -2i64));
    let grid =
        GridFunction2D::from_fn((base.0 - 1, base.0 + 1), (base.1 - 1, base.1 + 1), |i, j| g(&q(i, 1), &q(j, 1)));
    let approx =
        shift_two_scale(&grid, base, n, m1, m2, second, Direction::Forward, true).map_err(|e| e.to_string())?;
    Ok(approx - g(&(q(base.0, 1) + q(m1, n)), &(q(base.1, 1) + q(m2, n * n))))
}

fn truncation_order() -> Check {
    let full = |x1: &Rational, x2: &Rational| x1 * x1 * x2 + q(2, 1) * x2 * x2 + q(3, 1) * x1 * x2 - x1;
    let mixed = |x1: &Rational, x2: &Rational| x1 * x2 + x1 * x1 - q(4, 1) * x2;
    let mut out = Vec::new();
    for n in [8i64, 16] {
        let r_full = two_scale_residual(full, n, SecondScaleOrder::Two)?
            / two_scale_residual(full, 2 * n, SecondScaleOrder::Two)?;
        let r_mixed = two_scale_residual(mixed, n, SecondScaleOrder::One)?
            / two_scale_residual(mixed, 2 * n, SecondScaleOrder::One)?;
        ensure(r_full.clone() * q(6, 5) >= q(8, 1), || format!("full-form ratio {r_full} at N={n}"))?;
        ensure(r_mixed.clone() * q(6, 5) >= q(4, 1), || format!("mixed-form ratio {r_mixed} at N={n}"))?;
        out.push(format!("N={n}: full {r_full}, mixed {r_mixed}"));
    }
    Ok(out.join("; "))
}

fn dispersion_checks() -> Check {
    let sigmas = [0.25, 0.8, 1.0, 2.0, 5.0];
    let (mut modulus, mut fd) = (0.0f64, 0.0f64);
    for &sigma in &sigmas {
        for j in 0..100 {
            let k = -PI + 2.0 * PI * (j as f64 + 0.5) / 100.0;
            let w = dispersion(k, sigma).map_err(|e| e.to_string())?;
            modulus = modulus.max((w.big_omega.norm() - 1.0).abs());
            let h = 1e-5;
            let numeric =
                (dispersion(k + h, sigma).unwrap().omega - dispersion(k - h, sigma).unwrap().omega) / (2.0 * h);
            fd = fd.max((numeric - group_velocity(k, sigma).map_err(|e| e.to_string())?).abs());
            if sigma == 1.0 {
                let z = Complex64::from_polar(1.0, k);
                ensure((w.big_omega + z).norm() <= 1e-12, || format!("σ=1, k={k}: Ω = {}", w.big_omega))?;
                let v = group_velocity(k, 1.0).unwrap();
                ensure((v + 1.0).abs() <= 1e-12, || format!("σ=1, k={k}: ω,k = {v}"))?;
            }
        }
    }
    ensure(modulus <= 1e-12, || format!("max ||Ω|−1| = {modulus:e}"))?;
    ensure(fd <= 1e-8, || format!("max finite-difference mismatch {fd:e}"))?;
    Ok(format!("max ||Ω|−1| = {modulus:.1e}, max FD mismatch = {fd:.1e}"))
}

fn quad_fixed_point() -> Check {
    let mut worst = 0.0f64;
    let mut quads = 0usize;
    for (p, qq) in [(2f64.powf(0.25), 2f64.powf(0.25)), (1.2, 0.7)] {
        let params = SgParams::new(p, qq).map_err(|e| e.to_string())?;
        let a = params.background();
        let (width, rows) = (401usize, 250usize);
        let field = sg_evolve(&vec![a; width], 0, &vec![a; rows + 1], Sweep::Leftward, &params, DEFAULT_SINGULAR_TOL)
            .map_err(|e| e.to_string())?;
        quads += (width - 1) * rows;
        worst = worst.max(field.values().iter().map(|v| (v - a).abs()).fold(0.0, f64::max));
    }
    ensure(quads >= 100_000 && worst <= 1e-10, || format!("drift {worst:e} over {quads} quads"))?;
    Ok(format!("{quads} quads, max drift {worst:.1e}"))
}

fn coefficient_identity() -> Check {
    let mut worst = 0.0f64;
    let mut imag = 0.0f64;
    for i in 0..20 {
        let sigma = 0.2 + 4.8 * i as f64 / 19.0;
        // σ = p²q²; keep p ≠ q so the background is not 1
        let r = sigma.powf(0.25);
        let params = SgParams::new(1.1 * r, r / 1.1).map_err(|e| e.to_string())?;
        for j in 0..20 {
            let k = PI * (j as f64 + 0.5) / 20.0;
            for m2 in [-1.0, 1.0, 2.5] {
                let c = nls_coefficients_for(&params, k, m2, CubicRule::HarmonicBalance).map_err(|e| e.to_string())?;
                let sum = 4.0 * c.c1_hat + c.c2_hat;
                worst = worst.max((sum.re - combined_closed_form(m2, k, params.sigma)).abs());
                imag = imag.max(sum.im.abs());
            }
            imag = imag.max(cubic_balance_complex(&params, k).map_err(|e| e.to_string())?.im.abs());
        }
    }
    let spot = combined_closed_form(1.0, PI / 2.0, 2.0);
    let params = SgParams::new(2f64.powf(0.25), 2f64.powf(0.25)).unwrap();
    let c = nls_coefficients_for(&params, PI / 2.0, 1.0, CubicRule::HarmonicBalance).map_err(|e| e.to_string())?;
    let direct = (4.0 * c.c1_hat + c.c2_hat).re;
    ensure(worst <= 1e-12, || format!("identity mismatch {worst:e}"))?;
    ensure(imag <= 1e-12, || format!("imaginary part {imag:e}"))?;
    ensure((spot + 0.375).abs() <= 1e-12 && (direct + 0.375).abs() <= 1e-12, || {
        format!("spot value {spot}, {direct}")
    })?;
    Ok(format!("max mismatch {worst:.1e}, max |Im| {imag:.1e}, spot {direct}"))
}

fn secularity() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut worst, mut least_perturbed) = (0.0f64, f64::INFINITY);
    for _ in 0..10 {
        let sigma = rng.gen_range(0.3..4.0);
        let k = rng.gen_range(0.2..3.0);
        let m1 = rng.gen_range(1i64..=3);
        let (_, m2) = compute_s(m1, k, sigma, rng.gen_range(0..2)).map_err(|e| e.to_string())?;
        let (a, b, c) = (rng.gen_range(0.5..1.5), rng.gen_range(-0.3..0.3), rng.gen_range(0.05..0.5));
        let phi = move |n2: i64| Complex64::from_polar(a + 0.1 * (b * n2 as f64).sin(), c * n2 as f64);
        let r = residual_order2(phi, m1 as f64, m2, k, sigma, Branch::Difference, -6..=6).map_err(|e| e.to_string())?;
        worst = worst.max(r);
        let perturbed = residual_order2(phi, m1 as f64, m2 + 1.0, k, sigma, Branch::Difference, -6..=6).unwrap();
        least_perturbed = least_perturbed.min(perturbed);
    }
    ensure(worst <= 1e-12, || format!("residual {worst:e}"))?;
    ensure(least_perturbed > 1e-3, || format!("perturbed residual only {least_perturbed:e}"))?;
    Ok(format!("max residual {worst:.1e}, min perturbed {least_perturbed:.2e}"))
}

fn stencil_equivalence() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let params = SgParams::new(2f64.powf(0.25), 2f64.powf(0.25)).unwrap();
    let (mut slow, mut generic) = (0.0f64, 0.0f64);
    for _ in 0..20 {
        let k = rng.gen_range(0.2..3.0);
        let co = nls_coefficients_for(&params, k, -1.0, CubicRule::HarmonicBalance).map_err(|e| e.to_string())?;
        let cplx = |rng: &mut ChaCha8Rng| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let (a, b, c) = (cplx(&mut rng), 0.1 * cplx(&mut rng), 0.01 * cplx(&mut rng));
        let quad = EnvelopeRow::from_fn(-12, 12, |n| a + b * n as f64 + c * (n * n) as f64);
        let wide = substitute_wide_stencil(&quad, &co, Boundary::Zero).map_err(|e| e.to_string())?;
        let reduced = nls_step_with(&quad, &co, Boundary::Zero).map_err(|e| e.to_string())?;
        // interior points only: the zero closure breaks the polynomial at the ends
        for j in 2..quad.values.len() - 2 {
            slow = slow.max((wide.values[j] - reduced.values[j]).norm());
        }
        let row = EnvelopeRow::new(0, (0..24).map(|_| cplx(&mut rng)).collect());
        let wide = substitute_wide_stencil(&row, &co, Boundary::Periodic).unwrap();
        let reduced = nls_step_with(&row, &co, Boundary::Periodic).unwrap();
        let v = &row.values;
        let at = |j: usize, o: i64| v[(j as i64 + o).rem_euclid(v.len() as i64) as usize];
        for j in 0..v.len() {
            let d4 = at(j, 2) - 4.0 * at(j, 1) + 6.0 * at(j, 0) - 4.0 * at(j, -1) + at(j, -2);
            let predicted = Complex64::i() * co.c1_hat * d4;
            generic = generic.max((wide.values[j] - reduced.values[j] - predicted).norm());
        }
    }
    ensure(slow <= 1e-12, || format!("slow-data mismatch {slow:e}"))?;
    ensure(generic <= 1e-12, || format!("fourth-difference mismatch {generic:e}"))?;
    Ok(format!("slow data {slow:.1e}, generic data {generic:.1e}"))
}

fn round_trip_error(config: &ReductionConfig, amplitude: f64, width: f64) -> Result<f64, String> {
    let support = width * (2.0 * 1e6f64.ln()).sqrt();
    let half = (8.0 * support).ceil() as i64;
    let phi0 = EnvelopeRow::from_fn(-half, half, |n2| {
        Complex64::new(amplitude * (-(n2 * n2) as f64 / (2.0 * width * width)).exp(), 0.0)
    });
    let radius = (4.0 * width) as i64;
    let extent = config.n * (radius + 2) + 2;
    let env = Envelope2D { rows: vec![phi0.clone()] };
    let data = build_ansatz(&env, config, -extent, extent, 0).map_err(|e| e.to_string())?;
    let field = Field2D::from_fn(-extent, extent, 0, |n, _| data.initial_row[(n + extent) as usize]);
    let est = extract_envelope(&field, config, 0, -radius..=radius).map_err(|e| e.to_string())?;
    let worst = est.values.iter().zip(-radius..).map(|(v, n2)| (v - phi0.get(n2).unwrap()).norm()).fold(0.0, f64::max);
    Ok(worst / amplitude)
}

fn ansatz_round_trip() -> Check {
    let sigma = 2.0;
    let params = SgParams::new(2f64.powf(0.25), 2f64.powf(0.25)).unwrap();
    let k = select_wavenumber(Rational64::new(-1, 1), sigma).map_err(|e| e.to_string())?;
    let mut errors = Vec::new();
    for n in [8, 16] {
        let config =
            ReductionConfig::new(n, params, 1, -1, 0, CubicRule::HarmonicBalance).map_err(|e| e.to_string())?;
        ensure((config.k - k).abs() < 1e-12, || format!("carrier {} vs {k}", config.k))?;
        errors.push(round_trip_error(&config, 0.1, 24.0)?);
    }
    let (e8, e16) = (errors[0], errors[1]);
    ensure(e8 <= 0.1, || format!("e(8) = {e8:e}"))?;
    ensure(e16 <= 0.6 * e8, || format!("e(16) = {e16:e} > 0.6·e(8) = {:e}", 0.6 * e8))?;
    Ok(format!("e(8) = {e8:.3e}, e(16) = {e16:.3e}, ratio {:.3}", e16 / e8))
}

fn far_field() -> Check {
    let demo = demo_preset(CubicRule::default());
    let report = validate_reduction(&demo.configs, &demo.profile, demo.slow_steps).map_err(|e| e.to_string())?;
    let errors: Vec<String> = report.entries.iter().map(|e| format!("e({}) = {:.3e}", e.n, e.error)).collect();
    let first = &report.entries[0];
    let last = report.entries.last().unwrap();
    let ratio = first.error / last.error;
    let largest = report
        .entries
        .iter()
        .map(|e| ((e.fine_window.1 - e.fine_window.0 + 1) as usize, e.fine_window.2 + 1))
        .max_by_key(|(w, h)| w * h)
        .unwrap();
    ensure(report.monotone, || format!("not monotone: {}", errors.join(", ")))?;
    ensure(ratio >= 1.5, || format!("e({})/e({}) = {ratio:.3}", first.n, last.n))?;
    ensure(largest.0 <= 6000 && largest.1 <= 1200, || format!("grid {}×{} too large", largest.0, largest.1))?;
    Ok(format!(
        "{}, e({})/e({}) = {ratio:.3}, largest grid {}×{}",
        errors.join(", "),
        first.n,
        last.n,
        largest.0,
        largest.1
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("multiscale exactness", 1.0, multiscale_exactness),
        ("coefficient duality", 1.0, coefficient_duality),
        ("two-scale truncation order", 1.0, truncation_order),
        ("dispersion", 1.0, dispersion_checks),
        ("quad-map fixed point", 1.0, quad_fixed_point),
        ("coefficient identity", 1.0, coefficient_identity),
        ("secularity", 1.0, secularity),
        ("stencil equivalence", 1.0, stencil_equivalence),
        ("ansatz round trip", 5.0, ansatz_round_trip),
        ("far-field validation", 60.0, far_field),
    ];
    let mut failed = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed().as_secs_f64();
        let outcome = match outcome {
            Ok(detail) if elapsed >= *budget => Err(format!("{detail}; runtime {elapsed:.2} s exceeds {budget} s")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} ({elapsed:.3} s): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({elapsed:.3} s): {detail}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}

//! Independent construction of the two-scale shift coefficients.
//!
//! A function of order two in each of two fine indices is fixed by its nine
//! values `F(a, b)`, `a, b ∈ {-1, 0, 1}`. The coarse samples are
//! `g_{i,j} = F(N·i, N²·j)`, written with Newton forward forms
//!
//! ```text
//! F(t, 0) = f + tΔ₁f + t(t-1)/2 Δ₁²f
//! F(0, t) = f + tΔ₂f + t(t-1)/2 Δ₂²f
//! F(t, s) = (1 + tΔ₁ + t(t-1)/2 Δ₁²)(1 + sΔ₂ + s(s-1)/2 Δ₂²) f
//! ```
//!
//! with `Δ² f` read off the centered neighbours (it is shift invariant) and
//! negative `t` allowed. Eliminating `f = g` leaves an 8×8 system between the
//! eight coarse shifts and the eight fine neighbours; its inverse yields
//! `f_{n+1} = F(1, 1)` in terms of coarse samples.

use std::collections::BTreeMap;

use nalgebra::SMatrix;
use num_traits::{One, Zero};

use super::grid::Scalar;
use super::{MultiscaleError, Rational};

/// Neighbour offsets in the order used for both unknowns and equations.
pub const OFFSETS: [(i64, i64); 8] = [(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1)];

/// Weights `[w₋₁, w₀, w₊₁]` of the quadratic Newton form through the nodes
/// `-1, 0, 1`, evaluated at `t`.
fn newton_weights(t: &Rational) -> [Rational; 3] {
    let one = Rational::one();
    let half = Rational::from_ratio(1, 2);
    // Δf = f₊₁ - f₀ ; Δ²f = f₊₁ - 2f₀ + f₋₁
    let first = t.clone();
    let second = t * (t - &one) * half;
    [second.clone(), one - &first - &second * Rational::from_int(2), first + second]
}

fn weight_index(a: i64) -> usize {
    (a + 1) as usize
}

#[derive(Debug, Clone)]
pub struct TwoScaleSystem {
    pub n: i64,
    /// `forward[e][u]`: weight of fine neighbour `OFFSETS[u]` in coarse shift `OFFSETS[e]`.
    pub forward: Vec<Vec<Rational>>,
    /// Weight of the centre value `f = g` in each coarse shift.
    pub centre: Vec<Rational>,
    /// Floating-point inverse of `forward`.
    pub inverse: SMatrix<f64, 8, 8>,
}

/// Builds the coarse-from-fine system for scale ratio `N` and inverts it
/// numerically.
pub fn two_scale_system_oracle(n: i64) -> Result<TwoScaleSystem, MultiscaleError> {
    if n < 2 {
        return Err(MultiscaleError::InvalidScaleRatio { n });
    }
    let n_r = Rational::from_int(n);
    let n2_r = Rational::from_int(n * n);
    let mut forward = vec![vec![Rational::zero(); 8]; 8];
    let mut centre = vec![Rational::zero(); 8];
    for (e, (i, j)) in OFFSETS.iter().enumerate() {
        let wa = newton_weights(&(&n_r * Rational::from_int(*i)));
        let wb = newton_weights(&(&n2_r * Rational::from_int(*j)));
        centre[e] = &wa[1] * &wb[1];
        for (u, (a, b)) in OFFSETS.iter().enumerate() {
            forward[e][u] = &wa[weight_index(*a)] * &wb[weight_index(*b)];
        }
    }
    let numeric = SMatrix::<f64, 8, 8>::from_fn(|r, c| f64::from_rational(&forward[r][c]));
    let inverse = numeric.try_inverse().ok_or(MultiscaleError::SingularSystem { n })?;
    Ok(TwoScaleSystem { n, forward, centre, inverse })
}

impl TwoScaleSystem {
    fn fine_row(&self, target: (i64, i64)) -> usize {
        OFFSETS.iter().position(|o| *o == target).expect("target is a neighbour offset")
    }

    /// Floating-point weights of `F(target)` on the coarse samples, keyed by
    /// coarse offset (including `(0, 0)`).
    pub fn shift_coefficients(&self, target: (i64, i64)) -> BTreeMap<(i64, i64), f64> {
        let row = self.fine_row(target);
        let mut out = BTreeMap::new();
        let mut centre = 0.0;
        for (e, offset) in OFFSETS.iter().enumerate() {
            let w = self.inverse[(row, e)];
            out.insert(*offset, w);
            centre -= w * f64::from_rational(&self.centre[e]);
        }
        out.insert((0, 0), centre);
        out
    }

    /// Exact weights of `F(target)` on the coarse samples.
    pub fn shift_coefficients_exact(
        &self,
        target: (i64, i64),
    ) -> Result<BTreeMap<(i64, i64), Rational>, MultiscaleError> {
        let inv = invert_exact(&self.forward).ok_or(MultiscaleError::SingularSystem { n: self.n })?;
        let row = self.fine_row(target);
        let mut out = BTreeMap::new();
        let mut centre = Rational::zero();
        for (e, offset) in OFFSETS.iter().enumerate() {
            centre -= &inv[row][e] * &self.centre[e];
            out.insert(*offset, inv[row][e].clone());
        }
        out.insert((0, 0), centre);
        Ok(out)
    }

    /// Applies the forward map to nine fine values `F(a, b)` (keyed by offset,
    /// centre included) and returns the eight coarse shifts.
    pub fn coarse_from_fine(&self, fine: &BTreeMap<(i64, i64), f64>) -> [f64; 8] {
        let f0 = fine[&(0, 0)];
        let mut out = [0.0; 8];
        for (e, slot) in out.iter_mut().enumerate() {
            *slot = f64::from_rational(&self.centre[e]) * f0
                + OFFSETS
                    .iter()
                    .enumerate()
                    .map(|(u, o)| f64::from_rational(&self.forward[e][u]) * fine[o])
                    .sum::<f64>();
        }
        out
    }

    /// Inverse of [`coarse_from_fine`](Self::coarse_from_fine) given the centre value.
    pub fn fine_from_coarse(&self, centre_value: f64, coarse: &[f64; 8]) -> [f64; 8] {
        let rhs = SMatrix::<f64, 8, 1>::from_fn(|e, _| coarse[e] - f64::from_rational(&self.centre[e]) * centre_value);
        let x = self.inverse * rhs;
        let mut out = [0.0; 8];
        out.iter_mut().enumerate().for_each(|(u, v)| *v = x[u]);
        out
    }
}

/// Gauss–Jordan inverse over the rationals.
pub(crate) fn invert_exact(m: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    let mut inv: Vec<Vec<Rational>> =
        (0..n).map(|r| (0..n).map(|c| if r == c { Rational::one() } else { Rational::zero() }).collect()).collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].clone();
        for c in 0..n {
            a[col][c] = &a[col][c] / &p;
            inv[col][c] = &inv[col][c] / &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for c in 0..n {
                    let da = &factor * &a[col][c];
                    let di = &factor * &inv[col][c];
                    a[r][c] -= da;
                    inv[r][c] -= di;
                }
            }
        }
    }
    Some(inv)
}

/// Expands the exact `f_{n+1}` weights as polynomials in `ε = 1/N` and keeps
/// the powers `ε⁰ … ε^order`.
///
/// Each weight is a product of a quadratic in `ε` and a quadratic in `ε²`, so
/// degree six is exact; the fit uses `N = 2..=8` and is checked at `N = 9`.
pub fn two_scale_series_oracle(order: usize) -> Result<BTreeMap<(i64, i64), Vec<Rational>>, MultiscaleError> {
    const DEGREE: usize = 6;
    let sample_ns: Vec<i64> = (2..=(2 + DEGREE as i64)).collect();
    let mut samples: Vec<BTreeMap<(i64, i64), Rational>> = Vec::new();
    for &n in &sample_ns {
        samples.push(two_scale_system_oracle(n)?.shift_coefficients_exact((1, 1))?);
    }
    let eps: Vec<Rational> = sample_ns.iter().map(|n| Rational::from_ratio(1, *n)).collect();
    let vandermonde: Vec<Vec<Rational>> =
        eps.iter().map(|e| (0..=DEGREE).map(|d| num_traits::pow(e.clone(), d)).collect()).collect();
    let vinv = invert_exact(&vandermonde).ok_or(MultiscaleError::SingularSystem { n: 0 })?;

    let check_n = 2 + DEGREE as i64 + 1;
    let check = two_scale_system_oracle(check_n)?.shift_coefficients_exact((1, 1))?;
    let check_eps = Rational::from_ratio(1, check_n);

    let mut out = BTreeMap::new();
    for key in samples[0].keys() {
        let values: Vec<Rational> = samples.iter().map(|s| s[key].clone()).collect();
        let series: Vec<Rational> = (0..=DEGREE)
            .map(|d| (0..=DEGREE).fold(Rational::zero(), |acc, s| acc + &vinv[d][s] * &values[s]))
            .collect();
        let predicted = series
            .iter()
            .enumerate()
            .fold(Rational::zero(), |acc, (d, c)| acc + c * num_traits::pow(check_eps.clone(), d));
        if predicted != check[key] {
            return Err(MultiscaleError::SingularSystem { n: check_n });
        }
        out.insert(*key, series.into_iter().take(order + 1).collect());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiscale::shift::{Direction, SecondScaleOrder, ShiftExpansion};

    #[test]
    fn newton_form_reproduces_nodes() {
        for (t, expected) in [(-1, 0usize), (0, 1), (1, 2)] {
            let w = newton_weights(&Rational::from_int(t));
            for (idx, wi) in w.iter().enumerate() {
                assert_eq!(*wi, if idx == expected { Rational::one() } else { Rational::zero() });
            }
        }
        // p24: g_{n₁+1} = f + NΔf + N(N-1)/2·Δ²f
        let w = newton_weights(&Rational::from_int(5));
        assert_eq!(w[2], Rational::from_int(5 + 10));
    }

    #[test]
    fn series_matches_closed_form_through_third_order() {
        let series = two_scale_series_oracle(3).unwrap();
        let closed = |key: (i64, i64)| -> Vec<Rational> {
            let h = Rational::from_ratio(1, 2);
            let q = Rational::from_ratio(1, 4);
            let z = Rational::zero();
            match key {
                (0, 0) => vec![Rational::one(), z.clone(), -Rational::one(), z],
                (1, 0) => vec![z.clone(), h.clone(), h, z],
                (-1, 0) => vec![z.clone(), -h.clone(), h, z],
                (0, 1) => vec![z.clone(), z.clone(), h, z],
                (0, -1) => vec![z.clone(), z.clone(), -h, z],
                (1, 1) | (-1, -1) => vec![z.clone(), z.clone(), z, q],
                _ => vec![z.clone(), z.clone(), z, -q],
            }
        };
        for (key, coeffs) in &series {
            assert_eq!(coeffs, &closed(*key), "offset {key:?}");
        }
        // and the closed form matches the shift expansion at every N
        for n in 2..9 {
            let e = ShiftExpansion::two_scale(n, 1, 1, SecondScaleOrder::Two, Direction::Forward, true).unwrap();
            let eps = Rational::from_ratio(1, n);
            for (key, coeffs) in &series {
                let v = coeffs
                    .iter()
                    .enumerate()
                    .fold(Rational::zero(), |a, (d, c)| a + c * num_traits::pow(eps.clone(), d));
                assert_eq!(e.coefficients.get(key).cloned().unwrap_or_default(), v);
            }
        }
    }

    #[test]
    fn numerical_inverse_matches_exact_one() {
        let sys = two_scale_system_oracle(4).unwrap();
        let numeric = sys.shift_coefficients((1, 1));
        let exact = sys.shift_coefficients_exact((1, 1)).unwrap();
        for (key, v) in &exact {
            assert!((numeric[key] - f64::from_rational(v)).abs() < 1e-12, "{key:?}");
        }
    }

    #[test]
    fn rejects_small_ratio() {
        assert!(matches!(two_scale_system_oracle(1), Err(MultiscaleError::InvalidScaleRatio { n: 1 })));
    }
}

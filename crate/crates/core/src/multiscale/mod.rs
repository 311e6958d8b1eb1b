//! Exact difference calculus on nested lattices.
//!
//! A function sampled on a fine lattice `n` is re-expressed on the coarse
//! lattices `n₁ = n/N`, `n₂ = n/N²`; the coefficients are exact rationals.

pub mod grid;
pub mod shift;
pub mod stirling;
pub mod two_scale;

use std::fmt::Write as _;

use thiserror::Error;

pub use grid::{forward_difference, slow_order, GridFunction1D, GridFunction2D, Scalar, DEFAULT_SLOW_TOLERANCE};
pub use shift::{shift_one_scale, shift_two_scale, Direction, SecondScaleOrder, ShiftExpansion, ShiftMode};
pub use stirling::{coeff_p, stirling_first, stirling_second, StirlingCache};
pub use two_scale::{two_scale_series_oracle, two_scale_system_oracle, TwoScaleSystem};

/// Arbitrary-precision rational, always stored in lowest terms with a
/// positive denominator.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MultiscaleError {
    #[error("invalid order pair: i = {i} < k = {k}")]
    InvalidOrderPair { i: usize, k: usize },
    #[error("order {order} beyond cached Stirling rows (max {cached})")]
    OrderBeyondCache { order: usize, cached: usize },
    #[error("window of {available} samples is too small, need {needed}")]
    InsufficientWindow { needed: usize, available: usize },
    #[error("slow order exceeds window of length {window}")]
    OrderExceedsWindow { window: usize },
    #[error("missing coarse sample at {index:?}")]
    MissingSample { index: (i64, i64) },
    #[error("unsupported expansion order p = {p} (symmetric: {symmetric})")]
    UnsupportedOrder { p: usize, symmetric: bool },
    #[error("scale ratio N = {n} must be at least 2")]
    InvalidScaleRatio { n: i64 },
    #[error("integer slow lattices need M1 | N and M2 | N^2 (N = {n}, M1 = {m1}, M2 = {m2})")]
    Divisibility { n: i64, m1: i64, m2: i64 },
    #[error("two-scale system is singular for N = {n}")]
    SingularSystem { n: i64 },
}

/// CSV of `P(i, k)` (or `Q(i, k)` when `ω = 1/N`) for `0 ≤ k ≤ i ≤ max_i`.
pub fn coefficient_table_csv(max_i: usize, omega: &Rational) -> Result<String, MultiscaleError> {
    let cache = StirlingCache::new(max_i);
    let mut out = String::from("i,k,omega_num,omega_den,value_num,value_den\n");
    for i in 0..=max_i {
        for k in 0..=i {
            let v = cache.coeff_p(i, k, omega)?;
            let _ = writeln!(out, "{i},{k},{},{},{},{}", omega.numer(), omega.denom(), v.numer(), v.denom());
        }
    }
    Ok(out)
}

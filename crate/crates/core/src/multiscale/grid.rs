//! Finite-window lattice functions and the difference operators acting on
//! them.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{MultiscaleError, Rational};

/// Field-like values a lattice function can carry: exact rationals or
/// doubles.
pub trait Scalar:
    Clone
    + PartialEq
    + std::fmt::Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_ratio(num: i64, den: i64) -> Self;

    fn from_rational(value: &Rational) -> Self;

    fn from_int(value: i64) -> Self {
        Self::from_ratio(value, 1)
    }

    /// Absolute value as a double (lossy for huge rationals).
    fn magnitude(&self) -> f64;

    /// Whether `self` counts as zero relative to `scale`. Rationals use an
    /// exact test and ignore `tol`.
    fn negligible(&self, scale: f64, tol: f64) -> bool;

    fn is_finite_value(&self) -> bool {
        true
    }
}

impl Scalar for f64 {
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn from_rational(value: &Rational) -> Self {
        value.to_f64().unwrap_or(f64::NAN)
    }

    fn magnitude(&self) -> f64 {
        self.abs()
    }

    fn negligible(&self, scale: f64, tol: f64) -> bool {
        self.abs() <= tol * scale
    }

    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
}

impl Scalar for Rational {
    fn from_ratio(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_rational(value: &Rational) -> Self {
        value.clone()
    }

    fn magnitude(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }

    fn negligible(&self, _scale: f64, _tol: f64) -> bool {
        self.is_zero()
    }
}

/// Values `f_n` for `n` in `start..start + values.len()`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction1D<T> {
    start: i64,
    values: Vec<T>,
}

impl<T: Scalar> GridFunction1D<T> {
    pub fn new(start: i64, values: Vec<T>) -> Self {
        GridFunction1D { start, values }
    }

    /// Samples `f` on `start..=end`.
    pub fn from_fn(start: i64, end: i64, mut f: impl FnMut(i64) -> T) -> Self {
        GridFunction1D { start, values: (start..=end).map(&mut f).collect() }
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    /// Last index of the window (inclusive). Meaningless for empty windows.
    pub fn end(&self) -> i64 {
        self.start + self.values.len() as i64 - 1
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn get(&self, n: i64) -> Option<&T> {
        let offset = n - self.start;
        if offset < 0 {
            return None;
        }
        self.values.get(offset as usize)
    }

    pub(crate) fn sample(&self, n: i64) -> Result<T, MultiscaleError> {
        self.get(n).cloned().ok_or(MultiscaleError::MissingSample { index: (n, 0) })
    }

    pub fn max_magnitude(&self) -> f64 {
        self.values.iter().map(Scalar::magnitude).fold(0.0, f64::max)
    }
}

/// Values `g_{i,j}` on a rectangular window of two lattice indices.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction2D<T> {
    start: (i64, i64),
    shape: (usize, usize),
    values: Vec<T>,
}

impl<T: Scalar> GridFunction2D<T> {
    /// Samples `f` on `first.0..=first.1 × second.0..=second.1`.
    pub fn from_fn(first: (i64, i64), second: (i64, i64), mut f: impl FnMut(i64, i64) -> T) -> Self {
        let shape = ((first.1 - first.0 + 1).max(0) as usize, (second.1 - second.0 + 1).max(0) as usize);
        let mut values = Vec::with_capacity(shape.0 * shape.1);
        for i in first.0..=first.1 {
            for j in second.0..=second.1 {
                values.push(f(i, j));
            }
        }
        GridFunction2D { start: (first.0, second.0), shape, values }
    }

    pub fn get(&self, i: i64, j: i64) -> Option<&T> {
        let (di, dj) = (i - self.start.0, j - self.start.1);
        if di < 0 || dj < 0 || di as usize >= self.shape.0 || dj as usize >= self.shape.1 {
            return None;
        }
        self.values.get(di as usize * self.shape.1 + dj as usize)
    }

    pub(crate) fn sample(&self, i: i64, j: i64) -> Result<T, MultiscaleError> {
        self.get(i, j).cloned().ok_or(MultiscaleError::MissingSample { index: (i, j) })
    }
}

fn binomial(k: usize, i: usize) -> i64 {
    (0..i).fold(1i64, |acc, j| acc * (k - j) as i64 / (j as i64 + 1))
}

/// `Δ^k f_n = Σ_{i=0}^{k} (-1)^{k-i} C(k,i) f_{n+i}` on every `n` whose
/// forward stencil fits in the window.
pub fn forward_difference<T: Scalar>(f: &GridFunction1D<T>, k: usize) -> Result<GridFunction1D<T>, MultiscaleError> {
    if f.len() < k + 1 {
        return Err(MultiscaleError::InsufficientWindow { needed: k + 1, available: f.len() });
    }
    let weights: Vec<T> = (0..=k)
        .map(|i| {
            let sign = if (k - i).is_multiple_of(2) { 1 } else { -1 };
            T::from_int(sign * binomial(k, i))
        })
        .collect();
    let values = f
        .values
        .windows(k + 1)
        .map(|w| w.iter().zip(&weights).fold(T::zero(), |acc, (v, c)| acc + c.clone() * v.clone()))
        .collect();
    Ok(GridFunction1D { start: f.start, values })
}

/// Smallest `p` with `Δ^{p+1} f ≡ 0` on the window (a slow varying function
/// of order `p`, i.e. a degree-`p` polynomial in `n`).
///
/// Float data compares `max|Δ^{p+1} f|` against `tolerance·max|f|`; rational
/// data uses an exact zero test.
pub fn slow_order<T: Scalar>(f: &GridFunction1D<T>, tolerance: f64) -> Result<usize, MultiscaleError> {
    let scale = f.max_magnitude();
    let mut diff = f.clone();
    let mut p = 0usize;
    loop {
        if diff.len() < 2 {
            return Err(MultiscaleError::OrderExceedsWindow { window: f.len() });
        }
        diff = forward_difference(&diff, 1)?;
        if diff.values.iter().all(|v| v.negligible(scale, tolerance)) {
            return Ok(p);
        }
        p += 1;
    }
}

/// Default relative tolerance for [`slow_order`] on float data.
pub const DEFAULT_SLOW_TOLERANCE: f64 = 1e-10;

//! Truncated expansions of a fine-lattice shift `f_{n±1}` in terms of samples
//! of the same function on one or two coarse lattices.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::grid::{GridFunction1D, GridFunction2D, Scalar};
use super::{MultiscaleError, Rational};

/// Which stencil to use for a one-scale expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShiftMode {
    /// One-sided stencil on `n₁, n₁+1, n₁+2`.
    Forward,
    /// Centered stencil on `n₁-1, n₁, n₁+1` (even orders only).
    Symmetric,
}

/// Sign of the fine-lattice step. `Backward` corresponds to a negative
/// lattice spacing and yields `f_{n-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub fn sign(self) -> i64 {
        match self {
            Direction::Forward => 1,
            Direction::Backward => -1,
        }
    }
}

/// Order of slow variation assumed in the second slow variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SecondScaleOrder {
    /// Linear in `n₂`: mixed-order form, remainder `O(N⁻³)`.
    One,
    /// Quadratic in `n₂`: remainder `O(N⁻⁴)`.
    Two,
}

/// Stencil weights expressing `f_{n±1}` through coarse samples
/// `g_{n₁+i, n₂+j}`. One-scale expansions only use `j = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftExpansion {
    pub base_order: usize,
    /// `(N, M1, M2)`; `M1 = M2 = 1` is the plain `n_j = n/N^j` scaling.
    pub scale_ratios: (i64, i64, i64),
    pub coefficients: BTreeMap<(i64, i64), Rational>,
    /// Power of `1/N` at which the neglected remainder starts.
    pub truncation_order: usize,
}

fn ratio(num: i64, den: i64) -> Rational {
    Rational::from_ratio(num, den)
}

fn check_ratio(n: i64) -> Result<(), MultiscaleError> {
    if n < 2 {
        Err(MultiscaleError::InvalidScaleRatio { n })
    } else {
        Ok(())
    }
}

impl ShiftExpansion {
    /// One slow lattice `n₁ = n/N`.
    ///
    /// * `p = 1`, forward: `f_{n+1} = g + (g₊₁ - g)/N`
    /// * `p = 2`, forward: `f_{n+1} = g + (-g₊₂ + 4g₊₁ - 3g)/(2N) + (g₊₂ - 2g₊₁ + g)/(2N²)`
    /// * `p = 2`, symmetric: `f_{n±1} = g ± (g₊₁ - g₋₁)/(2N) + (g₊₁ - 2g + g₋₁)/(2N²)`
    ///
    /// Odd orders admit no centered stencil, so `(1, Symmetric)` is rejected.
    pub fn one_scale(n: i64, p: usize, mode: ShiftMode, direction: Direction) -> Result<Self, MultiscaleError> {
        check_ratio(n)?;
        let s = direction.sign();
        let n2 = n * n;
        let mut coefficients = BTreeMap::new();
        let truncation_order = match (p, mode) {
            (1, ShiftMode::Forward) => {
                coefficients.insert((0, 0), ratio(n - 1, n));
                coefficients.insert((s, 0), ratio(1, n));
                2
            }
            (2, ShiftMode::Forward) => {
                // g + (-3g)/(2N) + g/(2N²), g₊₁·(2/N - 1/N²), g₊₂·(-1/(2N) + 1/(2N²))
                coefficients.insert((0, 0), ratio(2 * n2 - 3 * n + 1, 2 * n2));
                coefficients.insert((s, 0), ratio(2 * n - 1, n2));
                coefficients.insert((2 * s, 0), ratio(1 - n, 2 * n2));
                3
            }
            (2, ShiftMode::Symmetric) => {
                coefficients.insert((0, 0), ratio(n2 - 1, n2));
                coefficients.insert((s, 0), ratio(n + 1, 2 * n2));
                coefficients.insert((-s, 0), ratio(1 - n, 2 * n2));
                3
            }
            _ => return Err(MultiscaleError::UnsupportedOrder { p, symmetric: mode == ShiftMode::Symmetric }),
        };
        Ok(ShiftExpansion { base_order: p, scale_ratios: (n, 1, 1), coefficients, truncation_order })
    }

    /// Two slow lattices `n₁ = M1·n/N`, `n₂ = M2·n/N²`, slow varying of order
    /// two in `n₁` and of order `second` in `n₂`:
    ///
    /// ```text
    /// f_{n±1} = g ± M1/(2N)·(g₊₀ - g₋₀) ± M2/(2N²)·(g₀₊ - g₀₋)
    ///             + M1²/(2N²)·(g₊₀ - 2g + g₋₀)
    ///             + M1·M2/(4N³)·(g₊₊ - g₋₊ - g₊₋ + g₋₋)           (second = Two)
    ///
    /// f_{n±1} = g ± M1/(2N)·(g₊₀ - g₋₀) + M2/N²·(g₀± - g)
    ///             + M1²/(2N²)·(g₊₀ - 2g + g₋₀)                     (second = One)
    /// ```
    ///
    /// With `integer_lattice` set, `M1 | N` and `M2 | N²` are enforced.
    pub fn two_scale(
        n: i64,
        m1: i64,
        m2: i64,
        second: SecondScaleOrder,
        direction: Direction,
        integer_lattice: bool,
    ) -> Result<Self, MultiscaleError> {
        check_ratio(n)?;
        let n2 = n * n;
        if m1 == 0 || m2 == 0 || (integer_lattice && (n % m1 != 0 || n2 % m2 != 0)) {
            return Err(MultiscaleError::Divisibility { n, m1, m2 });
        }
        let s = direction.sign();
        let mut c: BTreeMap<(i64, i64), Rational> = BTreeMap::new();
        let mut add = |key: (i64, i64), value: Rational| {
            let slot = c.entry(key).or_insert_with(Rational::zero);
            *slot += value;
        };
        add((0, 0), Rational::one());
        // first symmetric difference in n₁
        add((1, 0), ratio(s * m1, 2 * n));
        add((-1, 0), ratio(-s * m1, 2 * n));
        // second difference in n₁
        let curvature = ratio(m1 * m1, 2 * n2);
        add((1, 0), curvature.clone());
        add((-1, 0), curvature.clone());
        add((0, 0), -curvature * Rational::from_int(2));
        let truncation_order = match second {
            SecondScaleOrder::Two => {
                add((0, 1), ratio(s * m2, 2 * n2));
                add((0, -1), ratio(-s * m2, 2 * n2));
                let mixed = ratio(m1 * m2, 4 * n2 * n);
                add((1, 1), mixed.clone());
                add((-1, 1), -mixed.clone());
                add((1, -1), -mixed.clone());
                add((-1, -1), mixed);
                4
            }
            SecondScaleOrder::One => {
                add((0, s), ratio(m2, n2));
                add((0, 0), ratio(-m2, n2));
                3
            }
        };
        c.retain(|_, v| !v.is_zero());
        let base_order = match second {
            SecondScaleOrder::One => 1,
            SecondScaleOrder::Two => 2,
        };
        Ok(ShiftExpansion { base_order, scale_ratios: (n, m1, m2), coefficients: c, truncation_order })
    }

    /// Evaluates the stencil on coarse samples around `base`.
    pub fn apply_2d<T: Scalar>(&self, g: &GridFunction2D<T>, base: (i64, i64)) -> Result<T, MultiscaleError> {
        self.coefficients
            .iter()
            .try_fold(T::zero(), |acc, ((i, j), w)| Ok(acc + T::from_rational(w) * g.sample(base.0 + i, base.1 + j)?))
    }

    /// Evaluates a one-scale stencil on samples around `base`.
    pub fn apply_1d<T: Scalar>(&self, g: &GridFunction1D<T>, base: i64) -> Result<T, MultiscaleError> {
        self.coefficients.iter().try_fold(T::zero(), |acc, ((i, j), w)| {
            debug_assert_eq!(*j, 0);
            Ok(acc + T::from_rational(w) * g.sample(base + i)?)
        })
    }

    /// Antisymmetric part of the stencil, `(w(i,j) - w(-i,-j))/2`, keyed by offset.
    pub fn odd_part(&self) -> BTreeMap<(i64, i64), Rational> {
        let half = ratio(1, 2);
        let mut keys: Vec<(i64, i64)> = self.coefficients.keys().copied().collect();
        keys.extend(self.coefficients.keys().map(|(i, j)| (-i, -j)));
        keys.into_iter()
            .map(|key| {
                let plus = self.coefficients.get(&key).cloned().unwrap_or_default();
                let minus = self.coefficients.get(&(-key.0, -key.1)).cloned().unwrap_or_default();
                (key, (plus - minus) * half.clone())
            })
            .filter(|(_, v)| !v.is_zero())
            .collect()
    }
}

/// `f_{n±1}` from samples of `g` on the coarse lattice `n₁ = n/N` around `base`.
pub fn shift_one_scale<T: Scalar>(
    g: &GridFunction1D<T>,
    base: i64,
    n: i64,
    p: usize,
    mode: ShiftMode,
    direction: Direction,
) -> Result<T, MultiscaleError> {
    ShiftExpansion::one_scale(n, p, mode, direction)?.apply_1d(g, base)
}

/// `f_{n±1}` from samples of `g` on the two coarse lattices around `base`.
#[allow(clippy::too_many_arguments)]
pub fn shift_two_scale<T: Scalar>(
    g: &GridFunction2D<T>,
    base: (i64, i64),
    n: i64,
    m1: i64,
    m2: i64,
    second: SecondScaleOrder,
    direction: Direction,
    integer_lattice: bool,
) -> Result<T, MultiscaleError> {
    ShiftExpansion::two_scale(n, m1, m2, second, direction, integer_lattice)?.apply_2d(g, base)
}

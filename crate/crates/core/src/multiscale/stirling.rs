//! Exact Stirling number tables and the change-of-lattice coefficients built
//! from them.
//!
//! With `ω` the ratio between the fine and coarse lattice increments,
//!
//! ```text
//! P(i, k) = Σ_{α=k}^{i} ω^α S(i, α) 𝔖(α, k)
//! ```
//!
//! expresses a coarse difference of order `k` through fine differences of
//! order `i ≥ k` (`ω = N`), and the same sum with `ω = 1/N` gives the inverse
//! map.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{MultiscaleError, Rational};

/// Append-only triangular tables of signed first-kind `S(i, α)` and
/// second-kind `𝔖(α, k)` Stirling numbers.
///
/// Reads never mutate, so a cache grown up front can be shared between
/// threads behind an `&`.
#[derive(Debug, Clone)]
pub struct StirlingCache {
    first_kind: Vec<Vec<BigInt>>,
    second_kind: Vec<Vec<BigInt>>,
}

impl Default for StirlingCache {
    fn default() -> Self {
        Self::new(0)
    }
}

impl StirlingCache {
    /// Cache holding every row up to and including `max_order`.
    pub fn new(max_order: usize) -> Self {
        let mut cache = StirlingCache { first_kind: vec![vec![BigInt::one()]], second_kind: vec![vec![BigInt::one()]] };
        cache.ensure(max_order);
        cache
    }

    /// Largest row index currently stored.
    pub fn max_order(&self) -> usize {
        self.first_kind.len() - 1
    }

    /// Grows both tables so rows `0..=max_order` are present.
    pub fn ensure(&mut self, max_order: usize) {
        while self.first_kind.len() <= max_order {
            let i = self.first_kind.len() - 1;
            let prev = &self.first_kind[i];
            let scale = BigInt::from(i);
            // S(i+1, α) = S(i, α-1) - i·S(i, α)
            let row: Vec<BigInt> = (0..=i + 1)
                .map(|alpha| {
                    let carry = if alpha >= 1 { prev[alpha - 1].clone() } else { BigInt::zero() };
                    let keep = prev.get(alpha).map(|s| &scale * s).unwrap_or_default();
                    carry - keep
                })
                .collect();
            self.first_kind.push(row);

            let prev = &self.second_kind[i];
            // 𝔖(α+1, k) = k·𝔖(α, k) + 𝔖(α, k-1)
            let row: Vec<BigInt> = (0..=i + 1)
                .map(|k| {
                    let carry = if k >= 1 { prev[k - 1].clone() } else { BigInt::zero() };
                    let keep = prev.get(k).map(|s| BigInt::from(k) * s).unwrap_or_default();
                    keep + carry
                })
                .collect();
            self.second_kind.push(row);
        }
    }

    /// Signed Stirling number of the first kind; zero outside the triangle.
    ///
    /// Panics if `i` exceeds [`max_order`](Self::max_order); use
    /// [`stirling_first`] for a self-growing lookup.
    pub fn first(&self, i: usize, alpha: usize) -> BigInt {
        assert!(i <= self.max_order(), "row {i} beyond cached order {}", self.max_order());
        self.first_kind[i].get(alpha).cloned().unwrap_or_default()
    }

    /// Stirling number of the second kind; zero outside the triangle.
    pub fn second(&self, alpha: usize, k: usize) -> BigInt {
        assert!(alpha <= self.max_order(), "row {alpha} beyond cached order {}", self.max_order());
        self.second_kind[alpha].get(k).cloned().unwrap_or_default()
    }

    /// `Σ_{α=k}^{i} ω^α S(i, α) 𝔖(α, k)`, exact.
    pub fn coeff_p(&self, i: usize, k: usize, omega: &Rational) -> Result<Rational, MultiscaleError> {
        if i < k {
            return Err(MultiscaleError::InvalidOrderPair { i, k });
        }
        let mut power = num_traits::pow(omega.clone(), k);
        let mut total = Rational::zero();
        for alpha in k..=i {
            let weight = self.first(i, alpha) * self.second(alpha, k);
            if !weight.is_zero() {
                total += &power * Rational::from_integer(weight);
            }
            power *= omega;
        }
        Ok(total)
    }

    /// Entry `(k, i)` of the upper-triangular change-of-lattice matrix,
    /// `(k!/i!)·P(i, k)`; zero below the diagonal.
    pub fn transfer_entry(&self, k: usize, i: usize, omega: &Rational) -> Result<Rational, MultiscaleError> {
        if i < k {
            return Ok(Rational::zero());
        }
        let p = self.coeff_p(i, k, omega)?;
        let falling: BigInt = ((k + 1)..=i).map(BigInt::from).product();
        Ok(p / Rational::from_integer(falling))
    }

    /// Maps the fine differences `(Δ⁰f, …, Δ^D f)` at a point to the coarse
    /// differences `(Δ⁰g, …, Δ^D g)`, truncating the series at order `D`.
    ///
    /// With `ω = N` this is the coarse-from-fine expansion; with `ω = 1/N`
    /// the roles swap. Exact whenever the data is a polynomial of degree ≤ D.
    pub fn transfer(&self, differences: &[Rational], omega: &Rational) -> Result<Vec<Rational>, MultiscaleError> {
        let d = differences.len();
        if d > 0 && d - 1 > self.max_order() {
            return Err(MultiscaleError::OrderBeyondCache { order: d - 1, cached: self.max_order() });
        }
        (0..d)
            .map(|k| {
                (k..d)
                    .try_fold(Rational::zero(), |acc, i| Ok(acc + self.transfer_entry(k, i, omega)? * &differences[i]))
            })
            .collect()
    }
}

/// Signed Stirling number of the first kind `S(i, α)`.
pub fn stirling_first(i: usize, alpha: usize) -> BigInt {
    if alpha > i {
        return BigInt::zero();
    }
    StirlingCache::new(i).first(i, alpha)
}

/// Stirling number of the second kind `𝔖(α, k)`.
pub fn stirling_second(alpha: usize, k: usize) -> BigInt {
    if k > alpha {
        return BigInt::zero();
    }
    StirlingCache::new(alpha).second(alpha, k)
}

/// `P(i, k)` for the lattice ratio `omega` (`Q(i, k)` when `omega = 1/N`).
pub fn coeff_p(i: usize, k: usize, omega: &Rational) -> Result<Rational, MultiscaleError> {
    StirlingCache::new(i.max(k)).coeff_p(i, k, omega)
}

/// `true` when every entry respects the sign pattern `(-1)^{i-α} S(i, α) ≥ 0`.
pub fn first_kind_sign_pattern_holds(cache: &StirlingCache) -> bool {
    (0..=cache.max_order()).all(|i| {
        (0..=i).all(|alpha| {
            let s = cache.first(i, alpha);
            s.is_zero() || (s.is_negative() == ((i - alpha) % 2 == 1))
        })
    })
}

//! Remainder order of the two-scale shift expansions, measured exactly.
//!
//! Coarse samples are `g(i, j) = G(i, j)`; the fine neighbour of the point
//! `(i₀, j₀)` sits at `G(i₀ ± M1/N, j₀ ± M2/N²)`.

use num_traits::Zero;
use proptest::prelude::*;

use lattice_multiscale::multiscale::{shift_two_scale, Direction, GridFunction2D, Rational, SecondScaleOrder};

/// `Σ c[a][b] x₁^a x₂^b` over `a, b ≤ 2`.
type Poly = [[i64; 3]; 3];

fn eval(p: &Poly, x1: &Rational, x2: &Rational) -> Rational {
    let mut total = Rational::zero();
    for (a, row) in p.iter().enumerate() {
        for (b, c) in row.iter().enumerate() {
            total +=
                Rational::from_integer((*c).into()) * num_traits::pow(x1.clone(), a) * num_traits::pow(x2.clone(), b);
        }
    }
    total
}

fn residual(
    p: &Poly,
    n: i64,
    m1: i64,
    m2: i64,
    second: SecondScaleOrder,
    direction: Direction,
    base: (i64, i64),
) -> Rational {
    let g = GridFunction2D::from_fn((base.0 - 1, base.0 + 1), (base.1 - 1, base.1 + 1), |i, j| {
        eval(p, &Rational::from_integer(i.into()), &Rational::from_integer(j.into()))
    });
    let approx = shift_two_scale(&g, base, n, m1, m2, second, direction, false).unwrap();
    let s = direction.sign();
    let x1 = Rational::from_integer(base.0.into()) + Rational::new((s * m1).into(), n.into());
    let x2 = Rational::from_integer(base.1.into()) + Rational::new((s * m2).into(), (n * n).into());
    approx - eval(p, &x1, &x2)
}

fn ratio(a: &Rational, b: &Rational) -> Rational {
    a.clone() / b.clone()
}

#[test]
fn full_form_remainder_is_fourth_order() {
    // x₁²x₂ + 2x₂²; with equal weights the two remainders cancel for the backward shift
    let p: Poly = [[0, 0, 2], [0, 0, 0], [0, 1, 0]];
    for n in [4, 8, 16] {
        for dir in [Direction::Forward, Direction::Backward] {
            let coarse = residual(&p, n, 1, 1, SecondScaleOrder::Two, dir, (2, -1));
            let fine = residual(&p, 2 * n, 1, 1, SecondScaleOrder::Two, dir, (2, -1));
            assert_eq!(ratio(&coarse, &fine), Rational::from_integer(16.into()));
        }
    }
}

#[test]
fn mixed_form_remainder_is_third_order() {
    // x₁x₂, linear in the second slow variable
    let p: Poly = [[0, 0, 0], [0, 1, 0], [0, 0, 0]];
    for n in [4, 8, 16] {
        let coarse = residual(&p, n, 1, 1, SecondScaleOrder::One, Direction::Forward, (1, 3));
        let fine = residual(&p, 2 * n, 1, 1, SecondScaleOrder::One, Direction::Forward, (1, 3));
        assert_eq!(ratio(&coarse, &fine), Rational::from_integer(8.into()));
    }
}

#[test]
fn mixed_form_needs_linear_second_variable() {
    // x₂² leaves an O(N⁻²) remainder in the mixed form
    let p: Poly = [[0, 0, 1], [0, 0, 0], [0, 0, 0]];
    let coarse = residual(&p, 8, 1, 1, SecondScaleOrder::One, Direction::Forward, (0, 0));
    let fine = residual(&p, 16, 1, 1, SecondScaleOrder::One, Direction::Forward, (0, 0));
    let r = ratio(&coarse, &fine);
    assert!(r < Rational::from_integer(5.into()), "ratio {r}");
}

proptest! {
    #[test]
    fn full_form_ratio_on_random_data(
        exact in proptest::collection::vec(-9i64..9, 5),
        a in -5i64..5, b in 1i64..5,
        m1 in 1i64..4, m2 in prop_oneof![-3i64..0, 1i64..4],
        base in (-4i64..4, -4i64..4), backward in any::<bool>(),
    ) {
        // terms the stencil reproduces exactly plus the two with an N⁻⁴ remainder
        let p: Poly = [[exact[0], exact[1], b], [exact[2], exact[3], 0], [exact[4], a, 0]];
        let dir = if backward { Direction::Backward } else { Direction::Forward };
        for n in [8, 16] {
            let coarse = residual(&p, n, m1, m2, SecondScaleOrder::Two, dir, base);
            let fine = residual(&p, 2 * n, m1, m2, SecondScaleOrder::Two, dir, base);
            if coarse.is_zero() {
                prop_assert!(fine.is_zero());
            } else {
                prop_assert!(ratio(&coarse, &fine) * Rational::new(6.into(), 5.into()) >= Rational::from_integer(16.into()));
            }
        }
    }

    #[test]
    fn mixed_form_ratio_on_random_data(
        exact in proptest::collection::vec(-9i64..9, 4),
        d in 1i64..6, m1 in 1i64..4, m2 in prop_oneof![-3i64..0, 1i64..4],
        base in (-4i64..4, -4i64..4),
    ) {
        let p: Poly = [[exact[0], exact[1], 0], [exact[2], d, 0], [exact[3], 0, 0]];
        for n in [8, 16] {
            let coarse = residual(&p, n, m1, m2, SecondScaleOrder::One, Direction::Forward, base);
            let fine = residual(&p, 2 * n, m1, m2, SecondScaleOrder::One, Direction::Forward, base);
            prop_assert!(!coarse.is_zero());
            prop_assert!(ratio(&coarse, &fine) * Rational::new(6.into(), 5.into()) >= Rational::from_integer(8.into()));
        }
    }
}

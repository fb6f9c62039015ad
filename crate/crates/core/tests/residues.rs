//! The exact contour means against trapezoid quadrature.

use std::f64::consts::PI;

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use proptest::prelude::*;

use whittakerpw::exactfun::{
    circle_mean, circle_mean_of_product, eval_complex, partial_fractions, poles, rat,
    LaurentPolynomial, RationalFunction,
};

fn trapezoid(x: &RationalFunction, r: f64) -> f64 {
    const POINTS: usize = 4096;
    (0..POINTS)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / POINTS as f64;
            eval_complex(x, r * t.cos(), r * t.sin()).0
        })
        .sum::<f64>()
        / POINTS as f64
}

fn laurent() -> impl Strategy<Value = LaurentPolynomial> {
    (
        -2i64..=2,
        prop::collection::vec((-9i64..=9, 1i64..=5), 1..5),
    )
        .prop_map(|(lo, cs)| {
            LaurentPolynomial::from_terms(
                cs.into_iter()
                    .enumerate()
                    .map(|(i, (n, d))| (lo + i as i64, rat(n, d))),
            )
        })
}

/// Poles at `±k/4`, `k ∈ 1..=16`, with multiplicity up to two.
fn ratfun() -> impl Strategy<Value = RationalFunction> {
    (
        laurent(),
        prop::collection::vec((1i64..=16, any::<bool>(), 1usize..=2), 1..4),
    )
        .prop_map(|(num, ps)| {
            let den = ps
                .iter()
                .fold(LaurentPolynomial::one(), |acc, &(k, neg, mult)| {
                    let p = rat(if neg { -k } else { k }, 4);
                    (0..mult).fold(acc, |acc, _| {
                        acc * LaurentPolynomial::from_terms([(1, rat(1, 1)), (0, -p.clone())])
                    })
                });
            RationalFunction::new(num, den).unwrap()
        })
}

fn well_separated(x: &RationalFunction, r: &BigRational) -> bool {
    poles(x).unwrap().iter().all(|(p, _)| {
        let gap = (p.abs() - r).abs() / r;
        gap.to_f64().unwrap() > 0.2
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn circle_mean_matches_quadrature(x in ratfun(), rn in 1i64..=12) {
        let r = rat(rn, 3);
        prop_assume!(well_separated(&x, &r));
        let exact = circle_mean(&x, &r).unwrap().to_f64().unwrap();
        let numeric = trapezoid(&x, r.to_f64().unwrap());
        prop_assert!((exact - numeric).abs() <= 1e-9 * exact.abs().max(1.0), "{exact} vs {numeric}");
    }

    #[test]
    fn product_mean_matches_product(x in ratfun(), e in laurent(), rn in 1i64..=12) {
        let r = rat(rn, 3);
        prop_assume!(well_separated(&x, &r));
        let pf = partial_fractions(&x).unwrap();
        let product = &x * &RationalFunction::from(e.clone());
        prop_assert_eq!(circle_mean_of_product(&pf, &e, &r).unwrap(), circle_mean(&product, &r).unwrap());
    }
}

#[test]
fn monomial_means_are_kronecker_deltas() {
    for k in -5..=5 {
        for r in [rat(1, 7), rat(1, 1), rat(9, 2)] {
            let m = circle_mean(&LaurentPolynomial::monomial(rat(1, 1), k).into(), &r).unwrap();
            assert_eq!(m, rat(i64::from(k == 0), 1));
        }
    }
}

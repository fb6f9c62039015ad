//! Property tests for the exact arithmetic and the invariants of the pipeline.

mod common;

use std::sync::OnceLock;

use num_rational::BigRational;
use proptest::prelude::*;

use whittakerpw::exactfun::{partial_fractions, rat, LaurentPolynomial, RationalFunction};
use whittakerpw::fourier::{pw_gate, transform, WhittakerFn};
use whittakerpw::jacquet::{
    asymptotic_coefficients_at, whittaker_value, CFunctions, JacquetContext,
};
use whittakerpw::sqint::{casselman_check, ExponentData};

use common::{setup, QS};

fn cases() -> &'static [(i64, JacquetContext, CFunctions)] {
    static CASES: OnceLock<Vec<(i64, JacquetContext, CFunctions)>> = OnceLock::new();
    CASES.get_or_init(|| {
        QS.iter()
            .map(|&q| {
                let (ctx, cf) = setup(q);
                (q, ctx, cf)
            })
            .collect()
    })
}

fn rational() -> impl Strategy<Value = BigRational> {
    (-20i64..=20, 1i64..=9).prop_map(|(n, d)| rat(n, d))
}

fn nonzero_rational() -> impl Strategy<Value = BigRational> {
    rational().prop_filter("nonzero", |r| *r != rat(0, 1))
}

fn laurent() -> impl Strategy<Value = LaurentPolynomial> {
    (-3i64..=3, prop::collection::vec(rational(), 0..5)).prop_map(|(lo, cs)| {
        LaurentPolynomial::from_terms(cs.into_iter().enumerate().map(|(i, c)| (lo + i as i64, c)))
    })
}

/// Rational functions whose poles are rational: the denominator is a product
/// of linear factors.
fn ratfun() -> impl Strategy<Value = RationalFunction> {
    (laurent(), prop::collection::vec(nonzero_rational(), 0..3)).prop_map(|(num, roots)| {
        let den = roots.iter().fold(LaurentPolynomial::one(), |acc, p| {
            acc * LaurentPolynomial::from_terms([(1, rat(1, 1)), (0, -p.clone())])
        });
        RationalFunction::new(num, den).unwrap()
    })
}

fn whittaker_fn(q: i64) -> impl Strategy<Value = WhittakerFn> {
    prop::collection::vec((0i64..=8, rational()), 0..6)
        .prop_map(move |v| WhittakerFn::from_values(rat(q, 1), v))
}

fn exponents() -> impl Strategy<Value = ExponentData> {
    prop::collection::vec((-6i64..=3, 1i64..=4).prop_map(|(n, d)| rat(n, d)), 0..5)
        .prop_map(ExponentData::new)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(x in ratfun(), y in ratfun(), w in ratfun()) {
        prop_assert_eq!(&(&x + &y) - &y, x.clone());
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&x * &(&y + &w), &(&x * &y) + &(&x * &w));
        if !y.is_zero() {
            prop_assert_eq!((&x * &y).checked_div(&y).unwrap(), x.clone());
            prop_assert_eq!(&y * &y.recip().unwrap(), RationalFunction::one());
        }
    }

    #[test]
    fn involutions(x in ratfun()) {
        prop_assert_eq!(x.invert_var().invert_var(), x.clone());
        prop_assert_eq!(x.star().star(), x.clone());
        // rational coefficients: star is inversion of the variable
        prop_assert_eq!(x.star(), x.invert_var());
    }

    #[test]
    fn partial_fractions_recompose(x in ratfun()) {
        prop_assert_eq!(partial_fractions(&x).unwrap().recompose(), x);
    }

    #[test]
    fn transform_is_linear(qi in 0usize..3, c in rational(), seed_f in whittaker_fn(2), seed_g in whittaker_fn(2)) {
        let (q, ctx, _) = &cases()[qi];
        let retag = |f: &WhittakerFn| WhittakerFn::from_values(rat(*q, 1), f.values().map(|(n, v)| (n, v.clone())));
        let (f, g) = (retag(&seed_f), retag(&seed_g));
        let w = rat(1, 1);
        let lhs = transform(ctx, &f.scale(&c).add(&g), &w).unwrap();
        let rhs = transform(ctx, &f, &w).unwrap().scale(&c) + transform(ctx, &g, &w).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn transforms_pass_the_gate(qi in 0usize..3, seed in whittaker_fn(2)) {
        let (q, ctx, cf) = &cases()[qi];
        let f = WhittakerFn::from_values(rat(*q, 1), seed.values().map(|(n, v)| (n, v.clone())));
        let big_f = transform(ctx, &f, &rat(1, 1)).unwrap();
        prop_assert!(pw_gate(&big_f.into(), cf).passes);
    }

    #[test]
    fn monomials_and_poles_fail_the_gate(qi in 0usize..3, k in -6i64..=6, c in nonzero_rational(), x in ratfun()) {
        let (_, _, cf) = &cases()[qi];
        // a nonzero transform has terms at both ends of its support
        let mono = LaurentPolynomial::monomial(c, k);
        prop_assert!(!pw_gate(&mono.into(), cf).passes);
        if !x.is_laurent() {
            let report = pw_gate(&x, cf);
            prop_assert!(!report.is_laurent_polynomial && !report.passes);
        }
    }

    #[test]
    fn casselman_monotone_and_concat(a in exponents(), b in exponents()) {
        let joined = a.concat(&b);
        prop_assert_eq!(casselman_check(&joined), casselman_check(&a) && casselman_check(&b));
        if !casselman_check(&a) {
            prop_assert!(!casselman_check(&joined));
        }
    }

    #[test]
    fn json_round_trips(x in ratfun(), p in laurent(), f in whittaker_fn(3), e in exponents()) {
        let back: RationalFunction = serde_json::from_str(&serde_json::to_string(&x).unwrap()).unwrap();
        prop_assert_eq!(back, x);
        let back: LaurentPolynomial = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        prop_assert_eq!(back, p);
        let back: WhittakerFn = serde_json::from_str(&serde_json::to_string(&f).unwrap()).unwrap();
        prop_assert_eq!(back, f);
        let back: ExponentData = serde_json::from_str(&serde_json::to_string(&e).unwrap()).unwrap();
        prop_assert_eq!(back, e);
    }
}

#[test]
fn whittaker_degree_span() {
    for (q, ctx, _) in cases() {
        for n in 0..=10 {
            let e = whittaker_value(ctx, n).unwrap();
            assert_eq!(
                (e.min_exp(), e.max_exp()),
                (Some(-n - 1), Some(n)),
                "q={q} n={n}"
            );
            assert_eq!(e.span_width(), (2 * n + 2) as usize);
        }
    }
}

#[test]
fn expansion_independent_of_solve_points() {
    for (q, ctx, cf) in cases() {
        let again = asymptotic_coefficients_at(ctx, [3, 4]).unwrap();
        assert_eq!(again.alpha, cf.asymptotics.alpha, "q={q}");
        assert_eq!(again.beta, cf.asymptotics.beta, "q={q}");
        assert_eq!(again.threshold, cf.asymptotics.threshold, "q={q}");
    }
}

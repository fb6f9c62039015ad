//! Shared setup and seeded generators for the integration tests.
#![allow(dead_code)]

use num_rational::BigRational;
use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};

use whittakerpw::exactfun::{rat, LaurentPolynomial, RationalFunction};
use whittakerpw::fourier::{solve_zeta, WhittakerFn, DEFAULT_ZETA_MAX_DEGREE};
use whittakerpw::jacquet::{CFunctions, JacquetContext};
use whittakerpw::padic::PadicConfig;

pub const QS: [i64; 3] = [2, 3, 5];

pub fn context(q: i64) -> JacquetContext {
    JacquetContext::new(PadicConfig::with_q(q).unwrap()).unwrap()
}

/// Context and c-functions with ζ solved.
pub fn setup(q: i64) -> (JacquetContext, CFunctions) {
    let ctx = context(q);
    let mut cf = CFunctions::derive(&ctx).unwrap();
    cf.zeta = Some(solve_zeta(&cf, DEFAULT_ZETA_MAX_DEGREE).unwrap().zeta);
    (ctx, cf)
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Nonzero-free rational of height at most `h`.
pub fn small_rational(rng: &mut StdRng, h: i64) -> BigRational {
    rat(rng.random_range(-h..=h), rng.random_range(1..=h))
}

/// Random Whittaker function supported in `[0, 8]`, values of height ≤ 100.
pub fn random_whittaker_fn(rng: &mut StdRng, q: i64) -> WhittakerFn {
    let points = rng.random_range(1..=9);
    let values: Vec<(i64, BigRational)> = (0..points)
        .map(|_| (rng.random_range(0..=8), small_rational(rng, 100)))
        .collect();
    let f = WhittakerFn::from_values(rat(q, 1), values);
    if f.is_zero() {
        WhittakerFn::delta(rat(q, 1), rng.random_range(0..=8))
    } else {
        f
    }
}

/// Random Laurent polynomial with exponents in `[lo, hi]`.
pub fn random_laurent(rng: &mut StdRng, lo: i64, hi: i64, h: i64) -> LaurentPolynomial {
    LaurentPolynomial::from_terms((lo..=hi).map(|k| (k, small_rational(rng, h))))
}

/// `z - p`.
pub fn linear(p: &BigRational) -> RationalFunction {
    LaurentPolynomial::from_terms([(1, rat(1, 1)), (0, -p.clone())]).into()
}

pub fn laurent(terms: &[(i64, i64, i64)]) -> LaurentPolynomial {
    LaurentPolynomial::from_terms(terms.iter().map(|&(k, n, d)| (k, rat(n, d))))
}

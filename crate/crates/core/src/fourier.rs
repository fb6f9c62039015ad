//! The Fourier–Whittaker transform of K-invariant Whittaker functions, the
//! Paley–Wiener gate and the ζ solver.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactfun::{solve_linear, LaurentPolynomial, RationalFunction};
use crate::jacquet::{whittaker_value, CFunctions, JacquetContext};

/// Default cap on the degree searched by [`solve_zeta`].
pub const DEFAULT_ZETA_MAX_DEGREE: usize = 16;

/// A K-invariant Whittaker function, described by its values `f(a_n)`.
/// Zero values are not stored, so the map is the support.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WhittakerFn {
    #[serde(with = "crate::exactfun::rational_string")]
    pub q: BigRational,
    #[serde(with = "values_json")]
    values: BTreeMap<i64, BigRational>,
}

mod values_json {
    use std::collections::BTreeMap;

    use num_rational::BigRational;
    use num_traits::Zero;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::exactfun::{format_rational, parse_rational};

    pub fn serialize<S: Serializer>(
        v: &BTreeMap<i64, BigRational>,
        s: S,
    ) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(|(n, c)| (*n, format_rational(c)))
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> Result<BTreeMap<i64, BigRational>, D::Error> {
        let mut out = BTreeMap::new();
        for (n, c) in Vec::<(i64, String)>::deserialize(d)? {
            let c = parse_rational(&c).map_err(D::Error::custom)?;
            if out.insert(n, c.clone()).is_some() {
                return Err(D::Error::custom(format!("duplicate point n = {n}")));
            }
            if c.is_zero() {
                out.remove(&n);
            }
        }
        Ok(out)
    }
}

impl WhittakerFn {
    pub fn zero(q: BigRational) -> Self {
        Self {
            q,
            values: BTreeMap::new(),
        }
    }

    pub fn from_values<I: IntoIterator<Item = (i64, BigRational)>>(
        q: BigRational,
        values: I,
    ) -> Self {
        let mut f = Self::zero(q);
        for (n, c) in values {
            f.set(n, c);
        }
        f
    }

    /// The indicator of `a_n`.
    pub fn delta(q: BigRational, n: i64) -> Self {
        Self::from_values(q, [(n, BigRational::one())])
    }

    pub fn set(&mut self, n: i64, c: BigRational) {
        if c.is_zero() {
            self.values.remove(&n);
        } else {
            self.values.insert(n, c);
        }
    }

    pub fn get(&self, n: i64) -> BigRational {
        self.values
            .get(&n)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn values(&self) -> impl Iterator<Item = (i64, &BigRational)> + '_ {
        self.values.iter().map(|(&n, c)| (n, c))
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn support_min(&self) -> Option<i64> {
        self.values.keys().next().copied()
    }

    pub fn support_max(&self) -> Option<i64> {
        self.values.keys().next_back().copied()
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::from_values(self.q.clone(), self.values().map(|(n, v)| (n, v * c)))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (n, v) in other.values() {
            out.set(n, out.get(n) + v);
        }
        out
    }

    /// Points where `self` and `other` differ.
    pub fn discrepancies(&self, other: &Self) -> Vec<i64> {
        let mut keys: Vec<i64> = self
            .values
            .keys()
            .chain(other.values.keys())
            .copied()
            .collect();
        keys.sort_unstable();
        keys.dedup();
        keys.into_iter()
            .filter(|&n| self.get(n) != other.get(n))
            .collect()
    }
}

pub(crate) fn check_q(ctx: &JacquetContext, q: &BigRational) -> Result<()> {
    if q != ctx.q() {
        return Err(Error::InvalidConfig(format!(
            "input is for q = {q}, session has q = {}",
            ctx.q()
        )));
    }
    Ok(())
}

/// `F(z) = w · Σ_n q^{2n} f(n) · E_n^*(z)`: the integral of `f · conj(E_χ)`
/// over `U_0\G`, with `δ_{P_0}(a_n)^{-1} = q^{2n}` the volume of the `a_n`
/// double coset and the conjugate continued off the circle by `star`.
pub fn transform(
    ctx: &JacquetContext,
    f: &WhittakerFn,
    w: &BigRational,
) -> Result<LaurentPolynomial> {
    check_q(ctx, &f.q)?;
    let mut out = LaurentPolynomial::zero();
    for (n, v) in f.values() {
        let weight = ctx.config().q_pow(2 * n) * v * w;
        out = &out + &whittaker_value(ctx, n)?.star().scale(&weight);
    }
    Ok(out)
}

/// Outcome of [`pw_gate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PWReport {
    pub is_laurent_polynomial: bool,
    /// `a(z) F(z) - b(z) F(z^{-1})`.
    pub functional_eq_residual: RationalFunction,
    pub passes: bool,
}

/// The Paley–Wiener test: polynomiality plus the functional equation.
pub fn pw_gate(f: &RationalFunction, cf: &CFunctions) -> PWReport {
    let residual = &(&cf.a * f) - &(&cf.b * &f.invert_var());
    let is_laurent_polynomial = f.is_laurent();
    PWReport {
        is_laurent_polynomial,
        passes: is_laurent_polynomial && residual.is_zero(),
        functional_eq_residual: residual,
    }
}

/// A ζ together with the degree at which it was found.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZetaSolution {
    pub zeta: RationalFunction,
    pub degree: usize,
}

/// `a(z^{-1}) ζ(z) + a(z) ζ(z^{-1}) - 1`.
pub fn heiermann_residual(a: &RationalFunction, zeta: &RationalFunction) -> RationalFunction {
    let lhs = &(&a.invert_var() * zeta) + &(a * &zeta.invert_var());
    &lhs - &RationalFunction::one()
}

/// Minimal-degree polynomial ζ with `a(z^{-1}) ζ(z) + a(z) ζ(z^{-1}) = 1`.
///
/// With `a = N/D` the equation becomes
/// `Σ_k c_k (N* D z^k + N D* z^{-k}) = D D*`, one linear equation per exponent.
pub fn solve_zeta(cf: &CFunctions, max_degree: usize) -> Result<ZetaSolution> {
    let a = &cf.a;
    if a.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let (n, d) = (a.num(), a.den());
    let (ns, ds) = (n.invert_var(), d.invert_var());
    let target = d * &ds;
    for degree in 0..=max_degree {
        let columns: Vec<LaurentPolynomial> = (0..=degree as i64)
            .map(|k| &(&ns * d).shift(k) + &(n * &ds).shift(-k))
            .collect();
        let mut exps: Vec<i64> = columns
            .iter()
            .chain(std::iter::once(&target))
            .flat_map(|p| p.terms().map(|(e, _)| e).collect::<Vec<_>>())
            .collect();
        exps.sort_unstable();
        exps.dedup();
        let matrix: Vec<Vec<BigRational>> = exps
            .iter()
            .map(|&e| columns.iter().map(|c| c.coeff(e)).collect())
            .collect();
        let rhs: Vec<BigRational> = exps.iter().map(|&e| target.coeff(e)).collect();
        match solve_linear(&matrix, &rhs) {
            Ok(c) => {
                let zeta: RationalFunction = LaurentPolynomial::from_terms(
                    c.into_iter().enumerate().map(|(k, v)| (k as i64, v)),
                )
                .into();
                assert!(
                    heiermann_residual(a, &zeta).is_zero(),
                    "ζ failed substitution"
                );
                return Ok(ZetaSolution { zeta, degree });
            }
            Err(Error::NoSolution) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::NoSolutionUpToDegree(max_degree))
}

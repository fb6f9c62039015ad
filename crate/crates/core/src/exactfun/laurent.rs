use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::poly::Poly;
use super::{format_rational, parse_rational};

/// Finite sum `Σ c_k z^k` over integer exponents with exact rational coefficients.
///
/// No stored coefficient is zero; the zero polynomial has no terms, so
/// structural equality is mathematical equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPolynomial {
    terms: BTreeMap<i64, BigRational>,
}

impl LaurentPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(c, 0)
    }

    /// `c z^k`
    pub fn monomial(c: BigRational, k: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(k, c);
        }
        Self { terms }
    }

    /// The variable `z`.
    pub fn z() -> Self {
        Self::monomial(BigRational::one(), 1)
    }

    /// Build from `(exponent, coefficient)` pairs; repeated exponents are summed.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, BigRational)>,
    {
        let mut out = Self::zero();
        for (k, c) in terms {
            out.add_term(k, c);
        }
        out
    }

    pub(crate) fn add_term(&mut self, k: i64, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(k).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigRational)> + '_ {
        self.terms.iter().map(|(&k, c)| (k, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, k: i64) -> BigRational {
        self.terms
            .get(&k)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Number of coefficient slots between the lowest and highest exponent, inclusive.
    pub fn span_width(&self) -> usize {
        match (self.min_exp(), self.max_exp()) {
            (Some(lo), Some(hi)) => (hi - lo + 1) as usize,
            _ => 0,
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(&k, a)| (k, a * c)).collect(),
        }
    }

    /// Multiply by `z^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(&e, c)| (e + k, c.clone()))
                .collect(),
        }
    }

    /// `x(z) -> x(z^-1)`
    pub fn invert_var(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(&k, c)| (-k, c.clone())).collect(),
        }
    }

    /// Unitary-circle conjugate: conjugate coefficients, `z -> z^-1`.
    /// Coefficients are rational, so this coincides with [`invert_var`](Self::invert_var).
    pub fn star(&self) -> Self {
        self.invert_var()
    }

    pub fn eval(&self, z: &BigRational) -> BigRational {
        self.terms
            .iter()
            .map(|(&k, c)| c * pow_rational(z, k))
            .fold(BigRational::zero(), |a, b| a + b)
    }

    /// Dense polynomial of `z^{-min_exp} · self`, plus the shift that was removed.
    pub(crate) fn to_shifted_poly(&self) -> (Poly, i64) {
        let Some(lo) = self.min_exp() else {
            return (Poly::zero(), 0);
        };
        let hi = self.max_exp().unwrap();
        let coeffs = (lo..=hi).map(|k| self.coeff(k)).collect();
        (Poly::new(coeffs), lo)
    }

    /// `z^shift · p(z)`
    pub(crate) fn from_poly(p: &Poly, shift: i64) -> Self {
        Self::from_terms(
            p.coeffs()
                .iter()
                .enumerate()
                .map(|(i, c)| (i as i64 + shift, c.clone())),
        )
    }
}

/// `z^k` for a nonzero rational base (or k >= 0).
pub(crate) fn pow_rational(z: &BigRational, k: i64) -> BigRational {
    if k >= 0 {
        num_traits::pow(z.clone(), k as usize)
    } else {
        num_traits::pow(z.recip(), (-k) as usize)
    }
}

impl Add<&LaurentPolynomial> for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn add(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = self.clone();
        for (&k, c) in &rhs.terms {
            out.add_term(k, c.clone());
        }
        out
    }
}

impl Sub<&LaurentPolynomial> for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn sub(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = self.clone();
        for (&k, c) in &rhs.terms {
            out.add_term(k, -c.clone());
        }
        out
    }
}

impl Mul<&LaurentPolynomial> for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn mul(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = LaurentPolynomial::zero();
        for (&i, a) in &self.terms {
            for (&j, b) in &rhs.terms {
                out.add_term(i + j, a * b);
            }
        }
        out
    }
}

impl Neg for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn neg(self) -> LaurentPolynomial {
        LaurentPolynomial {
            terms: self.terms.iter().map(|(&k, c)| (k, -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<LaurentPolynomial> for LaurentPolynomial {
            type Output = LaurentPolynomial;
            fn $m(self, rhs: LaurentPolynomial) -> LaurentPolynomial {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&LaurentPolynomial> for LaurentPolynomial {
            type Output = LaurentPolynomial;
            fn $m(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn neg(self) -> LaurentPolynomial {
        -&self
    }
}

impl From<BigRational> for LaurentPolynomial {
    fn from(c: BigRational) -> Self {
        Self::constant(c)
    }
}

impl From<i64> for LaurentPolynomial {
    fn from(c: i64) -> Self {
        Self::constant(BigRational::from_integer(BigInt::from(c)))
    }
}

/// Canonical human-readable form, highest exponent first, e.g. `1 - 1/2*z^-1`.
impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (idx, (&k, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if idx == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let var = match k {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{k}"),
            };
            if k == 0 {
                write!(f, "{}", format_rational(&mag))?;
            } else if mag.is_one() {
                f.write_str(&var)?;
            } else {
                write!(f, "{}*{}", format_rational(&mag), var)?;
            }
        }
        Ok(())
    }
}

impl Serialize for LaurentPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<(i64, String)> = self
            .terms
            .iter()
            .map(|(&k, c)| (k, format_rational(c)))
            .collect();
        pairs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let pairs: Vec<(i64, String)> = Vec::deserialize(d)?;
        let mut out = LaurentPolynomial::zero();
        for (k, s) in pairs {
            let c = parse_rational(&s).map_err(D::Error::custom)?;
            out.add_term(k, c);
        }
        Ok(out)
    }
}

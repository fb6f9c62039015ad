//! The Casselman-type square-integrability test on constant-term exponents.

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::exactfun::parse_rational;

/// Real parts of the exponents, on the axis where negative means interior to
/// the negative cone.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentData {
    #[serde(with = "crate::exactfun::rational_string_vec")]
    pub real_parts: Vec<BigRational>,
}

impl ExponentData {
    pub fn new(real_parts: Vec<BigRational>) -> Self {
        Self { real_parts }
    }

    /// Parse a comma-separated list such as `"-1,-1/2"`; blank means empty.
    pub fn parse(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Self::default());
        }
        s.split(',')
            .map(parse_rational)
            .collect::<Result<_, _>>()
            .map(Self::new)
    }

    /// First exponent that is not strictly negative.
    pub fn first_violation(&self) -> Option<&BigRational> {
        self.real_parts.iter().find(|r| !r.is_negative())
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut real_parts = self.real_parts.clone();
        real_parts.extend(other.real_parts.iter().cloned());
        Self { real_parts }
    }
}

/// Square-integrable iff every exponent is strictly negative.
pub fn casselman_check(e: &ExponentData) -> bool {
    e.first_violation().is_none()
}

/// Exponents `[t, -t]` of the spherical Whittaker function on the principal
/// series with `|z| = q^t`: both Weyl translates appear in its constant term.
pub fn principal_series_exponents(z_modulus_log: &BigRational) -> ExponentData {
    ExponentData::new(vec![z_modulus_log.clone(), -z_modulus_log.clone()])
}

/// Whether the principal series with `|z| = q^t` is unitary (`t = 0`).
pub fn is_unitary(z_modulus_log: &BigRational) -> bool {
    z_modulus_log.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfun::rat;

    fn e(v: &[(i64, i64)]) -> ExponentData {
        ExponentData::new(v.iter().map(|&(n, d)| rat(n, d)).collect())
    }

    #[test]
    fn truth_table() {
        assert!(casselman_check(&e(&[(-1, 1)])));
        assert!(!casselman_check(&e(&[(0, 1)])));
        assert!(!casselman_check(&e(&[(-1, 1), (1, 1)])));
        assert!(casselman_check(&ExponentData::default()));
    }

    #[test]
    fn principal_series() {
        let unitary = principal_series_exponents(&rat(0, 1));
        assert_eq!(unitary, e(&[(0, 1), (0, 1)]));
        assert!(!casselman_check(&unitary));
        let shifted = principal_series_exponents(&rat(1, 2));
        assert_eq!(shifted.first_violation(), Some(&rat(1, 2)));
        assert!(!casselman_check(&shifted));
        assert!(is_unitary(&rat(0, 1)) && !is_unitary(&rat(1, 3)));
    }

    #[test]
    fn parse_list() {
        assert_eq!(
            ExponentData::parse("-1, -1/2").unwrap(),
            e(&[(-1, 1), (-1, 2)])
        );
        assert_eq!(ExponentData::parse("  ").unwrap(), ExponentData::default());
        assert!(ExponentData::parse("-1,,2").is_err());
    }
}

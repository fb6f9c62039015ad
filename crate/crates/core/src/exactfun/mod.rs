//! Exact arithmetic in `Q(z)`: Laurent polynomials, canonical rational
//! functions, the `z -> 1/z` and star involutions, partial fractions,
//! residues and circle means.

mod laurent;
mod linear;
pub(crate) mod poly;
mod ratfun;
mod residue;

use num_bigint::BigInt;
use num_rational::BigRational;

pub use laurent::LaurentPolynomial;
pub use linear::{solve_linear, FieldElement};
pub use ratfun::{arith, eval_complex, geometric_sum, monomial, ArithOp, RationalFunction};
pub use residue::{
    circle_mean, circle_mean_of_product, partial_fractions, poles, residue_at, PartialFractions,
    PoleTerm,
};

/// Exact rational scalar.
pub type Rational = BigRational;

/// `n / d` as an exact rational. Panics on `d = 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `"n/d"` (or `"n"` for integers).
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    let parsed = match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n
                .trim()
                .parse()
                .map_err(|_| format!("bad rational {s:?}"))?;
            let d: BigInt = d
                .trim()
                .parse()
                .map_err(|_| format!("bad rational {s:?}"))?;
            if d == BigInt::from(0) {
                return Err(format!("zero denominator in {s:?}"));
            }
            BigRational::new(n, d)
        }
        None => BigRational::from_integer(s.parse().map_err(|_| format!("bad rational {s:?}"))?),
    };
    Ok(parsed)
}

/// Serde adapter: a rational as a `"num/den"` string.
pub mod rational_string {
    use super::{format_rational, parse_rational, Rational};
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(D::Error::custom)
    }
}

/// Serde adapter for `Option<Rational>`.
pub mod rational_string_opt {
    use super::{format_rational, parse_rational, Rational};
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        r.as_ref().map(format_rational).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| parse_rational(&s).map_err(D::Error::custom))
            .transpose()
    }
}

/// Serde adapter for `Vec<Rational>`.
pub mod rational_string_vec {
    use super::{format_rational, parse_rational, Rational};
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(r: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        r.iter()
            .map(format_rational)
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| parse_rational(s).map_err(D::Error::custom))
            .collect()
    }
}

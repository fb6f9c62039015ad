use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::laurent::LaurentPolynomial;
use super::poly::Poly;
use crate::error::{Error, Result};

/// Rational function `num(z) / den(z)` in canonical form.
///
/// Invariants:
///   1. `den` is a polynomial with `den(0) = 1`;
///   2. `den` and the polynomial part of `num` are coprime;
///   3. pure powers of `z` live in the exponents of `num`.
///
/// With these, structural equality is equality of rational functions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: LaurentPolynomial,
    den: LaurentPolynomial,
}

impl RationalFunction {
    /// Canonicalize `num / den`.
    pub fn new(num: LaurentPolynomial, den: LaurentPolynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let (n, n_shift) = num.to_shifted_poly();
        let (d, d_shift) = den.to_shifted_poly();
        let g = n.gcd(&d);
        let (n, d) = if g.degree().unwrap_or(0) > 0 {
            (n.div_rem(&g).0, d.div_rem(&g).0)
        } else {
            (n, d)
        };
        let c = d.coeff(0).recip();
        let (n, d) = (n.scale(&c), d.scale(&c));
        Ok(Self {
            num: LaurentPolynomial::from_poly(&n, n_shift - d_shift),
            den: LaurentPolynomial::from_poly(&d, 0),
        })
    }

    pub fn zero() -> Self {
        Self {
            num: LaurentPolynomial::zero(),
            den: LaurentPolynomial::one(),
        }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        LaurentPolynomial::constant(c).into()
    }

    pub fn num(&self) -> &LaurentPolynomial {
        &self.num
    }

    pub fn den(&self) -> &LaurentPolynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_laurent(&self) -> bool {
        self.den == LaurentPolynomial::one()
    }

    pub fn as_laurent(&self) -> Option<&LaurentPolynomial> {
        self.is_laurent().then_some(&self.num)
    }

    /// The constant value if this function does not depend on `z`.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.as_laurent() {
            Some(p) if p.is_zero() => Some(BigRational::zero()),
            Some(p) if p.num_terms() == 1 && p.min_exp() == Some(0) => Some(p.coeff(0)),
            _ => None,
        }
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Self::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }

    pub fn recip(&self) -> Result<Self> {
        Self::one().checked_div(self)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    /// `x(z) -> x(z^-1)`
    pub fn invert_var(&self) -> Self {
        Self::new(self.num.invert_var(), self.den.invert_var())
            .expect("denominator stays nonzero under z -> 1/z")
    }

    /// Unitary-circle conjugate. With rational coefficients the value at
    /// `|z| = 1` is conjugated by `z -> z^-1` alone, so this equals
    /// [`invert_var`](Self::invert_var); it is kept separate so the
    /// conjugation contract is explicit at call sites.
    pub fn star(&self) -> Self {
        Self::new(self.num.star(), self.den.star()).expect("denominator stays nonzero")
    }

    /// Value at a rational point; `None` at a pole.
    pub fn eval(&self, z: &BigRational) -> Option<BigRational> {
        if z.is_zero() && self.num.min_exp().is_some_and(|e| e < 0) {
            return None;
        }
        let d = self.den.eval(z);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(z) / d)
    }

    /// Polynomials `(P, Q)` with `self = P / Q`, `Q(0) != 0` unless the
    /// numerator carries negative exponents (then `Q` absorbs `z^k`).
    pub(crate) fn to_poly_pair(&self) -> (Poly, Poly) {
        let (n, shift) = self.num.to_shifted_poly();
        let (d, _) = self.den.to_shifted_poly();
        if shift >= 0 {
            (n.shift_up(shift as usize), d)
        } else {
            (n, d.shift_up((-shift) as usize))
        }
    }
}

impl From<LaurentPolynomial> for RationalFunction {
    fn from(num: LaurentPolynomial) -> Self {
        Self {
            num,
            den: LaurentPolynomial::one(),
        }
    }
}

impl From<BigRational> for RationalFunction {
    fn from(c: BigRational) -> Self {
        Self::constant(c)
    }
}

impl Add<&RationalFunction> for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.den == rhs.den {
            return RationalFunction::new(&self.num + &rhs.num, self.den.clone()).unwrap();
        }
        RationalFunction::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
        .unwrap()
    }
}

impl Sub<&RationalFunction> for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Mul<&RationalFunction> for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::new(&self.num * &rhs.num, &self.den * &rhs.den).unwrap()
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $m(self, rhs: RationalFunction) -> RationalFunction {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $m(self, rhs: &RationalFunction) -> RationalFunction {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}

/// Arithmetic selector for [`arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Exact field arithmetic in canonical form.
pub fn arith(x: &RationalFunction, y: &RationalFunction, op: ArithOp) -> Result<RationalFunction> {
    Ok(match op {
        ArithOp::Add => x + y,
        ArithOp::Sub => x - y,
        ArithOp::Mul => x * y,
        ArithOp::Div => x.checked_div(y)?,
    })
}

/// `c z^k` as a rational function.
pub fn monomial(c: BigRational, k: i64) -> RationalFunction {
    LaurentPolynomial::monomial(c, k).into()
}

/// Formal sum `Σ_{k≥0} first · ratio^k = first / (1 - ratio)`, the rational
/// continuation of a geometric series outside its convergence region.
pub fn geometric_sum(
    first: &RationalFunction,
    ratio: &RationalFunction,
) -> Result<RationalFunction> {
    first.checked_div(&(&RationalFunction::one() - ratio))
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_laurent() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

#[derive(Serialize, Deserialize)]
struct RationalFunctionRepr {
    num: LaurentPolynomial,
    den: LaurentPolynomial,
}

impl Serialize for RationalFunction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RationalFunctionRepr {
            num: self.num.clone(),
            den: self.den.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalFunction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = RationalFunctionRepr::deserialize(d)?;
        RationalFunction::new(repr.num, repr.den).map_err(D::Error::custom)
    }
}

/// Numerical value at a complex point, for quadrature cross-checks.
pub fn eval_complex(x: &RationalFunction, re: f64, im: f64) -> (f64, f64) {
    use num_traits::ToPrimitive;
    let eval_poly = |p: &LaurentPolynomial| {
        let mut acc = (0.0f64, 0.0f64);
        for (k, c) in p.terms() {
            let c = c.to_f64().unwrap_or(f64::NAN);
            let (mut pr, mut pi) = (1.0f64, 0.0f64);
            let (br, bi) = if k >= 0 {
                (re, im)
            } else {
                let m = re * re + im * im;
                (re / m, -im / m)
            };
            for _ in 0..k.unsigned_abs() {
                let t = pr * br - pi * bi;
                pi = pr * bi + pi * br;
                pr = t;
            }
            acc.0 += c * pr;
            acc.1 += c * pi;
        }
        acc
    };
    let (nr, ni) = eval_poly(&x.num);
    let (dr, di) = eval_poly(&x.den);
    let m = dr * dr + di * di;
    ((nr * dr + ni * di) / m, (ni * dr - nr * di) / m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfun::rat;

    fn lp(terms: &[(i64, i64, i64)]) -> LaurentPolynomial {
        LaurentPolynomial::from_terms(terms.iter().map(|&(k, n, d)| (k, rat(n, d))))
    }

    #[test]
    fn self_quotient_is_one() {
        let x: RationalFunction = lp(&[(0, 1, 1), (1, -1, 1)]).into();
        assert_eq!(
            arith(&x, &x, ArithOp::Div).unwrap(),
            RationalFunction::one()
        );
    }

    #[test]
    fn canonical_form_of_c_function_shape() {
        // (1 - 1/2 z^-1) / (1 - z^-1) = (1/2 - z) / (1 - z)
        let n: RationalFunction = lp(&[(0, 1, 1), (-1, -1, 2)]).into();
        let d: RationalFunction = lp(&[(0, 1, 1), (-1, -1, 1)]).into();
        let x = arith(&n, &d, ArithOp::Div).unwrap();
        assert_eq!(x.den(), &lp(&[(0, 1, 1), (1, -1, 1)]));
        assert_eq!(x.num(), &lp(&[(0, 1, 2), (1, -1, 1)]));
    }

    #[test]
    fn division_by_zero() {
        let x = RationalFunction::one();
        assert_eq!(
            arith(&x, &RationalFunction::zero(), ArithOp::Div),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn invert_var_of_quotient() {
        let n: RationalFunction = lp(&[(0, 1, 1), (-1, -1, 2)]).into();
        let d: RationalFunction = lp(&[(0, 1, 1), (-1, -1, 1)]).into();
        let x = n.checked_div(&d).unwrap();
        let expected =
            RationalFunction::new(lp(&[(0, 1, 1), (1, -1, 2)]), lp(&[(0, 1, 1), (1, -1, 1)]))
                .unwrap();
        assert_eq!(x.invert_var(), expected);
        // z = 3: (1 - 3/2) / (1 - 3) = 1/4, and the original at 1/3 agrees
        assert_eq!(expected.eval(&rat(3, 1)), Some(rat(1, 4)));
        assert_eq!(x.eval(&rat(1, 3)), Some(rat(1, 4)));
    }

    #[test]
    fn constants_fixed_by_star() {
        let c = RationalFunction::constant(rat(5, 3));
        assert_eq!(c.star(), c);
    }

    #[test]
    fn json_roundtrip() {
        let x = RationalFunction::new(lp(&[(0, 1, 2), (1, -1, 1)]), lp(&[(0, 1, 1), (1, -1, 1)]))
            .unwrap();
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(
            s,
            r#"{"num":[[0,"1/2"],[1,"-1"]],"den":[[0,"1"],[1,"-1"]]}"#
        );
        let back: RationalFunction = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
    }
}

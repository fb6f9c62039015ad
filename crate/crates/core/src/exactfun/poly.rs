//! Dense univariate polynomials over the rationals.
//!
//! Internal workhorse behind gcd, exact division, Taylor shifts and rational
//! root search. Coefficients are stored in ascending order with no trailing
//! zeros; the zero polynomial is the empty vector.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Poly {
    coeffs: Vec<BigRational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    #[cfg(test)]
    pub fn constant(c: BigRational) -> Self {
        Poly::new(vec![c])
    }

    /// `z - root`
    pub fn linear(root: &BigRational) -> Self {
        Poly::new(vec![-root.clone(), BigRational::one()])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// Index of the lowest nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    #[cfg(test)]
    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    #[cfg(test)]
    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        Poly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Multiply by `z^k`.
    pub fn shift_up(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![BigRational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly::new(coeffs)
    }

    /// Drop the lowest `k` coefficients (exact division by `z^k` when they vanish).
    pub fn shift_down(&self, k: usize) -> Poly {
        Poly::new(self.coeffs.iter().skip(k).cloned().collect())
    }

    /// Euclidean division; panics on a zero divisor (callers check).
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let dd = divisor.degree().expect("polynomial division by zero");
        let lead = divisor.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / &lead;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &c * dc;
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some(l) => self.scale(&l.recip()),
            None => Poly::zero(),
        }
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    /// The polynomial `t -> self(p + t)`.
    pub fn taylor_shift(&self, p: &BigRational) -> Poly {
        // Horner in the shifted variable: acc <- acc * (t + p) + c
        let mut acc: Vec<BigRational> = Vec::new();
        for c in self.coeffs.iter().rev() {
            let mut next = vec![BigRational::zero(); acc.len() + 1];
            for (i, a) in acc.iter().enumerate() {
                next[i + 1] += a;
                next[i] += a * p;
            }
            next[0] += c;
            acc = next;
        }
        Poly::new(acc)
    }

    /// Primitive integer polynomial with the same roots (positive leading coefficient).
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if g.is_zero() {
            return ints;
        }
        let sign = if ints.last().is_some_and(Signed::is_negative) {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        ints.into_iter().map(|c| c / &g * &sign).collect()
    }
}

/// All positive divisors of `n` (n > 0). Trial division; the cofactor left
/// after exhausting small primes is treated as prime.
pub(crate) fn divisors(n: &BigUint) -> Vec<BigUint> {
    let mut factors: Vec<(BigUint, u32)> = Vec::new();
    let mut rest = n.clone();
    let mut d = BigUint::from(2u32);
    const TRIAL_LIMIT: u64 = 1_000_000;
    while &d * &d <= rest && d.to_u64().is_some_and(|v| v <= TRIAL_LIMIT) {
        let mut e = 0;
        while (&rest % &d).is_zero() {
            rest /= &d;
            e += 1;
        }
        if e > 0 {
            factors.push((d.clone(), e));
        }
        d += 1u32;
    }
    if rest > BigUint::one() {
        factors.push((rest, 1));
    }
    let mut divs = vec![BigUint::one()];
    for (p, e) in factors {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for base in &divs {
            let mut pk = BigUint::one();
            for _ in 0..=e {
                next.push(base * &pk);
                pk *= &p;
            }
        }
        divs = next;
    }
    divs.sort();
    divs
}

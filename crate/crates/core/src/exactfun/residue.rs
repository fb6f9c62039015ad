//! Partial fractions, residues and circle means for rational functions whose
//! denominators split over the rationals.

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::laurent::LaurentPolynomial;
use super::poly::{divisors, Poly};
use super::ratfun::RationalFunction;
use crate::error::{Error, Result};

/// Principal part at one pole: `Σ_{i=1}^{order} coefficients[i-1] / (z - location)^i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoleTerm {
    #[serde(with = "super::rational_string")]
    pub location: BigRational,
    pub order: usize,
    #[serde(with = "super::rational_string_vec")]
    pub coefficients: Vec<BigRational>,
}

/// `x = laurent_part + Σ principal parts`. Poles at `z = 0` are folded into
/// the Laurent part, so every listed pole is nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialFractions {
    pub laurent_part: LaurentPolynomial,
    pub poles: Vec<PoleTerm>,
}

impl PartialFractions {
    pub fn recompose(&self) -> RationalFunction {
        let mut acc: RationalFunction = self.laurent_part.clone().into();
        for term in &self.poles {
            let lin: RationalFunction = LaurentPolynomial::from_terms([
                (1, BigRational::one()),
                (0, -term.location.clone()),
            ])
            .into();
            let mut power = RationalFunction::one();
            for c in &term.coefficients {
                power = &power * &lin;
                let piece = RationalFunction::constant(c.clone())
                    .checked_div(&power)
                    .expect("(z - p)^i is nonzero");
                acc = &acc + &piece;
            }
        }
        acc
    }
}

/// Expansion of `x(p + t) = t^{-order} Σ_i series[i] t^i` up to `len` terms.
struct LocalExpansion {
    order: i64,
    series: Vec<BigRational>,
}

fn local_expansion(x: &RationalFunction, p: &BigRational, len: usize) -> LocalExpansion {
    let (num, den) = x.to_poly_pair();
    let ns = num.taylor_shift(p);
    let ds = den.taylor_shift(p);
    let vn = ns.valuation().unwrap_or(0);
    let vd = ds.valuation().expect("denominator is nonzero");
    let a = ns.shift_down(vn);
    let b = ds.shift_down(vd);
    LocalExpansion {
        order: vd as i64 - vn as i64,
        series: series_quotient(&a, &b, len),
    }
}

/// First `len` coefficients of the power series `a / b`, `b(0) != 0`.
fn series_quotient(a: &Poly, b: &Poly, len: usize) -> Vec<BigRational> {
    let b0 = b.coeff(0);
    let mut out: Vec<BigRational> = Vec::with_capacity(len);
    for i in 0..len {
        let mut acc = a.coeff(i);
        for (j, c) in out.iter().enumerate() {
            let bj = b.coeff(i - j);
            if !bj.is_zero() {
                acc -= c * bj;
            }
        }
        out.push(acc / &b0);
    }
    out
}

/// Coefficient of `(z - p)^{-1}` in the local expansion of `x` at `p`;
/// zero when `p` is not a pole.
pub fn residue_at(x: &RationalFunction, p: &BigRational) -> Result<BigRational> {
    if x.is_zero() {
        return Ok(BigRational::zero());
    }
    let probe = local_expansion(x, p, 0);
    if probe.order < 1 {
        return Ok(BigRational::zero());
    }
    let m = probe.order as usize;
    let exp = local_expansion(x, p, m);
    Ok(exp.series[m - 1].clone())
}

/// Distinct rational roots of `q` with multiplicities, or `IrrationalPole`
/// when an irreducible factor of degree > 1 remains.
pub(crate) fn rational_roots(q: &Poly) -> Result<Vec<(BigRational, usize)>> {
    let mut roots = Vec::new();
    let Some(_) = q.degree() else {
        return Ok(roots);
    };
    let mut rest = q.clone();
    if let Some(v) = rest.valuation().filter(|&v| v > 0) {
        roots.push((BigRational::zero(), v));
        rest = rest.shift_down(v);
    }
    // Roots of the squarefree part, then multiplicities by repeated division.
    let sf = {
        let g = rest.gcd(&rest.derivative());
        if g.degree().unwrap_or(0) > 0 {
            rest.div_rem(&g).0
        } else {
            rest.clone()
        }
    };
    let mut sf = sf;
    while sf.degree().unwrap_or(0) > 0 {
        let ints = sf.primitive_integer();
        let a0 = ints.first().unwrap().magnitude().clone();
        let an = ints.last().unwrap().magnitude().clone();
        let mut found = None;
        'search: for num in divisors(&a0) {
            for den in divisors(&an) {
                for sign in [Sign::Plus, Sign::Minus] {
                    let cand = BigRational::new(
                        BigInt::from_biguint(sign, num.clone()),
                        BigInt::from(den.clone()),
                    );
                    if sf.eval(&cand).is_zero() {
                        found = Some(cand);
                        break 'search;
                    }
                }
            }
        }
        let Some(root) = found else {
            return Err(Error::IrrationalPole);
        };
        let lin = Poly::linear(&root);
        sf = sf.div_rem(&lin).0;
        let mut mult = 0;
        loop {
            let (quot, rem) = rest.div_rem(&lin);
            if !rem.is_zero() {
                break;
            }
            rest = quot;
            mult += 1;
        }
        roots.push((root, mult));
    }
    roots.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(roots)
}

/// Nonzero poles of `x` with their orders.
pub fn poles(x: &RationalFunction) -> Result<Vec<(BigRational, usize)>> {
    let (_, den) = x.to_poly_pair();
    Ok(rational_roots(&den)?
        .into_iter()
        .filter(|(p, _)| !p.is_zero())
        .collect())
}

/// Laurent part plus principal parts at each nonzero rational pole.
pub fn partial_fractions(x: &RationalFunction) -> Result<PartialFractions> {
    let mut terms = Vec::new();
    let mut remainder = x.clone();
    for (p, _) in poles(x)? {
        let probe = local_expansion(x, &p, 0);
        let m = probe.order as usize;
        let exp = local_expansion(x, &p, m);
        let coefficients: Vec<BigRational> = (1..=m).map(|i| exp.series[m - i].clone()).collect();
        let term = PoleTerm {
            location: p,
            order: m,
            coefficients,
        };
        let principal = PartialFractions {
            laurent_part: LaurentPolynomial::zero(),
            poles: vec![term.clone()],
        }
        .recompose();
        remainder = &remainder - &principal;
        terms.push(term);
    }
    let laurent_part = remainder
        .as_laurent()
        .cloned()
        .expect("removing every nonzero principal part leaves a Laurent polynomial");
    Ok(PartialFractions {
        laurent_part,
        poles: terms,
    })
}

/// `(2πi)^{-1} ∮_{|z|=r} x(z) dz/z`, i.e. the sum of residues of `x(z)/z`
/// strictly inside the circle of radius `r`.
pub fn circle_mean(x: &RationalFunction, r: &BigRational) -> Result<BigRational> {
    if !r.is_positive() {
        return Err(Error::InputParse(format!(
            "contour radius must be positive, got {r}"
        )));
    }
    if x.is_zero() {
        return Ok(BigRational::zero());
    }
    // Laurent polynomials: the mean is the constant coefficient for every r.
    if let Some(p) = x.as_laurent() {
        return Ok(p.coeff(0));
    }
    let y: RationalFunction =
        x * &RationalFunction::from(LaurentPolynomial::monomial(BigRational::one(), -1));
    let (_, den) = y.to_poly_pair();
    let roots = rational_roots(&den)?;
    if let Some((p, _)) = roots.iter().find(|(p, _)| &p.abs() == r) {
        return Err(Error::PoleOnContour { radius: p.abs() });
    }
    let mut total = BigRational::zero();
    for (p, _) in roots.iter().filter(|(p, _)| &p.abs() < r) {
        total += residue_at(&y, p)?;
    }
    Ok(total)
}

/// `circle_mean(x · e, r)` for `x` given by its partial fractions, without
/// forming the product: each principal part is expanded in the annulus
/// containing the circle and paired against the finitely many coefficients
/// of `e`. Poles of `x` on the circle are rejected even when `e` cancels them.
pub fn circle_mean_of_product(
    x: &PartialFractions,
    e: &LaurentPolynomial,
    r: &BigRational,
) -> Result<BigRational> {
    if !r.is_positive() {
        return Err(Error::InputParse(format!(
            "contour radius must be positive, got {r}"
        )));
    }
    let mut total: BigRational = x.laurent_part.terms().map(|(k, c)| c * e.coeff(-k)).sum();
    let (Some(lo), Some(hi)) = (e.min_exp(), e.max_exp()) else {
        return Ok(BigRational::zero());
    };
    for term in &x.poles {
        let p = &term.location;
        if &p.abs() == r {
            return Err(Error::PoleOnContour { radius: p.abs() });
        }
        let inside = &p.abs() < r;
        for (idx, c) in term.coefficients.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let i = idx as i64 + 1;
            // (z - p)^{-i} = Σ_j binom(i+j-1, j) s_j z^{e_j}, with
            //   |z| < |p|: s_j = (-p)^{-i} p^{-j}, e_j = j;
            //   |z| > |p|: s_j = p^j,             e_j = -i - j.
            let (mut coef, step, mut exp, dir) = if inside {
                (BigRational::one(), p.clone(), -i, -1)
            } else {
                (pow_i(&(-p.clone()), -i), p.recip(), 0, 1)
            };
            let mut binom = BigRational::one();
            let mut j: i64 = 0;
            loop {
                // pair z^exp with the z^{-exp} coefficient of e
                let needed = -exp;
                if needed < lo || needed > hi {
                    if (dir == 1 && needed < lo) || (dir == -1 && needed > hi) {
                        break;
                    }
                } else {
                    total += c * &coef * &binom * e.coeff(needed);
                }
                j += 1;
                binom = binom * BigRational::from_integer(BigInt::from(i + j - 1))
                    / BigRational::from_integer(BigInt::from(j));
                coef *= &step;
                exp += dir;
            }
        }
    }
    Ok(total)
}

fn pow_i(x: &BigRational, k: i64) -> BigRational {
    if k >= 0 {
        num_traits::pow(x.clone(), k as usize)
    } else {
        num_traits::pow(x.recip(), (-k) as usize)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfun::rat;

    fn lin(c: BigRational) -> RationalFunction {
        // z - c
        LaurentPolynomial::from_terms([(1, rat(1, 1)), (0, -c)]).into()
    }

    #[test]
    fn two_pole_decomposition() {
        // 1 / ((1 - z)(1 - z/2)) = 2/(z-2) - 2/(z-1)
        let d1: RationalFunction =
            LaurentPolynomial::from_terms([(0, rat(1, 1)), (1, rat(-1, 1))]).into();
        let d2: RationalFunction =
            LaurentPolynomial::from_terms([(0, rat(1, 1)), (1, rat(-1, 2))]).into();
        let x = RationalFunction::one().checked_div(&(&d1 * &d2)).unwrap();
        let pf = partial_fractions(&x).unwrap();
        assert!(pf.laurent_part.is_zero());
        assert_eq!(pf.poles.len(), 2);
        assert_eq!(pf.poles[0].location, rat(1, 1));
        assert_eq!(pf.poles[0].coefficients, vec![rat(-2, 1)]);
        assert_eq!(pf.poles[1].location, rat(2, 1));
        assert_eq!(pf.poles[1].coefficients, vec![rat(2, 1)]);
        assert_eq!(pf.recompose(), x);
    }

    #[test]
    fn polynomial_has_no_poles() {
        let x: RationalFunction =
            LaurentPolynomial::from_terms([(2, rat(3, 1)), (-1, rat(1, 2))]).into();
        let pf = partial_fractions(&x).unwrap();
        assert!(pf.poles.is_empty());
        assert_eq!(pf.laurent_part, x.num().clone());
    }

    #[test]
    fn irreducible_quadratic_rejected() {
        let d: RationalFunction =
            LaurentPolynomial::from_terms([(0, rat(1, 1)), (1, rat(1, 1)), (2, rat(1, 1))]).into();
        let x = RationalFunction::one().checked_div(&d).unwrap();
        assert_eq!(partial_fractions(&x), Err(Error::IrrationalPole));
    }

    #[test]
    fn double_pole_and_pole_at_zero() {
        // (z + 3) / (z^2 (z - 1/3)^2)
        let n: RationalFunction =
            LaurentPolynomial::from_terms([(1, rat(1, 1)), (0, rat(3, 1))]).into();
        let l = lin(rat(1, 3));
        let d = &(&l * &l) * &RationalFunction::from(LaurentPolynomial::monomial(rat(1, 1), 2));
        let x = n.checked_div(&d).unwrap();
        let pf = partial_fractions(&x).unwrap();
        assert_eq!(pf.poles.len(), 1);
        assert_eq!(pf.poles[0].order, 2);
        assert_eq!(pf.recompose(), x);
    }

    #[test]
    fn simple_residues() {
        let c = rat(3, 5);
        let x = RationalFunction::one()
            .checked_div(&lin(c.clone()))
            .unwrap();
        assert_eq!(residue_at(&x, &c).unwrap(), rat(1, 1));
        assert_eq!(residue_at(&x, &rat(7, 1)).unwrap(), rat(0, 1));
        // 1 / (z (z - c)) at 0 is -1/c
        let y = x.checked_div(&LaurentPolynomial::z().into()).unwrap();
        assert_eq!(residue_at(&y, &rat(0, 1)).unwrap(), -c.recip());
    }

    #[test]
    fn circle_mean_of_simple_pole() {
        let c = rat(1, 2);
        let x = RationalFunction::one()
            .checked_div(&lin(c.clone()))
            .unwrap();
        assert_eq!(circle_mean(&x, &rat(1, 1)).unwrap(), rat(0, 1));
        assert_eq!(circle_mean(&x, &rat(1, 4)).unwrap(), -c.recip());
        assert_eq!(
            circle_mean(&x, &rat(1, 2)),
            Err(Error::PoleOnContour { radius: rat(1, 2) })
        );
    }

    #[test]
    fn circle_mean_monomials() {
        for k in -3..=3 {
            let x: RationalFunction = LaurentPolynomial::monomial(rat(1, 1), k).into();
            let expected = if k == 0 { rat(1, 1) } else { rat(0, 1) };
            assert_eq!(circle_mean(&x, &rat(1, 1)).unwrap(), expected);
        }
    }

    #[test]
    fn product_mean_matches_direct() {
        // x = (z^2 - 3) / ((z - 1/2)^2 (z + 3)), paired with a spread of Laurent e
        let num: RationalFunction =
            LaurentPolynomial::from_terms([(2, rat(1, 1)), (0, rat(-3, 1))]).into();
        let den = &(&lin(rat(1, 2)) * &lin(rat(1, 2))) * &lin(rat(-3, 1));
        let x = &num.checked_div(&den).unwrap()
            + &LaurentPolynomial::from_terms([(-1, rat(2, 1)), (1, rat(1, 3))]).into();
        let pf = partial_fractions(&x).unwrap();
        let e = LaurentPolynomial::from_terms([
            (-3, rat(1, 1)),
            (-1, rat(-2, 7)),
            (0, rat(5, 1)),
            (2, rat(1, 9)),
            (4, rat(-1, 1)),
        ]);
        for r in [rat(1, 4), rat(1, 1), rat(5, 1)] {
            let direct = circle_mean(&(&x * &e.clone().into()), &r).unwrap();
            assert_eq!(
                circle_mean_of_product(&pf, &e, &r).unwrap(),
                direct,
                "r = {r}"
            );
        }
        assert_eq!(
            circle_mean_of_product(&pf, &e, &rat(3, 1)),
            Err(Error::PoleOnContour { radius: rat(3, 1) })
        );
        assert!(
            circle_mean_of_product(&pf, &LaurentPolynomial::zero(), &rat(1, 1))
                .unwrap()
                .is_zero()
        );
    }
}

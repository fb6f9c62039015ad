//! Desk model of SL(2) over a non-archimedean local field with residue
//! field of cardinality `q`.
//!
//! Conventions: `a_n = diag(ϖ^n, ϖ^-n)`, the root is `α(a_n) = ϖ^{2n}`, the
//! standard Borel is upper triangular and the induction parabolic `P` is the
//! lower triangular Borel. The additive character ψ has conductor exactly 𝒪
//! and additive Haar measure gives 𝒪 volume 1.

use std::ops::{Add, Mul};

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactfun::{geometric_sum, rat, RationalFunction};

pub const DEFAULT_SHELL_GUARD: i64 = 64;
pub const MIN_SHELL_GUARD: i64 = 8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PadicConfig {
    #[serde(with = "crate::exactfun::rational_string")]
    pub q: BigRational,
    #[serde(default = "default_guard")]
    pub max_shell_guard: i64,
}

fn default_guard() -> i64 {
    DEFAULT_SHELL_GUARD
}

impl PadicConfig {
    pub fn new(q: BigRational, max_shell_guard: i64) -> Result<Self> {
        let cfg = Self { q, max_shell_guard };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Integer `q` with the default guard.
    pub fn with_q(q: i64) -> Result<Self> {
        Self::new(rat(q, 1), DEFAULT_SHELL_GUARD)
    }

    pub fn validate(&self) -> Result<()> {
        if self.q <= BigRational::one() {
            return Err(Error::InvalidConfig(format!(
                "q must exceed 1, got {}",
                self.q
            )));
        }
        if self.max_shell_guard < MIN_SHELL_GUARD {
            return Err(Error::InvalidConfig(format!(
                "max_shell_guard must be at least {MIN_SHELL_GUARD}, got {}",
                self.max_shell_guard
            )));
        }
        Ok(())
    }

    /// `q^k` for any integer `k`.
    pub fn q_pow(&self, k: i64) -> BigRational {
        if k >= 0 {
            num_traits::pow(self.q.clone(), k as usize)
        } else {
            num_traits::pow(self.q.recip(), (-k) as usize)
        }
    }
}

/// The torus element `a_n`; composition adds indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TorusPoint(pub i64);

impl Mul for TorusPoint {
    type Output = TorusPoint;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: TorusPoint) -> TorusPoint {
        TorusPoint(self.0 + rhs.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Borel {
    /// Upper triangular, `P_0`.
    Standard,
    /// Lower triangular, the induction parabolic `P`.
    Opposite,
}

/// `δ(a_n)`: `q^{-2n}` for the standard Borel, `q^{2n}` for the opposite one.
pub fn modulus_delta(cfg: &PadicConfig, n: i64, borel: Borel) -> BigRational {
    match borel {
        Borel::Standard => cfg.q_pow(-2 * n),
        Borel::Opposite => cfg.q_pow(2 * n),
    }
}

/// Haar volume of the shell `{x : val(x) = k}`.
pub fn shell_volume(cfg: &PadicConfig, k: i64) -> BigRational {
    cfg.q_pow(-k) * (BigRational::one() - cfg.q.recip())
}

/// `∫_{val(x)=k} ψ(x) dx` for ψ of conductor 𝒪.
pub fn psi_shell_integral(cfg: &PadicConfig, k: i64) -> BigRational {
    match k {
        k if k >= 0 => shell_volume(cfg, k),
        -1 => -BigRational::one(),
        _ => BigRational::zero(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnipotentSide {
    /// `[[1, x], [0, 1]]`
    Upper,
    /// `[[1, 0], [x, 1]]`
    Lower,
}

/// Iwasawa data of a unipotent element with off-diagonal entry of valuation `val_x`.
///
/// Lower side: `[[1,0],[x,1]] = [[1,x^-1],[0,1]] · diag(x^-1, x) · k`;
/// upper side (transposed roles): `[[1,x],[0,1]] = [[1,0],[x^-1,1]] · diag(x, x^-1) · k`,
/// with `k` in the maximal compact whenever `val(x) < 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IwasawaParts {
    pub side: UnipotentSide,
    pub in_maximal_compact: bool,
    /// `val(x)` when outside K (the valuation carried by the diagonal factor), else 0.
    pub torus_valuation: i64,
}

impl IwasawaParts {
    /// Index `m` with diagonal factor equal to `a_m` up to a unit.
    pub fn torus_index(&self) -> i64 {
        match self.side {
            UnipotentSide::Upper => self.torus_valuation,
            UnipotentSide::Lower => -self.torus_valuation,
        }
    }
}

pub fn iwasawa_unipotent(val_x: i64, side: UnipotentSide) -> IwasawaParts {
    if val_x >= 0 {
        IwasawaParts {
            side,
            in_maximal_compact: true,
            torus_valuation: 0,
        }
    } else {
        IwasawaParts {
            side,
            in_maximal_compact: false,
            torus_valuation: val_x,
        }
    }
}

/// Torus index of `g` in `g = n̄ · a_t · k` (lower Borel times K), read off the
/// valuations of the first row: `t = min(val g11, val g12)`. `None` is a zero entry.
pub fn lower_borel_torus_index(row: [Option<i64>; 2]) -> i64 {
    row.iter()
        .flatten()
        .copied()
        .min()
        .expect("a row of an invertible matrix is nonzero")
}

/// The normalizing constant `c` with `c · ∫ δ_P(m_P(u)) dx = 1` over `U⁻`.
pub fn uminus_measure_constant(cfg: &PadicConfig) -> BigRational {
    (BigRational::one() + cfg.q.recip()).recip()
}

/// `∫ δ_P(m_P(u)) dx` summed over the shells `val(x) > -depth` only.
pub fn uminus_series_truncated(cfg: &PadicConfig, depth: i64) -> BigRational {
    // val(x) >= 0 contributes 1; val(x) = -k contributes q^{-2k} · vol
    (1..depth).fold(BigRational::one(), |acc, k| {
        acc + cfg.q_pow(-2 * k) * shell_volume(cfg, -k)
    })
}

/// 2×2 matrices over any ring, for exact symbolic checks of decompositions.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat2<T>(pub [[T; 2]; 2]);

impl<T> Mul for &Mat2<T>
where
    T: Clone,
    for<'a> &'a T: Mul<&'a T, Output = T>,
    T: Add<T, Output = T>,
{
    type Output = Mat2<T>;
    fn mul(self, rhs: &Mat2<T>) -> Mat2<T> {
        let a = &self.0;
        let b = &rhs.0;
        let e = |i: usize, j: usize| (&a[i][0] * &b[0][j]) + (&a[i][1] * &b[1][j]);
        Mat2([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }
}

/// Measure used to weight each shell of a one-dimensional integral.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShellMeasure {
    /// Additive Haar measure.
    Haar,
    /// Haar measure twisted by ψ (vanishes on shells `val ≤ -2`).
    Character,
}

/// `∫_F h(x) dμ(x)` for an integrand constant on valuation shells.
///
/// `integrand(m)` is the value on `val(x) = m`. The caller promises that the
/// weighted terms form an exact geometric progression for `m >= regular_above`
/// and for `m <= regular_below`; both tails are then summed in closed form and
/// only the window in between is enumerated. The progression is re-checked on
/// the first three tail terms.
pub struct ShellIntegral<F> {
    pub measure: ShellMeasure,
    pub regular_above: i64,
    pub regular_below: i64,
    pub integrand: F,
}

impl<F> ShellIntegral<F>
where
    F: Fn(i64) -> Result<RationalFunction>,
{
    pub fn evaluate(&self, cfg: &PadicConfig) -> Result<RationalFunction> {
        let weight = |m: i64| match self.measure {
            ShellMeasure::Haar => shell_volume(cfg, m),
            ShellMeasure::Character => psi_shell_integral(cfg, m),
        };
        let term = |m: i64| -> Result<RationalFunction> {
            let w = weight(m);
            if w.is_zero() {
                return Ok(RationalFunction::zero());
            }
            Ok((self.integrand)(m)?.scale(&w))
        };

        let (lo, hi) = match self.measure {
            ShellMeasure::Character => (-1, self.regular_above.max(0)),
            ShellMeasure::Haar => {
                let hi = self.regular_above;
                ((self.regular_below + 1).min(hi), hi)
            }
        };
        let needed = hi - lo;
        if needed > cfg.max_shell_guard {
            return Err(Error::GuardExceeded {
                needed,
                guard: cfg.max_shell_guard,
            });
        }

        let mut total = RationalFunction::zero();
        for m in lo..hi {
            total = &total + &term(m)?;
        }
        total = &total + &geometric_tail(&term, hi, 1)?;
        if self.measure == ShellMeasure::Haar {
            total = &total + &geometric_tail(&term, lo - 1, -1)?;
        }
        Ok(total)
    }
}

/// `Σ_{k≥0} term(start + step·k)`, given that the terms are geometric.
fn geometric_tail<T>(term: &T, start: i64, step: i64) -> Result<RationalFunction>
where
    T: Fn(i64) -> Result<RationalFunction>,
{
    let t0 = term(start)?;
    let t1 = term(start + step)?;
    let t2 = term(start + 2 * step)?;
    if t0.is_zero() {
        if !t1.is_zero() || !t2.is_zero() {
            return Err(Error::IrregularTail { shell: start });
        }
        return Ok(RationalFunction::zero());
    }
    let ratio = t1.checked_div(&t0)?;
    if &t1 * &ratio != t2 {
        return Err(Error::IrregularTail { shell: start });
    }
    geometric_sum(&t0, &ratio)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfun::LaurentPolynomial;

    fn cfg(q: i64) -> PadicConfig {
        PadicConfig::with_q(q).unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(PadicConfig::new(rat(1, 1), 32).is_err());
        assert!(PadicConfig::new(rat(2, 1), 7).is_err());
        assert!(PadicConfig::new(rat(2, 1), 8).is_ok());
        let c: PadicConfig = serde_json::from_str(r#"{"q": "2", "max_shell_guard": 32}"#).unwrap();
        assert_eq!(c.q, rat(2, 1));
        assert_eq!(c.max_shell_guard, 32);
    }

    #[test]
    fn torus_group_law() {
        assert_eq!(TorusPoint(3) * TorusPoint(-5), TorusPoint(-2));
    }

    #[test]
    fn modulus_values() {
        let c = cfg(2);
        assert_eq!(modulus_delta(&c, 0, Borel::Standard), rat(1, 1));
        assert_eq!(modulus_delta(&c, 1, Borel::Standard), rat(1, 4));
        assert_eq!(modulus_delta(&c, 1, Borel::Opposite), rat(4, 1));
        for q in [2, 3, 5] {
            let c = cfg(q);
            for n in -10..=10 {
                assert_eq!(
                    modulus_delta(&c, n, Borel::Standard) * modulus_delta(&c, n, Borel::Opposite),
                    rat(1, 1)
                );
            }
        }
    }

    #[test]
    fn shell_volumes() {
        let c = cfg(2);
        assert_eq!(shell_volume(&c, 0), rat(1, 2));
        assert_eq!(shell_volume(&c, 1), rat(1, 4));
        // partial sums over val >= 0 approach 1 with tail q^{-K}
        let partial = (0..20).fold(rat(0, 1), |a, k| a + shell_volume(&c, k));
        assert_eq!(rat(1, 1) - partial, c.q_pow(-20));
    }

    #[test]
    fn character_shells() {
        assert_eq!(psi_shell_integral(&cfg(3), 0), rat(2, 3));
        assert_eq!(psi_shell_integral(&cfg(2), -1), rat(-1, 1));
        for q in [2, 3, 5] {
            let c = cfg(q);
            assert_eq!(psi_shell_integral(&c, -2), rat(0, 1));
            assert_eq!(psi_shell_integral(&c, -7), rat(0, 1));
            for k in 0..10 {
                assert_eq!(psi_shell_integral(&c, k), shell_volume(&c, k));
            }
            // full integral over ϖ^{-1}𝒪 of a nontrivial character, tail q^{-K}
            let partial = (-1..30).fold(rat(0, 1), |a, k| a + psi_shell_integral(&c, k));
            assert_eq!(partial, -c.q_pow(-30));
        }
    }

    #[test]
    fn iwasawa_examples() {
        assert!(iwasawa_unipotent(0, UnipotentSide::Lower).in_maximal_compact);
        let p = iwasawa_unipotent(-2, UnipotentSide::Lower);
        assert!(!p.in_maximal_compact);
        assert_eq!(p.torus_valuation, -2);
        assert_eq!(p.torus_index(), 2);
        let p = iwasawa_unipotent(-1, UnipotentSide::Upper);
        assert_eq!(p.torus_valuation, -1);
        assert_eq!(p.torus_index(), -1);
    }

    #[test]
    fn iwasawa_identities_symbolic() {
        // entries in Q(x), x playing the role of the variable
        let one = RationalFunction::one();
        let zero = RationalFunction::zero();
        let x: RationalFunction = LaurentPolynomial::z().into();
        let xi = x.recip().unwrap();
        let neg = |r: &RationalFunction| -r;

        let lower = Mat2([[one.clone(), zero.clone()], [x.clone(), one.clone()]]);
        let n = Mat2([[one.clone(), xi.clone()], [zero.clone(), one.clone()]]);
        let a = Mat2([[xi.clone(), zero.clone()], [zero.clone(), x.clone()]]);
        let k = Mat2([[zero.clone(), neg(&one)], [one.clone(), xi.clone()]]);
        assert_eq!(&(&n * &a) * &k, lower);

        let upper = Mat2([[one.clone(), x.clone()], [zero.clone(), one.clone()]]);
        let nbar = Mat2([[one.clone(), zero.clone()], [xi.clone(), one.clone()]]);
        let a = Mat2([[x.clone(), zero.clone()], [zero.clone(), xi.clone()]]);
        let k = Mat2([[xi.clone(), one.clone()], [neg(&one), zero.clone()]]);
        assert_eq!(&(&nbar * &a) * &k, upper);
    }

    #[test]
    fn uminus_constant() {
        assert_eq!(uminus_measure_constant(&cfg(2)), rat(2, 3));
        assert_eq!(uminus_measure_constant(&cfg(3)), rat(3, 4));
        for q in [2, 3, 5] {
            let c = cfg(q);
            assert_eq!(
                uminus_measure_constant(&c) * (rat(1, 1) + c.q.recip()),
                rat(1, 1)
            );
        }
    }

    #[test]
    fn uminus_truncation_tail_is_exact() {
        for q in [2, 3, 5] {
            let c = PadicConfig::new(rat(q, 1), 32).unwrap();
            let closed = uminus_measure_constant(&c).recip();
            let truncated = uminus_series_truncated(&c, c.max_shell_guard);
            assert_eq!(closed - truncated, c.q_pow(-c.max_shell_guard));
        }
    }

    #[test]
    fn shell_engine_reproduces_uminus_integral() {
        for q in [2, 3, 5] {
            let c = cfg(q);
            let integral = ShellIntegral {
                measure: ShellMeasure::Haar,
                regular_above: 0,
                regular_below: -1,
                integrand: |m: i64| Ok(RationalFunction::constant(c.q_pow(2 * m.min(0)))),
            }
            .evaluate(&c)
            .unwrap();
            assert_eq!(
                integral,
                RationalFunction::constant(uminus_measure_constant(&c).recip())
            );
        }
    }

    #[test]
    fn shell_engine_guard() {
        let c = PadicConfig::new(rat(2, 1), 8).unwrap();
        let res = ShellIntegral {
            measure: ShellMeasure::Character,
            regular_above: 20,
            regular_below: -2,
            integrand: |_m: i64| Ok(RationalFunction::one()),
        }
        .evaluate(&c);
        assert!(matches!(
            res,
            Err(Error::GuardExceeded {
                needed: 21,
                guard: 8
            })
        ));
    }

    #[test]
    fn row_valuation_torus_index() {
        assert_eq!(lower_borel_torus_index([Some(3), Some(-1)]), -1);
        assert_eq!(lower_borel_torus_index([Some(2), None]), 2);
    }
}

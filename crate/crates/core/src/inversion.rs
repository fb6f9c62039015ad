//! Wave-packet inversion: `Φ = ζF/a`, the contour integrals
//! `f_Φ(a_n) = ∮ Φ(z) E_z(a_n)`, calibration of the global constant, and the
//! exact checks that the transform of a wave packet is
//! `a(z)a(z^{-1})Φ(z) + a(z^{-1})b(z)Φ(z^{-1})` and that inversion recovers `f`.

use std::ops::RangeInclusive;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactfun::poly::Poly;
use crate::exactfun::{
    circle_mean, circle_mean_of_product, geometric_sum, monomial, partial_fractions, poles,
    LaurentPolynomial, PartialFractions, RationalFunction,
};
use crate::fourier::{check_q, pw_gate, transform, WhittakerFn};
use crate::jacquet::{whittaker_value, CFunctions, ExpansionNormalization, JacquetContext};

/// Lattice points beyond the support that must evaluate to zero.
pub const CERTIFIED_MARGIN: i64 = 3;

/// A circle `|z| = radius` enclosing the poles of smaller modulus.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Contour {
    #[serde(with = "crate::exactfun::rational_string")]
    radius: BigRational,
}

impl Contour {
    pub fn new(radius: BigRational) -> Result<Self> {
        if !radius.is_positive() {
            return Err(Error::InvalidConfig(format!(
                "contour radius must be positive, got {radius}"
            )));
        }
        Ok(Self { radius })
    }

    pub fn radius(&self) -> &BigRational {
        &self.radius
    }
}

/// `Φ = ζ F / a`.
pub fn build_phi(f: &LaurentPolynomial, cf: &CFunctions) -> Result<RationalFunction> {
    let zeta = cf
        .zeta
        .as_ref()
        .ok_or_else(|| Error::InvalidConfig("ζ has not been solved".into()))?;
    let f: RationalFunction = f.clone().into();
    (zeta * &f).checked_div(&cf.a)
}

fn pole_moduli(x: &RationalFunction) -> Result<Vec<BigRational>> {
    Ok(poles(x)?.into_iter().map(|(p, _)| p.abs()).collect())
}

/// Radius `min(1, smallest pole modulus of Φ) / 2`: inside every pole, on the
/// antidominant side of the unit circle.
pub fn default_contour(phi: &RationalFunction) -> Result<Contour> {
    let one = BigRational::one();
    let m = pole_moduli(phi)?
        .into_iter()
        .fold(one.clone(), |m, p| m.min(p));
    Contour::new(m / BigRational::from_integer(2.into()))
}

/// Order of vanishing of `e` at the nonzero point `p`.
fn zero_order(e: &LaurentPolynomial, p: &BigRational) -> usize {
    let (mut poly, _) = e.to_shifted_poly();
    let lin = Poly::linear(p);
    let mut k = 0;
    while !poly.is_zero() {
        let (quot, rem) = poly.div_rem(&lin);
        if !rem.is_zero() {
            break;
        }
        poly = quot;
        k += 1;
    }
    k
}

/// The default contour plus a second radius in the same pole-free annulus of
/// every integrand `Φ E_n`, `n ∈ range`. When the integrands have no poles at
/// all the second radius is taken beyond every pole of `Φ`.
pub fn admissible_contours(
    phi: &RationalFunction,
    ctx: &JacquetContext,
    range: RangeInclusive<i64>,
) -> Result<[Contour; 2]> {
    let first = default_contour(phi)?;
    let phi_poles = poles(phi)?;
    let mut inner: Option<BigRational> = None;
    for n in range {
        let e = whittaker_value(ctx, n)?;
        if e.is_zero() {
            continue;
        }
        // a pole of Φ survives in Φ E_n unless E_n vanishes to at least its order
        for (p, order) in &phi_poles {
            if zero_order(&e, p) < *order {
                let m = p.abs();
                inner = Some(inner.map_or(m.clone(), |i: BigRational| i.min(m)));
            }
        }
    }
    let two = BigRational::from_integer(2.into());
    let second = match inner {
        Some(m) => (first.radius() + m) / &two,
        None => {
            let outer = phi_poles
                .iter()
                .fold(BigRational::one(), |m, (p, _)| m.max(p.abs()));
            outer * &two
        }
    };
    Ok([first, Contour::new(second)?])
}

/// Lattice range that contains the support of the wave packet of `Φ`
/// whenever it is compactly supported.
pub fn packet_range(phi: &RationalFunction) -> RangeInclusive<i64> {
    let reach = |p: &LaurentPolynomial| {
        let hi = p.max_exp().unwrap_or(0) + 1;
        let lo = -p.min_exp().unwrap_or(0);
        hi.max(lo).max(0)
    };
    let extent = reach(phi.num()) + reach(phi.den()) + phi.den().span_width() as i64;
    0..=extent
}

fn packet_value(
    phi: &RationalFunction,
    pf: &PartialFractions,
    ctx: &JacquetContext,
    contour: &Contour,
    n: i64,
) -> Result<BigRational> {
    let e = whittaker_value(ctx, n)?;
    if e.is_zero() {
        return Ok(BigRational::zero());
    }
    match circle_mean_of_product(pf, &e, contour.radius()) {
        // a pole of Φ on the circle may still cancel against E_n
        Err(Error::PoleOnContour { .. }) => circle_mean(&(phi * &e.into()), contour.radius()),
        other => other,
    }
}

/// `f_Φ(a_n) = circle_mean(Φ(z) E_z(a_n), r)` for `n` in `range`, certified
/// to vanish on [`CERTIFIED_MARGIN`] points beyond each end of the range.
///
/// A nonzero margin means the packet does not have compact support; the
/// error carries `q^n f_Φ(a_n)` at the outermost point, which is the exact
/// tail constant when the packet is eventually geometric.
pub fn wave_packet(
    phi: &RationalFunction,
    ctx: &JacquetContext,
    contour: &Contour,
    range: RangeInclusive<i64>,
) -> Result<WhittakerFn> {
    let (lo, hi) = (*range.start(), *range.end());
    let pf = partial_fractions(phi)?;
    let mut f = WhittakerFn::zero(ctx.q().clone());
    for n in lo - CERTIFIED_MARGIN..=hi + CERTIFIED_MARGIN {
        f.set(n, packet_value(phi, &pf, ctx, contour, n)?);
    }
    let outside = |n: i64| n < lo || n > hi;
    if let Some(n) = f.values().map(|(n, _)| n).filter(|&n| outside(n)).max() {
        let last = if n > hi { hi + CERTIFIED_MARGIN } else { n };
        let tail = ctx.config().q_pow(last) * f.get(last);
        return Err(Error::NotCompactlySupported { tail });
    }
    Ok(f)
}

/// Wave packet of a Laurent polynomial `Φ`, which is compactly supported only
/// when `Φ(1) = 0`; in general it is a finite head plus the geometric tail
/// `f(a_n) = tail_constant · q^{-n}` for `n ≥ tail_start`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtendedWavePacket {
    pub head: WhittakerFn,
    pub tail_start: i64,
    #[serde(with = "crate::exactfun::rational_string")]
    pub tail_constant: BigRational,
}

/// Evaluate the packet of a Laurent `Φ`. Every integrand is a Laurent
/// polynomial, so any radius gives the same values; the unit circle is used.
pub fn extended_wave_packet(
    phi: &LaurentPolynomial,
    ctx: &JacquetContext,
) -> Result<ExtendedWavePacket> {
    let contour = Contour::new(BigRational::one())?;
    let phi_r: RationalFunction = phi.clone().into();
    let pf = partial_fractions(&phi_r)?;
    // E_n has constant interior coefficients on [-n, n-1]; both ends of Φ must lie inside.
    let hi = phi.max_exp().unwrap_or(0);
    let lo = -phi.min_exp().unwrap_or(0);
    let tail_start = hi.max(lo).max(0) + 1;

    let mut head = WhittakerFn::zero(ctx.q().clone());
    for n in -CERTIFIED_MARGIN..tail_start {
        head.set(n, packet_value(&phi_r, &pf, ctx, &contour, n)?);
    }
    if let Some(n) = head.support_min().filter(|&n| n < 0) {
        return Err(Error::IrregularTail { shell: n });
    }
    let scaled = |n: i64| -> Result<BigRational> {
        Ok(ctx.config().q_pow(n) * packet_value(&phi_r, &pf, ctx, &contour, n)?)
    };
    let tail_constant = scaled(tail_start)?;
    for n in tail_start + 1..=tail_start + CERTIFIED_MARGIN {
        if scaled(n)? != tail_constant {
            return Err(Error::IrregularTail { shell: n });
        }
    }
    Ok(ExtendedWavePacket {
        head,
        tail_start,
        tail_constant,
    })
}

/// Transform of an extended packet. The tail contributes
/// `w C Σ_{n ≥ N} (β*(z) z^{-n} + α*(z) z^n)` by the constant-term expansion;
/// each geometric series is summed in its own region of convergence and the
/// two are continued rationally.
pub fn extended_transform(
    packet: &ExtendedWavePacket,
    ctx: &JacquetContext,
    cf: &CFunctions,
    w: &BigRational,
) -> Result<RationalFunction> {
    let head: RationalFunction = transform(ctx, &packet.head, w)?.into();
    if packet.tail_constant.is_zero() {
        return Ok(head);
    }
    let asym = &cf.asymptotics;
    if asym.normalization != ExpansionNormalization::HalfModulus
        || asym.threshold > packet.tail_start
    {
        return Err(Error::NoExpansion);
    }
    let n = packet.tail_start;
    let one = BigRational::one();
    let down = geometric_sum(
        &(&asym.beta.star() * &monomial(one.clone(), -n)),
        &monomial(one.clone(), -1),
    )?;
    let up = geometric_sum(
        &(&asym.alpha.star() * &monomial(one.clone(), n)),
        &monomial(one, 1),
    )?;
    let tail = (&down + &up).scale(&(&packet.tail_constant * w));
    Ok(&head + &tail)
}

/// `a(z)a(z^{-1})Φ(z) + a(z^{-1})b(z)Φ(z^{-1})`.
pub fn theorem5_rhs(phi: &RationalFunction, cf: &CFunctions) -> RationalFunction {
    let a_inv = cf.a.invert_var();
    &(&(&cf.a * &a_inv) * phi) + &(&(&a_inv * &cf.b) * &phi.invert_var())
}

/// Transform of the wave packet of a Laurent `Φ` minus [`theorem5_rhs`].
pub fn theorem5_check(
    phi: &LaurentPolynomial,
    cf: &CFunctions,
    ctx: &JacquetContext,
    w: &BigRational,
) -> Result<RationalFunction> {
    let packet = extended_wave_packet(phi, ctx)?;
    let lhs = extended_transform(&packet, ctx, cf, w)?;
    Ok(&lhs - &theorem5_rhs(&phi.clone().into(), cf))
}

/// The symbolic steps showing that `Φ = ζF/a` reproduces `F`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinalIdentityReplay {
    pub phi: RationalFunction,
    /// `a a* Φ + a* b Φ*` for this Φ.
    pub f_prime: RationalFunction,
    /// `a F - b F*`; zero for Paley–Wiener `F`.
    pub functional_eq_residual: RationalFunction,
    /// `a* ζ + a ζ*`, which multiplies `F` once the functional equation is used.
    pub heiermann_bracket: RationalFunction,
    pub recovers_input: bool,
}

/// Substitute `Φ = ζF/a` into [`theorem5_rhs`]: the second term becomes
/// `ζ* b F*`, the functional equation turns it into `ζ* a F`, and the
/// ζ-relation collapses the bracket to 1.
pub fn replay_final_identity(
    f: &LaurentPolynomial,
    cf: &CFunctions,
) -> Result<FinalIdentityReplay> {
    let phi = build_phi(f, cf)?;
    let f_prime = theorem5_rhs(&phi, cf);
    let f_r: RationalFunction = f.clone().into();
    let functional_eq_residual = pw_gate(&f_r, cf).functional_eq_residual;
    let zeta = cf.zeta.as_ref().expect("build_phi checked ζ");
    let heiermann_bracket = &(&cf.a.invert_var() * zeta) + &(&cf.a * &zeta.invert_var());
    let recovers_input = functional_eq_residual.is_zero()
        && heiermann_bracket == RationalFunction::one()
        && f_prime == f_r;
    Ok(FinalIdentityReplay {
        phi,
        f_prime,
        functional_eq_residual,
        heiermann_bracket,
        recovers_input,
    })
}

/// Transform with weight `w`, then invert at one contour.
fn pipeline(
    ctx: &JacquetContext,
    cf: &CFunctions,
    f: &WhittakerFn,
    w: &BigRational,
    contour: Option<&Contour>,
) -> Result<WhittakerFn> {
    let big_f = transform(ctx, f, w)?;
    let phi = build_phi(&big_f, cf)?;
    let contour = match contour {
        Some(c) => c.clone(),
        None => default_contour(&phi)?,
    };
    wave_packet(&phi, ctx, &contour, packet_range(&phi))
}

/// The calibration constant and the radii it was confirmed at.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Calibration {
    #[serde(with = "crate::exactfun::rational_string")]
    pub q: BigRational,
    #[serde(with = "crate::exactfun::rational_string")]
    pub constant: BigRational,
    #[serde(with = "crate::exactfun::rational_string_vec")]
    pub radii: Vec<BigRational>,
}

fn probe_scale(
    ctx: &JacquetContext,
    cf: &CFunctions,
    n: i64,
) -> Result<(BigRational, Vec<BigRational>)> {
    let f = WhittakerFn::delta(ctx.q().clone(), n);
    let one = BigRational::one();
    let phi = build_phi(&transform(ctx, &f, &one)?, cf)?;
    let contours = admissible_contours(&phi, ctx, packet_range(&phi))?;
    let mut scale: Option<BigRational> = None;
    for c in &contours {
        let back = pipeline(ctx, cf, &f, &one, Some(c))?;
        let lambda = back.get(n);
        if lambda.is_zero() || back != f.scale(&lambda) {
            return Err(Error::NotProportional);
        }
        match &scale {
            Some(s) if *s != lambda => {
                return Err(Error::InconsistentCalibration {
                    first: Box::new(s.clone()),
                    second: Box::new(lambda),
                })
            }
            _ => scale = Some(lambda),
        }
    }
    let radii = contours.iter().map(|c| c.radius().clone()).collect();
    Ok((scale.expect("two contours"), radii))
}

/// The constant `w` with `invert(transform_w(δ_0)) = δ_0`, confirmed to also
/// invert `δ_1` and to be the same at two admissible radii.
pub fn calibrate(ctx: &JacquetContext, cf: &CFunctions) -> Result<Calibration> {
    let (first, mut radii) = probe_scale(ctx, cf, 0)?;
    let (second, more) = probe_scale(ctx, cf, 1)?;
    if first != second {
        return Err(Error::InconsistentCalibration {
            first: Box::new(first),
            second: Box::new(second),
        });
    }
    radii.extend(more);
    radii.sort();
    radii.dedup();
    Ok(Calibration {
        q: ctx.q().clone(),
        constant: first.recip(),
        radii,
    })
}

/// Outcome of [`roundtrip_check`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundtripReport {
    pub input: WhittakerFn,
    pub recovered: WhittakerFn,
    pub equal: bool,
    pub pw_passes: bool,
    /// Points where `recovered` differs from `input`.
    pub discrepancies: Vec<i64>,
    #[serde(with = "crate::exactfun::rational_string")]
    pub calibration: BigRational,
    #[serde(with = "crate::exactfun::rational_string_vec")]
    pub radii: Vec<BigRational>,
    /// Whether both radii recovered the same function.
    pub radius_independent: bool,
}

/// Transform, gate, and invert at two admissible radii; compare exactly.
pub fn roundtrip_check(
    f: &WhittakerFn,
    cf: &CFunctions,
    ctx: &JacquetContext,
    w: &BigRational,
) -> Result<RoundtripReport> {
    check_q(ctx, &f.q)?;
    let big_f = transform(ctx, f, w)?;
    let pw_passes = pw_gate(&big_f.clone().into(), cf).passes;
    let phi = build_phi(&big_f, cf)?;
    let range = packet_range(&phi);
    let contours = admissible_contours(&phi, ctx, range.clone())?;
    let recovered = wave_packet(&phi, ctx, &contours[0], range.clone())?;
    let other = wave_packet(&phi, ctx, &contours[1], range)?;
    let radius_independent = other == recovered;
    let discrepancies = f.discrepancies(&recovered);
    Ok(RoundtripReport {
        input: f.clone(),
        equal: discrepancies.is_empty() && radius_independent,
        recovered,
        pw_passes,
        discrepancies,
        calibration: w.clone(),
        radii: contours.iter().map(|c| c.radius().clone()).collect(),
        radius_independent,
    })
}

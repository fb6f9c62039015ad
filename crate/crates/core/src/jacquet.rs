//! Exact evaluation of the spherical Whittaker function and the c-functions.
//!
//! Everything here is computed from the shell decomposition of one-dimensional
//! p-adic integrals. The spherical vector of `i_P^G χ` (P lower triangular) is
//! `v(n̄ a_t k) = χ(a_t) δ_P^{1/2}(a_t) = (qz)^t`, where `z = χ(a_1)`.
//! Nothing is quoted from closed forms; the closed forms appear only in tests.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactfun::{monomial, solve_linear, LaurentPolynomial, RationalFunction};
use crate::padic::{
    lower_borel_torus_index, uminus_measure_constant, PadicConfig, ShellIntegral, ShellMeasure,
};

/// Default upper end of the window on which n-independence is verified.
pub const DEFAULT_CHECK_WINDOW: i64 = 10;

/// Which unramified character the section is induced from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Param {
    /// `χ`, with `χ(a_1) = z`.
    Chi,
    /// `χ^{-1}`, with `χ^{-1}(a_1) = z^{-1}`.
    ChiInverse,
}

/// Value `χ^{±1}(a_t) δ_P^{1/2}(a_t)` of the normalized spherical section.
pub fn spherical_section(cfg: &PadicConfig, param: Param, t: i64) -> RationalFunction {
    let exp = match param {
        Param::Chi => t,
        Param::ChiInverse => -t,
    };
    monomial(cfg.q_pow(t), exp)
}

/// Cache of `E_z(a_n)`, shareable across threads. Entries are inserted only
/// once fully computed.
#[derive(Debug, Default, Clone)]
pub struct WhittakerTable {
    entries: Arc<Mutex<BTreeMap<i64, LaurentPolynomial>>>,
}

impl WhittakerTable {
    pub fn get(&self, n: i64) -> Option<LaurentPolynomial> {
        self.entries.lock().unwrap().get(&n).cloned()
    }

    fn insert(&self, n: i64, value: LaurentPolynomial) {
        self.entries.lock().unwrap().insert(n, value);
    }

    /// Cached entries in increasing `n`.
    pub fn snapshot(&self) -> Vec<(i64, LaurentPolynomial)> {
        self.entries
            .lock()
            .unwrap()
            .iter()
            .map(|(&n, p)| (n, p.clone()))
            .collect()
    }

    /// Least cached `n` with a nonzero value.
    pub fn support_start(&self) -> Option<i64> {
        self.entries
            .lock()
            .unwrap()
            .iter()
            .find(|(_, p)| !p.is_zero())
            .map(|(&n, _)| n)
    }
}

/// Fixed realization: spherical vector with `v(1) = 1`, Whittaker datum `η = 1`,
/// ψ of conductor 𝒪, and the measure constants of [`crate::padic`].
#[derive(Debug, Clone)]
pub struct JacquetContext {
    config: PadicConfig,
    check_window: i64,
    table: WhittakerTable,
}

impl JacquetContext {
    pub fn new(config: PadicConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            config,
            check_window: DEFAULT_CHECK_WINDOW,
            table: WhittakerTable::default(),
        })
    }

    /// Widen or narrow the `[0, window]` range used by consistency checks.
    pub fn with_check_window(mut self, window: i64) -> Self {
        self.check_window = window.max(3);
        self
    }

    pub fn config(&self) -> &PadicConfig {
        &self.config
    }

    pub fn q(&self) -> &BigRational {
        &self.config.q
    }

    pub fn check_window(&self) -> i64 {
        self.check_window
    }

    pub fn table(&self) -> &WhittakerTable {
        &self.table
    }

    /// Normalization of the measure on `U⁻`; reported, not folded into `a` or `E`.
    pub fn uminus_measure_constant(&self) -> BigRational {
        uminus_measure_constant(&self.config)
    }
}

/// `∫_F s(u(x) a_n) ψ(x)^{-1} dx` for a K-invariant section `s` given by its
/// values on the torus. `u(x) a_n` has first row `(ϖ^n, x ϖ^{-n})`.
fn jacquet_integral<S>(cfg: &PadicConfig, n: i64, section_on_torus: S) -> Result<RationalFunction>
where
    S: Fn(i64) -> Result<RationalFunction>,
{
    // ψ(-x) and ψ(x) have the same shell integrals.
    ShellIntegral {
        measure: ShellMeasure::Character,
        regular_above: 2 * n,
        regular_below: 2 * n - 1,
        integrand: |m: i64| section_on_torus(lower_borel_torus_index([Some(n), Some(m - n)])),
    }
    .evaluate(cfg)
}

/// `E_z(a_n)`: the Jacquet integral of the spherical vector at `a_n`.
pub fn whittaker_value(ctx: &JacquetContext, n: i64) -> Result<LaurentPolynomial> {
    if let Some(hit) = ctx.table.get(n) {
        return Ok(hit);
    }
    let cfg = &ctx.config;
    let value = jacquet_integral(cfg, n, |t| Ok(spherical_section(cfg, Param::Chi, t)))?;
    let poly = value.as_laurent().cloned().ok_or(Error::NotLaurent { n })?;
    ctx.table.insert(n, poly.clone());
    Ok(poly)
}

/// `(A(w, χ) v)(a_t) = ∫_F v(w^{-1} ū(x) a_t) dx`, with
/// `w^{-1} ū(x) a_t` having first row `(x ϖ^t, ϖ^{-t})`.
///
/// The deep negative shells form a geometric series in `z^{-1}`, summed in
/// `|z| > 1` and continued rationally.
pub fn intertwining_at(ctx: &JacquetContext, t: i64) -> Result<RationalFunction> {
    let cfg = &ctx.config;
    ShellIntegral {
        measure: ShellMeasure::Haar,
        regular_above: -2 * t,
        regular_below: -2 * t - 1,
        integrand: |m: i64| {
            Ok(spherical_section(
                cfg,
                Param::Chi,
                lower_borel_torus_index([Some(m + t), Some(-t)]),
            ))
        },
    }
    .evaluate(cfg)
}

/// `a(z)`: the eigenvalue of the intertwining integral on the spherical vector.
pub fn intertwining_a(ctx: &JacquetContext) -> Result<RationalFunction> {
    intertwining_at(ctx, 0)
}

/// `ξ_{χ^{-1}}(π(a_n) A(w, χ) v)`: the Jacquet integral (for `χ^{-1}`) of the
/// intertwined spherical vector. The inner intertwining integral is evaluated
/// afresh at the torus part of every outer shell.
pub fn whittaker_of_intertwined(ctx: &JacquetContext, n: i64) -> Result<RationalFunction> {
    jacquet_integral(&ctx.config, n, |t| intertwining_at(ctx, t))
}

/// Probe points for [`derive_b`].
pub const B_PROBES: [i64; 4] = [0, 1, 2, 3];

/// `b(z)` from `ξ_{χ^{-1}} ∘ A(w, χ) = b(χ) ξ_χ`, evaluated on translates of
/// the spherical vector; the ratio must not depend on the probe.
pub fn derive_b(ctx: &JacquetContext) -> Result<RationalFunction> {
    derive_b_with(ctx, &B_PROBES, |n| whittaker_value(ctx, n))
}

fn derive_b_with<W>(ctx: &JacquetContext, probes: &[i64], whittaker: W) -> Result<RationalFunction>
where
    W: Fn(i64) -> Result<LaurentPolynomial>,
{
    let mut ratio: Option<RationalFunction> = None;
    for &n in probes {
        let base = whittaker(n)?;
        if base.is_zero() {
            continue;
        }
        let r = whittaker_of_intertwined(ctx, n)?.checked_div(&base.into())?;
        match &ratio {
            None => ratio = Some(r),
            Some(prev) if *prev != r => return Err(Error::InconsistentRatio { n }),
            Some(_) => {}
        }
    }
    ratio.ok_or(Error::ProbeVanishes)
}

/// Weighting of the two-term constant-term expansion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpansionNormalization {
    /// `E(a_n) = δ_{P_0}^{1/2}(a_n) (β z^n + α z^{-n})`, `δ^{1/2}(a_n) = q^{-n}`.
    HalfModulus,
    /// `E(a_n) = β z^n + α z^{-n}`.
    Plain,
}

/// Result of [`asymptotic_coefficients`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Asymptotics {
    pub alpha: RationalFunction,
    pub beta: RationalFunction,
    /// Least `n` from which the expansion holds (through the check window).
    pub threshold: i64,
    pub normalization: ExpansionNormalization,
    /// Whether the unweighted expansion also verifies.
    pub plain_verifies: bool,
}

fn expansion_weight(ctx: &JacquetContext, norm: ExpansionNormalization, n: i64) -> BigRational {
    match norm {
        ExpansionNormalization::HalfModulus => ctx.config.q_pow(-n),
        ExpansionNormalization::Plain => BigRational::one(),
    }
}

fn expansion_row(
    ctx: &JacquetContext,
    norm: ExpansionNormalization,
    n: i64,
) -> [RationalFunction; 2] {
    let w = expansion_weight(ctx, norm, n);
    [monomial(w.clone(), n), monomial(w, -n)]
}

fn try_expansion(
    ctx: &JacquetContext,
    norm: ExpansionNormalization,
    solve_at: [i64; 2],
) -> Result<Option<(RationalFunction, RationalFunction, i64)>> {
    let matrix: Vec<Vec<RationalFunction>> = solve_at
        .iter()
        .map(|&n| expansion_row(ctx, norm, n).to_vec())
        .collect();
    let rhs: Vec<RationalFunction> = solve_at
        .iter()
        .map(|&n| whittaker_value(ctx, n).map(Into::into))
        .collect::<Result<_>>()?;
    let sol = match solve_linear(&matrix, &rhs) {
        Ok(sol) => sol,
        Err(Error::NoSolution | Error::Underdetermined { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    let (beta, alpha) = (sol[0].clone(), sol[1].clone());
    let holds = |n: i64| -> Result<bool> {
        let [rz, rzi] = expansion_row(ctx, norm, n);
        let lhs = &(&rz * &beta) + &(&rzi * &alpha);
        Ok(lhs == whittaker_value(ctx, n)?.into())
    };
    let window = ctx.check_window;
    // The identity must hold on a final segment [t, window]; find its start.
    if !holds(window)? {
        return Ok(None);
    }
    let mut start = window;
    while start > -5 && holds(start - 1)? {
        start -= 1;
    }
    Ok(Some((alpha, beta, start)))
}

/// Solve `E(a_n) = q^{-n}(β z^n + α z^{-n})` at `n = 1, 2` over `Q(z)` and
/// verify it through the check window; the threshold is discovered.
pub fn asymptotic_coefficients(ctx: &JacquetContext) -> Result<Asymptotics> {
    asymptotic_coefficients_at(ctx, [1, 2])
}

/// As [`asymptotic_coefficients`], solving at two chosen points.
pub fn asymptotic_coefficients_at(ctx: &JacquetContext, solve_at: [i64; 2]) -> Result<Asymptotics> {
    let half = try_expansion(ctx, ExpansionNormalization::HalfModulus, solve_at)?;
    let plain = try_expansion(ctx, ExpansionNormalization::Plain, solve_at)?;
    let plain_verifies = plain.as_ref().is_some_and(|(_, _, t)| *t <= 4);
    let (alpha, beta, threshold, normalization) = match (half, plain) {
        (Some((a, b, t)), _) if t <= 4 => (a, b, t, ExpansionNormalization::HalfModulus),
        (_, Some((a, b, t))) if t <= 4 => (a, b, t, ExpansionNormalization::Plain),
        _ => return Err(Error::NoExpansion),
    };
    Ok(Asymptotics {
        alpha,
        beta,
        threshold,
        normalization,
        plain_verifies,
    })
}

/// `j(z)`: the scalar of `A(w, χ^{-1}) ∘ A(w, χ)` on the spherical vector,
/// with the outer integral running over the nested inner one.
pub fn j_function(ctx: &JacquetContext) -> Result<RationalFunction> {
    let cfg = &ctx.config;
    // w^{-1} ū(x) has first row (x, 1); the outer deep shells are geometric in z.
    ShellIntegral {
        measure: ShellMeasure::Haar,
        regular_above: 0,
        regular_below: -1,
        integrand: |m: i64| intertwining_at(ctx, lower_borel_torus_index([Some(m), Some(0)])),
    }
    .evaluate(cfg)
}

/// `j / (a(z) a(z^{-1}))`, required to be a nonzero constant.
pub fn j_relation_constant(j: &RationalFunction, a: &RationalFunction) -> Result<BigRational> {
    let q = j.checked_div(&(a * &a.invert_var()))?;
    match q.as_constant() {
        Some(c) if !c.is_zero() => Ok(c),
        _ => Err(Error::NotProportional),
    }
}

/// The spectral data derived from the oracles.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CFunctions {
    #[serde(with = "crate::exactfun::rational_string")]
    pub q: BigRational,
    pub a: RationalFunction,
    pub b: RationalFunction,
    pub j: RationalFunction,
    /// Filled by [`crate::fourier::solve_zeta`].
    pub zeta: Option<RationalFunction>,
    /// `j = j_constant · a(z) a(z^{-1})`.
    #[serde(with = "crate::exactfun::rational_string")]
    pub j_constant: BigRational,
    pub asymptotics: Asymptotics,
    /// Recorded quotients against the operator c-functions: `β / b` and `α / a`.
    pub beta_over_b: RationalFunction,
    pub alpha_over_a: RationalFunction,
    #[serde(with = "crate::exactfun::rational_string")]
    pub uminus_measure_constant: BigRational,
}

impl CFunctions {
    /// Run every oracle once. `zeta` is left empty.
    pub fn derive(ctx: &JacquetContext) -> Result<Self> {
        let a = intertwining_a(ctx)?;
        let b = derive_b(ctx)?;
        let j = j_function(ctx)?;
        let j_constant = j_relation_constant(&j, &a)?;
        let asymptotics = asymptotic_coefficients(ctx)?;
        let beta_over_b = asymptotics.beta.checked_div(&b)?;
        let alpha_over_a = asymptotics.alpha.checked_div(&a)?;
        Ok(Self {
            q: ctx.q().clone(),
            a,
            b,
            j,
            zeta: None,
            j_constant,
            asymptotics,
            beta_over_b,
            alpha_over_a,
            uminus_measure_constant: ctx.uminus_measure_constant(),
        })
    }

    /// `a(z) E(z^{-1}) - b(z) E(z)` for a Whittaker value `E`.
    pub fn functional_equation_residual(&self, e: &LaurentPolynomial) -> RationalFunction {
        let e: RationalFunction = e.clone().into();
        &(&self.a * &e.invert_var()) - &(&self.b * &e)
    }
}

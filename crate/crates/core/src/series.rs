//! Rademacher's convergent series for `p(n)` and its certified rounding.
//!
//! Each term is evaluated in the cosh/sinh form
//! `R_k(n) = π√k/(3√2·√(n−1/24)) · A_k(n) · ((α/k)cosh(α/k) − sinh(α/k))/α²`
//! with `α = π√((2/3)(n − 1/24))`. Partial sums are rounded once they sit
//! within a quarter of an integer and a doubling of the term count agrees.

use num_bigint::Sign;

use crate::bessel::sinh_derivative_bracket;
use crate::dedekind::a_k_with;
use crate::error::{Error, Result};
use crate::eta::eval_f;
use crate::exact::PartitionValue;
use crate::par::{self, Execution};
use crate::precision::{HighReal, PrecisionContext};

const GUARD_BITS: usize = 64;
const BITS_PER_DOUBLING: usize = 32;

/// `α(n) = π√((2/3)(n − 1/24))`.
#[derive(Clone, Debug)]
pub struct AlphaValue {
    pub n: u64,
    pub alpha: HighReal,
}

pub fn alpha(n: u64, ctx: PrecisionContext) -> Result<AlphaValue> {
    if n == 0 {
        return Err(Error::invalid("alpha needs n >= 1"));
    }
    let shifted = ctx.uint(n) - ctx.ratio(1, 24);
    let alpha = ctx.pi() * (ctx.ratio(2, 3) * shifted).sqrt();
    Ok(AlphaValue { n, alpha })
}

/// `max(64, ⌈α(n)·log₂e⌉ + 64)`: the magnitude of `R_1` alone consumes
/// `α·log₂e` bits.
pub fn working_bits(n: u64) -> usize {
    let alpha = std::f64::consts::PI * ((2.0 / 3.0) * (n as f64 - 1.0 / 24.0)).max(0.0).sqrt();
    let magnitude = (alpha * std::f64::consts::LOG2_E).ceil() as usize;
    (magnitude + GUARD_BITS).max(PrecisionContext::MIN_BITS)
}

#[derive(Clone, Debug)]
pub struct SeriesTerm {
    pub k: u64,
    pub a_k: HighReal,
    pub r_k: HighReal,
}

fn term_with(n: u64, k: u64, alpha: &HighReal, ctx: PrecisionContext) -> Result<SeriesTerm> {
    if k == 0 {
        return Err(Error::invalid("series terms start at k = 1"));
    }
    let a_k = a_k_with(k, n, ctx, Execution::Sequential)?.value;
    let k_real = ctx.uint(k);
    let shifted = ctx.uint(n) - ctx.ratio(1, 24);
    let prefactor = ctx.pi() * k_real.sqrt() / (ctx.int(3) * ctx.int(2).sqrt() * shifted.sqrt());
    // (u cosh u − sinh u)/α² = bracket(u)/k² with u = α/k
    let u = alpha / &k_real;
    let bracket = sinh_derivative_bracket(&u) / k_real.square();
    let r_k = prefactor * &a_k * bracket;
    Ok(SeriesTerm { k, a_k, r_k })
}

/// The `k`-th term `R_k(n)`.
pub fn r_k(n: u64, k: u64, ctx: PrecisionContext) -> Result<SeriesTerm> {
    let a = alpha(n, ctx)?;
    term_with(n, k, &a.alpha, ctx)
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SeriesOptions {
    /// Starting term count; defaults to `max(5, ⌈2√n⌉)`.
    pub initial_terms: Option<u64>,
    /// Working precision; only ever raises the default policy.
    pub prec: Option<usize>,
    pub execution: Execution,
}

#[derive(Clone, Debug)]
pub struct SeriesReport {
    pub n: u64,
    pub prec: usize,
    pub terms: Vec<SeriesTerm>,
    pub partial_sum: HighReal,
    pub rounded: PartitionValue,
    pub gap: HighReal,
    pub n_terms_used: u64,
}

fn initial_terms(n: u64) -> u64 {
    ((2.0 * (n as f64).sqrt()).ceil() as u64).max(5)
}

fn term_limit(n: u64) -> u64 {
    (64.0 * (n as f64).sqrt()).floor() as u64
}

fn partial_sum(
    n: u64,
    terms: u64,
    ctx: PrecisionContext,
    exec: Execution,
) -> Result<Vec<SeriesTerm>> {
    let a = alpha(n, ctx)?.alpha;
    par::map_range(exec, 1, terms + 1, |k| term_with(n, k, &a, ctx))
        .into_iter()
        .collect()
}

/// Sums `R_1 + … + R_N`, doubling `N` (and adding precision) until the
/// partial sum is within 1/4 of an integer and two successive `N` round to
/// the same value.
pub fn p_series(n: u64, opts: SeriesOptions) -> Result<SeriesReport> {
    if n == 0 {
        return Err(Error::invalid("p_series needs n >= 1"));
    }
    let base_bits = working_bits(n).max(opts.prec.unwrap_or(0));
    let limit = term_limit(n);
    let mut terms_n = opts
        .initial_terms
        .unwrap_or_else(|| initial_terms(n))
        .max(1);
    let mut bits = base_bits;
    let mut previous: Option<num_bigint::BigInt> = None;
    let mut last_gap = f64::INFINITY;

    while terms_n <= limit.max(1) {
        let ctx = PrecisionContext::new(bits)?;
        let terms = partial_sum(n, terms_n, ctx, opts.execution)?;
        let sum = terms.iter().fold(ctx.zero(), |acc, t| acc + &t.r_k);
        let (rounded, gap) = sum.nearest_integer();
        last_gap = gap.to_f64();
        let certified = gap < ctx.ratio(1, 4) && previous.as_ref() == Some(&rounded);
        if certified && rounded.sign() != Sign::Minus {
            let value = rounded.to_biguint().expect("non-negative");
            return Ok(SeriesReport {
                n,
                prec: bits,
                terms,
                partial_sum: sum,
                rounded: PartitionValue::new(value),
                gap,
                n_terms_used: terms_n,
            });
        }
        previous = Some(rounded);
        terms_n *= 2;
        bits += BITS_PER_DOUBLING;
    }
    Err(Error::Certification {
        n,
        terms: terms_n / 2,
        bits: bits - BITS_PER_DOUBLING,
        gap: last_gap,
    })
}

/// `F(e^{−π/48}) − 1`.
pub fn c0(ctx: PrecisionContext) -> Result<HighReal> {
    let x = (-(ctx.pi() / ctx.int(48))).exp();
    Ok(eval_f(&x, ctx)? - ctx.one())
}

/// `log(𝒞/√N)` with `𝒞 = 2^{7/4}C₀e^{2πn} + 2^{3/4}π e^{π/12+2πn}`; the
/// factor `e^{2πn}` is pulled out so nothing overflows.
pub fn remainder_bound_log(n: u64, big_n: u64, ctx: PrecisionContext) -> Result<HighReal> {
    if n == 0 || big_n == 0 {
        return Err(Error::invalid("remainder bound needs n, N >= 1"));
    }
    let pi = ctx.pi();
    let two = ctx.int(2);
    let pow2 = |num: i64| (ctx.ratio(num, 4) * two.ln()).exp();
    let inner = pow2(7) * c0(ctx)? + pow2(3) * &pi * (&pi / ctx.int(12)).exp();
    Ok(&two * &pi * ctx.uint(n) + inner.ln() - ctx.uint(big_n).ln() / two)
}

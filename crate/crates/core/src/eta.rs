//! The generating product `F(x) = ∏ 1/(1 − x^m)`, the Dedekind eta function,
//! and numerical checks of their modular transformation laws.
//!
//! Products are truncated at the first `m` with `|q|^m < 2^(−bits−8)`.
//! Internally everything runs with 16 extra guard bits.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;

use crate::dedekind::{dedekind_sum, negative_inverse, ExactRational};
use crate::error::{Error, Result};
use crate::precision::{pow2_neg, HighComplex, HighReal, PrecisionContext};

const GUARD_BITS: usize = 16;
const TAIL_BITS: usize = 8;

/// Number of factors needed so that `|q|^m < 2^(−bits−8)`.
fn factor_count(abs_q: &HighReal, bits: usize) -> Result<usize> {
    if abs_q.is_zero() {
        return Ok(0);
    }
    let ln_q = abs_q.ln().to_f64();
    if !(ln_q < 0.0) {
        return Err(Error::invalid("product diverges for |q| >= 1"));
    }
    let needed = (bits + TAIL_BITS) as f64 * std::f64::consts::LN_2 / -ln_q;
    Ok(needed.ceil() as usize + 1)
}

/// `∏_{m≥1} (1 − q^m)` truncated per the module policy.
fn euler_product(q: &HighComplex, bits: usize) -> Result<HighComplex> {
    let ctx = q.context();
    let terms = factor_count(&q.abs(), bits)?;
    let one = HighComplex::one(ctx);
    let mut power = q.clone();
    let mut acc = one.clone();
    for _ in 0..terms {
        acc = &acc * &(&one - &power);
        power = &power * q;
    }
    Ok(acc)
}

/// `F(x)` for real `0 ≤ x < 1`.
pub fn eval_f(x: &HighReal, ctx: PrecisionContext) -> Result<HighReal> {
    if x.is_negative() || *x >= ctx.one() {
        return Err(Error::invalid("F(x) needs 0 <= x < 1"));
    }
    let work = ctx.with_extra_bits(GUARD_BITS);
    let x = x.with_bits(work.bits());
    let threshold = pow2_neg(work, ctx.bits() + TAIL_BITS);
    let one = work.one();
    let mut power = x.clone();
    let mut acc = one.clone();
    while !x.is_zero() && power >= threshold {
        acc = &acc * &(&one - &power);
        power = &power * &x;
    }
    Ok(acc.recip().with_bits(ctx.bits()))
}

/// `F(q)` for complex `|q| < 1`.
pub fn eval_f_complex(q: &HighComplex, ctx: PrecisionContext) -> Result<HighComplex> {
    let work = ctx.with_extra_bits(GUARD_BITS);
    let q = widen(q, work);
    Ok(euler_product(&q, ctx.bits())?.recip())
}

/// `η(τ) = e^{πiτ/12} ∏ (1 − e^{2πimτ})` for `Im τ > 0`.
pub fn eta(tau: &HighComplex, ctx: PrecisionContext) -> Result<HighComplex> {
    if !tau.im.is_positive() {
        return Err(Error::invalid("eta needs Im(tau) > 0"));
    }
    let work = ctx.with_extra_bits(GUARD_BITS);
    let tau = widen(tau, work);
    let pi = work.pi();
    let q = tau.scale(&(&pi + &pi)).mul_i().exp();
    let prefactor = tau.scale(&(&pi / work.int(12))).mul_i().exp();
    Ok(&prefactor * &euler_product(&q, ctx.bits())?)
}

fn widen(z: &HighComplex, ctx: PrecisionContext) -> HighComplex {
    HighComplex::new(z.re.with_bits(ctx.bits()), z.im.with_bits(ctx.bits()))
}

/// `e^{πi·r}` for an exact rational `r`, reduced modulo 2 first.
fn exp_i_pi_rational(r: &ExactRational, ctx: PrecisionContext) -> HighComplex {
    let two = BigInt::from(2);
    let den = r.denom().clone();
    let num = r.numer().mod_floor(&(&two * &den));
    let angle = ctx.pi() * ctx.rational(&BigRational::new(num, den));
    HighComplex::cis(&angle)
}

/// An element `[[a, b], [c, d]]` of SL(2, Z) with `c > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModularMatrix {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl ModularMatrix {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        if a * d - b * c != 1 {
            return Err(Error::invalid(format!(
                "determinant of ({a}, {b}, {c}, {d}) is not 1"
            )));
        }
        if c <= 0 {
            return Err(Error::invalid("matrix needs c > 0"));
        }
        Ok(ModularMatrix { a, b, c, d })
    }

    /// The completion of the bottom row `(c, d)` with `gcd(c, d) = 1`, `c > 0`.
    pub fn from_bottom_row(c: i64, d: i64) -> Result<Self> {
        let ext = c.extended_gcd(&d);
        if ext.gcd.abs() != 1 {
            return Err(Error::invalid(format!("gcd({c}, {d}) != 1")));
        }
        // c·x + d·y = g, so a = g·y, b = −g·x gives ad − bc = 1
        let g = ext.gcd;
        ModularMatrix::new(g * ext.y, -g * ext.x, c, d)
    }

    pub fn apply(&self, tau: &HighComplex) -> HighComplex {
        let ctx = tau.context();
        let affine = |p: i64, q: i64| {
            HighComplex::new(&tau.re * &ctx.int(p) + ctx.int(q), &tau.im * &ctx.int(p))
        };
        &affine(self.a, self.b) / &affine(self.c, self.d)
    }
}

/// Both sides of the eta transformation law at one point.
#[derive(Clone, Debug)]
pub struct EtaCheckReport {
    pub matrix: ModularMatrix,
    pub tau: HighComplex,
    pub lhs: HighComplex,
    pub rhs: HighComplex,
    pub residual: HighReal,
}

/// Evaluates `η(Mτ)` against `exp{πi((a+d)/(12c) + s(−d,c))}·{−i(cτ+d)}^{1/2}·η(τ)`.
pub fn verify_eta(
    matrix: ModularMatrix,
    tau: &HighComplex,
    ctx: PrecisionContext,
) -> Result<EtaCheckReport> {
    let matrix = ModularMatrix::new(matrix.a, matrix.b, matrix.c, matrix.d)?;
    if !tau.im.is_positive() {
        return Err(Error::invalid("tau must lie in the upper half-plane"));
    }
    let work = ctx.with_extra_bits(GUARD_BITS);
    let t = widen(tau, work);
    let lhs = eta(&matrix.apply(&t), work)?;

    let phase = BigRational::new(
        BigInt::from(matrix.a + matrix.d),
        BigInt::from(12 * matrix.c),
    ) + dedekind_sum(-matrix.d, matrix.c as u64)?;
    let c_tau_d = HighComplex::new(
        &t.re * &work.int(matrix.c) + work.int(matrix.d),
        &t.im * &work.int(matrix.c),
    );
    // −i·w
    let rotated = HighComplex::new(c_tau_d.im.clone(), -&c_tau_d.re);
    let rhs = &(&exp_i_pi_rational(&phase, work) * &rotated.sqrt()) * &eta(&t, work)?;
    let residual = (&lhs - &rhs).abs().with_bits(ctx.bits());
    Ok(EtaCheckReport {
        matrix,
        tau: tau.clone(),
        lhs,
        rhs,
        residual,
    })
}

/// Both sides of the transformation of `F` near the root of unity `e^{2πih/k}`.
#[derive(Clone, Debug)]
pub struct FTransformReport {
    pub h: u64,
    pub k: u64,
    /// The `H ∈ [1, k]` with `hH ≡ −1 (mod k)`.
    pub big_h: u64,
    pub z: HighComplex,
    pub lhs: HighComplex,
    pub rhs: HighComplex,
    pub residual: HighReal,
}

/// Evaluates `F(w)` against
/// `e^{πi s(h,k)}·(z/k)^{1/2}·exp(π/(12z) − πz/(12k²))·F(w′)` where
/// `w = exp(2πih/k − 2πz/k²)` and `w′ = exp(2πiH/k − 2π/z)`.
pub fn verify_f_transform(
    h: u64,
    k: u64,
    z: &HighComplex,
    ctx: PrecisionContext,
) -> Result<FTransformReport> {
    if k == 0 || h == 0 || h > k {
        return Err(Error::invalid("F transform needs 1 <= h <= k"));
    }
    if !z.re.is_positive() {
        return Err(Error::invalid("F transform needs Re(z) > 0"));
    }
    let big_h = negative_inverse(h, k)?;
    let work = ctx.with_extra_bits(GUARD_BITS);
    let z_w = widen(z, work);
    let pi = work.pi();
    let two_pi = &pi + &pi;
    let k_r = work.uint(k);
    let k_sq = &k_r * &k_r;

    let root = |num: u64| {
        let angle = &two_pi * &work.uint(num % k) / &k_r;
        HighComplex::cis(&angle)
    };
    let w = &root(h) * &z_w.scale(&(-(&two_pi / &k_sq))).exp();
    let inv_z = z_w.recip();
    let w_prime = &root(big_h) * &inv_z.scale(&(-&two_pi)).exp();

    let lhs = eval_f_complex(&w, work)?;
    let s = dedekind_sum(h as i64, k)?;
    let twelve = work.int(12);
    let exponent = &inv_z.scale(&(&pi / &twelve)) - &z_w.scale(&(&pi / (&twelve * &k_sq)));
    let rhs = &(&(&exp_i_pi_rational(&s, work) * &z_w.scale(&k_r.recip()).sqrt())
        * &exponent.exp())
        * &eval_f_complex(&w_prime, work)?;
    let residual = (&lhs - &rhs).abs().with_bits(ctx.bits());
    Ok(FTransformReport {
        h,
        k,
        big_h,
        z: z.clone(),
        lhs,
        rhs,
        residual,
    })
}

/// A point of the upper half-plane or right half-plane given by exact
/// rational coordinates `(re_num/den, im_num/den)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RationalSample {
    pub re_num: i64,
    pub im_num: i64,
    pub den: i64,
}

impl RationalSample {
    pub const fn new(re_num: i64, im_num: i64, den: i64) -> Self {
        RationalSample {
            re_num,
            im_num,
            den,
        }
    }

    pub fn to_complex(self, ctx: PrecisionContext) -> HighComplex {
        HighComplex::new(
            ctx.ratio(self.re_num, self.den),
            ctx.ratio(self.im_num, self.den),
        )
    }
}

const TAU_POINTS: [RationalSample; 5] = [
    RationalSample::new(0, 1, 1),
    RationalSample::new(1, 3, 4),
    RationalSample::new(-2, 3, 6),
    RationalSample::new(2, 6, 5),
    RationalSample::new(7, 5, 10),
];

const Z_POINTS: [RationalSample; 5] = [
    RationalSample::new(1, 0, 1),
    RationalSample::new(1, 0, 2),
    RationalSample::new(3, 2, 4),
    RationalSample::new(2, -1, 1),
    RationalSample::new(1, 1, 3),
];

/// Deterministic `(matrix, τ)` test cases for [`verify_eta`].
pub fn eta_samples(count: usize) -> Vec<(ModularMatrix, RationalSample)> {
    let mut matrices = Vec::new();
    for c in 1..=5i64 {
        for d in -c..=c {
            if c.gcd(&d) == 1 {
                matrices.push(ModularMatrix::from_bottom_row(c, d).expect("coprime row"));
            }
        }
    }
    (0..count)
        .map(|i| {
            (
                matrices[i % matrices.len()],
                TAU_POINTS[(i / matrices.len() + i) % TAU_POINTS.len()],
            )
        })
        .collect()
}

/// Deterministic `(h, k, z)` test cases for [`verify_f_transform`].
pub fn f_transform_samples(count: usize) -> Vec<(u64, u64, RationalSample)> {
    let mut pairs = Vec::new();
    for k in 1..=7u64 {
        for h in 1..=k {
            if h.gcd(&k) == 1 {
                pairs.push((h, k));
            }
        }
    }
    (0..count)
        .map(|i| {
            let (h, k) = pairs[i % pairs.len()];
            (h, k, Z_POINTS[(i / pairs.len() + i) % Z_POINTS.len()])
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(128).unwrap()
    }

    #[test]
    fn f_near_zero_is_one() {
        let c = ctx();
        let x = pow2_neg(c, 60);
        let f = eval_f(&x, c).unwrap();
        let excess = &f - &c.one();
        assert!(excess.is_positive());
        assert!(excess < pow2_neg(c, 55));
        assert_eq!(eval_f(&c.zero(), c).unwrap().to_f64(), 1.0);
    }

    #[test]
    fn f_rejects_divergent_input() {
        let c = ctx();
        assert!(eval_f(&c.one(), c).is_err());
        assert!(eval_f(&c.ratio(3, 2), c).is_err());
        assert!(eval_f(&c.ratio(-1, 2), c).is_err());
    }

    #[test]
    fn f_at_half_matches_reference() {
        // ∏ 1/(1 − 2^{-m}) = 3.46274661945506361153795734292443116454075790290...
        let c = ctx();
        let f = eval_f(&c.ratio(1, 2), c).unwrap();
        let reference = c
            .parse_decimal("3.46274661945506361153795734292443116454075790290")
            .unwrap();
        assert!((f - reference).abs().to_f64() < 1e-35);
    }

    #[test]
    fn eta_fixed_by_inversion_at_i() {
        let report = verify_eta(
            ModularMatrix::new(0, -1, 1, 0).unwrap(),
            &RationalSample::new(0, 1, 1).to_complex(ctx()),
            ctx(),
        )
        .unwrap();
        assert!(report.residual.to_f64() < 1e-10);
    }

    #[test]
    fn eta_translation_case() {
        let report = verify_eta(
            ModularMatrix::new(1, 0, 1, 1).unwrap(),
            &RationalSample::new(0, 1, 1).to_complex(ctx()),
            ctx(),
        )
        .unwrap();
        assert!(report.residual.to_f64() < 1e-10);
    }

    #[test]
    fn eta_rejects_bad_input() {
        assert!(ModularMatrix::new(1, 0, 0, 1).is_err());
        assert!(ModularMatrix::new(1, 1, 1, 1).is_err());
        let m = ModularMatrix::new(0, -1, 1, 0).unwrap();
        let lower = RationalSample::new(0, -1, 1).to_complex(ctx());
        assert!(verify_eta(m, &lower, ctx()).is_err());
        let bad = ModularMatrix {
            a: 1,
            b: 0,
            c: 0,
            d: 1,
        };
        let tau = RationalSample::new(0, 1, 1).to_complex(ctx());
        assert!(verify_eta(bad, &tau, ctx()).is_err());
    }

    #[test]
    fn f_transform_examples() {
        let c = ctx();
        for (h, k, z) in [
            (1, 1, RationalSample::new(1, 0, 1)),
            (1, 2, RationalSample::new(1, 0, 2)),
            (1, 3, RationalSample::new(1, 0, 1)),
        ] {
            let r = verify_f_transform(h, k, &z.to_complex(c), c).unwrap();
            assert!(r.residual.to_f64() < 1e-10, "({h},{k})");
        }
        let r = verify_f_transform(1, 3, &RationalSample::new(1, 0, 1).to_complex(c), c).unwrap();
        assert_eq!(r.big_h, 2);
    }

    #[test]
    fn f_transform_rejects_left_half_plane() {
        let c = ctx();
        let z = RationalSample::new(-1, 1, 1).to_complex(c);
        assert!(verify_f_transform(1, 2, &z, c).is_err());
        let z = RationalSample::new(0, 1, 1).to_complex(c);
        assert!(verify_f_transform(1, 2, &z, c).is_err());
        let z = RationalSample::new(1, 0, 1).to_complex(c);
        assert!(verify_f_transform(2, 4, &z, c).is_err());
    }

    #[test]
    fn sample_generators_are_valid() {
        let eta = eta_samples(40);
        assert_eq!(eta.len(), 40);
        for (m, tau) in &eta {
            assert_eq!(m.a * m.d - m.b * m.c, 1);
            assert!(m.c > 0 && tau.im_num > 0 && tau.den > 0);
        }
        for (h, k, z) in f_transform_samples(40) {
            assert!(h >= 1 && h <= k && h.gcd(&k) == 1);
            assert!(z.re_num > 0 && z.den > 0);
        }
    }
}

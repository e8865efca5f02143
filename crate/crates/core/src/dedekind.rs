//! Dedekind sums and the Kloosterman-type sums `A_k(n)`.
//!
//! Sums are exact: every term of `s(h, k)` shares the denominator `2k²`, so
//! the whole sum is accumulated as one integer numerator and only then
//! reduced. The phases of `A_k(n)` are reduced modulo 2π as exact rationals
//! before any transcendental evaluation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::par::{self, Execution};
use crate::precision::{HighComplex, HighReal, PrecisionContext};

/// Exact rational number in lowest terms with a positive denominator.
pub type ExactRational = BigRational;

/// `2k² · s(h, k)`, which is always an integer.
fn scaled_dedekind_numerator(h: i64, k: u64) -> i128 {
    let k_i = k as i128;
    let h_mod = (h as i128).rem_euclid(k_i);
    let mut acc: i128 = 0;
    let mut hr = 0i128;
    for r in 1..k_i {
        hr += h_mod;
        if hr >= k_i {
            hr -= k_i;
        }
        acc += r * (2 * hr - k_i);
    }
    acc
}

/// `s(h, k) = Σ_{r=1}^{k−1} (r/k)·(hr/k − ⌊hr/k⌋ − 1/2)`, with `s(h, 1) = 0`.
pub fn dedekind_sum(h: i64, k: u64) -> Result<ExactRational> {
    if k == 0 {
        return Err(Error::invalid("Dedekind sum needs k >= 1"));
    }
    let den = 2 * (k as i128) * (k as i128);
    Ok(BigRational::new(
        BigInt::from(scaled_dedekind_numerator(h, k)),
        BigInt::from(den),
    ))
}

/// `s(h,k) + s(k,h) − (−1/4 + (h/k + k/h + 1/(hk))/12)`; zero by reciprocity.
pub fn dedekind_reciprocity_defect(h: u64, k: u64) -> Result<ExactRational> {
    if h == 0 || k == 0 {
        return Err(Error::invalid("reciprocity needs positive h and k"));
    }
    if h.gcd(&k) != 1 {
        return Err(Error::invalid(format!("gcd({h}, {k}) != 1")));
    }
    let lhs = dedekind_sum(h as i64, k)? + dedekind_sum(k as i64, h)?;
    let r = |num: u64, den: u64| BigRational::new(BigInt::from(num), BigInt::from(den));
    let twelfth = r(1, 12);
    let rhs = -r(1, 4) + (r(h, k) + r(k, h) + r(1, h * k)) * twelfth;
    Ok(lhs - rhs)
}

/// `A_k(n)` together with its arguments.
#[derive(Clone, Debug)]
pub struct AkValue {
    pub k: u64,
    pub n: u64,
    pub value: HighReal,
}

/// Phase of the `h`-th summand as a fraction of π, reduced into `[0, 2)`:
/// returns `(num, den)` with the angle equal to `π·num/den`.
fn reduced_phase(h: u64, k: u64, n: u64) -> (i128, i128) {
    let k_i = k as i128;
    let den = 2 * k_i * k_i;
    // s(h,k) − 2nh/k = (S − 4·n·h·k) / (2k²), where S = 2k²·s(h,k)
    let n_mod = (n as i128).rem_euclid(k_i);
    let shift = 4 * ((n_mod * h as i128) % k_i) * k_i;
    let num = (scaled_dedekind_numerator(h as i64, k) - shift).rem_euclid(2 * den);
    (num, den)
}

fn cos_pi_fraction(num: i128, den: i128, pi: &HighReal) -> HighReal {
    let ctx = pi.context();
    (pi * &ctx.bigint(&BigInt::from(num)) / ctx.bigint(&BigInt::from(den))).cos()
}

fn coprime_residues(k: u64) -> Vec<u64> {
    (1..=k).filter(|h| h.gcd(&k) == 1).collect()
}

/// `A_k(n) = Σ_{1≤h≤k, (h,k)=1} exp(πi·s(h,k) − 2πinh/k)`.
///
/// Since `s(k−h, k) = −s(h, k)`, the summands for `h` and `k−h` are complex
/// conjugates; each pair contributes `2·cos(θ_h)` and the imaginary part
/// never materializes.
pub fn a_k(k: u64, n: u64, ctx: PrecisionContext) -> Result<AkValue> {
    a_k_with(k, n, ctx, Execution::default())
}

pub fn a_k_with(k: u64, n: u64, ctx: PrecisionContext, exec: Execution) -> Result<AkValue> {
    if k == 0 || n == 0 {
        return Err(Error::invalid("A_k(n) needs k >= 1 and n >= 1"));
    }
    let value = match k {
        1 => ctx.one(),
        // h = 1 is its own partner: cos(π(s(1,2) − n)) = (−1)^n
        2 => ctx.int(if n.is_multiple_of(2) { 1 } else { -1 }),
        _ => {
            let pi = ctx.pi();
            let reps: Vec<u64> = (1..=(k - 1) / 2).filter(|h| h.gcd(&k) == 1).collect();
            let parts = par::map_ordered(exec, reps, |h| {
                let (num, den) = reduced_phase(h, k, n);
                cos_pi_fraction(num, den, &pi)
            });
            let sum = parts.iter().fold(ctx.zero(), |acc, c| acc + c);
            &sum + &sum
        }
    };
    Ok(AkValue { k, n, value })
}

/// `A_k(n)` summed term by term in the complex plane, without pairing.
pub fn a_k_complex(k: u64, n: u64, ctx: PrecisionContext) -> Result<HighComplex> {
    if k == 0 || n == 0 {
        return Err(Error::invalid("A_k(n) needs k >= 1 and n >= 1"));
    }
    let pi = ctx.pi();
    let mut sum = HighComplex::zero(ctx);
    for h in coprime_residues(k) {
        let s = dedekind_sum(h as i64, k)?;
        let theta = &pi
            * (ctx.rational(&s)
                - ctx.rational(&BigRational::new(
                    BigInt::from(2 * n) * BigInt::from(h),
                    BigInt::from(k),
                )));
        sum = &sum + &HighComplex::cis(&theta);
    }
    Ok(sum)
}

/// Modular inverse of `-h` mod `k`, normalized into `[1, k]`.
pub(crate) fn negative_inverse(h: u64, k: u64) -> Result<u64> {
    if k == 1 {
        return Ok(1);
    }
    let ext = (h as i64).extended_gcd(&(k as i64));
    if ext.gcd != 1 {
        return Err(Error::invalid(format!("gcd({h}, {k}) != 1")));
    }
    let inv = ext.x.rem_euclid(k as i64) as u64;
    let big_h = (k - inv) % k;
    Ok(if big_h == 0 { k } else { big_h })
}

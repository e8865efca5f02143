//! Configurable-precision real and complex arithmetic.
//!
//! A thin layer over [`astro_float::BigFloat`]. Every [`HighReal`] remembers
//! the precision (in bits) it was produced at, and binary operations run at
//! the larger of the two operand precisions. Rounding is always to nearest,
//! ties to even.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num_bigint::{BigInt, BigUint, Sign as IntSign};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    // Constant caches (pi, ln 2, ...) are not shareable, so each thread keeps its own.
    static CONSTS: RefCell<Consts> =
        RefCell::new(Consts::new().expect("failed to allocate constant cache"));
}

fn with_consts<R>(f: impl FnOnce(&mut Consts) -> R) -> R {
    CONSTS.with(|cc| f(&mut cc.borrow_mut()))
}

/// Working precision for high-precision evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrecisionContext {
    bits: usize,
}

impl PrecisionContext {
    pub const MIN_BITS: usize = 64;

    pub fn new(bits: usize) -> Result<Self> {
        if bits < Self::MIN_BITS {
            return Err(Error::invalid(format!(
                "precision must be at least {} bits, got {bits}",
                Self::MIN_BITS
            )));
        }
        Ok(PrecisionContext { bits })
    }

    pub fn bits(self) -> usize {
        self.bits
    }

    pub fn with_extra_bits(self, extra: usize) -> Self {
        PrecisionContext {
            bits: self.bits + extra,
        }
    }

    pub fn zero(self) -> HighReal {
        HighReal::wrap(BigFloat::from_word(0, self.bits), self.bits)
    }

    pub fn one(self) -> HighReal {
        self.int(1)
    }

    pub fn int(self, v: i64) -> HighReal {
        HighReal::wrap(BigFloat::from_i64(v, self.bits), self.bits)
    }

    pub fn uint(self, v: u64) -> HighReal {
        HighReal::wrap(BigFloat::from_u64(v, self.bits), self.bits)
    }

    /// `num / den` rounded once to the context precision.
    pub fn ratio(self, num: i64, den: i64) -> HighReal {
        self.int(num) / self.int(den)
    }

    pub fn f64(self, v: f64) -> HighReal {
        HighReal::wrap(BigFloat::from_f64(v, self.bits), self.bits)
    }

    pub fn bigint(self, v: &BigInt) -> HighReal {
        if v.is_zero() {
            return self.zero();
        }
        let (sign, digits) = v.to_u64_digits();
        let sign = if sign == IntSign::Minus {
            Sign::Neg
        } else {
            Sign::Pos
        };
        let exponent = (64 * digits.len()) as i32;
        let mut value = BigFloat::from_words(&digits, sign, exponent);
        value
            .set_precision(self.bits, RM)
            .expect("precision within range");
        HighReal::wrap(value, self.bits)
    }

    pub fn biguint(self, v: &BigUint) -> HighReal {
        self.bigint(&BigInt::from(v.clone()))
    }

    pub fn rational(self, v: &BigRational) -> HighReal {
        self.bigint(v.numer()) / self.bigint(v.denom())
    }

    pub fn pi(self) -> HighReal {
        let bits = self.bits;
        HighReal::wrap(with_consts(|cc| cc.pi(bits, RM)), bits)
    }

    /// Parses a decimal literal such as `"10"`, `"0.5"` or `"1.25e3"`.
    pub fn parse_decimal(self, text: &str) -> Result<HighReal> {
        let trimmed = text.trim();
        let well_formed = !trimmed.is_empty()
            && trimmed
                .chars()
                .all(|c| c.is_ascii_digit() || matches!(c, '.' | '-' | '+' | 'e' | 'E'));
        if !well_formed {
            return Err(Error::invalid(format!("not a decimal number: {text:?}")));
        }
        let bits = self.bits;
        let value = with_consts(|cc| BigFloat::parse(trimmed, Radix::Dec, bits, RM, cc));
        if value.is_nan() || value.is_inf() {
            return Err(Error::invalid(format!("not a decimal number: {text:?}")));
        }
        Ok(HighReal::wrap(value, bits))
    }
}

/// A real number held at an explicit binary precision.
#[derive(Clone, Debug)]
pub struct HighReal {
    value: BigFloat,
    bits: usize,
}

macro_rules! unary_cc {
    ($($(#[$meta:meta])* $name:ident),* $(,)?) => {
        $(
            $(#[$meta])*
            pub fn $name(&self) -> HighReal {
                let bits = self.bits;
                HighReal::wrap(with_consts(|cc| self.value.$name(bits, RM, cc)), bits)
            }
        )*
    };
}

impl HighReal {
    fn wrap(value: BigFloat, bits: usize) -> Self {
        HighReal { value, bits }
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn context(&self) -> PrecisionContext {
        PrecisionContext { bits: self.bits }
    }

    /// Re-rounds (or widens) to `bits` of precision.
    pub fn with_bits(&self, bits: usize) -> HighReal {
        let mut value = self.value.clone();
        value
            .set_precision(bits, RM)
            .expect("precision within range");
        HighReal::wrap(value, bits)
    }

    unary_cc!(exp, ln, sin, cos, sinh, cosh, atan);

    pub fn sqrt(&self) -> HighReal {
        HighReal::wrap(self.value.sqrt(self.bits, RM), self.bits)
    }

    pub fn abs(&self) -> HighReal {
        HighReal::wrap(self.value.abs(), self.bits)
    }

    pub fn recip(&self) -> HighReal {
        HighReal::wrap(self.value.reciprocal(self.bits, RM), self.bits)
    }

    pub fn powi(&self, n: usize) -> HighReal {
        HighReal::wrap(self.value.powi(n, self.bits, RM), self.bits)
    }

    pub fn square(&self) -> HighReal {
        self * self
    }

    pub fn floor(&self) -> HighReal {
        HighReal::wrap(self.value.floor(), self.bits)
    }

    pub fn max(&self, other: &HighReal) -> HighReal {
        if self >= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        !self.value.is_zero() && self.value.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        !self.value.is_zero() && self.value.is_positive()
    }

    pub fn is_finite(&self) -> bool {
        !self.value.is_nan() && !self.value.is_inf()
    }

    /// Binary exponent `e` with `2^(e-1) <= |x| < 2^e`; `None` for zero.
    pub fn binary_exponent(&self) -> Option<i64> {
        if self.value.is_zero() {
            return None;
        }
        self.value.exponent().map(i64::from)
    }

    /// Nearest `f64`, truncating the mantissa to 128 bits first.
    pub fn to_f64(&self) -> f64 {
        if self.value.is_nan() {
            return f64::NAN;
        }
        if self.value.is_inf_pos() {
            return f64::INFINITY;
        }
        if self.value.is_inf_neg() {
            return f64::NEG_INFINITY;
        }
        let Some((words, _, sign, exponent, _)) = self.value.as_raw_parts() else {
            return f64::NAN;
        };
        if self.value.is_zero() {
            return 0.0;
        }
        let top = words[words.len() - 1] as f64;
        let next = if words.len() > 1 {
            words[words.len() - 2] as f64
        } else {
            0.0
        };
        let mantissa = top * 2f64.powi(-64) + next * 2f64.powi(-128);
        // split the scaling so neither factor over/underflows prematurely
        let half = exponent / 2;
        let magnitude = mantissa * 2f64.powi(half) * 2f64.powi(exponent - half);
        if sign == Sign::Neg {
            -magnitude
        } else {
            magnitude
        }
    }

    /// Exact conversion of an integer-valued number.
    pub fn to_bigint_exact(&self) -> Option<BigInt> {
        if self.value.is_zero() {
            return Some(BigInt::zero());
        }
        if !self.value.is_int() {
            return None;
        }
        let (words, _, sign, exponent, _) = self.value.as_raw_parts()?;
        let mut limbs = Vec::with_capacity(words.len() * 2);
        for &w in words {
            limbs.push(w as u32);
            limbs.push((w >> 32) as u32);
        }
        let mantissa = BigUint::new(limbs);
        let shift = i64::from(exponent) - 64 * words.len() as i64;
        let magnitude = if shift >= 0 {
            mantissa << (shift as u64)
        } else {
            mantissa >> ((-shift) as u64)
        };
        let int_sign = if sign == Sign::Neg {
            IntSign::Minus
        } else {
            IntSign::Plus
        };
        Some(BigInt::from_biguint(int_sign, magnitude))
    }

    /// Nearest integer (ties away from zero for positive values) and the
    /// distance to it.
    pub fn nearest_integer(&self) -> (BigInt, HighReal) {
        let half = self.context().ratio(1, 2);
        let rounded = (self + &half).floor();
        let gap = (self - &rounded).abs();
        let int = rounded
            .to_bigint_exact()
            .expect("floor of a finite value is an integer");
        (int, gap)
    }

    /// Scientific notation with `digits` significant decimal digits,
    /// e.g. `1.2345e46`.
    pub fn to_sci_string(&self, digits: usize) -> String {
        assert!(digits >= 1);
        if self.value.is_zero() {
            return "0".to_string();
        }
        if !self.is_finite() {
            return format!("{}", self.to_f64());
        }
        let work = PrecisionContext {
            bits: self.bits.max(digits * 4 + 64),
        };
        let abs = self.abs().with_bits(work.bits);
        let ln10 = work.int(10).ln();
        let mut exp10 = (abs.ln() / &ln10).to_f64().floor() as i64;
        let lower = BigInt::from(10u32).pow(digits as u32 - 1);
        let upper = BigInt::from(10u32).pow(digits as u32);
        let mut mantissa;
        let mut guard = 0;
        loop {
            let shift = digits as i64 - 1 - exp10;
            let pow = work.bigint(&BigInt::from(10u32).pow(shift.unsigned_abs() as u32));
            let scaled = if shift >= 0 { &abs * &pow } else { &abs / &pow };
            mantissa = scaled.nearest_integer().0;
            guard += 1;
            if mantissa >= upper {
                exp10 += 1;
            } else if mantissa < lower {
                exp10 -= 1;
            } else {
                break;
            }
            if guard > 4 {
                break;
            }
        }
        let text = mantissa.to_string();
        let sign = if self.is_negative() { "-" } else { "" };
        if text.len() == 1 {
            format!("{sign}{text}e{exp10}")
        } else {
            format!("{sign}{}.{}e{exp10}", &text[..1], &text[1..])
        }
    }
}

impl fmt::Display for HighReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(20).max(1);
        f.write_str(&self.to_sci_string(digits))
    }
}

impl PartialEq for HighReal {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for HighReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.value.cmp(&other.value).map(|c| c.cmp(&0))
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl<'a> $trait<&'a HighReal> for &'a HighReal {
            type Output = HighReal;
            fn $method(self, rhs: &'a HighReal) -> HighReal {
                let bits = self.bits.max(rhs.bits);
                HighReal::wrap(self.value.$method(&rhs.value, bits, RM), bits)
            }
        }
        impl $trait<HighReal> for HighReal {
            type Output = HighReal;
            fn $method(self, rhs: HighReal) -> HighReal {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a HighReal> for HighReal {
            type Output = HighReal;
            fn $method(self, rhs: &'a HighReal) -> HighReal {
                (&self).$method(rhs)
            }
        }
        impl<'a> $trait<HighReal> for &'a HighReal {
            type Output = HighReal;
            fn $method(self, rhs: HighReal) -> HighReal {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for HighReal {
    type Output = HighReal;
    fn neg(self) -> HighReal {
        HighReal::wrap(self.value.neg(), self.bits)
    }
}

impl Neg for &HighReal {
    type Output = HighReal;
    fn neg(self) -> HighReal {
        HighReal::wrap(self.value.clone().neg(), self.bits)
    }
}

/// A complex number with [`HighReal`] parts.
#[derive(Clone, Debug)]
pub struct HighComplex {
    pub re: HighReal,
    pub im: HighReal,
}

impl HighComplex {
    pub fn new(re: HighReal, im: HighReal) -> Self {
        HighComplex { re, im }
    }

    pub fn from_real(re: HighReal) -> Self {
        let im = re.context().zero();
        HighComplex { re, im }
    }

    pub fn zero(ctx: PrecisionContext) -> Self {
        HighComplex::new(ctx.zero(), ctx.zero())
    }

    pub fn one(ctx: PrecisionContext) -> Self {
        HighComplex::new(ctx.one(), ctx.zero())
    }

    pub fn i(ctx: PrecisionContext) -> Self {
        HighComplex::new(ctx.zero(), ctx.one())
    }

    /// `e^{i theta}`.
    pub fn cis(theta: &HighReal) -> Self {
        HighComplex::new(theta.cos(), theta.sin())
    }

    pub fn context(&self) -> PrecisionContext {
        PrecisionContext {
            bits: self.re.bits.max(self.im.bits),
        }
    }

    pub fn conj(&self) -> Self {
        HighComplex::new(self.re.clone(), -&self.im)
    }

    pub fn scale(&self, s: &HighReal) -> Self {
        HighComplex::new(&self.re * s, &self.im * s)
    }

    pub fn norm_sqr(&self) -> HighReal {
        self.re.square() + self.im.square()
    }

    pub fn abs(&self) -> HighReal {
        self.norm_sqr().sqrt()
    }

    pub fn recip(&self) -> Self {
        let n = self.norm_sqr();
        HighComplex::new(&self.re / &n, -(&self.im / &n))
    }

    pub fn exp(&self) -> Self {
        HighComplex::cis(&self.im).scale(&self.re.exp())
    }

    /// Principal square root (branch cut along the negative real axis).
    pub fn sqrt(&self) -> Self {
        let ctx = self.context();
        if self.re.is_zero() && self.im.is_zero() {
            return HighComplex::zero(ctx);
        }
        let r = self.abs();
        let two = ctx.int(2);
        if !self.re.is_negative() {
            let s = ((&r + &self.re) / &two).sqrt();
            let t = &self.im / (&two * &s);
            HighComplex::new(s, t)
        } else {
            let mut t = ((&r - &self.re) / &two).sqrt();
            if self.im.is_negative() {
                t = -t;
            }
            let s = &self.im / (&two * &t);
            HighComplex::new(s, t)
        }
    }

    pub fn mul_i(&self) -> Self {
        HighComplex::new(-&self.im, self.re.clone())
    }
}

impl<'a> Add<&'a HighComplex> for &'a HighComplex {
    type Output = HighComplex;
    fn add(self, rhs: &'a HighComplex) -> HighComplex {
        HighComplex::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl<'a> Sub<&'a HighComplex> for &'a HighComplex {
    type Output = HighComplex;
    fn sub(self, rhs: &'a HighComplex) -> HighComplex {
        HighComplex::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl<'a> Mul<&'a HighComplex> for &'a HighComplex {
    type Output = HighComplex;
    fn mul(self, rhs: &'a HighComplex) -> HighComplex {
        HighComplex::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl<'a> Div<&'a HighComplex> for &'a HighComplex {
    type Output = HighComplex;
    fn div(self, rhs: &'a HighComplex) -> HighComplex {
        self * &rhs.recip()
    }
}

impl Neg for &HighComplex {
    type Output = HighComplex;
    fn neg(self) -> HighComplex {
        HighComplex::new(-&self.re, -&self.im)
    }
}

/// `2^(-e)` as an exact power of two, used for truncation thresholds.
pub(crate) fn pow2_neg(ctx: PrecisionContext, e: usize) -> HighReal {
    ctx.one() / ctx.biguint(&(BigUint::one() << e))
}

/// Convenience for tests and reporting: `|a - b| / max(|a|, |b|)`.
pub fn relative_difference(a: &HighReal, b: &HighReal) -> HighReal {
    let scale = a.abs().max(&b.abs());
    if scale.is_zero() {
        return scale;
    }
    (a - b).abs() / scale
}

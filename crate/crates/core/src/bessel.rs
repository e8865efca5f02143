//! Modified Bessel functions of the first kind for half-integer orders.
//!
//! The power series is the evaluation route. For half-integer orders the
//! Gamma factor is exact: `Γ(m + 1/2) = (2m−1)!!/2^m · √π`, so the only
//! transcendental constant entering the coefficients is a single `√π`.

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::precision::{pow2_neg, HighReal, PrecisionContext};

const GUARD_BITS: usize = 16;
const TAIL_BITS: usize = 8;

/// An order `ν = twice/2` with `ν > −1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BesselOrder {
    twice: i64,
}

impl BesselOrder {
    pub const ZERO: BesselOrder = BesselOrder { twice: 0 };
    pub const THREE_HALVES: BesselOrder = BesselOrder { twice: 3 };

    pub fn from_twice(twice: i64) -> Result<Self> {
        if twice <= -2 {
            return Err(Error::invalid(format!("order {twice}/2 must exceed -1")));
        }
        Ok(BesselOrder { twice })
    }

    pub fn twice(self) -> i64 {
        self.twice
    }

    pub fn is_half_odd(self) -> bool {
        self.twice % 2 != 0
    }
}

/// `Γ(ν + 1)` as `(rational, with_sqrt_pi)`.
fn gamma_nu_plus_one(order: BesselOrder) -> (BigUint, BigUint, bool) {
    if !order.is_half_odd() {
        // ν is a non-negative integer
        let nu = (order.twice / 2) as u64;
        let fact = (1..=nu).fold(BigUint::one(), |acc, i| acc * i);
        (fact, BigUint::one(), false)
    } else {
        // ν + 1 = m + 1/2 with m = (twice + 1)/2
        let m = ((order.twice + 1) / 2) as u64;
        let double_fact = (1..=m).fold(BigUint::one(), |acc, i| acc * (2 * i - 1));
        (double_fact, BigUint::one() << m, true)
    }
}

/// `(x/2)^ν`.
fn half_x_power(order: BesselOrder, half_x: &HighReal) -> HighReal {
    let t = order.twice;
    if t % 2 == 0 {
        half_x.powi((t / 2) as usize)
    } else if t > 0 {
        half_x.sqrt().powi(t as usize)
    } else {
        half_x.sqrt().recip()
    }
}

/// `I_ν(x) = (x/2)^ν Σ_j (x/2)^{2j} / (j! Γ(ν+j+1))`.
pub fn bessel_i_series(
    order: BesselOrder,
    x: &HighReal,
    ctx: PrecisionContext,
) -> Result<HighReal> {
    if x.is_negative() {
        return Err(Error::invalid("Bessel series needs x >= 0"));
    }
    if x.is_zero() {
        return match order.twice {
            0 => Ok(ctx.one()),
            t if t > 0 => Ok(ctx.zero()),
            _ => Err(Error::invalid("I_{-1/2}(0) is unbounded")),
        };
    }
    let work = ctx.with_extra_bits(GUARD_BITS);
    let half_x = x.with_bits(work.bits()) / work.int(2);
    let quarter_x2 = half_x.square();

    let (g_num, g_den, with_sqrt_pi) = gamma_nu_plus_one(order);
    let mut gamma = work.biguint(&g_num) / work.biguint(&g_den);
    if with_sqrt_pi {
        gamma = gamma * work.pi().sqrt();
    }
    let mut term = half_x_power(order, &half_x) / gamma;
    let mut sum = term.clone();
    let threshold = pow2_neg(work, ctx.bits() + TAIL_BITS);
    let quarter_x2_f = quarter_x2.to_f64();
    let t = order.twice;
    for j in 0u64.. {
        // ν + j + 1 = (t + 2j + 2)/2
        let denom = (j + 1) as i64 * (t + 2 * j as i64 + 2);
        term = &term * &quarter_x2 * work.int(2) / work.int(denom);
        sum = &sum + &term;
        let decreasing = quarter_x2_f < ((j + 2) as f64) * ((t + 2 * j as i64 + 4) as f64 / 2.0);
        if decreasing && term < &threshold * &sum {
            break;
        }
    }
    Ok(sum.with_bits(ctx.bits()))
}

/// `I_{3/2}(x) = √(2x/π) · d/dx (sinh x / x) = √(2x/π) (x cosh x − sinh x)/x²`.
pub fn bessel_i_3_2_closed(x: &HighReal, ctx: PrecisionContext) -> Result<HighReal> {
    if !x.is_positive() {
        return Err(Error::invalid("closed form needs x > 0"));
    }
    // x cosh x − sinh x ≈ x³/3 cancels about 2·log2(1/x) bits for small x
    let cancel = x
        .binary_exponent()
        .map(|e| if e < 0 { (-2 * e) as usize } else { 0 })
        .unwrap_or(0);
    let work = ctx.with_extra_bits(GUARD_BITS + cancel);
    let x = x.with_bits(work.bits());
    let numer = &x * &x.cosh() - x.sinh();
    let prefactor = (work.int(2) * &x / work.pi()).sqrt();
    Ok((prefactor * numer / x.square()).with_bits(ctx.bits()))
}

/// `(u cosh u − sinh u)/u²`, the bracket appearing in each series term.
pub fn sinh_derivative_bracket(u: &HighReal) -> HighReal {
    let ctx = u.context();
    let cancel = u
        .binary_exponent()
        .map(|e| if e < 0 { (-2 * e) as usize } else { 0 })
        .unwrap_or(0);
    let work = ctx.with_extra_bits(GUARD_BITS + cancel);
    let u = u.with_bits(work.bits());
    ((&u * &u.cosh() - u.sinh()) / u.square()).with_bits(ctx.bits())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::relative_difference;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(128).unwrap()
    }

    fn oracle_at_one(c: PrecisionContext) -> HighReal {
        // cosh 1 − sinh 1 = e^{−1}
        (c.int(2) / c.pi()).sqrt() * c.int(-1).exp()
    }

    #[test]
    fn zero_argument() {
        let c = ctx();
        let v = bessel_i_series(BesselOrder::THREE_HALVES, &c.zero(), c).unwrap();
        assert!(v.is_zero());
        let v = bessel_i_series(BesselOrder::ZERO, &c.zero(), c).unwrap();
        assert_eq!(v.to_f64(), 1.0);
        let minus_half = BesselOrder::from_twice(-1).unwrap();
        assert!(bessel_i_series(minus_half, &c.zero(), c).is_err());
    }

    #[test]
    fn value_at_one() {
        let c = ctx();
        let s = bessel_i_series(BesselOrder::THREE_HALVES, &c.one(), c).unwrap();
        assert!((s.to_f64() - 0.293_525_326_2).abs() < 1e-9);
        assert!(relative_difference(&s, &oracle_at_one(c)).to_f64() < 1e-35);
        let cf = bessel_i_3_2_closed(&c.one(), c).unwrap();
        assert!(relative_difference(&cf, &oracle_at_one(c)).to_f64() < 1e-35);
    }

    #[test]
    fn series_and_closed_form_agree_at_ten() {
        let c = ctx();
        let x = c.int(10);
        let s = bessel_i_series(BesselOrder::THREE_HALVES, &x, c).unwrap();
        let cf = bessel_i_3_2_closed(&x, c).unwrap();
        assert!((&s - &cf).abs() / &s < c.f64(1e-20));
    }

    #[test]
    fn half_order_closed_form() {
        // I_{1/2}(x) = √(2/(πx)) sinh x
        let c = ctx();
        let x = c.ratio(7, 3);
        let s = bessel_i_series(BesselOrder::from_twice(1).unwrap(), &x, c).unwrap();
        let expected = (c.int(2) / (c.pi() * &x)).sqrt() * x.sinh();
        assert!(relative_difference(&s, &expected).to_f64() < 1e-35);
    }

    #[test]
    fn small_x_leading_term() {
        let c = ctx();
        let x = c.f64(1e-6);
        let cf = bessel_i_3_2_closed(&x, c).unwrap();
        let leading = (&x / c.int(2)).sqrt().powi(3) * c.int(4) / (c.int(3) * c.pi().sqrt());
        assert!((cf / leading - c.one()).abs().to_f64() < 1e-11);
    }

    #[test]
    fn rejects_bad_arguments() {
        let c = ctx();
        assert!(bessel_i_series(BesselOrder::THREE_HALVES, &c.int(-1), c).is_err());
        assert!(bessel_i_3_2_closed(&c.zero(), c).is_err());
        assert!(bessel_i_3_2_closed(&c.int(-2), c).is_err());
        assert!(BesselOrder::from_twice(-2).is_err());
    }

    #[test]
    fn bracket_inequality() {
        // (u cosh u − sinh u)/u² ≤ (u cosh u)/2 on (0, 20]
        let c = ctx();
        for i in 1..=200 {
            let u = c.ratio(i, 10);
            let lhs = sinh_derivative_bracket(&u);
            let rhs = &u * &u.cosh() / c.int(2);
            assert!(lhs.is_positive() && lhs <= rhs, "u = {}", i as f64 / 10.0);
        }
    }
}

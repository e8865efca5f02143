//! Farey sequences, Ford circles and the arcs of the Rademacher contour.
//!
//! Everything except [`arc_length_bound_check`] is exact rational
//! arithmetic. The path of order `N` is stored as one record per Farey
//! fraction `h/k ≠ 0/1`: the two tangency points bounding the upper arc of
//! the Ford circle `C(h, k)`. The arc of `0/1` is fused into the arc of
//! `1/1` by periodicity, which is why the last record uses the neighbor
//! `(N+1)/N`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// A reduced fraction `h/k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fraction {
    pub h: u64,
    pub k: u64,
}

impl Fraction {
    /// A reduced fraction in `[0, 1]`.
    pub fn new(h: u64, k: u64) -> Result<Self> {
        if k == 0 || h > k {
            return Err(Error::invalid(format!("{h}/{k} is not in [0, 1]")));
        }
        Self::extended(h, k)
    }

    /// A reduced fraction allowed up to `(k+1)/k`, used for the neighbor
    /// of `1/1` on the periodic path.
    pub fn extended(h: u64, k: u64) -> Result<Self> {
        if k == 0 || h > k + 1 {
            return Err(Error::invalid(format!("{h}/{k} is out of range")));
        }
        if h.gcd(&k) != 1 {
            return Err(Error::invalid(format!("{h}/{k} is not reduced")));
        }
        Ok(Fraction { h, k })
    }

    pub fn to_rational(self) -> BigRational {
        BigRational::new(BigInt::from(self.h), BigInt::from(self.k))
    }

    /// `bc − ad` for `self = a/b`, `next = c/d`.
    pub fn determinant(self, next: Fraction) -> i128 {
        self.k as i128 * next.h as i128 - self.h as i128 * next.k as i128
    }

    pub fn mediant(self, other: Fraction) -> Fraction {
        Fraction {
            h: self.h + other.h,
            k: self.k + other.k,
        }
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.h, self.k)
    }
}

/// The Farey fractions of order `N` in increasing order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FareySequence {
    pub order: u64,
    pub entries: Vec<Fraction>,
}

/// Builds `F_N` from `F_1 = [0/1, 1/1]` by inserting, for each order `m`,
/// the mediant of every adjacent pair whose denominators sum to `m`.
pub fn farey(order: u64) -> Result<FareySequence> {
    if order == 0 {
        return Err(Error::invalid("Farey order must be positive"));
    }
    let mut entries = vec![Fraction { h: 0, k: 1 }, Fraction { h: 1, k: 1 }];
    for m in 2..=order {
        let mut next = Vec::with_capacity(entries.len() * 2);
        for pair in entries.windows(2) {
            next.push(pair[0]);
            if pair[0].k + pair[1].k == m {
                next.push(pair[0].mediant(pair[1]));
            }
        }
        next.push(*entries.last().expect("non-empty"));
        entries = next;
    }
    Ok(FareySequence { order, entries })
}

/// True iff every adjacent pair `a/b, c/d` has `bc − ad = 1`.
pub fn farey_neighbors_check(entries: &[Fraction]) -> bool {
    entries.windows(2).all(|p| p[0].determinant(p[1]) == 1)
}

/// A point of the complex plane with exact rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalPoint {
    pub re: BigRational,
    pub im: BigRational,
}

impl RationalPoint {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        RationalPoint { re, im }
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn distance_sqr(&self, other: &RationalPoint) -> BigRational {
        let dx = &self.re - &other.re;
        let dy = &self.im - &other.im;
        &dx * &dx + &dy * &dy
    }

    pub fn midpoint(&self, other: &RationalPoint) -> RationalPoint {
        let half = ratio(1, 2);
        RationalPoint::new(
            (&self.re + &other.re) * &half,
            (&self.im + &other.im) * &half,
        )
    }

    /// `Re(1/w) = Re(w)/|w|²`.
    pub fn reciprocal_re(&self) -> Option<BigRational> {
        let n = self.norm_sqr();
        (!n.is_zero()).then(|| &self.re / n)
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}+{}i",
            fraction_string(&self.re),
            fraction_string(&self.im)
        )
    }
}

/// `num/den` with an explicit denominator, e.g. `2/5` or `0/1`.
pub fn fraction_string(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn ratio_u(num: u64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// The Ford circle `C(h, k)`: center `h/k + i/(2k²)`, radius `1/(2k²)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FordCircle {
    pub frac: Fraction,
    pub center: RationalPoint,
    pub radius: BigRational,
}

impl FordCircle {
    pub fn contains_on_boundary(&self, p: &RationalPoint) -> bool {
        p.distance_sqr(&self.center) == &self.radius * &self.radius
    }
}

pub fn ford_circle(frac: Fraction) -> FordCircle {
    let radius = ratio_u(1, 2 * frac.k * frac.k);
    FordCircle {
        frac,
        center: RationalPoint::new(frac.to_rational(), radius.clone()),
        radius,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TangencyClass {
    Tangent,
    Disjoint,
}

/// Compares the squared center distance `D²` with the squared radius sum `S²`.
pub fn ford_tangency_class(c1: &FordCircle, c2: &FordCircle) -> Result<TangencyClass> {
    if c1.frac == c2.frac {
        return Err(Error::invalid(format!(
            "C({}, {}) compared with itself",
            c1.frac.h, c1.frac.k
        )));
    }
    let d2 = c1.center.distance_sqr(&c2.center);
    let s = &c1.radius + &c2.radius;
    let s2 = &s * &s;
    if d2 == s2 {
        Ok(TangencyClass::Tangent)
    } else if d2 > s2 {
        Ok(TangencyClass::Disjoint)
    } else {
        unreachable!("distinct Ford circles never overlap")
    }
}

/// Tangency points of `C(h, k)` with its left and right Farey neighbors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TangencyPair {
    pub frac: Fraction,
    pub alpha1: RationalPoint,
    pub alpha2: RationalPoint,
    pub left_k: u64,
    pub right_k: u64,
}

fn check_consecutive(prev: Fraction, mid: Fraction, next: Fraction) -> Result<()> {
    if prev.determinant(mid) != 1 || mid.determinant(next) != 1 {
        return Err(Error::invalid(format!(
            "{prev}, {mid}, {next} are not consecutive Farey fractions"
        )));
    }
    Ok(())
}

pub fn tangency_points(prev: Fraction, mid: Fraction, next: Fraction) -> Result<TangencyPair> {
    check_consecutive(prev, mid, next)?;
    let (k, k1, k2) = (mid.k, prev.k, next.k);
    let base = mid.to_rational();
    let left = k * k + k1 * k1;
    let right = k * k + k2 * k2;
    Ok(TangencyPair {
        frac: mid,
        alpha1: RationalPoint::new(&base - ratio_u(k1, k * left), ratio_u(1, left)),
        alpha2: RationalPoint::new(&base + ratio_u(k2, k * right), ratio_u(1, right)),
        left_k: k1,
        right_k: k2,
    })
}

/// Arc records of the path of order `N`, one per fraction `h_1/k_1 … 1/1`.
pub fn path(order: u64) -> Result<Vec<TangencyPair>> {
    let seq = farey(order)?;
    let entries = &seq.entries;
    let last = entries.len() - 1;
    let wrap = Fraction::extended(order + 1, order)?;
    (1..=last)
        .map(|j| {
            let next = if j == last { wrap } else { entries[j + 1] };
            tangency_points(entries[j - 1], entries[j], next)
        })
        .collect()
}

/// The chord between the images of the two tangency points under
/// `w = −ik²(τ − h/k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WChord {
    pub w1: RationalPoint,
    pub w2: RationalPoint,
    pub k: u64,
    pub k1: u64,
    pub k2: u64,
    pub order: u64,
}

pub fn w_chord(prev: Fraction, mid: Fraction, next: Fraction, order: u64) -> Result<WChord> {
    check_consecutive(prev, mid, next)?;
    let (k, k1, k2) = (mid.k, prev.k, next.k);
    if k.max(k1).max(k2) > order || k + k1 <= order || k + k2 <= order {
        return Err(Error::invalid(format!(
            "{prev}, {mid}, {next} are not consecutive in F_{order}"
        )));
    }
    Ok(chord_from_denominators(k, k1, k2, order))
}

fn chord_from_denominators(k: u64, k1: u64, k2: u64, order: u64) -> WChord {
    let left = k * k + k1 * k1;
    let right = k * k + k2 * k2;
    WChord {
        w1: RationalPoint::new(ratio_u(k * k, left), ratio_u(k * k1, left)),
        w2: RationalPoint::new(ratio_u(k * k, right), -ratio_u(k * k2, right)),
        k,
        k1,
        k2,
        order,
    }
}

/// Chords for every arc of the path of order `N`.
pub fn path_chords(order: u64) -> Result<Vec<WChord>> {
    Ok(path(order)?
        .into_iter()
        .map(|arc| chord_from_denominators(arc.frac.k, arc.left_k, arc.right_k, order))
        .collect())
}

/// Checks `|w| ≤ √2·k/(N+1)` and `Re(1/w) > 1/4` at both endpoints and the
/// midpoint of the chord, comparing squares exactly.
pub fn chord_bounds_check(chord: &WChord) -> bool {
    let n1 = chord.order + 1;
    let norm_bound = ratio_u(2 * chord.k * chord.k, n1 * n1);
    let quarter = ratio(1, 4);
    let mid = chord.w1.midpoint(&chord.w2);
    let points = [&chord.w1, &chord.w2, &mid];
    points
        .iter()
        .all(|w| w.norm_sqr() <= norm_bound && w.reciprocal_re().is_some_and(|r| r > quarter))
}

/// True iff `w` lies on the circle `|w − 1/2| = 1/2`.
pub fn on_w_circle(w: &RationalPoint) -> bool {
    let half = ratio(1, 2);
    let dx = &w.re - &half;
    &dx * &dx + &w.im * &w.im == &half * &half
}

/// Minor-arc length from 0 to `w` on `|z − 1/2| = 1/2` compared with `π|w|/2`.
pub fn arc_length_bound_check(w: &RationalPoint) -> Result<bool> {
    if w.re.is_zero() && w.im.is_zero() {
        return Err(Error::invalid("arc-length bound needs w != 0"));
    }
    if !on_w_circle(w) {
        return Err(Error::invalid(format!("{w} is not on |z - 1/2| = 1/2")));
    }
    let to_f64 = |q: &BigRational| {
        let (n, d) = (q.numer().to_string(), q.denom().to_string());
        n.parse::<f64>().unwrap_or(f64::NAN) / d.parse::<f64>().unwrap_or(f64::NAN)
    };
    let (x, y) = (to_f64(&w.re), to_f64(&w.im).abs());
    // w = (1 + e^{iθ})/2 with θ ∈ [0, π); the point 0 sits at θ = π
    let theta = y.atan2(x - 0.5).max(0.0);
    let arc = (std::f64::consts::PI - theta) / 2.0;
    let modulus = (x * x + y * y).sqrt();
    let bound = std::f64::consts::PI * modulus / 2.0;
    Ok(arc <= bound * (1.0 + 4.0 * f64::EPSILON))
}

/// The rational point `1/(1 + is)` of the circle `|w − 1/2| = 1/2`.
pub fn w_circle_point(s: &BigRational) -> RationalPoint {
    let denom = BigRational::one() + s * s;
    RationalPoint::new(denom.recip(), -(s / &denom))
}

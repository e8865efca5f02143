//! The leading-order Hardy–Ramanujan term `L(n)` and its relative error.

use std::cell::RefCell;
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::exact::{p_exact, PartitionCache, PartitionValue};
use crate::par::{self, Execution};
use crate::precision::{HighReal, PrecisionContext};

/// The grid `10, 50, …, 15000` used by the published comparison tables.
pub const PAPER_TABLE_NS: [u64; 17] = [
    10, 50, 100, 200, 500, 1000, 2000, 3000, 4000, 5000, 6000, 7000, 8000, 9000, 10000, 12000,
    15000,
];

/// Terms summed directly before the Euler–Maclaurin tail takes over.
const ZETA_DIRECT_TERMS: u64 = 4000;

/// `L(n) = exp(π√(2n/3)) / (4n√3)`.
pub fn l_n(n: u64, ctx: PrecisionContext) -> Result<HighReal> {
    if n == 0 {
        return Err(Error::invalid("L(n) needs n >= 1"));
    }
    let n_real = ctx.uint(n);
    let exponent = ctx.pi() * (ctx.int(2) * &n_real / ctx.int(3)).sqrt();
    Ok(exponent.exp() / (ctx.int(4) * n_real * ctx.int(3).sqrt()))
}

#[derive(Clone, Debug)]
pub struct AsymptoticRow {
    pub n: u64,
    pub p_n: PartitionValue,
    pub l_n: HighReal,
    /// `(p − L)/p · 100` at full precision.
    pub eps_percent: HighReal,
}

impl AsymptoticRow {
    /// `eps_percent` rounded half away from zero to two decimals.
    pub fn eps_rounded(&self) -> f64 {
        (self.eps_percent.to_f64() * 100.0).round() / 100.0
    }
}

fn row(n: u64, p: PartitionValue, ctx: PrecisionContext) -> Result<AsymptoticRow> {
    let l = l_n(n, ctx)?;
    let p_real = ctx.biguint(p.as_biguint());
    let eps = (&p_real - &l) / &p_real * ctx.int(100);
    Ok(AsymptoticRow {
        n,
        p_n: p,
        l_n: l,
        eps_percent: eps,
    })
}

pub fn relative_error_table(
    ns: &[u64],
    cache: &mut PartitionCache,
    ctx: PrecisionContext,
) -> Result<Vec<AsymptoticRow>> {
    relative_error_table_with(ns, cache, ctx, Execution::default())
}

pub fn relative_error_table_with(
    ns: &[u64],
    cache: &mut PartitionCache,
    ctx: PrecisionContext,
    exec: Execution,
) -> Result<Vec<AsymptoticRow>> {
    if ns.contains(&0) {
        return Err(Error::invalid("table rows need n >= 1"));
    }
    let inputs: Vec<(u64, PartitionValue)> = ns.iter().map(|&n| (n, p_exact(n, cache))).collect();
    par::map_ordered(exec, inputs, |(n, p)| row(n, p, ctx))
        .into_iter()
        .collect()
}

thread_local! {
    static ZETA_CACHE: RefCell<HashMap<usize, HighReal>> = RefCell::new(HashMap::new());
}

/// `ζ(3/2)` from a direct partial sum and an Euler–Maclaurin tail, memoized
/// per precision.
pub fn zeta_3_2(ctx: PrecisionContext) -> HighReal {
    if let Some(z) = ZETA_CACHE.with(|c| c.borrow().get(&ctx.bits()).cloned()) {
        return z;
    }
    let z = zeta_3_2_uncached(ctx);
    ZETA_CACHE.with(|c| c.borrow_mut().insert(ctx.bits(), z.clone()));
    z
}

fn zeta_3_2_uncached(ctx: PrecisionContext) -> HighReal {
    let work = ctx.with_extra_bits(16);
    let m = ZETA_DIRECT_TERMS;
    let f = |x: &HighReal| x.powi(3).sqrt().recip();
    let mut sum = work.zero();
    for i in 1..m {
        sum = sum + f(&work.uint(i));
    }
    let big_m = work.uint(m);
    // ∫_M^∞ x^{-3/2} dx + f(M)/2
    sum = sum + work.int(2) / big_m.sqrt() + f(&big_m) / work.int(2);
    // −Σ B_{2j}/(2j)! f^{(2j−1)}(M), B_2..B_10
    let bernoulli: [(i64, i64); 5] = [(1, 6), (-1, 30), (1, 42), (-1, 30), (5, 66)];
    let mut deriv = f(&big_m); // holds |f^{(d)}(M)| as d increases
    let mut order = 0i64;
    let mut factorial = work.one();
    for (j, &(num, den)) in bernoulli.iter().enumerate() {
        let target = 2 * j as i64 + 1;
        while order < target {
            // d/dx x^{-(3/2+order)} = −(3/2+order) x^{-(5/2+order)}
            deriv = deriv * work.ratio(3 + 2 * order, 2) / &big_m;
            order += 1;
        }
        factorial = factorial * work.int(2 * j as i64 + 1) * work.int(2 * j as i64 + 2);
        // f^{(odd)} is negative, so −B·f^{(odd)}/(2j)! = +B·|f^{(odd)}|/(2j)!
        sum = sum + work.ratio(num, den) * &deriv / &factorial;
    }
    sum.with_bits(ctx.bits())
}

/// `(2Cπ²n/3) · exp(−(π/2)√(2n/3))` with `C = ζ(3/2) − 1`.
pub fn tail_ratio_bound(n: u64, ctx: PrecisionContext) -> Result<HighReal> {
    if n == 0 {
        return Err(Error::invalid("tail bound needs n >= 1"));
    }
    let pi = ctx.pi();
    let c = zeta_3_2(ctx) - ctx.one();
    let n_real = ctx.uint(n);
    let decay = (-(&pi / ctx.int(2)) * (ctx.int(2) * &n_real / ctx.int(3)).sqrt()).exp();
    Ok(ctx.int(2) * c * pi.square() * n_real / ctx.int(3) * decay)
}

//! Exact partition numbers.
//!
//! [`p_exact`] runs Euler's pentagonal-number recurrence over a contiguous
//! [`PartitionCache`]; [`p_oracle_dp`] is an independent coin-counting
//! expansion of the generating product, kept for cross-checking. The cache
//! can be persisted as plain text, one `n,p(n)` record per line.

use std::fmt;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// The exact value of p(n).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PartitionValue(BigUint);

impl PartitionValue {
    pub fn new(value: BigUint) -> Self {
        PartitionValue(value)
    }

    pub fn as_biguint(&self) -> &BigUint {
        &self.0
    }

    pub fn into_biguint(self) -> BigUint {
        self.0
    }
}

impl From<u64> for PartitionValue {
    fn from(v: u64) -> Self {
        PartitionValue(BigUint::from(v))
    }
}

impl fmt::Display for PartitionValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl FromStr for PartitionValue {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::invalid(format!("not a decimal integer: {s:?}")));
        }
        BigUint::from_str(s)
            .map(PartitionValue)
            .map_err(|e| Error::invalid(format!("not a decimal integer: {s:?} ({e})")))
    }
}

/// The pair of pentagonal numbers `((3k²−k)/2, (3k²+k)/2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PentagonalPair {
    pub k: u64,
    pub omega1: u64,
    pub omega2: u64,
}

pub fn pentagonal(k: u64) -> Result<PentagonalPair> {
    if k == 0 {
        return Err(Error::invalid("pentagonal index must be positive"));
    }
    let omega1 = k
        .checked_mul(3 * k - 1)
        .map(|v| v / 2)
        .ok_or_else(|| Error::invalid(format!("pentagonal index {k} overflows")))?;
    Ok(PentagonalPair {
        k,
        omega1,
        omega2: omega1 + k,
    })
}

/// Partition numbers `p(0), p(1), ..., p(max_n)` with no gaps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionCache {
    values: Vec<BigUint>,
    source_path: Option<PathBuf>,
}

impl Default for PartitionCache {
    fn default() -> Self {
        Self::new()
    }
}

impl PartitionCache {
    /// A cache holding only `p(0) = 1`.
    pub fn new() -> Self {
        PartitionCache {
            values: vec![BigUint::one()],
            source_path: None,
        }
    }

    /// Largest `n` currently stored.
    pub fn max_n(&self) -> u64 {
        self.values.len() as u64 - 1
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, n: u64) -> Option<PartitionValue> {
        self.values.get(n as usize).cloned().map(PartitionValue)
    }

    pub fn source_path(&self) -> Option<&Path> {
        self.source_path.as_deref()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, &BigUint)> + '_ {
        self.values.iter().enumerate().map(|(n, v)| (n as u64, v))
    }

    /// Extends the table through `n` using the pentagonal recurrence.
    pub fn extend_to(&mut self, n: u64) {
        let target = n as usize;
        if target < self.values.len() {
            return;
        }
        self.values.reserve(target + 1 - self.values.len());
        // pentagonal offsets, grown as m increases
        let mut offsets: Vec<(usize, usize)> = Vec::new();
        for m in self.values.len()..=target {
            loop {
                let k = offsets.len() as u64 + 1;
                let pair = pentagonal(k).expect("k >= 1");
                if pair.omega1 as usize > m {
                    break;
                }
                offsets.push((pair.omega1 as usize, pair.omega2 as usize));
            }
            let mut plus = BigUint::zero();
            let mut minus = BigUint::zero();
            for (i, &(w1, w2)) in offsets.iter().enumerate() {
                if w1 > m {
                    break;
                }
                // k = i + 1 is odd exactly when i is even
                let acc = if i % 2 == 0 { &mut plus } else { &mut minus };
                *acc += &self.values[m - w1];
                if w2 <= m {
                    *acc += &self.values[m - w2];
                }
            }
            self.values.push(plus - minus);
        }
    }

    /// Writes `n,p(n)` lines in ascending `n`.
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let io_err = |source| Error::Io {
            path: path.to_path_buf(),
            source,
        };
        let file = fs::File::create(path).map_err(io_err)?;
        let mut out = BufWriter::new(file);
        for (n, v) in self.iter() {
            writeln!(out, "{n},{v}").map_err(io_err)?;
        }
        out.flush().map_err(io_err)
    }

    /// Reads and validates a cache file.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut cache = Self::parse(&text)?;
        cache.source_path = Some(path.to_path_buf());
        Ok(cache)
    }

    /// Parses the text form written by [`PartitionCache::save`].
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let parse_err = |message: String| Error::CacheParse { line, message };
            let (n_text, v_text) = raw
                .split_once(',')
                .ok_or_else(|| parse_err(format!("expected `n,value`, got {raw:?}")))?;
            let n: u64 = n_text
                .parse()
                .map_err(|_| parse_err(format!("bad index {n_text:?}")))?;
            let value: PartitionValue = v_text
                .parse()
                .map_err(|_| parse_err(format!("bad value {v_text:?}")))?;
            let expected = values.len() as u64;
            if n != expected {
                return Err(Error::CacheGap {
                    line,
                    expected,
                    found: n,
                });
            }
            values.push(value.0);
        }
        match values.first() {
            None => Err(Error::CacheParse {
                line: 1,
                message: "empty cache".into(),
            }),
            Some(v) if !v.is_one() => Err(Error::CacheParse {
                line: 1,
                message: "p(0) must be 1".into(),
            }),
            Some(_) => Ok(PartitionCache {
                values,
                source_path: None,
            }),
        }
    }
}

/// p(n) by the pentagonal recurrence, growing `cache` through `n`.
pub fn p_exact(n: u64, cache: &mut PartitionCache) -> PartitionValue {
    cache.extend_to(n);
    cache.get(n).expect("cache extended through n")
}

/// Largest n accepted by the dynamic-programming oracle.
pub const ORACLE_MAX_N: u64 = 5000;

/// p(0..=n) by expanding `∏ 1/(1 − x^m)` one factor at a time.
pub fn p_oracle_dp_table(n: u64) -> Result<Vec<PartitionValue>> {
    if n > ORACLE_MAX_N {
        return Err(Error::invalid(format!(
            "oracle limited to n <= {ORACLE_MAX_N}, got {n}"
        )));
    }
    let n = n as usize;
    let mut ways = vec![BigUint::zero(); n + 1];
    ways[0] = BigUint::one();
    for part in 1..=n {
        for total in part..=n {
            let (lo, hi) = ways.split_at_mut(total);
            hi[0] += &lo[total - part];
        }
    }
    Ok(ways.into_iter().map(PartitionValue).collect())
}

pub fn p_oracle_dp(n: u64) -> Result<PartitionValue> {
    Ok(p_oracle_dp_table(n)?.pop().expect("table is non-empty"))
}

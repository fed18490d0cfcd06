//! Binomial arithmetic in two backends (exact big integers and natural-log
//! floats) plus the binary entropy function in nats.

use std::{fmt, ops};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

/// Exact non-negative cardinality.
pub type BigCount = BigUint;

/// A count stored as its natural logarithm. Zero is represented by `-inf`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, serde::Serialize)]
pub struct LogCount(f64);

impl LogCount {
    pub const ZERO: LogCount = LogCount(f64::NEG_INFINITY);
    pub const ONE: LogCount = LogCount(0.0);

    pub fn from_ln(ln: f64) -> Self {
        LogCount(ln)
    }

    /// Log of an exact count.
    pub fn of(count: &BigUint) -> Self {
        LogCount(ln_big(count))
    }

    pub fn ln(self) -> f64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }
}

/// Product in the linear domain.
impl ops::Mul for LogCount {
    type Output = LogCount;

    fn mul(self, other: LogCount) -> LogCount {
        if self.is_zero() || other.is_zero() {
            LogCount::ZERO
        } else {
            LogCount(self.0 + other.0)
        }
    }
}

/// Sum in the linear domain.
impl ops::Add for LogCount {
    type Output = LogCount;

    fn add(self, other: LogCount) -> LogCount {
        let (hi, lo) = if self.0 >= other.0 { (self.0, other.0) } else { (other.0, self.0) };
        if lo == f64::NEG_INFINITY {
            return LogCount(hi);
        }
        LogCount(hi + (lo - hi).exp().ln_1p())
    }
}

impl fmt::Display for LogCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            write!(f, "-inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

/// Streaming log-sum-exp accumulator.
#[derive(Debug, Clone, Copy)]
pub struct LogSumExp {
    max: f64,
    scaled: f64,
}

impl Default for LogSumExp {
    fn default() -> Self {
        LogSumExp { max: f64::NEG_INFINITY, scaled: 0.0 }
    }
}

impl LogSumExp {
    pub fn push(&mut self, x: f64) {
        if x == f64::NEG_INFINITY {
            return;
        }
        if x > self.max {
            self.scaled = self.scaled * (self.max - x).exp() + 1.0;
            self.max = x;
        } else {
            self.scaled += (x - self.max).exp();
        }
    }

    pub fn finish(self) -> LogCount {
        if self.max == f64::NEG_INFINITY {
            LogCount::ZERO
        } else {
            LogCount(self.max + self.scaled.ln())
        }
    }
}

/// Natural log of a big integer; `-inf` for zero.
pub fn ln_big(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let shift = x.bits().saturating_sub(64);
    let top = (x >> shift).to_f64().expect("64-bit mantissa fits in f64");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `C(n, k)`, zero outside `0 <= k <= n`.
pub fn binomial(n: usize, k: i64) -> BigCount {
    if k < 0 || k as u64 > n as u64 {
        return BigUint::zero();
    }
    let k = (k as usize).min(n - k as usize);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `ln C(n, k)` through log-gamma.
pub fn log_binomial(n: usize, k: i64) -> LogCount {
    if k < 0 || k as u64 > n as u64 {
        return LogCount::ZERO;
    }
    let k = k as usize;
    if k == 0 || k == n {
        return LogCount::ONE;
    }
    let nf = n as f64;
    let kf = k as f64;
    LogCount(ln_gamma(nf + 1.0) - ln_gamma(kf + 1.0) - ln_gamma(nf - kf + 1.0))
}

/// `sum_{j=0}^{min(m,n)} C(n, j)`; zero for `m < 0`.
pub fn prefix_binomial_sum(n: usize, m: i64) -> BigCount {
    if m < 0 {
        return BigUint::zero();
    }
    let top = (m as u64).min(n as u64) as usize;
    let mut term = BigUint::one();
    let mut sum = BigUint::one();
    for j in 0..top {
        term = term * (n - j) / (j + 1);
        sum += &term;
    }
    sum
}

/// Binary entropy `-p ln p - (1-p) ln(1-p)` with `H(0) = H(1) = 0`.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("entropy argument {p} outside [0, 1]")));
    }
    Ok(entropy_unchecked(p))
}

#[inline]
pub(crate) fn entropy_unchecked(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        0.0
    } else {
        -p * p.ln() - (1.0 - p) * (-p).ln_1p()
    }
}

/// One row of Pascal's triangle with its running prefix sums.
#[derive(Debug, Clone)]
pub struct BinomialRow {
    coeffs: Vec<BigUint>,
    prefix: Vec<BigUint>,
}

impl BinomialRow {
    pub fn new(n: usize) -> Self {
        let mut coeffs = Vec::with_capacity(n + 1);
        let mut c = BigUint::one();
        coeffs.push(c.clone());
        for j in 0..n {
            c = c * (n - j) / (j + 1);
            coeffs.push(c.clone());
        }
        let mut prefix = Vec::with_capacity(n + 1);
        let mut s = BigUint::zero();
        for c in &coeffs {
            s += c;
            prefix.push(s.clone());
        }
        BinomialRow { coeffs, prefix }
    }

    pub fn n(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn get(&self, k: i64) -> Option<&BigUint> {
        usize::try_from(k).ok().and_then(|k| self.coeffs.get(k))
    }

    /// Prefix sum clamped to the row; `None` for `m < 0`.
    pub fn prefix(&self, m: i64) -> Option<&BigUint> {
        if m < 0 {
            return None;
        }
        let m = (m as usize).min(self.n());
        Some(&self.prefix[m])
    }
}

/// Log-domain counterpart of [`BinomialRow`].
#[derive(Debug, Clone)]
pub struct LogBinomialRow {
    coeffs: Vec<f64>,
    prefix: Vec<f64>,
}

impl LogBinomialRow {
    pub fn new(n: usize) -> Self {
        let coeffs: Vec<f64> = (0..=n).map(|k| log_binomial(n, k as i64).ln()).collect();
        let mut prefix = Vec::with_capacity(n + 1);
        let mut acc = LogCount::ZERO;
        for &c in &coeffs {
            acc = acc + LogCount(c);
            prefix.push(acc.ln());
        }
        LogBinomialRow { coeffs, prefix }
    }

    pub fn n(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn get(&self, k: i64) -> f64 {
        usize::try_from(k).ok().and_then(|k| self.coeffs.get(k).copied()).unwrap_or(f64::NEG_INFINITY)
    }

    pub fn prefix(&self, m: i64) -> f64 {
        if m < 0 {
            return f64::NEG_INFINITY;
        }
        self.prefix[(m as usize).min(self.n())]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn binomial_small_values() {
        assert_eq!(binomial(5, 2), big(10));
        assert_eq!(binomial(4, 5), big(0));
        assert_eq!(binomial(0, 0), big(1));
        assert_eq!(binomial(7, -1), big(0));
    }

    #[test]
    fn pascal_and_row_sums() {
        for n in 1..=60usize {
            for k in 0..=n as i64 {
                assert_eq!(binomial(n, k), binomial(n - 1, k - 1) + binomial(n - 1, k));
            }
        }
        for n in 0..=60usize {
            let total: BigUint = (0..=n as i64).map(|k| binomial(n, k)).sum();
            assert_eq!(total, BigUint::one() << n);
        }
    }

    #[test]
    fn log_binomial_matches_exact() {
        assert!((log_binomial(5, 2).ln() - 10f64.ln()).abs() < 1e-12);
        assert!(log_binomial(4, 5).is_zero());
        for n in 0..=300usize {
            for k in 0..=n as i64 {
                let exact = ln_big(&binomial(n, k));
                let approx = log_binomial(n, k).ln();
                assert!((exact - approx).abs() <= 1e-9, "n={n} k={k}: {exact} vs {approx}");
            }
        }
    }

    #[test]
    fn ln_big_beyond_f64_range() {
        let x = BigUint::one() << 3000u32;
        assert!((ln_big(&x) - 3000.0 * std::f64::consts::LN_2).abs() < 1e-9);
        assert_eq!(ln_big(&BigUint::zero()), f64::NEG_INFINITY);
    }

    #[test]
    fn prefix_sums() {
        assert_eq!(prefix_binomial_sum(3, 1), big(4));
        assert_eq!(prefix_binomial_sum(4, 4), big(16));
        assert_eq!(prefix_binomial_sum(4, 2), big(11));
        assert_eq!(prefix_binomial_sum(4, 99), big(16));
        assert_eq!(prefix_binomial_sum(4, -1), big(0));
        for n in 0..30usize {
            let mut prev = BigUint::zero();
            for m in -2..=(n as i64 + 2) {
                let cur = prefix_binomial_sum(n, m);
                assert!(cur >= prev);
                prev = cur;
            }
        }
    }

    #[test]
    fn entropy_values() {
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert!((binary_entropy(0.5).unwrap() - std::f64::consts::LN_2).abs() < 1e-15);
        // 2 ln 2 - (3/4) ln 3
        assert!((binary_entropy(0.25).unwrap() - 0.562_335_144_618_808_6).abs() < 1e-12);
        assert!(binary_entropy(-0.1).is_err());
        assert!(binary_entropy(1.5).is_err());
        assert!(binary_entropy(f64::NAN).is_err());
    }

    #[test]
    fn rows_agree_with_direct_evaluation() {
        for n in [0usize, 1, 7, 40] {
            let row = BinomialRow::new(n);
            let lrow = LogBinomialRow::new(n);
            for k in -1..=(n as i64 + 1) {
                let direct = binomial(n, k);
                assert_eq!(row.get(k).cloned().unwrap_or_default(), direct);
                assert!((lrow.get(k) - ln_big(&direct)).abs() < 1e-9 || direct.is_zero());
                if k >= 0 {
                    assert_eq!(row.prefix(k).unwrap(), &prefix_binomial_sum(n, k));
                    let lp = lrow.prefix(k);
                    assert!((lp - ln_big(&prefix_binomial_sum(n, k))).abs() < 1e-9);
                }
            }
            assert!(row.prefix(-1).is_none());
        }
    }

    #[test]
    fn log_sum_exp_accumulates() {
        let mut acc = LogSumExp::default();
        assert!(acc.finish().is_zero());
        for v in [1.0f64, 2.0, 3.0] {
            acc.push(v.ln());
        }
        acc.push(f64::NEG_INFINITY);
        assert!((acc.finish().ln() - 6f64.ln()).abs() < 1e-15);
        assert_eq!(LogCount::ZERO + LogCount::ONE, LogCount::ONE);
        assert!((LogCount::ZERO * LogCount::ONE).is_zero());
    }
}

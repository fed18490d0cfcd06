//! Exact cardinalities of sphere and ball intersections for up to three
//! centers.
//!
//! Everything is driven by the [`BlockDecomposition`] of a center triple:
//! after translating `x1` to the origin, a candidate word is described by
//! how many ones it places in each of the four coordinate classes
//! `(x2^x1, x3^x1) in {00, 10, 01, 11}`, and its three distances are linear
//! in those one-counts. Writing `w11, w10, w01, w00` for the one-counts,
//!
//! ```text
//! d(y, x1) = w11 + w10 + w01 + w00
//! d(y, x2) = (n11 - w11) + (n10 - w10) + w01 + w00
//! d(y, x3) = (n11 - w11) + w10 + (n01 - w01) + w00
//! ```
//!
//! For the canonical even triple the classes are the blocks `I1 = 11`,
//! `I2 = 10`, `I3 = 01`, `I4 = 00`, each of size `t` except `|I4| = n - 3t`.

mod oracle;
mod word;

pub use oracle::{brute_force_intersection, ORACLE_MAX_LEN};
pub use word::{canonical_centers, hamming_distance, BlockDecomposition, CenterTriple, Word};

use num_bigint::BigUint;
use num_traits::Zero;

use crate::combinatorics::{BigCount, BinomialRow, LogBinomialRow, LogCount, LogSumExp};
use crate::error::{Error, Result};

/// Exact distances `(r1, r2, r3)` from a candidate word to the three centers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
pub struct SphereProfile {
    pub r1: usize,
    pub r2: usize,
    pub r3: usize,
}

impl SphereProfile {
    pub fn new(r1: usize, r2: usize, r3: usize) -> Self {
        SphereProfile { r1, r2, r3 }
    }
}

/// One-counts of a candidate word in blocks `I1..I4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct CompositionTerm {
    pub a1: usize,
    pub a2: usize,
    pub a3: usize,
    pub a4: usize,
}

/// Solves the three distance equations for the remaining class one-counts
/// given `w11`. `None` when a count is non-integral or out of range.
fn solve_composition(d: &BlockDecomposition, w11: usize, p: SphereProfile) -> Option<CompositionTerm> {
    let (r1, r2, r3) = (p.r1 as i64, p.r2 as i64, p.r3 as i64);
    let (n11, n10, n01, n00) = (d.n11 as i64, d.n10 as i64, d.n01 as i64, d.n00 as i64);
    let w11 = w11 as i64;
    let twice10 = r1 - r2 + n11 + n10 - 2 * w11;
    let twice01 = r1 - r3 + n11 + n01 - 2 * w11;
    if twice10 % 2 != 0 || twice01 % 2 != 0 {
        return None;
    }
    let (w10, w01) = (twice10 / 2, twice01 / 2);
    let w00 = r1 - w11 - w10 - w01;
    let in_range = |v: i64, hi: i64| (0..=hi).contains(&v);
    if !(in_range(w11, n11) && in_range(w10, n10) && in_range(w01, n01) && in_range(w00, n00)) {
        return None;
    }
    Some(CompositionTerm { a1: w11 as usize, a2: w10 as usize, a3: w01 as usize, a4: w00 as usize })
}

/// Block composition of the words counted by [`term_s`], or `None` when the
/// term is zero.
pub fn composition(d: &BlockDecomposition, a1: usize, p: SphereProfile) -> Result<Option<CompositionTerm>> {
    require_canonical(d)?;
    Ok(solve_composition(d, a1, p))
}

fn require_canonical(d: &BlockDecomposition) -> Result<usize> {
    d.canonical_t().ok_or(Error::NonCanonical { n11: d.n11, n10: d.n10, n01: d.n01 })
}

/// Number of words in the canonical three-sphere intersection with exactly
/// `a1` ones in block `I1`:
/// `C(t, a1) C(t, a2) C(t, a3) C(n - 3t, a4)` with `a2, a3, a4` forced by
/// the distances.
pub fn term_s(d: &BlockDecomposition, a1: usize, p: SphereProfile) -> Result<BigCount> {
    require_canonical(d)?;
    Ok(BlockCounter::new(d).term(a1, p))
}

/// `|V_{r1}(x1) ∩ V_{r2}(x2) ∩ V_{r3}(x3)|` for any decomposition.
pub fn three_sphere_intersection(d: &BlockDecomposition, p: SphereProfile) -> BigCount {
    BlockCounter::new(d).sphere(p)
}

/// `|B_r(x1) ∩ B_r(x2) ∩ B_r(x3)|`.
pub fn three_ball_intersection(c: &CenterTriple, r: usize) -> BigCount {
    BlockCounter::new(&BlockDecomposition::of(c)).ball(r)
}

/// `|B_r(0^n) ∩ B_r(1^k 0^{n-k})|`.
pub fn two_ball_intersection(n: usize, k: usize, r: usize) -> Result<BigCount> {
    if k > n {
        return Err(Error::InvalidArgument(format!("center distance k={k} exceeds n={n}")));
    }
    let diff = BinomialRow::new(k);
    let same = BinomialRow::new(n - k);
    let mut total = BigUint::zero();
    for d1 in 0..=k as i64 {
        let m = (r as i64 - d1).min(r as i64 - (k as i64 - d1));
        if let (Some(c), Some(s)) = (diff.get(d1), same.prefix(m)) {
            total += c * s;
        }
    }
    Ok(total)
}

/// Log-domain [`two_ball_intersection`].
pub fn log_two_ball_intersection(n: usize, k: usize, r: usize) -> Result<LogCount> {
    if k > n {
        return Err(Error::InvalidArgument(format!("center distance k={k} exceeds n={n}")));
    }
    let diff = LogBinomialRow::new(k);
    let same = LogBinomialRow::new(n - k);
    let mut acc = LogSumExp::default();
    for d1 in 0..=k as i64 {
        let m = (r as i64 - d1).min(r as i64 - (k as i64 - d1));
        acc.push(diff.get(d1) + same.prefix(m));
    }
    Ok(acc.finish())
}

/// Largest single-profile sphere intersection with all radii at most `r`,
/// ties resolved to the lexicographically smallest profile.
pub fn max_sphere_term(c: &CenterTriple, r: usize) -> (BigCount, SphereProfile) {
    let counter = BlockCounter::new(&BlockDecomposition::of(c));
    let top = r.min(c.n());
    let mut best = (BigUint::zero(), SphereProfile::new(0, 0, 0));
    for r1 in 0..=top {
        for r2 in 0..=top {
            for r3 in 0..=top {
                let p = SphereProfile::new(r1, r2, r3);
                let v = counter.sphere(p);
                if v > best.0 {
                    best = (v, p);
                }
            }
        }
    }
    best
}

/// Natural log of the three-ball intersection on the canonical triple for
/// `(n, k)`, computed entirely in the log domain.
pub fn log_three_ball_intersection(n: usize, k: usize, r: usize) -> Result<LogCount> {
    let d = BlockDecomposition::of(&canonical_centers(n, k)?);
    Ok(LogBlockCounter::new(&d).ball(r))
}

/// Exact counter over a fixed decomposition with cached binomial rows.
#[derive(Debug, Clone)]
pub struct BlockCounter {
    d: BlockDecomposition,
    c11: BinomialRow,
    c10: BinomialRow,
    c01: BinomialRow,
    c00: BinomialRow,
}

impl BlockCounter {
    pub fn new(d: &BlockDecomposition) -> Self {
        BlockCounter {
            d: *d,
            c11: BinomialRow::new(d.n11),
            c10: BinomialRow::new(d.n10),
            c01: BinomialRow::new(d.n01),
            c00: BinomialRow::new(d.n00),
        }
    }

    pub fn decomposition(&self) -> &BlockDecomposition {
        &self.d
    }

    /// Words of the sphere intersection with `w11` ones in class 11.
    pub fn term(&self, w11: usize, p: SphereProfile) -> BigCount {
        match solve_composition(&self.d, w11, p) {
            Some(a) => {
                let get = |row: &BinomialRow, v: usize| row.get(v as i64).expect("in range").clone();
                get(&self.c11, a.a1) * get(&self.c10, a.a2) * get(&self.c01, a.a3) * get(&self.c00, a.a4)
            }
            None => BigUint::zero(),
        }
    }

    pub fn sphere(&self, p: SphereProfile) -> BigCount {
        (0..=self.d.n11).map(|w11| self.term(w11, p)).sum()
    }

    /// Ball intersection: triple loop over `(w11, w10, w01)`; the admissible
    /// `w00` form a prefix `0..=m`, summed through the cached prefix row.
    pub fn ball(&self, r: usize) -> BigCount {
        let d = &self.d;
        let r = r as i64;
        let (n11, n10, n01) = (d.n11 as i64, d.n10 as i64, d.n01 as i64);
        let mut total = BigUint::zero();
        for w11 in 0..=n11 {
            let c11 = self.c11.get(w11).expect("in range");
            for w10 in 0..=n10 {
                if w11 + w10 > r {
                    break;
                }
                let c11_10 = c11 * self.c10.get(w10).expect("in range");
                for w01 in 0..=n01 {
                    let m = (r - (w11 + w10 + w01))
                        .min(r - (n11 - w11 + n10 - w10 + w01))
                        .min(r - (n11 - w11 + w10 + n01 - w01));
                    if let Some(tail) = self.c00.prefix(m) {
                        total += &c11_10 * self.c01.get(w01).expect("in range") * tail;
                    }
                }
            }
        }
        total
    }
}

/// Log-domain counterpart of [`BlockCounter`].
#[derive(Debug, Clone)]
pub struct LogBlockCounter {
    d: BlockDecomposition,
    c11: LogBinomialRow,
    c10: LogBinomialRow,
    c01: LogBinomialRow,
    c00: LogBinomialRow,
}

impl LogBlockCounter {
    pub fn new(d: &BlockDecomposition) -> Self {
        LogBlockCounter {
            d: *d,
            c11: LogBinomialRow::new(d.n11),
            c10: LogBinomialRow::new(d.n10),
            c01: LogBinomialRow::new(d.n01),
            c00: LogBinomialRow::new(d.n00),
        }
    }

    pub fn sphere(&self, p: SphereProfile) -> LogCount {
        let mut acc = LogSumExp::default();
        for w11 in 0..=self.d.n11 {
            if let Some(a) = solve_composition(&self.d, w11, p) {
                acc.push(
                    self.c11.get(a.a1 as i64)
                        + self.c10.get(a.a2 as i64)
                        + self.c01.get(a.a3 as i64)
                        + self.c00.get(a.a4 as i64),
                );
            }
        }
        acc.finish()
    }

    pub fn ball(&self, r: usize) -> LogCount {
        let d = &self.d;
        let r = r as i64;
        let (n11, n10, n01) = (d.n11 as i64, d.n10 as i64, d.n01 as i64);
        let mut acc = LogSumExp::default();
        for w11 in 0..=n11 {
            for w10 in 0..=n10 {
                if w11 + w10 > r {
                    break;
                }
                let head = self.c11.get(w11) + self.c10.get(w10);
                for w01 in 0..=n01 {
                    let m = (r - (w11 + w10 + w01))
                        .min(r - (n11 - w11 + n10 - w10 + w01))
                        .min(r - (n11 - w11 + w10 + n01 - w01));
                    if m >= 0 {
                        acc.push(head + self.c01.get(w01) + self.c00.prefix(m));
                    }
                }
            }
        }
        acc.finish()
    }
}

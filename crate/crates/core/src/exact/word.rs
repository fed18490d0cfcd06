use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Fixed-length binary word packed into 64-bit limbs. Position `i` lives in
/// bit `i % 64` of limb `i / 64`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    len: usize,
    limbs: Vec<u64>,
}

impl Word {
    pub fn zeros(len: usize) -> Self {
        Word { len, limbs: vec![0; len.div_ceil(64)] }
    }

    pub fn ones(len: usize) -> Self {
        let mut w = Word::zeros(len);
        for i in 0..len {
            w.set(i, true);
        }
        w
    }

    /// Word with ones exactly at `positions` (0-based).
    pub fn with_ones(len: usize, positions: impl IntoIterator<Item = usize>) -> Self {
        let mut w = Word::zeros(len);
        for i in positions {
            w.set(i, true);
        }
        w
    }

    /// Low `len` bits of `bits`. Requires `len <= 64`.
    pub fn from_u64(len: usize, bits: u64) -> Self {
        assert!(len <= 64, "from_u64 needs len <= 64");
        let mask = if len == 64 { u64::MAX } else { (1u64 << len) - 1 };
        let mut w = Word::zeros(len);
        if len > 0 {
            w.limbs[0] = bits & mask;
        }
        w
    }

    /// Packed value when the word fits in one limb.
    pub fn as_u64(&self) -> Option<u64> {
        match self.limbs.len() {
            0 => Some(0),
            1 => Some(self.limbs[0]),
            _ => None,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        self.limbs[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, bit: bool) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % 64);
        if bit {
            self.limbs[i / 64] |= mask;
        } else {
            self.limbs[i / 64] &= !mask;
        }
    }

    pub fn weight(&self) -> usize {
        self.limbs.iter().map(|l| l.count_ones() as usize).sum()
    }

    pub fn xor(&self, other: &Word) -> Result<Word> {
        check_len(self, other)?;
        let limbs = self.limbs.iter().zip(&other.limbs).map(|(a, b)| a ^ b).collect();
        Ok(Word { len: self.len, limbs })
    }

    pub fn complement(&self) -> Word {
        self.xor(&Word::ones(self.len)).expect("same length")
    }
}

fn check_len(x: &Word, y: &Word) -> Result<()> {
    if x.len != y.len {
        return Err(Error::LengthMismatch { left: x.len, right: y.len });
    }
    Ok(())
}

pub fn hamming_distance(x: &Word, y: &Word) -> Result<usize> {
    check_len(x, y)?;
    Ok(x.limbs.iter().zip(&y.limbs).map(|(a, b)| (a ^ b).count_ones() as usize).sum())
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut w = Word::zeros(s.len());
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => w.set(i, true),
                other => {
                    return Err(Error::InvalidArgument(format!(
                        "word contains {other:?}; only '0' and '1' are allowed"
                    )))
                }
            }
        }
        Ok(w)
    }
}

/// Three centers of equal length together with their pairwise distances.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CenterTriple {
    n: usize,
    x1: Word,
    x2: Word,
    x3: Word,
    d12: usize,
    d13: usize,
    d23: usize,
}

impl CenterTriple {
    pub fn new(x1: Word, x2: Word, x3: Word) -> Result<Self> {
        let d12 = hamming_distance(&x1, &x2)?;
        let d13 = hamming_distance(&x1, &x3)?;
        let d23 = hamming_distance(&x2, &x3)?;
        let n = x1.len();
        debug_assert!(d12 + d13 + d23 <= 2 * n);
        Ok(CenterTriple { n, x1, x2, x3, d12, d13, d23 })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn centers(&self) -> [&Word; 3] {
        [&self.x1, &self.x2, &self.x3]
    }

    /// `(d12, d13, d23)`.
    pub fn distances(&self) -> (usize, usize, usize) {
        (self.d12, self.d13, self.d23)
    }

    pub fn min_distance(&self) -> usize {
        self.d12.min(self.d13).min(self.d23)
    }

    /// Same centers in the order given by `perm` (a permutation of 0..3).
    pub fn permuted(&self, perm: [usize; 3]) -> Result<Self> {
        let c = self.centers();
        CenterTriple::new(c[perm[0]].clone(), c[perm[1]].clone(), c[perm[2]].clone())
    }

    /// All centers XOR-ed by `shift`.
    pub fn translated(&self, shift: &Word) -> Result<Self> {
        CenterTriple::new(self.x1.xor(shift)?, self.x2.xor(shift)?, self.x3.xor(shift)?)
    }
}

/// Extremal triple with minimum pairwise distance `k`.
///
/// Even `k = 2t`: `0^n`, `1^{2t}0^{n-2t}`, `1^t 0^t 1^t 0^{n-3t}` (all distances `k`).
/// Odd `k = 2t+1`: `0^n`, ones on `0..k`, ones on `0..t` and `2t+1..=3t+1`
/// (distances `k, k, k+1`).
pub fn canonical_centers(n: usize, k: usize) -> Result<CenterTriple> {
    if k == 0 {
        return Err(Error::InvalidArgument("center distance k must be positive".into()));
    }
    if 3 * k > 2 * n {
        return Err(Error::InfeasibleCenters { n, k });
    }
    let t = k / 2;
    let x1 = Word::zeros(n);
    let (x2, x3) = if k.is_multiple_of(2) {
        (Word::with_ones(n, 0..2 * t), Word::with_ones(n, (0..t).chain(2 * t..3 * t)))
    } else {
        (Word::with_ones(n, 0..k), Word::with_ones(n, (0..t).chain(2 * t + 1..3 * t + 2)))
    };
    CenterTriple::new(x1, x2, x3)
}

/// Sizes of the coordinate classes keyed by `(x2 ^ x1, x3 ^ x1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub struct BlockDecomposition {
    pub n00: usize,
    pub n10: usize,
    pub n01: usize,
    pub n11: usize,
}

impl BlockDecomposition {
    /// Decomposition of the canonical even triple with half-distance `t`.
    pub fn canonical(n: usize, t: usize) -> Result<Self> {
        if 3 * t > n {
            return Err(Error::InfeasibleCenters { n, k: 2 * t });
        }
        Ok(BlockDecomposition { n00: n - 3 * t, n10: t, n01: t, n11: t })
    }

    pub fn of(triple: &CenterTriple) -> Self {
        let [x1, x2, x3] = triple.centers();
        let u = x2.xor(x1).expect("triple lengths agree");
        let v = x3.xor(x1).expect("triple lengths agree");
        let mut d = BlockDecomposition { n00: 0, n10: 0, n01: 0, n11: 0 };
        for i in 0..triple.n() {
            match (u.get(i), v.get(i)) {
                (false, false) => d.n00 += 1,
                (true, false) => d.n10 += 1,
                (false, true) => d.n01 += 1,
                (true, true) => d.n11 += 1,
            }
        }
        d
    }

    pub fn n(&self) -> usize {
        self.n00 + self.n10 + self.n01 + self.n11
    }

    /// `(d12, d13, d23)` implied by the class sizes.
    pub fn distances(&self) -> (usize, usize, usize) {
        (self.n10 + self.n11, self.n01 + self.n11, self.n10 + self.n01)
    }

    /// `Some(t)` when `n11 = n10 = n01 = t`.
    pub fn canonical_t(&self) -> Option<usize> {
        (self.n11 == self.n10 && self.n10 == self.n01).then_some(self.n11)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn distances() {
        assert_eq!(hamming_distance(&w("000"), &w("000")).unwrap(), 0);
        assert_eq!(hamming_distance(&w("110000"), &w("101000")).unwrap(), 2);
        let x = Word::with_ones(130, [0, 64, 65, 129]);
        assert_eq!(hamming_distance(&x, &x.complement()).unwrap(), 130);
        assert_eq!(hamming_distance(&w("01"), &w("011")), Err(Error::LengthMismatch { left: 2, right: 3 }));
    }

    #[test]
    fn parse_and_display() {
        let x = w("0110");
        assert_eq!(x.to_string(), "0110");
        assert_eq!(x.weight(), 2);
        assert_eq!(x.as_u64(), Some(0b0110));
        assert!("01a".parse::<Word>().is_err());
        assert_eq!(Word::from_u64(4, 0xff).to_string(), "1111");
    }

    #[test]
    fn canonical_even() {
        let c = canonical_centers(8, 2).unwrap();
        let [a, b, cc] = c.centers();
        assert_eq!(a.to_string(), "00000000");
        assert_eq!(b.to_string(), "11000000");
        assert_eq!(cc.to_string(), "10100000");
        assert_eq!(c.distances(), (2, 2, 2));
        assert_eq!(BlockDecomposition::of(&c), BlockDecomposition { n00: 5, n10: 1, n01: 1, n11: 1 });
        for n in 3..30 {
            for t in 1..=n / 3 {
                let c = canonical_centers(n, 2 * t).unwrap();
                assert_eq!(c.distances(), (2 * t, 2 * t, 2 * t));
                assert_eq!(BlockDecomposition::of(&c), BlockDecomposition::canonical(n, t).unwrap());
            }
        }
    }

    #[test]
    fn canonical_odd() {
        let c = canonical_centers(9, 3).unwrap();
        assert_eq!(c.distances(), (3, 3, 4));
        assert_eq!(c.centers()[2].to_string(), "100110000");
        let d = BlockDecomposition::of(&c);
        assert_eq!(d.distances(), c.distances());
        assert_eq!(d.n(), 9);
        for n in 2..30 {
            for k in (1..=2 * n / 3).filter(|k| k % 2 == 1) {
                let c = canonical_centers(n, k).unwrap();
                assert_eq!(c.distances(), (k, k, k + 1), "n={n} k={k}");
                assert_eq!(BlockDecomposition::of(&c).distances(), c.distances());
            }
        }
    }

    #[test]
    fn canonical_infeasible() {
        assert_eq!(canonical_centers(5, 4), Err(Error::InfeasibleCenters { n: 5, k: 4 }));
        assert!(canonical_centers(5, 0).is_err());
        assert!(canonical_centers(4, 3).is_err());
    }

    #[test]
    fn identical_centers_decompose_trivially() {
        let z = Word::zeros(7);
        let c = CenterTriple::new(z.clone(), z.clone(), z).unwrap();
        assert_eq!(BlockDecomposition::of(&c), BlockDecomposition { n00: 7, n10: 0, n01: 0, n11: 0 });
    }
}

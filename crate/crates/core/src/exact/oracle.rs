use num_bigint::BigUint;

use super::word::Word;
use crate::combinatorics::BigCount;
use crate::error::{Error, Result};

/// Largest word length the brute-force oracle will enumerate.
pub const ORACLE_MAX_LEN: usize = 22;

/// Counts words of length `n` within distance `r` of every center by
/// enumerating all `2^n` candidates.
pub fn brute_force_intersection(centers: &[Word], r: usize) -> Result<BigCount> {
    let first = centers.first().ok_or_else(|| Error::InvalidArgument("at least one center is required".into()))?;
    let n = first.len();
    if n > ORACLE_MAX_LEN {
        return Err(Error::OracleTooLarge { n, limit: ORACLE_MAX_LEN });
    }
    let mut packed = Vec::with_capacity(centers.len());
    for c in centers {
        if c.len() != n {
            return Err(Error::LengthMismatch { left: n, right: c.len() });
        }
        packed.push(c.as_u64().expect("short word fits in one limb"));
    }
    let r = r as u32;
    let count = (0u64..1 << n).filter(|y| packed.iter().all(|c| (y ^ c).count_ones() <= r)).count();
    Ok(BigUint::from(count))
}

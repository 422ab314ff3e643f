use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use once_cell::sync::Lazy;

/// Largest order for which Stirling numbers are tabulated.
pub const STIRLING_MAX: usize = 64;

/// Signed Stirling numbers of the first kind s(k, j), 0 ≤ j ≤ k ≤ `max_k`,
/// stored exactly.
#[derive(Debug, Clone)]
pub struct StirlingTable {
    max_k: usize,
    rows: Vec<Vec<BigInt>>,
    approx: Vec<Vec<f64>>,
}

impl StirlingTable {
    pub fn new(max_k: usize) -> Self {
        let mut rows: Vec<Vec<BigInt>> = vec![vec![BigInt::from(1)]];
        for k in 0..max_k {
            let prev = &rows[k];
            let mut next = vec![BigInt::zero(); k + 2];
            for (j, slot) in next.iter_mut().enumerate() {
                let mut v = BigInt::zero();
                if j <= k {
                    v -= &prev[j] * BigInt::from(k);
                }
                if j >= 1 {
                    v += &prev[j - 1];
                }
                *slot = v;
            }
            rows.push(next);
        }
        let approx = rows.iter().map(|r| r.iter().map(|v| v.to_f64().unwrap_or(f64::NAN)).collect()).collect();
        StirlingTable { max_k, rows, approx }
    }

    pub fn max_k(&self) -> usize {
        self.max_k
    }

    pub fn get(&self, k: usize, j: usize) -> Result<&BigInt> {
        if k > self.max_k || j > k {
            return Err(Error::OutOfRange(format!("stirling index (k={k}, j={j})")));
        }
        Ok(&self.rows[k][j])
    }

    /// Row k rounded to binary64.
    pub fn row_f64(&self, k: usize) -> Result<&[f64]> {
        if k > self.max_k {
            return Err(Error::OutOfRange(format!("stirling row {k}")));
        }
        Ok(&self.approx[k])
    }
}

static TABLE: Lazy<StirlingTable> = Lazy::new(|| StirlingTable::new(STIRLING_MAX));

/// Shared table up to order 64.
pub fn stirling_table() -> &'static StirlingTable {
    &TABLE
}

/// Signed Stirling number of the first kind s(k, j).
pub fn stirling_first(k: i64, j: i64) -> Result<BigInt> {
    if k < 0 || j < 0 || j > k || k > STIRLING_MAX as i64 {
        return Err(Error::OutOfRange(format!("stirling index (k={k}, j={j})")));
    }
    TABLE.get(k as usize, j as usize).cloned()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(stirling_first(0, 0).unwrap(), BigInt::from(1));
        assert_eq!(stirling_first(2, 1).unwrap(), BigInt::from(-1));
        assert_eq!(stirling_first(3, 1).unwrap(), BigInt::from(2));
        assert_eq!(stirling_first(4, 2).unwrap(), BigInt::from(11));
        assert_eq!(stirling_first(5, 0).unwrap(), BigInt::from(0));
        assert!(stirling_first(65, 3).is_err());
        assert!(stirling_first(3, 4).is_err());
    }

    #[test]
    fn row_sums() {
        // Σ_j s(k, j) = 0 for k ≥ 2, Σ_j |s(k, j)| = k!
        let t = stirling_table();
        let mut fact = BigInt::from(1);
        for k in 1..=64usize {
            fact *= BigInt::from(k);
            let row: Vec<BigInt> = (0..=k).map(|j| t.get(k, j).unwrap().clone()).collect();
            let s: BigInt = row.iter().sum();
            if k >= 2 {
                assert!(s.is_zero());
            }
            let a: BigInt = row.iter().map(|v| if v < &BigInt::zero() { -v } else { v.clone() }).sum();
            assert_eq!(a, fact);
        }
    }
}

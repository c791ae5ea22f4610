//! Ordered-factorization counts `d_k(v)`.

use crate::error::{Error, Result};

/// Largest sieve footprint accepted, in bytes.
pub const MEMORY_BUDGET: usize = 1 << 30;

/// Tables of `d_1, …, d_k` on `1..=limit`.
#[derive(Clone, Debug)]
pub struct DivisorSieve {
    limit: usize,
    // levels[i][v] = d_{i+1}(v); index 0 unused
    levels: Vec<Vec<u64>>,
}

/// Builds `d_1..d_k` up to `limit` by repeated Dirichlet convolution with `d_1`.
pub fn divisor_table(k: usize, limit: usize) -> Result<DivisorSieve> {
    if k == 0 || limit == 0 {
        return Err(Error::domain("divisor table needs k ≥ 1 and limit ≥ 1"));
    }
    let bytes = k
        .checked_mul(limit + 1)
        .and_then(|n| n.checked_mul(8))
        .unwrap_or(usize::MAX);
    if bytes > MEMORY_BUDGET {
        return Err(Error::resource(format!(
            "divisor table k={k}, limit={limit} needs {bytes} bytes (budget {MEMORY_BUDGET})"
        )));
    }
    let mut levels = Vec::with_capacity(k);
    let mut ones = vec![1u64; limit + 1];
    ones[0] = 0;
    levels.push(ones);
    for _ in 1..k {
        let prev = levels.last().expect("at least one level");
        let mut next = vec![0u64; limit + 1];
        for d in 1..=limit {
            let c = prev[d];
            for m in (d..=limit).step_by(d) {
                next[m] += c;
            }
        }
        levels.push(next);
    }
    Ok(DivisorSieve { limit, levels })
}

impl DivisorSieve {
    pub fn k(&self) -> usize {
        self.levels.len()
    }

    pub fn limit(&self) -> usize {
        self.limit
    }

    /// `d_j(v)` for `0 ≤ j ≤ k`, with `d_0` the indicator of `v = 1`.
    pub fn d(&self, j: usize, v: usize) -> u64 {
        if j == 0 {
            return u64::from(v == 1);
        }
        self.levels[j - 1][v]
    }

    /// Slice of `d_j` indexed by `v` (entry 0 is zero).
    pub fn level(&self, j: usize) -> &[u64] {
        &self.levels[j - 1]
    }
}

/// `D_k(M) = Σ_{x ≤ M} d_k(x)`.
pub fn dirichlet_piltz(k: usize, m: usize) -> Result<u128> {
    let sieve = divisor_table(k, m)?;
    Ok(sieve.level(k).iter().map(|&x| x as u128).sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let s = divisor_table(3, 10).unwrap();
        assert_eq!(s.d(2, 6), 4);
        assert_eq!(s.d(3, 4), 6);
        assert!((1..=10).all(|v| s.d(1, v) == 1));
        assert_eq!(s.d(0, 1), 1);
        assert_eq!(s.d(0, 2), 0);
        assert_eq!(dirichlet_piltz(1, 17).unwrap(), 17);
        assert_eq!(dirichlet_piltz(2, 10).unwrap(), 27);
        assert_eq!(dirichlet_piltz(3, 1).unwrap(), 1);
    }

    #[test]
    fn over_budget_is_a_resource_error() {
        assert!(matches!(
            divisor_table(200, 1 << 30),
            Err(Error::Resource(_))
        ));
    }
}

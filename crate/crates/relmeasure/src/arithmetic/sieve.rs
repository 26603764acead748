//! Segmented sieve for the distinct-prime-factor count.
//!
//! Each segment keeps a byte of omega per integer plus a residual cofactor;
//! every prime up to sqrt(hi) bumps its multiples once, and whatever is
//! left in the cofactor after dividing those primes out is the (at most
//! one) prime factor above sqrt(hi).

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Default segment length, sized so the per-thread scratch stays cache- and
/// budget-friendly.
pub const DEFAULT_SEGMENT: u64 = 1 << 22;

/// Memory budget in bytes; RELMEASURE_MEMORY_BUDGET overrides.
pub fn memory_budget() -> u64 {
    std::env::var("RELMEASURE_MEMORY_BUDGET")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(2 << 30)
}

/// Simple sieve of Eratosthenes; all primes strictly below `limit`.
pub fn primes_below(limit: u64) -> Vec<u64> {
    if limit <= 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n];
    let mut primes = Vec::new();
    for p in 2..n {
        if !composite[p] {
            primes.push(p as u64);
            let mut m = p * p;
            while m < n {
                composite[m] = true;
                m += p;
            }
        }
    }
    primes
}

/// Distinct-prime-divisor counts for one contiguous range `[lo, hi)`.
#[derive(Debug, Clone)]
pub struct SieveTable {
    pub lo: u64,
    pub hi: u64,
    omega: Vec<u8>,
}

impl SieveTable {
    /// omega(n) for n in `[lo, hi)`; omega(1) = 0.
    pub fn omega(&self, n: u64) -> u8 {
        debug_assert!(n >= self.lo && n < self.hi);
        self.omega[(n - self.lo) as usize]
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, u8)> + '_ {
        (self.lo..self.hi).map(move |n| (n, self.omega(n)))
    }

    pub fn len(&self) -> usize {
        self.omega.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega.is_empty()
    }
}

fn sieve_segment(lo: u64, hi: u64, primes: &[u64]) -> SieveTable {
    debug_assert!(lo >= 1 && hi > lo);
    let len = (hi - lo) as usize;
    let mut omega = vec![0u8; len];
    let mut rem: Vec<u64> = (lo..hi).collect();
    for &p in primes {
        if p * p >= hi {
            break;
        }
        let mut m = lo.div_ceil(p) * p;
        while m < hi {
            let idx = (m - lo) as usize;
            omega[idx] += 1;
            while rem[idx] % p == 0 {
                rem[idx] /= p;
            }
            m += p;
        }
    }
    for (idx, &r) in rem.iter().enumerate() {
        if r > 1 {
            omega[idx] += 1;
        }
    }
    SieveTable { lo, hi, omega }
}

fn estimate_bytes(segment: u64, sqrt_n: u64, lanes: u64) -> u64 {
    // omega byte + residual u64 per entry per in-flight segment, plus primes
    lanes * segment * 9 + sqrt_n
}

/// One sieved segment covering `[lo, hi)`, budget-checked.
pub fn omega_table(lo: u64, hi: u64) -> Result<SieveTable> {
    if lo < 1 || hi <= lo {
        return Err(Error::InvalidInput("omega_table needs 1 <= lo < hi".into()));
    }
    let budget = memory_budget();
    let required = estimate_bytes(hi - lo, hi.isqrt(), 1);
    if required > budget {
        return Err(Error::MemoryBudget { required, budget });
    }
    let primes = primes_below(hi.isqrt() + 1);
    Ok(sieve_segment(lo, hi, &primes))
}

/// Apply `f` to every segment of `1..=n_max` in parallel; results arrive in
/// segment order so integer merges are reproducible.
pub fn par_segment_map<T: Send>(
    n_max: u64,
    segment: u64,
    f: impl Fn(&SieveTable) -> T + Sync,
) -> Result<Vec<T>> {
    if n_max < 2 {
        return Err(Error::InvalidInput("n_max must be at least 2".into()));
    }
    let segment = segment.max(1 << 10);
    let lanes = rayon::current_num_threads() as u64;
    let budget = memory_budget();
    let required = estimate_bytes(segment.min(n_max), n_max.isqrt(), lanes);
    if required > budget {
        return Err(Error::MemoryBudget { required, budget });
    }
    let primes = primes_below(n_max.isqrt() + 1);
    let mut bounds = Vec::new();
    let mut lo = 1u64;
    while lo <= n_max {
        let hi = (lo + segment).min(n_max + 1);
        bounds.push((lo, hi));
        lo = hi;
    }
    Ok(bounds
        .par_iter()
        .map(|&(lo, hi)| f(&sieve_segment(lo, hi, &primes)))
        .collect())
}

/// Sequential stream of (n, omega(n)) for n = 1..=n_max.
pub fn omega_range(n_max: u64) -> Result<impl Iterator<Item = (u64, u8)>> {
    if n_max < 2 {
        return Err(Error::InvalidInput("n_max must be at least 2".into()));
    }
    let budget = memory_budget();
    let segment = DEFAULT_SEGMENT.min(n_max);
    let required = estimate_bytes(segment, n_max.isqrt(), 1);
    if required > budget {
        return Err(Error::MemoryBudget { required, budget });
    }
    let primes = primes_below(n_max.isqrt() + 1);
    let mut table: Option<SieveTable> = None;
    let mut n = 1u64;
    Ok(std::iter::from_fn(move || {
        if n > n_max {
            return None;
        }
        if table.as_ref().map_or(true, |t| n >= t.hi) {
            let hi = (n + segment).min(n_max + 1);
            table = Some(sieve_segment(n, hi, &primes));
        }
        let value = table.as_ref().unwrap().omega(n);
        let item = (n, value);
        n += 1;
        Some(item)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn omega_trial(mut n: u64) -> u8 {
        let mut count = 0;
        let mut p = 2;
        while p * p <= n {
            if n % p == 0 {
                count += 1;
                while n % p == 0 {
                    n /= p;
                }
            }
            p += 1;
        }
        if n > 1 {
            count += 1;
        }
        count
    }

    #[test]
    fn matches_trial_division_to_1e5() {
        let table = omega_table(1, 100_001).unwrap();
        for (n, w) in table.iter() {
            assert_eq!(w, omega_trial(n), "omega({n})");
        }
    }

    #[test]
    fn segment_boundaries_are_seamless() {
        let whole = omega_table(1, 5000).unwrap();
        let parts = par_segment_map(4999, 512, |seg| {
            seg.iter().map(|(_, w)| w).collect::<Vec<_>>()
        })
        .unwrap();
        let stitched: Vec<u8> = parts.into_iter().flatten().collect();
        assert_eq!(stitched.len(), 4999);
        for (i, w) in stitched.iter().enumerate() {
            assert_eq!(*w, whole.omega(i as u64 + 1));
        }
    }

    #[test]
    fn spot_values() {
        let t = omega_table(1, 3000).unwrap();
        assert_eq!(t.omega(1), 0);
        assert_eq!(t.omega(12), 2);
        assert_eq!(t.omega(2310), 5);
        assert_eq!(t.omega(1024), 1);
    }

    #[test]
    fn omega_range_streams_in_order() {
        let collected: Vec<(u64, u8)> = omega_range(50).unwrap().collect();
        assert_eq!(collected.len(), 50);
        assert_eq!(collected[0], (1, 0));
        assert_eq!(collected[11], (12, 2));
    }

    #[test]
    fn primes_below_100() {
        let p = primes_below(100);
        assert_eq!(p.len(), 25);
        assert_eq!(p.first(), Some(&2));
        assert_eq!(p.last(), Some(&97));
    }
}

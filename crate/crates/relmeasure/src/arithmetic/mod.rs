//! Number-theoretic kernels and the central-limit experiments built on
//! them: binary digit functions, prime reciprocal sums, the distinct-prime
//! statistics behind the Erdos-Kac and Hardy-Ramanujan laws, and the
//! sum-of-digits law.

pub mod sieve;

use crate::error::{Error, Result};
use crate::gaussian::EmpiricalCdf;
use crate::kahan::KahanSum;
use crate::sequences::DiscreteLaw;
use rayon::prelude::*;
use sieve::{par_segment_map, primes_below, DEFAULT_SEGMENT};

/// Number of ones in the binary expansion of n.
pub fn s2(n: u64) -> u32 {
    debug_assert!(n >= 1);
    n.count_ones()
}

/// j-th binary digit of n (j >= 1): parity of floor(n / 2^(j-1)).
pub fn binary_digit(j: u32, n: u64) -> u8 {
    debug_assert!(j >= 1 && n >= 1);
    ((n >> (j - 1)) & 1) as u8
}

/// Sum of prime reciprocals up to x next to its classical lower bound
/// ln ln x - 1/2.
#[derive(Debug, Clone, Copy)]
pub struct PrimeReciprocalSum {
    pub sum: f64,
    pub bound: f64,
    pub holds: bool,
}

pub fn prime_reciprocal_sum(x: u64) -> Result<PrimeReciprocalSum> {
    if x < 2 {
        return Err(Error::InvalidInput("prime_reciprocal_sum needs x >= 2".into()));
    }
    let mut acc = KahanSum::new();
    for p in primes_below(x + 1) {
        acc.add(1.0 / p as f64);
    }
    let sum = acc.value();
    let bound = (x as f64).ln().ln() - 0.5;
    Ok(PrimeReciprocalSum { sum, bound, holds: sum > bound })
}

/// Which ln-ln normalization the Erdos-Kac statistic uses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EkNormalization {
    /// (omega(n) - ln ln N) / sqrt(ln ln N) with N = n_max, over n = 1..N.
    ByNMax,
    /// (omega(n) - ln ln n) / sqrt(ln ln n); samples with n <= cutoff are
    /// skipped because ln ln n near zero distorts the statistic.
    BySample { cutoff: u64 },
}

impl EkNormalization {
    pub fn by_sample() -> Self {
        EkNormalization::BySample { cutoff: 15 }
    }
}

/// Statistic grid used when the normalized values do not live on a lattice.
const STAT_LO: f64 = -8.0;
const STAT_HI: f64 = 8.0;
const STAT_BINS: usize = 4096;

fn stat_bin(s: f64) -> usize {
    let h = (STAT_HI - STAT_LO) / STAT_BINS as f64;
    let idx = ((s - STAT_LO) / h).ceil();
    idx.clamp(0.0, STAT_BINS as f64) as usize
}

fn stat_grid_value(idx: usize) -> f64 {
    STAT_LO + (STAT_HI - STAT_LO) * idx as f64 / STAT_BINS as f64
}

const MAX_OMEGA: usize = 32;

#[derive(Clone)]
struct OmegaAccum {
    hist: [u64; MAX_OMEGA],
    sum: u64,
    sum_sq: u64,
    bins: Vec<u64>,
}

impl OmegaAccum {
    fn new(binned: bool) -> Self {
        OmegaAccum {
            hist: [0; MAX_OMEGA],
            sum: 0,
            sum_sq: 0,
            bins: if binned { vec![0; STAT_BINS + 1] } else { Vec::new() },
        }
    }

    fn merge(&mut self, other: &OmegaAccum) {
        for (a, b) in self.hist.iter_mut().zip(other.hist.iter()) {
            *a += b;
        }
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
        for (a, b) in self.bins.iter_mut().zip(other.bins.iter()) {
            *a += b;
        }
    }
}

/// Empirical law of the normalized distinct-prime-factor count.
#[derive(Debug, Clone)]
pub struct ErdosKacResult {
    pub n_max: u64,
    pub cdf: EmpiricalCdf,
    /// Exact mean of omega(n) over n = 1..n_max.
    pub omega_mean: f64,
    pub omega_variance: f64,
    pub omega_histogram: Vec<u64>,
}

/// Sieve 1..n_max and return the empirical CDF of the normalized statistic.
///
/// In `ByNMax` mode the statistic is lattice-valued, so the CDF is exact
/// value/count pairs; in `BySample` mode values vary with n and are counted
/// into a fixed 4096-cell grid on [-8, 8].
pub fn erdos_kac_cdf(n_max: u64, mode: EkNormalization) -> Result<ErdosKacResult> {
    if n_max < 100 {
        return Err(Error::InvalidInput("erdos_kac_cdf needs n_max >= 100".into()));
    }
    let binned = matches!(mode, EkNormalization::BySample { .. });
    let partials = par_segment_map(n_max, DEFAULT_SEGMENT, |seg| {
        let mut acc = OmegaAccum::new(binned);
        match mode {
            EkNormalization::ByNMax => {
                for (_, w) in seg.iter() {
                    let w = w as usize;
                    acc.hist[w] += 1;
                    acc.sum += w as u64;
                    acc.sum_sq += (w * w) as u64;
                }
            }
            EkNormalization::BySample { cutoff } => {
                let cutoff = cutoff.max(2);
                for (n, w) in seg.iter() {
                    let wi = w as usize;
                    acc.hist[wi] += 1;
                    acc.sum += wi as u64;
                    acc.sum_sq += (wi * wi) as u64;
                    if n > cutoff {
                        let l = (n as f64).ln().ln();
                        acc.bins[stat_bin((w as f64 - l) / l.sqrt())] += 1;
                    }
                }
            }
        }
        acc
    })?;
    let mut total = OmegaAccum::new(binned);
    for p in &partials {
        total.merge(p);
    }
    let nf = n_max as f64;
    let mean = total.sum as f64 / nf;
    let variance = total.sum_sq as f64 / nf - mean * mean;
    let cdf = match mode {
        EkNormalization::ByNMax => {
            let l = nf.ln().ln();
            let pairs = total
                .hist
                .iter()
                .enumerate()
                .filter(|&(_, &c)| c > 0)
                .map(|(k, &c)| ((k as f64 - l) / l.sqrt(), c))
                .collect();
            EmpiricalCdf::from_weighted(pairs)
        }
        EkNormalization::BySample { .. } => {
            let pairs = total
                .bins
                .iter()
                .enumerate()
                .filter(|&(_, &c)| c > 0)
                .map(|(i, &c)| (stat_grid_value(i), c))
                .collect();
            EmpiricalCdf::from_weighted(pairs)
        }
    };
    Ok(ErdosKacResult {
        n_max,
        cdf,
        omega_mean: mean,
        omega_variance: variance,
        omega_histogram: total.hist.to_vec(),
    })
}

/// Fraction of n <= n_max with |omega(n)/lnln(n_max) - 1| >= eps.
pub fn hardy_ramanujan_fraction(n_max: u64, eps: f64) -> Result<f64> {
    if !(eps > 0.0) || n_max < 100 {
        return Err(Error::InvalidInput(
            "hardy_ramanujan_fraction needs eps > 0 and n_max >= 100".into(),
        ));
    }
    let partials = par_segment_map(n_max, DEFAULT_SEGMENT, |seg| {
        let mut hist = [0u64; MAX_OMEGA];
        for (_, w) in seg.iter() {
            hist[w as usize] += 1;
        }
        hist
    })?;
    let mut hist = [0u64; MAX_OMEGA];
    for p in &partials {
        for (a, b) in hist.iter_mut().zip(p.iter()) {
            *a += b;
        }
    }
    let l = (n_max as f64).ln().ln();
    let bad: u64 = hist
        .iter()
        .enumerate()
        .filter(|&(k, _)| (k as f64 / l - 1.0).abs() >= eps)
        .map(|(_, &c)| c)
        .sum();
    Ok(bad as f64 / n_max as f64)
}

/// Exact digit-sum law over [0, 2^m) next to the empirical CLT statistic.
#[derive(Debug, Clone)]
pub struct DigitClt {
    pub m: u32,
    /// |{0 <= n < 2^m : s2(n) = k}| for k = 0..=m; equals C(m, k).
    pub exact_counts: Vec<u64>,
    pub exact_law: DiscreteLaw,
    /// CDF of (s2(n) - log2(n)/2) / sqrt(log2(n)/4) over n in {2..2^m},
    /// counted into the shared statistic grid.
    pub empirical: EmpiricalCdf,
}

pub fn digit_clt_cdf(m: u32) -> Result<DigitClt> {
    if !(2..=30).contains(&m) {
        return Err(Error::InvalidInput(format!(
            "enumeration too large: m must be in 2..=30, got {m}"
        )));
    }
    let top = 1u64 << m;
    let chunk = 1u64 << 20;
    let mut bounds = Vec::new();
    let mut lo = 0u64;
    while lo < top {
        bounds.push((lo, (lo + chunk).min(top)));
        lo = (lo + chunk).min(top);
    }
    let partials: Vec<(Vec<u64>, Vec<u64>)> = bounds
        .par_iter()
        .map(|&(a, b)| {
            let mut counts = vec![0u64; m as usize + 1];
            let mut bins = vec![0u64; STAT_BINS + 1];
            for n in a..b {
                counts[n.count_ones() as usize] += 1;
            }
            // empirical statistic over n in {2..2^m}: the chunk [a, b) of
            // raw values shifts by one, skipping raw = 0 (n = 1)
            for raw in a.max(1)..b {
                let n = raw + 1;
                let l2 = (n as f64).log2();
                let s = (n.count_ones() as f64 - 0.5 * l2) / (0.25 * l2).sqrt();
                bins[stat_bin(s)] += 1;
            }
            (counts, bins)
        })
        .collect();
    let mut exact_counts = vec![0u64; m as usize + 1];
    let mut bins = vec![0u64; STAT_BINS + 1];
    for (c, b) in &partials {
        for (x, y) in exact_counts.iter_mut().zip(c.iter()) {
            *x += y;
        }
        for (x, y) in bins.iter_mut().zip(b.iter()) {
            *x += y;
        }
    }
    let exact_law = DiscreteLaw::from_counts(0, &exact_counts);
    let pairs = bins
        .iter()
        .enumerate()
        .filter(|&(_, &c)| c > 0)
        .map(|(i, &c)| (stat_grid_value(i), c))
        .collect();
    Ok(DigitClt {
        m,
        exact_counts,
        exact_law,
        empirical: EmpiricalCdf::from_weighted(pairs),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{binomial_coefficient, ks_step_vs_cdf, Cdf, NormalizedBinomial, StdNormal};
    use approx::assert_abs_diff_eq;

    #[test]
    fn s2_examples() {
        assert_eq!(s2(7), 3);
        assert_eq!(s2(8), 1);
        for k in 1..=62 {
            assert_eq!(s2((1u64 << k) - 1), k);
        }
    }

    #[test]
    fn binary_digit_examples() {
        assert_eq!(binary_digit(1, 5), 1);
        assert_eq!(binary_digit(2, 5), 0);
        assert_eq!(binary_digit(3, 5), 1);
    }

    #[test]
    fn binary_digit_periodic_with_mean_half() {
        for j in 1..=6u32 {
            let period = 1u64 << j;
            let top = 1u64 << (j + 4);
            let mut ones = 0u64;
            for n in 1..=top {
                assert_eq!(binary_digit(j, n), binary_digit(j, n + period));
                ones += binary_digit(j, n) as u64;
            }
            assert_eq!(ones * 2, top);
        }
    }

    #[test]
    fn prime_reciprocals_at_100() {
        let r = prime_reciprocal_sum(100).unwrap();
        assert_abs_diff_eq!(r.sum, 1.802817, epsilon = 1e-5);
        assert_abs_diff_eq!(r.bound, 1.0271796258079011, epsilon = 1e-10);
        assert!(r.holds);
    }

    #[test]
    fn prime_reciprocals_at_two() {
        let r = prime_reciprocal_sum(2).unwrap();
        assert_eq!(r.sum, 0.5);
        assert_abs_diff_eq!(r.bound, -0.8665129205816643, epsilon = 1e-12);
        assert!(r.holds);
    }

    #[test]
    fn prime_reciprocals_at_1e6() {
        // direct summation over the 78498 primes below 10^6
        let r = prime_reciprocal_sum(1_000_000).unwrap();
        assert_abs_diff_eq!(r.sum, 2.887328, epsilon = 1e-4);
        assert!(r.holds);
    }

    #[test]
    fn reciprocal_inequality_along_powers_of_two() {
        // single sieve, prefix sums at each power of two
        let primes = primes_below((1 << 20) + 1);
        let mut acc = KahanSum::new();
        let mut idx = 0;
        for e in 1..=20u32 {
            let x = 1u64 << e;
            while idx < primes.len() && primes[idx] <= x {
                acc.add(1.0 / primes[idx] as f64);
                idx += 1;
            }
            assert!(acc.value() > (x as f64).ln().ln() - 0.5, "x = {x}");
        }
    }

    #[test]
    fn omega_sum_identity() {
        // sum over n<=N of omega(n) equals sum over p<=N of floor(N/p)
        let n_max = 100_000u64;
        let ek = erdos_kac_cdf(n_max, EkNormalization::ByNMax).unwrap();
        let direct: u64 = primes_below(n_max + 1).iter().map(|&p| n_max / p).sum();
        assert_abs_diff_eq!(ek.omega_mean, direct as f64 / n_max as f64, epsilon = 1e-15);
    }

    #[test]
    fn erdos_kac_constant_shift_unfolds() {
        let n_max = 10_000u64;
        let ek = erdos_kac_cdf(n_max, EkNormalization::ByNMax).unwrap();
        let l = (n_max as f64).ln().ln();
        for b in [-1.0, 0.25, 1.5] {
            let threshold = b * l.sqrt() + l;
            let count: u64 = ek
                .omega_histogram
                .iter()
                .enumerate()
                .filter(|&(k, _)| (k as f64) <= threshold)
                .map(|(_, &c)| c)
                .sum();
            assert_eq!(ek.cdf.eval(b), count as f64 / n_max as f64);
        }
    }

    #[test]
    fn erdos_kac_by_sample_smoke() {
        let ek = erdos_kac_cdf(100_000, EkNormalization::by_sample()).unwrap();
        assert!(ek.cdf.total() > 99_000);
        let d = ek.cdf.ks_to(&StdNormal);
        assert!(d < 0.5, "ks = {d}");
    }

    #[test]
    fn hardy_ramanujan_monotone_in_eps() {
        let f1 = hardy_ramanujan_fraction(100_000, 1.0).unwrap();
        let f2 = hardy_ramanujan_fraction(100_000, 2.0).unwrap();
        assert!(f2 <= f1);
        let f10 = hardy_ramanujan_fraction(100_000, 10.0).unwrap();
        assert!(f10 <= 0.01);
    }

    #[test]
    fn digit_counts_match_binomials() {
        for m in [2u32, 5, 10, 16] {
            let d = digit_clt_cdf(m).unwrap();
            for k in 0..=m {
                assert_eq!(
                    d.exact_counts[k as usize] as u128,
                    binomial_coefficient(m, k),
                    "m={m} k={k}"
                );
            }
        }
        let d2 = digit_clt_cdf(2).unwrap();
        assert_eq!(d2.exact_counts, vec![1, 2, 1]);
    }

    #[test]
    fn digit_clt_rejects_large_m() {
        assert!(digit_clt_cdf(31).is_err());
        assert!(digit_clt_cdf(1).is_err());
    }

    #[test]
    fn digit_exact_law_ks_at_m20() {
        let nb = NormalizedBinomial::new(20);
        let d = ks_step_vs_cdf(nb.jumps(), &StdNormal);
        assert_abs_diff_eq!(d, 0.0886, epsilon = 2e-3);
    }

    #[test]
    fn digit_empirical_total_counts() {
        let d = digit_clt_cdf(12).unwrap();
        assert_eq!(d.empirical.total(), (1u64 << 12) - 1); // n in {2..4096}
    }
}

//! Reference distributions and the sup-distance comparator.
//!
//! The standard normal CDF here is accurate to about 1e-15 absolute, well
//! inside the 1e-12 contract, so CLT experiment tolerances (never tighter
//! than 1e-3) are not polluted by reference error.

use crate::error::{Error, Result};
use crate::kahan::KahanSum;
use num::rational::BigRational;
use num::BigInt;

const FRAC_2_SQRT_PI: f64 = 1.128_379_167_095_512_6;
const SQRT_2: f64 = std::f64::consts::SQRT_2;

/// A cumulative distribution function evaluable at arbitrary points.
pub trait Cdf: Sync {
    fn eval(&self, z: f64) -> f64;

    /// Closed interval outside which the distribution carries no mass,
    /// when one is known.
    fn support_hint(&self) -> Option<(f64, f64)> {
        None
    }
}

impl<C: Cdf + ?Sized> Cdf for &C {
    fn eval(&self, z: f64) -> f64 {
        (**self).eval(z)
    }
    fn support_hint(&self) -> Option<(f64, f64)> {
        (**self).support_hint()
    }
}

/// The standard normal law.
#[derive(Debug, Clone, Copy, Default)]
pub struct StdNormal;

impl Cdf for StdNormal {
    fn eval(&self, z: f64) -> f64 {
        phi_cdf(z)
    }
}

/// View of a CDF with its argument rescaled: `eval(z) = inner(z * scale)`.
pub struct Scaled<C> {
    inner: C,
    scale: f64,
}

impl<C: Cdf> Scaled<C> {
    pub fn new(inner: C, scale: f64) -> Self {
        assert!(scale > 0.0);
        Self { inner, scale }
    }
}

impl<C: Cdf> Cdf for Scaled<C> {
    fn eval(&self, z: f64) -> f64 {
        self.inner.eval(z * self.scale)
    }
    fn support_hint(&self) -> Option<(f64, f64)> {
        self.inner
            .support_hint()
            .map(|(a, b)| (a / self.scale, b / self.scale))
    }
}

/// Standard normal CDF, absolute error below 1e-12 on all finite inputs.
pub fn phi_cdf(z: f64) -> f64 {
    debug_assert!(z.is_finite() || z.is_infinite());
    if z >= 0.0 {
        0.5 * (1.0 + erf(z / SQRT_2))
    } else {
        0.5 * erfc(-z / SQRT_2)
    }
}

/// Error function via the positive-term confluent series for small
/// arguments; no cancellation, so the relative error stays near machine
/// epsilon.
fn erf(x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    if x > 4.0 {
        return 1.0 - erfc(x);
    }
    if x == 0.0 {
        return 0.0;
    }
    // erf(x) = 2x e^{-x^2}/sqrt(pi) * sum_n (2x^2)^n / (2n+1)!!
    let q = 2.0 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut n = 1u32;
    loop {
        term *= q / (2 * n + 1) as f64;
        sum += term;
        if term < sum * 1e-17 {
            break;
        }
        n += 1;
        debug_assert!(n < 500);
    }
    FRAC_2_SQRT_PI * x * (-x * x).exp() * sum
}

/// Complementary error function. Asymptotic expansion in the far tail,
/// `1 - erf` elsewhere (absolute accuracy is what the Phi contract needs).
fn erfc(x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    if x <= 4.0 {
        return 1.0 - erf(x);
    }
    if x > 27.0 {
        return 0.0; // below the smallest positive double
    }
    // erfc(x) ~ e^{-x^2}/(x sqrt(pi)) * (1 - 1/(2x^2) + 3/(2x^2)^2 - ...)
    let inv = 1.0 / (2.0 * x * x);
    let mut mag = 1.0;
    let mut sum = 1.0;
    for k in 1..=60u32 {
        let next = mag * inv * (2 * k - 1) as f64;
        if next >= mag || next < 1e-18 {
            break; // past this point the asymptotic series turns
        }
        sum += if k % 2 == 1 { -next } else { next };
        mag = next;
    }
    (-x * x).exp() / (x * std::f64::consts::PI.sqrt()) * sum
}

/// Binomial(m, 1/2) probability mass at k. Out-of-range k carries zero mass.
///
/// Exact dyadic arithmetic up to m = 64; a compensated log-space recurrence
/// above that, stable through m = 10^6.
pub fn binomial_pmf(m: u32, k: i64) -> f64 {
    if k < 0 || k > m as i64 {
        return 0.0;
    }
    let k = k as u32;
    if m <= 64 {
        return binomial_coefficient(m, k) as f64 / 2f64.powi(m as i32);
    }
    let k = k.min(m - k); // symmetry keeps the recurrence short
    let mut log_sum = KahanSum::new();
    for j in 1..=k {
        log_sum.add(((m - j + 1) as f64 / j as f64).ln());
    }
    log_sum.add(-(m as f64) * std::f64::consts::LN_2);
    log_sum.value().exp()
}

/// C(m, k) exactly; requires m <= 120 so the running product fits in u128.
pub fn binomial_coefficient(m: u32, k: u32) -> u128 {
    assert!(k <= m && m <= 120);
    let k = k.min(m - k);
    let mut num: u128 = 1;
    for j in 1..=k as u128 {
        num = num * (m as u128 - j + 1) / j; // exact: prefix products are binomials
    }
    num
}

/// Binomial(m, 1/2) mass at k as an exact rational; only offered up to
/// m = 64, where the numerator is exactly representable.
pub fn binomial_pmf_exact(m: u32, k: u32) -> Result<BigRational> {
    if m > 64 {
        return Err(Error::InvalidInput(format!(
            "exact rational mode requires m <= 64, got {m}"
        )));
    }
    if k > m {
        return Ok(BigRational::from_integer(BigInt::from(0)));
    }
    Ok(BigRational::new(
        BigInt::from(binomial_coefficient(m, k)),
        BigInt::from(2u8).pow(m),
    ))
}

/// Full pmf row of Binomial(m, 1/2) in one pass; the log accumulation is
/// compensated so the row still sums to one at m = 10^4.
pub fn binomial_pmf_row(m: u32) -> Vec<f64> {
    let mut row = Vec::with_capacity(m as usize + 1);
    let mut log_p = KahanSum::new();
    log_p.add(-(m as f64) * std::f64::consts::LN_2);
    row.push(log_p.value().exp());
    for k in 0..m {
        log_p.add(((m - k) as f64).ln());
        log_p.add(-(((k + 1) as f64).ln()));
        row.push(log_p.value().exp());
    }
    row
}

/// Binomial(m, 1/2) CDF normalized to zero mean and unit variance:
/// `eval(z) = P[(X - m/2) / sqrt(m/4) <= z]`.
pub struct NormalizedBinomial {
    mean: f64,
    sd: f64,
    cum: Vec<f64>,
}

impl NormalizedBinomial {
    pub fn new(m: u32) -> Self {
        let row = binomial_pmf_row(m);
        let mut cum = Vec::with_capacity(row.len());
        let mut acc = KahanSum::new();
        for p in row {
            acc.add(p);
            cum.push(acc.value().min(1.0));
        }
        Self {
            mean: m as f64 / 2.0,
            sd: (m as f64 / 4.0).sqrt(),
            cum,
        }
    }

    /// Jump points of the normalized law together with the CDF value just
    /// before and at each jump.
    pub fn jumps(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        (0..self.cum.len()).map(move |k| {
            let z = (k as f64 - self.mean) / self.sd;
            let before = if k == 0 { 0.0 } else { self.cum[k - 1] };
            (z, before, self.cum[k])
        })
    }
}

impl Cdf for NormalizedBinomial {
    fn eval(&self, z: f64) -> f64 {
        let k = (self.mean + z * self.sd).floor();
        if k < 0.0 {
            0.0
        } else if k as usize >= self.cum.len() {
            1.0
        } else {
            self.cum[k as usize]
        }
    }
    fn support_hint(&self) -> Option<(f64, f64)> {
        Some((-self.mean / self.sd, self.mean / self.sd))
    }
}

/// Largest |F - G| over the given sorted grid.
///
/// This is a grid comparator, not a sup over the whole line: when F or G
/// has jumps, the caller must place grid points on both sides of each jump
/// to capture the full distance.
pub fn ks_distance(f: &dyn Cdf, g: &dyn Cdf, grid: &[f64]) -> Result<f64> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if grid.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::UnsortedGrid);
    }
    let mut best = 0.0f64;
    for &z in grid {
        best = best.max((f.eval(z) - g.eval(z)).abs());
    }
    Ok(best)
}

/// Sup distance between a step CDF (given as jumps `(z, before, at)`) and a
/// reference CDF, including the left-limit side of every jump.
pub fn ks_step_vs_cdf(
    jumps: impl Iterator<Item = (f64, f64, f64)>,
    g: &dyn Cdf,
) -> f64 {
    let mut best = 0.0f64;
    for (z, before, at) in jumps {
        let gv = g.eval(z);
        best = best.max((at - gv).abs()).max((before - gv).abs());
    }
    best
}

/// Empirical distribution stored as value/count pairs; exact integer counts
/// keep the law reproducible regardless of accumulation order.
#[derive(Debug, Clone)]
pub struct EmpiricalCdf {
    values: Vec<f64>,
    cum: Vec<u64>,
    total: u64,
}

impl EmpiricalCdf {
    pub fn from_samples(mut samples: Vec<f64>) -> Self {
        samples.sort_unstable_by(f64::total_cmp);
        let mut values = Vec::new();
        let mut cum = Vec::new();
        let mut count = 0u64;
        for (i, &v) in samples.iter().enumerate() {
            count += 1;
            if i + 1 == samples.len() || samples[i + 1] != v {
                values.push(v);
                cum.push(count);
            }
        }
        Self {
            values,
            cum,
            total: count,
        }
    }

    /// Build from (value, count) pairs, merging duplicates.
    pub fn from_weighted(mut pairs: Vec<(f64, u64)>) -> Self {
        pairs.retain(|&(_, c)| c > 0);
        pairs.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));
        let mut values = Vec::new();
        let mut cum = Vec::new();
        let mut running = 0u64;
        for (i, &(v, c)) in pairs.iter().enumerate() {
            running += c;
            if i + 1 == pairs.len() || pairs[i + 1].0 != v {
                values.push(v);
                cum.push(running);
            }
        }
        Self {
            values,
            cum,
            total: running,
        }
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn jumps(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        let t = self.total as f64;
        (0..self.values.len()).map(move |i| {
            let before = if i == 0 { 0.0 } else { self.cum[i - 1] as f64 / t };
            (self.values[i], before, self.cum[i] as f64 / t)
        })
    }

    /// Value/count pairs in ascending value order.
    pub fn pairs(&self) -> impl Iterator<Item = (f64, u64)> + '_ {
        (0..self.values.len()).map(move |i| {
            let prev = if i == 0 { 0 } else { self.cum[i - 1] };
            (self.values[i], self.cum[i] - prev)
        })
    }

    /// Two-sided sup distance to a reference CDF (left limits included).
    pub fn ks_to(&self, g: &dyn Cdf) -> f64 {
        ks_step_vs_cdf(self.jumps(), g)
    }

    /// One-sided comparison only at the attained values, i.e.
    /// `ks_distance` over the natural grid without left limits.
    pub fn ks_at_atoms(&self, g: &dyn Cdf) -> f64 {
        let t = self.total as f64;
        let mut best = 0.0f64;
        for (i, &v) in self.values.iter().enumerate() {
            best = best.max((self.cum[i] as f64 / t - g.eval(v)).abs());
        }
        best
    }

    pub fn mean(&self) -> f64 {
        let mut acc = KahanSum::new();
        for (v, c) in self.pairs() {
            acc.add(v * c as f64);
        }
        acc.value() / self.total as f64
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        let mut acc = KahanSum::new();
        for (v, c) in self.pairs() {
            acc.add((v - m) * (v - m) * c as f64);
        }
        acc.value() / self.total as f64
    }
}

impl Cdf for EmpiricalCdf {
    fn eval(&self, z: f64) -> f64 {
        let idx = self.values.partition_point(|&v| v <= z);
        if idx == 0 {
            0.0
        } else {
            self.cum[idx - 1] as f64 / self.total as f64
        }
    }
    fn support_hint(&self) -> Option<(f64, f64)> {
        match (self.values.first(), self.values.last()) {
            (Some(&a), Some(&b)) => Some((a, b)),
            _ => None,
        }
    }
}

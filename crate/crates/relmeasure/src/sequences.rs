//! Relative distribution functions of real sequences, relative averages,
//! integer-valued laws with their convolution algebra, the arcsine law of
//! equidistributed cosines, and the cosine-sum central limit experiment.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;

use crate::equidistribution::frac_mul;
use crate::error::{Error, Result};
use crate::gaussian::Cdf;
use crate::kahan::KahanSum;
use crate::parallel::{geometric_checkpoints, par_map_ranges, segment_ranges, DEFAULT_CHUNK};

/// A deterministic real sequence indexed by n = 1, 2, 3, ...
#[derive(Clone)]
pub struct RealSeq {
    label: String,
    range_hint: Option<(f64, f64)>,
    gen: Arc<dyn Fn(u64) -> f64 + Send + Sync>,
}

impl std::fmt::Debug for RealSeq {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "RealSeq({})", self.label)
    }
}

impl RealSeq {
    pub fn new(
        label: impl Into<String>,
        range_hint: Option<(f64, f64)>,
        gen: impl Fn(u64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self { label: label.into(), range_hint, gen: Arc::new(gen) }
    }

    #[inline]
    pub fn eval(&self, n: u64) -> f64 {
        (self.gen)(n)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn range_hint(&self) -> Option<(f64, f64)> {
        self.range_hint
    }

    /// frac(n * alpha), reduced through an exact double product so the
    /// fractional part stays accurate for n up to 10^9 and beyond.
    pub fn kronecker_frac(alpha: f64) -> Self {
        Self::new(
            format!("frac({alpha}*n)"),
            Some((0.0, 1.0)),
            move |n| frac_mul(n, alpha),
        )
    }

    pub fn cosine(alpha: f64) -> Self {
        Self::new(
            format!("cos(2pi*{alpha}*n)"),
            Some((-1.0, 1.0)),
            move |n| (std::f64::consts::TAU * frac_mul(n, alpha)).cos(),
        )
    }

    /// Normalized sum of cosines with the given frequencies, divided by
    /// sqrt(m/2).
    pub fn cosine_sum(alphas: Vec<f64>) -> Self {
        let m = alphas.len();
        let norm = (m as f64 / 2.0).sqrt();
        let bound = m as f64 / norm;
        Self::new(
            format!("cosine-sum(m={m})"),
            Some((-bound, bound)),
            move |n| {
                let mut acc = 0.0;
                for &a in &alphas {
                    acc += (std::f64::consts::TAU * frac_mul(n, a)).cos();
                }
                acc / norm
            },
        )
    }

    /// Indicator of the j-th binary digit of n.
    pub fn digit_indicator(j: u32) -> Self {
        Self::new(format!("digit({j})"), Some((0.0, 1.0)), move |n| {
            ((n >> (j - 1)) & 1) as f64
        })
    }

    pub fn constant(c: f64) -> Self {
        Self::new(format!("const({c})"), Some((c, c)), move |_| c)
    }
}

/// An interval of the real line (endpoints may be open or closed;
/// singletons are `point`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub lo_open: bool,
    pub hi_open: bool,
}

impl Interval {
    pub fn closed(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi);
        Self { lo, hi, lo_open: false, hi_open: false }
    }

    /// [lo, hi)
    pub fn half_open(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi);
        Self { lo, hi, lo_open: false, hi_open: true }
    }

    /// (lo, hi]
    pub fn left_open(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi);
        Self { lo, hi, lo_open: true, hi_open: false }
    }

    pub fn point(a: f64) -> Self {
        Self::closed(a, a)
    }

    #[inline]
    pub fn contains(&self, x: f64) -> bool {
        let above = if self.lo_open { x > self.lo } else { x >= self.lo };
        let below = if self.hi_open { x < self.hi } else { x <= self.hi };
        above && below
    }
}

/// Grid-sampled relative distribution function of a sequence:
/// `values[i] = |{n <= n_trunc : x_n <= grid[i]}| / n_trunc`.
#[derive(Debug, Clone)]
pub struct RelCdf {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub n_trunc: u64,
}

impl RelCdf {
    /// Largest |values - reference| over this CDF's own grid.
    pub fn sup_distance_to(&self, reference: &dyn Cdf) -> f64 {
        self.grid
            .iter()
            .zip(&self.values)
            .map(|(&z, &v)| (v - reference.eval(z)).abs())
            .fold(0.0, f64::max)
    }
}

impl Cdf for RelCdf {
    fn eval(&self, z: f64) -> f64 {
        let idx = self.grid.partition_point(|&g| g <= z);
        if idx == 0 {
            0.0
        } else {
            self.values[idx - 1]
        }
    }
}

/// One streaming pass over n = 1..n_trunc counting each x_n into the first
/// grid point at or above it; exact integer counts, chunks merged in order.
pub fn relative_cdf(x: &RealSeq, n_trunc: u64, grid: &[f64]) -> Result<RelCdf> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if grid.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::UnsortedGrid);
    }
    if n_trunc < 1 {
        return Err(Error::InvalidInput("n_trunc must be at least 1".into()));
    }
    let ranges = segment_ranges(1, n_trunc + 1, &[], DEFAULT_CHUNK);
    let buckets = par_map_ranges(&ranges, |a, b| {
        let mut counts = vec![0u64; grid.len() + 1];
        for n in a..b {
            let v = x.eval(n);
            counts[grid.partition_point(|&g| g < v)] += 1;
        }
        counts
    });
    let mut counts = vec![0u64; grid.len() + 1];
    for part in buckets {
        for (c, p) in counts.iter_mut().zip(part) {
            *c += p;
        }
    }
    let mut values = Vec::with_capacity(grid.len());
    let mut acc = 0u64;
    for &c in counts.iter().take(grid.len()) {
        acc += c;
        values.push(acc as f64 / n_trunc as f64);
    }
    Ok(RelCdf { grid: grid.to_vec(), values, n_trunc })
}

/// Compensated running average of a sequence with geometric checkpoints.
#[derive(Debug, Clone)]
pub struct AverageTrace {
    pub value: f64,
    pub checkpoints: Vec<(u64, f64)>,
}

pub fn relative_average(x: &RealSeq, n_trunc: u64, checkpoint_count: usize) -> AverageTrace {
    assert!(n_trunc >= 1);
    if n_trunc == 1 {
        let v = x.eval(1);
        return AverageTrace { value: v, checkpoints: vec![(1, v)] };
    }
    let cps = geometric_checkpoints(n_trunc, checkpoint_count.max(2));
    let cuts: Vec<u64> = cps.iter().map(|&c| c + 1).collect();
    let ranges = segment_ranges(1, n_trunc + 1, &cuts, DEFAULT_CHUNK);
    let partials = par_map_ranges(&ranges, |a, b| {
        let mut acc = KahanSum::new();
        for n in a..b {
            acc.add(x.eval(n));
        }
        acc
    });
    let mut total = KahanSum::new();
    let mut checkpoints = Vec::with_capacity(cps.len());
    let mut cp_iter = cps.iter().copied().peekable();
    for (&(_, b), part) in ranges.iter().zip(partials) {
        total.merge(part);
        while cp_iter.peek() == Some(&(b - 1)) {
            let n = b - 1;
            checkpoints.push((n, total.value() / n as f64));
            cp_iter.next();
        }
    }
    AverageTrace { value: total.value() / n_trunc as f64, checkpoints }
}

/// Riemann-Stieltjes mean of a grid-sampled CDF.
///
/// Each CDF increment is attributed to its cell's right endpoint (and the
/// mass at or below the first grid point to that point), so point masses
/// sitting exactly on grid points are placed exactly. The bias for smooth
/// laws is at most one cell width, and refining the grid converges.
pub fn stieltjes_mean(f: &RelCdf) -> Result<f64> {
    let last = *f.values.last().ok_or(Error::EmptyGrid)?;
    if last < 1.0 - 1e-12 {
        return Err(Error::SupportNotCovered);
    }
    let mut acc = KahanSum::new();
    acc.add(f.grid[0] * f.values[0]);
    for i in 1..f.grid.len() {
        acc.add(f.grid[i] * (f.values[i] - f.values[i - 1]));
    }
    Ok(acc.value())
}

/// Finitely supported probability mass function on the integers.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteLaw {
    masses: BTreeMap<i64, f64>,
}

impl DiscreteLaw {
    pub fn from_masses(pairs: impl IntoIterator<Item = (i64, f64)>) -> Self {
        let mut masses = BTreeMap::new();
        for (k, m) in pairs {
            assert!(m >= 0.0);
            if m > 0.0 {
                *masses.entry(k).or_insert(0.0) += m;
            }
        }
        Self { masses }
    }

    pub fn delta(k: i64) -> Self {
        Self::from_masses([(k, 1.0)])
    }

    pub fn bernoulli_half() -> Self {
        Self::from_masses([(0, 0.5), (1, 0.5)])
    }

    /// Masses `counts[i] / total` at `offset + i`, with total the sum of
    /// all counts.
    pub fn from_counts(offset: i64, counts: &[u64]) -> Self {
        let total: u64 = counts.iter().sum();
        assert!(total > 0);
        Self::from_masses(
            counts
                .iter()
                .enumerate()
                .map(|(i, &c)| (offset + i as i64, c as f64 / total as f64)),
        )
    }

    pub fn mass(&self, k: i64) -> f64 {
        self.masses.get(&k).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.masses.iter().map(|(&k, &m)| (k, m))
    }

    pub fn total_mass(&self) -> f64 {
        KahanSum::sum_iter(self.masses.values().copied())
    }

    /// Convolution: (a * b)(k) = sum_j a(j) b(k - j).
    pub fn convolve(&self, other: &DiscreteLaw) -> DiscreteLaw {
        let mut masses: BTreeMap<i64, f64> = BTreeMap::new();
        for (j, mj) in self.iter() {
            for (l, ml) in other.iter() {
                *masses.entry(j + l).or_insert(0.0) += mj * ml;
            }
        }
        DiscreteLaw { masses }
    }

    /// Jump points of the law normalized by (mean, sd): yields
    /// (z, cdf_before, cdf_at) for the standard step-CDF comparisons.
    pub fn normalized_jumps(&self, mean: f64, sd: f64) -> Vec<(f64, f64, f64)> {
        let mut out = Vec::with_capacity(self.masses.len());
        let mut cum = KahanSum::new();
        for (k, m) in self.iter() {
            let before = cum.value();
            cum.add(m);
            out.push(((k as f64 - mean) / sd, before, cum.value()));
        }
        out
    }
}

pub fn rho_convolve(a: &DiscreteLaw, b: &DiscreteLaw) -> DiscreteLaw {
    a.convolve(b)
}

/// Exact counting law of an integer-valued bounded sequence:
/// mass(k) = |{n <= n_trunc : x_n = k}| / n_trunc.
pub fn rho(x: &RealSeq, n_trunc: u64) -> Result<DiscreteLaw> {
    if n_trunc < 1 {
        return Err(Error::InvalidInput("n_trunc must be at least 1".into()));
    }
    let ranges = segment_ranges(1, n_trunc + 1, &[], DEFAULT_CHUNK);
    let partials: Vec<std::result::Result<BTreeMap<i64, u64>, Error>> =
        par_map_ranges(&ranges, |a, b| {
            let mut counts: BTreeMap<i64, u64> = BTreeMap::new();
            for n in a..b {
                let v = x.eval(n);
                let r = v.round();
                if (v - r).abs() > 1e-9 || r.abs() > 1e6 {
                    return Err(Error::NonIntegerValue { n, value: v });
                }
                *counts.entry(r as i64).or_insert(0) += 1;
            }
            Ok(counts)
        });
    let mut counts: BTreeMap<i64, u64> = BTreeMap::new();
    for part in partials {
        for (k, c) in part? {
            *counts.entry(k).or_insert(0) += c;
        }
    }
    Ok(DiscreteLaw::from_masses(
        counts
            .into_iter()
            .map(|(k, c)| (k, c as f64 / n_trunc as f64)),
    ))
}

/// Distribution function of cos(2 pi alpha n) for irrational alpha:
/// 1/2 + arcsin(z)/pi on [-1, 1].
pub fn arcsine_cdf(z: f64) -> f64 {
    if z < -1.0 {
        0.0
    } else if z > 1.0 {
        1.0
    } else {
        0.5 + z.asin() / std::f64::consts::PI
    }
}

/// The arcsine law as a [`Cdf`].
#[derive(Debug, Clone, Copy, Default)]
pub struct Arcsine;

impl Cdf for Arcsine {
    fn eval(&self, z: f64) -> f64 {
        arcsine_cdf(z)
    }
    fn support_hint(&self) -> Option<(f64, f64)> {
        Some((-1.0, 1.0))
    }
}

/// CDF sampled on a grid, evaluated by monotone linear interpolation.
#[derive(Debug, Clone)]
pub struct GridCdf {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    support: (f64, f64),
}

impl Cdf for GridCdf {
    fn eval(&self, z: f64) -> f64 {
        if z <= self.grid[0] {
            return if z < self.support.0 { 0.0 } else { self.values[0] };
        }
        if z >= *self.grid.last().unwrap() {
            return *self.values.last().unwrap();
        }
        let idx = self.grid.partition_point(|&g| g <= z);
        let (g0, g1) = (self.grid[idx - 1], self.grid[idx]);
        let (v0, v1) = (self.values[idx - 1], self.values[idx]);
        if g1 == g0 {
            v1
        } else {
            v0 + (v1 - v0) * (z - g0) / (g1 - g0)
        }
    }
    fn support_hint(&self) -> Option<(f64, f64)> {
        Some(self.support)
    }
}

/// Default cell count for the Stieltjes discretization in [`cdf_convolve`].
pub const CONVOLUTION_CELLS: usize = 4096;

/// Convolution of two bounded-support CDFs evaluated on `grid`:
/// (F * G)(z) = integral of F(z - eta) dG(eta), with G discretized into
/// `cells` mass cells at their midpoints. Error is O(cell width).
pub fn cdf_convolve_with_cells(
    f: &dyn Cdf,
    g: &dyn Cdf,
    grid: &[f64],
    cells: usize,
) -> Result<GridCdf> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if grid.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::UnsortedGrid);
    }
    let (f_lo, f_hi) = f.support_hint().ok_or(Error::UnboundedSupport)?;
    let (g_lo, g_hi) = g.support_hint().ok_or(Error::UnboundedSupport)?;
    let support = (f_lo + g_lo, f_hi + g_hi);
    let values: Vec<f64> = if g_hi == g_lo {
        // point mass: (F * delta_c)(z) = F(z - c)
        grid.iter().map(|&z| f.eval(z - g_lo)).collect()
    } else {
        let width = (g_hi - g_lo) / cells as f64;
        let cell_masses: Vec<(f64, f64)> = (0..cells)
            .map(|i| {
                let lo = g_lo + i as f64 * width;
                let mass = g.eval(lo + width) - g.eval(lo);
                (lo + 0.5 * width, mass)
            })
            .filter(|&(_, m)| m > 0.0)
            .collect();
        grid.par_iter()
            .map(|&z| {
                let mut acc = KahanSum::new();
                for &(eta, mass) in &cell_masses {
                    acc.add(mass * f.eval(z - eta));
                }
                acc.value()
            })
            .collect()
    };
    // enforce monotonicity and the [0, 1] range against roundoff
    let mut monotone = Vec::with_capacity(values.len());
    let mut run = 0.0f64;
    for v in values {
        run = run.max(v).clamp(0.0, 1.0);
        monotone.push(run);
    }
    Ok(GridCdf { grid: grid.to_vec(), values: monotone, support })
}

pub fn cdf_convolve(f: &dyn Cdf, g: &dyn Cdf, grid: &[f64]) -> Result<GridCdf> {
    cdf_convolve_with_cells(f, g, grid, CONVOLUTION_CELLS)
}

/// m-fold self-convolution of a bounded-support base law; each step is
/// sampled on `points` grid points spanning the growing support.
pub fn iterated_self_convolution(
    base: &dyn Cdf,
    m: usize,
    points: usize,
) -> Result<GridCdf> {
    assert!(m >= 2 && points >= 16);
    let (b_lo, b_hi) = base.support_hint().ok_or(Error::UnboundedSupport)?;
    let make_grid = |lo: f64, hi: f64| -> Vec<f64> {
        (0..points)
            .map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64)
            .collect()
    };
    let first = make_grid(b_lo + b_lo, b_hi + b_hi);
    let mut acc = cdf_convolve(base, base, &first)?;
    for k in 3..=m {
        let lo = b_lo * k as f64;
        let hi = b_hi * k as f64;
        let grid = make_grid(lo, hi);
        acc = cdf_convolve(&acc, base, &grid)?;
    }
    Ok(acc)
}

/// Sampling mode for [`cosine_sum_cdf`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SumMode {
    /// Sample at n = 1..n_trunc.
    DiscreteN,
    /// Sample at t = step, 2*step, ..., n_trunc*step.
    ContinuousT { step: f64 },
}

impl SumMode {
    pub fn continuous() -> Self {
        SumMode::ContinuousT { step: 1.0 / 64.0 }
    }
}

/// Empirical CDF of (cos(2 pi a_1 t) + ... + cos(2 pi a_m t)) / sqrt(m/2)
/// over the chosen sample set. Rational independence of {1, a_1, ..., a_m}
/// is the caller's contract; it is not checkable numerically.
pub fn cosine_sum_cdf(
    alphas: &[f64],
    n_trunc: u64,
    grid: &[f64],
    mode: SumMode,
) -> Result<RelCdf> {
    if alphas.is_empty() {
        return Err(Error::InvalidInput("cosine_sum_cdf needs at least one frequency".into()));
    }
    let seq = match mode {
        SumMode::DiscreteN => RealSeq::cosine_sum(alphas.to_vec()),
        SumMode::ContinuousT { step } => {
            if !(step > 0.0) {
                return Err(Error::InvalidInput("step must be positive".into()));
            }
            let scaled: Vec<f64> = alphas.iter().map(|&a| a * step).collect();
            RealSeq::cosine_sum(scaled)
        }
    };
    relative_cdf(&seq, n_trunc, grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{binomial_pmf_exact, Scaled, StdNormal};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    const SQRT2: f64 = std::f64::consts::SQRT_2;

    /// Four-phase sequence: -n, 0, 1/n, n cycling with n mod 4.
    fn four_phase() -> RealSeq {
        RealSeq::new("four-phase", None, |n| match n % 4 {
            0 => -(n as f64),
            1 => 0.0,
            2 => 1.0 / n as f64,
            _ => n as f64,
        })
    }

    #[test]
    fn relative_cdf_four_phase_example() {
        let cdf = relative_cdf(&four_phase(), 400_000, &[-0.5, 0.0, 0.5]).unwrap();
        assert_abs_diff_eq!(cdf.values[0], 0.25, epsilon = 1e-4);
        assert_abs_diff_eq!(cdf.values[1], 0.50, epsilon = 1e-4);
        assert_abs_diff_eq!(cdf.values[2], 0.75, epsilon = 1e-4);
    }

    #[test]
    fn relative_cdf_alternating() {
        let alt = RealSeq::new("alternating", Some((-1.0, 1.0)), |n| {
            if n % 2 == 0 { 1.0 } else { -1.0 }
        });
        let cdf = relative_cdf(&alt, 1000, &[-1.0, 0.0, 1.0]).unwrap();
        assert_eq!(cdf.values, vec![0.5, 0.5, 1.0]);
    }

    #[test]
    fn relative_cdf_cosine_matches_arcsine() {
        let grid: Vec<f64> = (0..512).map(|i| -1.0 + 2.0 * i as f64 / 511.0).collect();
        let cdf = relative_cdf(&RealSeq::cosine(SQRT2), 1_000_000, &grid).unwrap();
        assert!(cdf.sup_distance_to(&Arcsine) <= 3e-3);
    }

    #[test]
    fn relative_cdf_rejects_bad_grids() {
        let x = RealSeq::constant(0.0);
        assert!(matches!(relative_cdf(&x, 10, &[]), Err(Error::EmptyGrid)));
        assert!(matches!(
            relative_cdf(&x, 10, &[1.0, 0.0]),
            Err(Error::UnsortedGrid)
        ));
    }

    #[test]
    fn relative_cdf_monotone_in_unit_range() {
        let cdf = relative_cdf(&RealSeq::cosine(1.7320508075688772), 10_000, &[-0.9, -0.3, 0.2, 0.8, 1.0])
            .unwrap();
        assert!(cdf.values.windows(2).all(|w| w[0] <= w[1]));
        assert!(cdf.values.iter().all(|&v| (0.0..=1.0).contains(&v)));
    }

    #[test]
    fn relative_average_examples() {
        let avg = relative_average(&RealSeq::cosine(SQRT2), 1_000_000, 8);
        assert!(avg.value.abs() <= 1e-3);

        let one = relative_average(&RealSeq::constant(1.0), 100_000, 8);
        assert_eq!(one.value, 1.0);

        let n = 1_000_000u64;
        let digit = relative_average(&RealSeq::digit_indicator(1), n, 8);
        assert!((digit.value - 0.5).abs() <= 1.0 / n as f64);
    }

    #[test]
    fn stieltjes_mean_matches_average() {
        // symmetric two-point law
        let alt = RealSeq::new("alternating", Some((-1.0, 1.0)), |n| {
            if n % 2 == 0 { 1.0 } else { -1.0 }
        });
        let cdf = relative_cdf(&alt, 1000, &[-1.0, 0.0, 1.0]).unwrap();
        assert_eq!(stieltjes_mean(&cdf).unwrap(), 0.0);

        // cosine sequence on a fine grid, cross-checked against the average
        let grid: Vec<f64> = (0..=512).map(|i| -1.0 + 2.0 * i as f64 / 512.0).collect();
        let n = 1_000_000;
        let cdf = relative_cdf(&RealSeq::cosine(SQRT2), n, &grid).unwrap();
        let sm = stieltjes_mean(&cdf).unwrap();
        assert!(sm.abs() <= 5e-3);
        let avg = relative_average(&RealSeq::cosine(SQRT2), n, 4);
        assert!((sm - avg.value).abs() <= 2.0 * (2.0 / 512.0));

        // digit indicator mean 1/2
        let dcdf = relative_cdf(&RealSeq::digit_indicator(1), 100_000, &[0.0, 0.5, 1.0]).unwrap();
        assert_abs_diff_eq!(stieltjes_mean(&dcdf).unwrap(), 0.5, epsilon = 1e-3);
    }

    #[test]
    fn stieltjes_mean_needs_support_coverage() {
        let cdf = relative_cdf(&RealSeq::cosine(SQRT2), 1000, &[-0.5, 0.0, 0.5]).unwrap();
        assert!(matches!(stieltjes_mean(&cdf), Err(Error::SupportNotCovered)));
    }

    #[test]
    fn rho_digit_sum_law() {
        let x = RealSeq::new("digits-1-plus-2", Some((0.0, 2.0)), |n| {
            (((n >> 0) & 1) + ((n >> 1) & 1)) as f64
        });
        let law = rho(&x, 1 << 20).unwrap();
        let tol = 2f64.powi(-18);
        assert_abs_diff_eq!(law.mass(0), 0.25, epsilon = tol);
        assert_abs_diff_eq!(law.mass(1), 0.50, epsilon = tol);
        assert_abs_diff_eq!(law.mass(2), 0.25, epsilon = tol);
    }

    #[test]
    fn rho_constant_and_residues() {
        let law = rho(&RealSeq::constant(3.0), 1000).unwrap();
        assert_eq!(law.mass(3), 1.0);

        let n = 999_999u64; // multiple of 3
        let law = rho(&RealSeq::new("n mod 3", Some((0.0, 2.0)), |n| (n % 3) as f64), n).unwrap();
        for k in 0..3 {
            assert!((law.mass(k) - 1.0 / 3.0).abs() <= 1.0 / n as f64);
        }
    }

    #[test]
    fn rho_rejects_non_integer() {
        let x = RealSeq::new("halves", None, |n| n as f64 / 2.0);
        assert!(matches!(rho(&x, 100), Err(Error::NonIntegerValue { .. })));
    }

    #[test]
    fn convolution_of_bernoullis() {
        let b = DiscreteLaw::bernoulli_half();
        let two = rho_convolve(&b, &b);
        assert_eq!(two.mass(0), 0.25);
        assert_eq!(two.mass(1), 0.5);
        assert_eq!(two.mass(2), 0.25);

        let d = DiscreteLaw::delta(0);
        assert_eq!(rho_convolve(&d, &two), two);
    }

    #[test]
    fn tenfold_bernoulli_is_binomial() {
        let b = DiscreteLaw::bernoulli_half();
        let mut law = b.clone();
        for _ in 1..10 {
            law = law.convolve(&b);
        }
        for k in 0..=10u32 {
            let exact = binomial_pmf_exact(10, k).unwrap();
            let exact_f = exact.numer().to_string().parse::<f64>().unwrap()
                / exact.denom().to_string().parse::<f64>().unwrap();
            // all arithmetic is dyadic, so the equality is exact
            assert_eq!(law.mass(k as i64), exact_f, "k = {k}");
        }
    }

    #[test]
    fn rho_of_sum_equals_convolution_for_digit_indicators() {
        let n = 1u64 << 20;
        let x = RealSeq::digit_indicator(1);
        let y = RealSeq::digit_indicator(2);
        let sum = RealSeq::new("b1+b2", Some((0.0, 2.0)), move |n| {
            (((n >> 0) & 1) + ((n >> 1) & 1)) as f64
        });
        let law_sum = rho(&sum, n).unwrap();
        let conv = rho_convolve(&rho(&x, n).unwrap(), &rho(&y, n).unwrap());
        let tol = 5.0 / (n as f64).sqrt();
        for k in 0..=2 {
            assert!((law_sum.mass(k) - conv.mass(k)).abs() <= tol);
        }
    }

    proptest! {
        #[test]
        fn convolution_commutes_and_associates(
            a in proptest::collection::vec(1u32..20, 1..5),
            b in proptest::collection::vec(1u32..20, 1..5),
            c in proptest::collection::vec(1u32..20, 1..5),
        ) {
            let mk = |w: &[u32], off: i64| {
                let total: u32 = w.iter().sum();
                DiscreteLaw::from_masses(
                    w.iter().enumerate().map(|(i, &x)| (off + i as i64, x as f64 / total as f64)),
                )
            };
            let (la, lb, lc) = (mk(&a, -2), mk(&b, 1), mk(&c, 0));
            let ab = la.convolve(&lb);
            let ba = lb.convolve(&la);
            for (k, m) in ab.iter() {
                prop_assert!((m - ba.mass(k)).abs() < 1e-12);
            }
            let left = ab.convolve(&lc);
            let right = la.convolve(&lb.convolve(&lc));
            for (k, m) in left.iter() {
                prop_assert!((m - right.mass(k)).abs() < 1e-12);
            }
            prop_assert!((left.total_mass() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn arcsine_values() {
        assert_eq!(arcsine_cdf(0.0), 0.5);
        assert_eq!(arcsine_cdf(-1.0), 0.0);
        assert_eq!(arcsine_cdf(1.0), 1.0);
        assert_eq!(arcsine_cdf(-1.5), 0.0);
        assert_eq!(arcsine_cdf(1.5), 1.0);
        assert_abs_diff_eq!(arcsine_cdf(0.5), 2.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn arcsine_empirical_anchor() {
        // empirical counts of cos(2 pi sqrt2 n) at z = 0 and z = 0.5
        let cdf = relative_cdf(&RealSeq::cosine(SQRT2), 1_000_000, &[0.0, 0.5]).unwrap();
        assert_abs_diff_eq!(cdf.values[0], 0.5, epsilon = 1e-3);
        assert_abs_diff_eq!(cdf.values[1], 2.0 / 3.0, epsilon = 1e-3);
    }

    #[test]
    fn convolve_symmetric_arcsine_pair() {
        let grid: Vec<f64> = (0..=400).map(|i| -2.0 + i as f64 * 0.01).collect();
        let conv = cdf_convolve(&Arcsine, &Arcsine, &grid).unwrap();
        assert_abs_diff_eq!(conv.eval(0.0), 0.5, epsilon = 1e-3);
        // edges pinned within 1e-6
        assert!(conv.values[0] <= 1e-6);
        assert!(conv.values.last().unwrap() >= &(1.0 - 1e-6));
        assert!(conv.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn convolve_with_point_mass_is_shift() {
        struct Delta;
        impl Cdf for Delta {
            fn eval(&self, z: f64) -> f64 {
                if z >= 0.0 { 1.0 } else { 0.0 }
            }
            fn support_hint(&self) -> Option<(f64, f64)> {
                Some((0.0, 0.0))
            }
        }
        let grid: Vec<f64> = (0..=100).map(|i| -1.0 + i as f64 * 0.02).collect();
        let conv = cdf_convolve(&Arcsine, &Delta, &grid).unwrap();
        for (&z, &v) in conv.grid.iter().zip(&conv.values) {
            assert_abs_diff_eq!(v, arcsine_cdf(z), epsilon = 1e-12);
        }
    }

    #[test]
    fn convolve_requires_bounded_support() {
        let grid = vec![-1.0, 0.0, 1.0];
        assert!(matches!(
            cdf_convolve(&StdNormal, &Arcsine, &grid),
            Err(Error::UnboundedSupport)
        ));
    }

    #[test]
    fn sixteen_fold_arcsine_is_nearly_gaussian() {
        let conv = iterated_self_convolution(&Arcsine, 16, 4097).unwrap();
        let norm = (16.0f64 / 2.0).sqrt();
        let scaled = Scaled::new(conv, norm);
        let grid: Vec<f64> = (0..=1024).map(|i| -6.0 + 12.0 * i as f64 / 1024.0).collect();
        let d = crate::gaussian::ks_distance(&scaled, &StdNormal, &grid).unwrap();
        assert!(d <= 0.015, "ks = {d}");
    }

    #[test]
    fn cosine_sum_single_frequency_is_scaled_arcsine() {
        let half: f64 = 0.5;
        let grid: Vec<f64> = (0..=512)
            .map(|i| (-1.0 + 2.0 * i as f64 / 512.0) / half.sqrt())
            .collect();
        let cdf = cosine_sum_cdf(&[SQRT2], 1_000_000, &grid, SumMode::DiscreteN).unwrap();
        // S = cos / sqrt(1/2), so F_S(z) = arcsine(z * sqrt(1/2))
        let reference = Scaled::new(Arcsine, half.sqrt());
        assert!(cdf.sup_distance_to(&reference) <= 3e-3);
    }

    #[test]
    fn cosine_sum_dependent_frequencies_flagged_by_distance() {
        // two equal frequencies: the sum is 2 cos / sqrt(1), far from Phi
        let grid: Vec<f64> = (0..=512).map(|i| -4.0 + 8.0 * i as f64 / 512.0).collect();
        let cdf = cosine_sum_cdf(&[SQRT2, SQRT2], 200_000, &grid, SumMode::DiscreteN).unwrap();
        let d = cdf.sup_distance_to(&StdNormal);
        assert!(d > 0.05, "dependent case should stay far from Phi, got {d}");
    }

    #[test]
    fn cosine_sum_continuous_mode_halving_check() {
        let alphas = [SQRT2, 1.7320508075688772];
        let grid: Vec<f64> = (0..=256).map(|i| -4.0 + 8.0 * i as f64 / 256.0).collect();
        let coarse = cosine_sum_cdf(&alphas, 1 << 16, &grid, SumMode::ContinuousT { step: 1.0 / 64.0 })
            .unwrap();
        let fine = cosine_sum_cdf(&alphas, 1 << 17, &grid, SumMode::ContinuousT { step: 1.0 / 128.0 })
            .unwrap();
        let max_diff = coarse
            .values
            .iter()
            .zip(&fine.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(max_diff <= 0.02, "halving the step moved the CDF by {max_diff}");
    }

    #[test]
    fn cosine_sum_rejects_empty() {
        assert!(cosine_sum_cdf(&[], 100, &[0.0], SumMode::DiscreteN).is_err());
    }
}

//! Natural density of integer sets: exact rational values for (eventually)
//! periodic sets, streaming estimates with convergence verdicts for
//! everything else, and oscillation probes for sets with no density at all.

use std::fmt;
use std::sync::Arc;

use num::integer::gcd;
use num::rational::BigRational;
use num::{BigInt, One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::parallel::{geometric_checkpoints, par_map_ranges, segment_ranges, DEFAULT_CHUNK};

/// Pattern-expansion cap for exact joint densities.
const PERIOD_CAP: u64 = 1 << 24;

/// Default last-three-checkpoint agreement tolerance.
pub const DEFAULT_TOL: f64 = 1e-3;

/// Description of a subset of the positive integers.
///
/// `ArithmeticProgression { modulus: n, residue: k }` is the set
/// `{jn + k : j >= 0}` with `k` in `1..=n`, so `residue == modulus` means
/// the multiples of `n`. `BinaryDigitSet(j)` collects the n whose j-th
/// binary digit is one. `BlockExample` is the classic oscillating set built
/// from dyadic blocks, which has no density.
#[derive(Clone)]
pub enum IntegerSetSpec {
    ArithmeticProgression { modulus: u64, residue: u64 },
    BinaryDigitSet(u32),
    EventuallyPeriodic { period: u64, offset: u64, pattern: Vec<bool> },
    BlockExample,
    Predicate {
        label: String,
        membership: Arc<dyn Fn(u64) -> bool + Send + Sync>,
    },
    Intersection(Vec<IntegerSetSpec>),
    Complement(Box<IntegerSetSpec>),
}

impl fmt::Debug for IntegerSetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

impl IntegerSetSpec {
    pub fn ap(modulus: u64, residue: u64) -> Self {
        assert!(modulus >= 1 && (1..=modulus).contains(&residue));
        Self::ArithmeticProgression { modulus, residue }
    }

    pub fn digit(j: u32) -> Self {
        assert!((1..=63).contains(&j));
        Self::BinaryDigitSet(j)
    }

    pub fn periodic(period: u64, offset: u64, pattern: Vec<bool>) -> Self {
        assert!(period >= 1 && pattern.len() as u64 == period);
        Self::EventuallyPeriodic { period, offset, pattern }
    }

    pub fn predicate(
        label: impl Into<String>,
        membership: impl Fn(u64) -> bool + Send + Sync + 'static,
    ) -> Self {
        Self::Predicate {
            label: label.into(),
            membership: Arc::new(membership),
        }
    }

    pub fn complement(self) -> Self {
        Self::Complement(Box::new(self))
    }

    /// Membership test for n >= 1.
    pub fn contains(&self, n: u64) -> bool {
        debug_assert!(n >= 1);
        match self {
            Self::ArithmeticProgression { modulus, residue } => n % modulus == residue % modulus,
            Self::BinaryDigitSet(j) => (n >> (j - 1)) & 1 == 1,
            Self::EventuallyPeriodic { period, offset, pattern } => {
                n > *offset && pattern[((n - offset - 1) % period) as usize]
            }
            // blocks of ones on (2^(2m+1), 2^(2m+2)]
            Self::BlockExample => n >= 2 && (n - 1).ilog2() % 2 == 1,
            Self::Predicate { membership, .. } => membership(n),
            Self::Intersection(parts) => parts.iter().all(|s| s.contains(n)),
            Self::Complement(inner) => !inner.contains(n),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Self::ArithmeticProgression { modulus, residue } => format!("ap({modulus},{residue})"),
            Self::BinaryDigitSet(j) => format!("digit({j})"),
            Self::EventuallyPeriodic { period, offset, .. } => {
                format!("periodic(period={period},offset={offset})")
            }
            Self::BlockExample => "block-example".into(),
            Self::Predicate { label, .. } => format!("predicate({label})"),
            Self::Intersection(parts) => {
                let inner: Vec<String> = parts.iter().map(|s| s.describe()).collect();
                format!("intersect({})", inner.join(","))
            }
            Self::Complement(inner) => format!("complement({})", inner.describe()),
        }
    }
}

/// Canonical reduction of a symbolic spec: a single congruence class, a
/// periodic bit pattern, or the empty set.
enum Canon {
    Class { modulus: u128, residue: u128 },
    Periodic { period: u64, pattern: Vec<bool> },
    Empty,
}

fn canon(spec: &IntegerSetSpec) -> Result<Canon> {
    match spec {
        IntegerSetSpec::ArithmeticProgression { modulus, residue } => Ok(Canon::Class {
            modulus: *modulus as u128,
            residue: (residue % modulus) as u128,
        }),
        IntegerSetSpec::BinaryDigitSet(j) => {
            let period = 1u64
                .checked_shl(*j)
                .filter(|&p| p <= PERIOD_CAP)
                .ok_or(Error::PeriodTooLarge { period: 1u128 << j, cap: PERIOD_CAP })?;
            let half = period / 2;
            Ok(Canon::Periodic {
                period,
                pattern: (0..period).map(|r| r >= half).collect(),
            })
        }
        IntegerSetSpec::EventuallyPeriodic { period, offset, pattern } => {
            let mut by_mod = vec![false; *period as usize];
            for (i, &bit) in pattern.iter().enumerate() {
                by_mod[((offset + 1 + i as u64) % period) as usize] = bit;
            }
            Ok(Canon::Periodic { period: *period, pattern: by_mod })
        }
        IntegerSetSpec::Intersection(parts) => {
            let mut acc = Canon::Periodic { period: 1, pattern: vec![true] };
            for part in parts {
                acc = canon_intersect(acc, canon(part)?)?;
            }
            Ok(acc)
        }
        IntegerSetSpec::Complement(inner) => Ok(match canon(inner)? {
            Canon::Class { modulus, residue } => {
                let m = u64::try_from(modulus)
                    .ok()
                    .filter(|&m| m <= PERIOD_CAP)
                    .ok_or(Error::PeriodTooLarge { period: modulus, cap: PERIOD_CAP })?;
                Canon::Periodic {
                    period: m,
                    pattern: (0..m).map(|r| r as u128 != residue).collect(),
                }
            }
            Canon::Periodic { period, pattern } => Canon::Periodic {
                period,
                pattern: pattern.into_iter().map(|b| !b).collect(),
            },
            Canon::Empty => Canon::Periodic { period: 1, pattern: vec![true] },
        }),
        IntegerSetSpec::BlockExample | IntegerSetSpec::Predicate { .. } => {
            Err(Error::NoExactDensity)
        }
    }
}

fn canon_intersect(a: Canon, b: Canon) -> Result<Canon> {
    use Canon::*;
    Ok(match (a, b) {
        (Empty, _) | (_, Empty) => Empty,
        (Class { modulus: m1, residue: r1 }, Class { modulus: m2, residue: r2 }) => {
            match crt(m1, r1, m2, r2)? {
                Some((m, r)) => Class { modulus: m, residue: r },
                None => Empty,
            }
        }
        (Class { modulus, residue }, Periodic { period, pattern })
        | (Periodic { period, pattern }, Class { modulus, residue }) => {
            let m = u64::try_from(modulus)
                .map_err(|_| Error::PeriodTooLarge { period: modulus, cap: PERIOD_CAP })?;
            let joint = lcm_capped(m, period)?;
            let pattern = (0..joint)
                .map(|r| (r as u128) % modulus == residue && pattern[(r % period) as usize])
                .collect();
            Periodic { period: joint, pattern }
        }
        (Periodic { period: p1, pattern: q1 }, Periodic { period: p2, pattern: q2 }) => {
            let joint = lcm_capped(p1, p2)?;
            let pattern = (0..joint)
                .map(|r| q1[(r % p1) as usize] && q2[(r % p2) as usize])
                .collect();
            Periodic { period: joint, pattern }
        }
    })
}

fn lcm_capped(a: u64, b: u64) -> Result<u64> {
    let l = a / gcd(a, b) * b;
    if l > PERIOD_CAP {
        return Err(Error::PeriodTooLarge { period: l as u128, cap: PERIOD_CAP });
    }
    Ok(l)
}

/// Solve n = r1 (mod m1), n = r2 (mod m2); None when inconsistent.
fn crt(m1: u128, r1: u128, m2: u128, r2: u128) -> Option<(u128, u128)> {
    let g = gcd(m1, m2);
    let (diff, sign) = if r2 >= r1 { (r2 - r1, false) } else { (r1 - r2, true) };
    if diff % g != 0 {
        return None;
    }
    let m2g = m2 / g;
    let inv = mod_inverse((m1 / g) % m2g, m2g);
    let mut t = (diff / g % m2g) * inv % m2g;
    if sign && t != 0 {
        t = m2g - t;
    }
    let modulus = m1 * m2g;
    Some((modulus, (r1 + m1 * t) % modulus))
}

fn mod_inverse(a: u128, m: u128) -> u128 {
    if m == 1 {
        return 0;
    }
    // extended Euclid on (a, m), coefficients tracked in i128
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    debug_assert_eq!(old_r, 1, "inverse requires coprime arguments");
    old_s.rem_euclid(m as i128) as u128
}

fn big_ratio(num: u128, den: u128) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Exact density of a symbolic set as a rational in [0, 1].
pub fn density_exact(spec: &IntegerSetSpec) -> Result<BigRational> {
    match spec {
        IntegerSetSpec::ArithmeticProgression { modulus, .. } => {
            Ok(big_ratio(1, *modulus as u128))
        }
        IntegerSetSpec::BinaryDigitSet(_) => Ok(big_ratio(1, 2)),
        IntegerSetSpec::EventuallyPeriodic { period, pattern, .. } => {
            let ones = pattern.iter().filter(|&&b| b).count() as u128;
            Ok(big_ratio(ones, *period as u128))
        }
        IntegerSetSpec::Complement(inner) => {
            Ok(BigRational::one() - density_exact(inner)?)
        }
        IntegerSetSpec::Intersection(_) => Ok(match canon(spec)? {
            Canon::Class { modulus, .. } => big_ratio(1, modulus),
            Canon::Periodic { period, pattern } => {
                let ones = pattern.iter().filter(|&&b| b).count() as u128;
                big_ratio(ones, period as u128)
            }
            Canon::Empty => BigRational::zero(),
        }),
        IntegerSetSpec::BlockExample | IntegerSetSpec::Predicate { .. } => {
            Err(Error::NoExactDensity)
        }
    }
}

/// Convergence verdict attached to a truncated-density computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    ExactKnown,
    Converged,
    Oscillating,
    Inconclusive,
}

/// Truncated density with its checkpoint trace and oscillation probes.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DensityEstimate {
    pub spec: String,
    pub value: Option<f64>,
    /// (N, |A ∩ {1..N}| / N) at geometric N; for the continuous estimator
    /// the first entry is the time horizon T instead of an integer N.
    pub checkpoints: Vec<(f64, f64)>,
    pub liminf_probe: f64,
    pub limsup_probe: f64,
    pub verdict: Verdict,
}

impl DensityEstimate {
    fn from_checkpoints(
        spec: String,
        checkpoints: Vec<(f64, f64)>,
        probe_densities: &[f64],
        tol: f64,
    ) -> Self {
        let densities: Vec<f64> = checkpoints.iter().map(|&(_, d)| d).collect();
        let probes = if probe_densities.is_empty() { &densities } else { probe_densities };
        let upper = &probes[probes.len() / 2..];
        let liminf = upper.iter().copied().fold(f64::INFINITY, f64::min);
        let limsup = upper.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        // settled tails win over probe spread: a density decaying to zero
        // sweeps a wide probe range while still converging
        let settled = densities.len() >= 3 && {
            let tail = &densities[densities.len() - 3..];
            tail.iter()
                .flat_map(|a| tail.iter().map(move |b| (a - b).abs()))
                .all(|d| d < tol)
        };
        let verdict = if settled {
            Verdict::Converged
        } else if limsup - liminf > 10.0 * tol {
            Verdict::Oscillating
        } else {
            Verdict::Inconclusive
        };
        let value = match verdict {
            Verdict::Converged => Some(*densities.last().unwrap()),
            _ => None,
        };
        DensityEstimate {
            spec,
            value,
            checkpoints,
            liminf_probe: liminf,
            limsup_probe: limsup,
            verdict,
        }
    }

    /// Wrap an exactly known density in estimate form (used by reports).
    pub fn exact(spec: String, value: f64) -> Self {
        DensityEstimate {
            spec,
            value: Some(value),
            checkpoints: Vec::new(),
            liminf_probe: value,
            limsup_probe: value,
            verdict: Verdict::ExactKnown,
        }
    }
}

/// Partial densities of `spec` along a geometric checkpoint ladder up to
/// `n_max`, with the default agreement tolerance.
pub fn density_estimate(
    spec: &IntegerSetSpec,
    n_max: u64,
    checkpoint_count: usize,
) -> Result<DensityEstimate> {
    density_estimate_with(spec, n_max, checkpoint_count, DEFAULT_TOL)
}

pub fn density_estimate_with(
    spec: &IntegerSetSpec,
    n_max: u64,
    checkpoint_count: usize,
    tol: f64,
) -> Result<DensityEstimate> {
    if n_max < 2 || checkpoint_count < 2 {
        return Err(Error::InvalidInput(
            "density_estimate needs n_max >= 2 and checkpoint_count >= 2".into(),
        ));
    }
    // convergence is judged on the geometric ladder; oscillation probes sit
    // at powers of two, where the known counterexamples swing hardest
    let geo = geometric_checkpoints(n_max, checkpoint_count);
    let pows: Vec<u64> = (4..63)
        .map(|e| 1u64 << e)
        .filter(|&p| p <= n_max)
        .collect();
    let mut ladder: Vec<u64> = geo.iter().chain(pows.iter()).copied().collect();
    ladder.sort_unstable();
    ladder.dedup();
    let counts = counts_at_checkpoints(|n| spec.contains(n), n_max, &ladder);
    let density_at = |n: u64| -> f64 {
        let idx = ladder.binary_search(&n).unwrap();
        counts[idx] as f64 / n as f64
    };
    let checkpoints: Vec<(f64, f64)> = geo
        .iter()
        .map(|&n| (n as f64, density_at(n)))
        .collect();
    let probe_densities: Vec<f64> = pows.iter().map(|&n| density_at(n)).collect();
    Ok(DensityEstimate::from_checkpoints(
        spec.describe(),
        checkpoints,
        &probe_densities,
        tol,
    ))
}

/// Cumulative membership counts at each checkpoint, scanned in parallel
/// chunks and merged in range order.
fn counts_at_checkpoints(
    contains: impl Fn(u64) -> bool + Sync,
    n_max: u64,
    checkpoints: &[u64],
) -> Vec<u64> {
    let cuts: Vec<u64> = checkpoints.iter().map(|&c| c + 1).collect();
    let ranges = segment_ranges(1, n_max + 1, &cuts, DEFAULT_CHUNK);
    let partials = par_map_ranges(&ranges, |a, b| (a..b).filter(|&n| contains(n)).count() as u64);
    let mut out = Vec::with_capacity(checkpoints.len());
    let mut acc = 0u64;
    let mut cp_iter = checkpoints.iter().copied().peekable();
    for (&(_, b), part) in ranges.iter().zip(partials) {
        acc += part;
        while cp_iter.peek() == Some(&(b - 1)) {
            out.push(acc);
            cp_iter.next();
        }
    }
    debug_assert_eq!(out.len(), checkpoints.len());
    out
}

/// Partial densities at N = 2^e for each probe exponent; returns
/// (min, max) over the upper half of the probes.
pub fn oscillation_probe(
    spec: &IntegerSetSpec,
    probe_exponents: &[u32],
) -> Result<(f64, f64)> {
    if probe_exponents.len() < 4 {
        return Err(Error::InsufficientProbes { need: 4, got: probe_exponents.len() });
    }
    if probe_exponents.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput("probe exponents must be increasing".into()));
    }
    let ns: Vec<u64> = probe_exponents.iter().map(|&e| 1u64 << e).collect();
    let n_max = *ns.last().unwrap();
    let counts = counts_at_checkpoints(|n| spec.contains(n), n_max, &ns);
    let densities: Vec<f64> = ns
        .iter()
        .zip(counts)
        .map(|(&n, c)| c as f64 / n as f64)
        .collect();
    let upper = &densities[densities.len() / 2..];
    let lo = upper.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = upper.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok((lo, hi))
}

/// Continuous relative measure of a subset of (0, infinity): midpoint-rule
/// estimate of (1/T) * integral of the indicator, with the same checkpoint
/// and verdict logic as the discrete estimator. The indicator's
/// discontinuities bound the quadrature error by (#sign changes)*step/T.
pub fn continuous_density(
    indicator: impl Fn(f64) -> bool + Sync,
    t_max: f64,
    step: f64,
    checkpoint_count: usize,
) -> Result<DensityEstimate> {
    if !(t_max > 0.0) || !(step > 0.0) || step > t_max / 100.0 {
        return Err(Error::InvalidInput(
            "continuous_density needs t_max > 0 and 0 < step <= t_max/100".into(),
        ));
    }
    let samples = (t_max / step).floor() as u64;
    let cps = geometric_checkpoints(samples, checkpoint_count);
    let counts = counts_at_checkpoints(
        |i| indicator((i as f64 - 0.5) * step),
        samples,
        &cps,
    );
    let checkpoints: Vec<(f64, f64)> = cps
        .iter()
        .zip(counts)
        .map(|(&i, c)| (i as f64 * step, c as f64 / i as f64))
        .collect();
    Ok(DensityEstimate::from_checkpoints(
        "continuous-indicator".into(),
        checkpoints,
        &[],
        DEFAULT_TOL,
    ))
}

/// Per-prime verification row for [`no_measure_witness`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PrimeClassRow {
    pub prime: u64,
    pub class_density: String,
    pub all_classes_equal: bool,
    pub classes_sum_to_one: bool,
}

/// Numerical witness that no finite measure on all subsets of N can both
/// treat the residue classes of every prime equally and be sigma-additive.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NoMeasureReport {
    pub prime_bound: u64,
    pub rows: Vec<PrimeClassRow>,
    pub singleton_bound: String,
    pub singleton_bound_value: f64,
    pub sum_of_singleton_measures: f64,
    pub measure_of_all_naturals: f64,
    pub sigma_additive: bool,
}

/// For each prime p up to the bound, check that the residue classes
/// A_{p,1}, ..., A_{p,p} all have exact density 1/p and sum to one, then
/// report the implied singleton bound and the failure of sigma-additivity.
pub fn no_measure_witness(prime_bound: u64) -> Result<NoMeasureReport> {
    if prime_bound < 2 {
        return Err(Error::InvalidInput("prime_bound must be at least 2".into()));
    }
    let primes = crate::arithmetic::sieve::primes_below(prime_bound + 1);
    let mut rows = Vec::with_capacity(primes.len());
    for &p in &primes {
        let densities: Vec<BigRational> = (1..=p)
            .map(|k| density_exact(&IntegerSetSpec::ap(p, k)))
            .collect::<Result<_>>()?;
        let want = big_ratio(1, p as u128);
        let all_equal = densities.iter().all(|d| *d == want);
        let total: BigRational = densities.iter().cloned().sum();
        rows.push(PrimeClassRow {
            prime: p,
            class_density: format!("1/{p}"),
            all_classes_equal: all_equal,
            classes_sum_to_one: total.is_one(),
        });
    }
    let largest = *primes.last().unwrap();
    Ok(NoMeasureReport {
        prime_bound,
        rows,
        singleton_bound: format!("1/{largest}"),
        singleton_bound_value: 1.0 / largest as f64,
        sum_of_singleton_measures: 0.0,
        measure_of_all_naturals: 1.0,
        sigma_additive: false,
    })
}

//! Weyl-criterion machinery: exponential sums, fractional parts, exact 1-d
//! star discrepancy, equidistribution-based numerical integration, and
//! composition with finitely measurable maps.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::kahan::{two_prod, KahanSum};
use crate::parallel::{geometric_checkpoints, par_map_ranges, segment_ranges, DEFAULT_CHUNK};
use crate::sequences::RealSeq;

/// Fractional part in [0, 1), floor convention for negative inputs.
#[inline]
pub fn frac(x: f64) -> f64 {
    let f = x - x.floor();
    if f >= 1.0 {
        0.0
    } else {
        f
    }
}

/// frac(n * alpha) with the product carried in double-double precision.
///
/// A plain `n as f64 * alpha` loses the fractional part's low bits once
/// n * alpha is large; the error-free product keeps the reduction accurate
/// for n up to 10^9 and beyond.
#[inline]
pub fn frac_mul(n: u64, alpha: f64) -> f64 {
    let (p, e) = two_prod(n as f64, alpha);
    let f = p - p.floor(); // exact
    frac(f + e)
}

/// Magnitude trace of the averaged exponential sum for one character h.
#[derive(Debug, Clone)]
pub struct WeylSumResult {
    pub h: Vec<i64>,
    pub n_trunc: u64,
    /// |(1/N) sum of e^{2 pi i <h, x_n>}| at N = n_trunc.
    pub magnitude: f64,
    pub trace: Vec<(u64, f64)>,
}

/// Averaged exponential sum over n = 1..n_trunc for the character h,
/// compensated and chunk-merged in fixed order.
pub fn weyl_sum(seqs: &[RealSeq], h: &[i64], n_trunc: u64) -> Result<WeylSumResult> {
    if seqs.is_empty() || seqs.len() != h.len() {
        return Err(Error::InvalidInput(
            "weyl_sum needs one integer h per sequence".into(),
        ));
    }
    if h.iter().all(|&c| c == 0) {
        return Err(Error::TrivialCharacter);
    }
    if n_trunc < 1 {
        return Err(Error::InvalidInput("n_trunc must be at least 1".into()));
    }
    let cps = geometric_checkpoints(n_trunc.max(2), 12);
    let cuts: Vec<u64> = cps.iter().map(|&c| c + 1).collect();
    let ranges = segment_ranges(1, n_trunc + 1, &cuts, DEFAULT_CHUNK);
    let partials = par_map_ranges(&ranges, |a, b| {
        let mut re = KahanSum::new();
        let mut im = KahanSum::new();
        for n in a..b {
            let mut phase = 0.0;
            for (seq, &c) in seqs.iter().zip(h) {
                phase += c as f64 * seq.eval(n);
            }
            let t = std::f64::consts::TAU * frac(phase);
            re.add(t.cos());
            im.add(t.sin());
        }
        (re, im)
    });
    let mut re = KahanSum::new();
    let mut im = KahanSum::new();
    let mut trace = Vec::with_capacity(cps.len());
    let mut cp_iter = cps.iter().copied().filter(|&c| c <= n_trunc).peekable();
    for (&(_, b), (pre, pim)) in ranges.iter().zip(partials) {
        re.merge(pre);
        im.merge(pim);
        while cp_iter.peek() == Some(&(b - 1)) {
            let n = b - 1;
            trace.push((n, (re.value().hypot(im.value()) / n as f64).min(1.0)));
            cp_iter.next();
        }
    }
    let magnitude = (re.value().hypot(im.value()) / n_trunc as f64).min(1.0);
    Ok(WeylSumResult { h: h.to_vec(), n_trunc, magnitude, trace })
}

/// Exact one-dimensional star discrepancy of a point set in [0, 1).
pub fn star_discrepancy_1d(points: &[f64]) -> Result<f64> {
    if points.is_empty() {
        return Err(Error::InvalidInput("star discrepancy needs points".into()));
    }
    for &p in points {
        if !(0.0..1.0).contains(&p) {
            return Err(Error::PointOutsideUnitInterval { value: p });
        }
    }
    let mut sorted = points.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut best = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let up = (i as f64 + 1.0) / n - x;
        let down = x - i as f64 / n;
        best = best.max(up).max(down);
    }
    Ok(best)
}

/// Equidistribution average of psi over the fractional parts of the given
/// sequences, with a geometric convergence trace.
#[derive(Debug, Clone)]
pub struct QmcResult {
    pub value: f64,
    pub trace: Vec<(u64, f64)>,
}

pub fn qmc_integrate(
    psi: impl Fn(&[f64]) -> f64 + Sync,
    seqs: &[RealSeq],
    n_trunc: u64,
) -> Result<QmcResult> {
    if seqs.is_empty() || n_trunc < 1 {
        return Err(Error::InvalidInput("qmc_integrate needs sequences and n >= 1".into()));
    }
    let cps = geometric_checkpoints(n_trunc.max(2), 12);
    let cuts: Vec<u64> = cps.iter().map(|&c| c + 1).collect();
    let ranges = segment_ranges(1, n_trunc + 1, &cuts, DEFAULT_CHUNK);
    let m = seqs.len();
    let partials = par_map_ranges(&ranges, |a, b| {
        let mut acc = KahanSum::new();
        let mut point = vec![0.0f64; m];
        for n in a..b {
            for (slot, seq) in point.iter_mut().zip(seqs) {
                *slot = frac(seq.eval(n));
            }
            acc.add(psi(&point));
        }
        acc
    });
    let mut total = KahanSum::new();
    let mut trace = Vec::with_capacity(cps.len());
    let mut cp_iter = cps.iter().copied().filter(|&c| c <= n_trunc).peekable();
    for (&(_, b), part) in ranges.iter().zip(partials) {
        total.merge(part);
        while cp_iter.peek() == Some(&(b - 1)) {
            let n = b - 1;
            trace.push((n, total.value() / n as f64));
            cp_iter.next();
        }
    }
    Ok(QmcResult { value: total.value() / n_trunc as f64, trace })
}

/// One monotone piece of a finitely measurable map on [0, 1).
#[derive(Clone)]
pub struct MonotonePiece {
    pub lo: f64,
    pub hi: f64,
    map: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl MonotonePiece {
    pub fn new(lo: f64, hi: f64, map: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self { lo, hi, map: Arc::new(map) }
    }
}

/// A map on [0, 1) described by finitely many monotone pieces; interval
/// preimages under such maps are finite unions of intervals, which is what
/// keeps independence intact downstream.
#[derive(Clone)]
pub struct PiecewiseMonotone {
    label: String,
    pieces: Vec<MonotonePiece>,
}

impl PiecewiseMonotone {
    pub fn new(label: impl Into<String>, pieces: Vec<MonotonePiece>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::PiecesDoNotTile);
        }
        let tol = 1e-12;
        if (pieces[0].lo - 0.0).abs() > tol
            || (pieces.last().unwrap().hi - 1.0).abs() > tol
            || pieces.windows(2).any(|w| (w[0].hi - w[1].lo).abs() > tol)
        {
            return Err(Error::PiecesDoNotTile);
        }
        for (index, piece) in pieces.iter().enumerate() {
            if !piece_is_monotone(piece) {
                return Err(Error::NonMonotonePiece { index });
            }
        }
        Ok(Self { label: label.into(), pieces })
    }

    pub fn piece_count(&self) -> usize {
        self.pieces.len()
    }

    pub fn apply(&self, u: f64) -> f64 {
        let idx = self
            .pieces
            .partition_point(|p| p.hi <= u)
            .min(self.pieces.len() - 1);
        (self.pieces[idx].map)(u)
    }

    /// cos(2 pi u): decreasing on [0, 1/2], increasing on [1/2, 1).
    pub fn cosine_2pi() -> Self {
        let cos = |u: f64| (std::f64::consts::TAU * u).cos();
        Self::new(
            "cos(2pi*u)",
            vec![MonotonePiece::new(0.0, 0.5, cos), MonotonePiece::new(0.5, 1.0, cos)],
        )
        .expect("cosine pieces are monotone")
    }

    /// Indicator of [threshold, 1), i.e. floor to {0, 1}.
    pub fn threshold(threshold: f64) -> Self {
        assert!((0.0..1.0).contains(&threshold) && threshold > 0.0);
        Self::new(
            format!("1[u >= {threshold}]"),
            vec![
                MonotonePiece::new(0.0, threshold, |_| 0.0),
                MonotonePiece::new(threshold, 1.0, |_| 1.0),
            ],
        )
        .expect("threshold pieces are monotone")
    }

    pub fn identity() -> Self {
        Self::new("identity", vec![MonotonePiece::new(0.0, 1.0, |u| u)])
            .expect("identity piece is monotone")
    }
}

fn piece_is_monotone(piece: &MonotonePiece) -> bool {
    const PROBES: usize = 33;
    let width = piece.hi - piece.lo;
    if width <= 0.0 {
        return false;
    }
    let mut up = true;
    let mut down = true;
    let mut prev = (piece.map)(piece.lo);
    for i in 1..PROBES {
        let u = piece.lo + width * i as f64 / (PROBES - 1) as f64;
        let u = u.min(piece.hi * (1.0 - 1e-15)); // stay inside the half-open piece
        let v = (piece.map)(u);
        if v > prev + 1e-12 {
            down = false;
        }
        if v < prev - 1e-12 {
            up = false;
        }
        prev = v;
    }
    up || down
}

/// Compose each sequence (assumed to take values in [0, 1)) with its map;
/// the results stay relatively measurable and independent when the inputs
/// are equidistributed and independent.
pub fn map_independent(seqs: &[RealSeq], maps: &[PiecewiseMonotone]) -> Result<Vec<RealSeq>> {
    if seqs.len() != maps.len() {
        return Err(Error::InvalidInput("need one map per sequence".into()));
    }
    Ok(seqs
        .iter()
        .zip(maps)
        .map(|(seq, g)| {
            let g = g.clone();
            let inner = seq.clone();
            RealSeq::new(
                format!("{}({})", g.label, seq.label()),
                None,
                move |n| g.apply(frac(inner.eval(n))),
            )
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const GOLDEN: f64 = 1.618033988749895;
    const SQRT2: f64 = std::f64::consts::SQRT_2;
    const SQRT3: f64 = 1.7320508075688772;

    #[test]
    fn frac_examples() {
        assert_eq!(frac(2.75), 0.75);
        assert_eq!(frac(-0.25), 0.75);
        assert_eq!(frac(3.0), 0.0);
    }

    #[test]
    fn frac_mul_agrees_with_naive_at_small_n() {
        for n in [1u64, 17, 999] {
            let naive = frac(n as f64 * SQRT2);
            assert_abs_diff_eq!(frac_mul(n, SQRT2), naive, epsilon = 1e-12);
        }
    }

    #[test]
    fn frac_mul_is_consistent_at_large_n() {
        // recurrence frac(n a) = frac(frac((n-1) a) + frac(a)) checked at
        // scattered large n
        for &n in &[1_000_000_007u64, 2_000_000_011, 4_000_000_003] {
            let direct = frac_mul(n, SQRT2);
            let step = frac(frac_mul(n - 1, SQRT2) + frac(SQRT2));
            assert_abs_diff_eq!(direct, step, epsilon = 1e-9);
        }
    }

    #[test]
    fn weyl_rational_frequency_magnitude_one() {
        let seq = RealSeq::kronecker_frac(0.5);
        let r = weyl_sum(&[seq], &[2], 1000).unwrap();
        assert_eq!(r.magnitude, 1.0);
    }

    #[test]
    fn weyl_golden_ratio_vanishes() {
        let seq = RealSeq::kronecker_frac(GOLDEN);
        let r = weyl_sum(&[seq], &[1], 1_000_000).unwrap();
        assert!(r.magnitude <= 3e-6, "magnitude = {}", r.magnitude);
        assert!(r.trace.iter().all(|&(_, m)| m <= 1.0));
    }

    #[test]
    fn weyl_two_dimensional_character() {
        let seqs = [RealSeq::kronecker_frac(SQRT2), RealSeq::kronecker_frac(SQRT3)];
        let r = weyl_sum(&seqs, &[1, -1], 1_000_000).unwrap();
        assert!(r.magnitude <= 1e-5, "magnitude = {}", r.magnitude);
    }

    #[test]
    fn weyl_rejects_zero_character() {
        let seq = RealSeq::kronecker_frac(GOLDEN);
        assert!(matches!(
            weyl_sum(&[seq], &[0], 100),
            Err(Error::TrivialCharacter)
        ));
    }

    #[test]
    fn discrepancy_single_point() {
        assert_eq!(star_discrepancy_1d(&[0.5]).unwrap(), 0.5);
    }

    #[test]
    fn discrepancy_centered_grid_is_optimal() {
        let n = 64;
        let pts: Vec<f64> = (0..n).map(|k| (k as f64 + 0.5) / n as f64).collect();
        assert_abs_diff_eq!(
            star_discrepancy_1d(&pts).unwrap(),
            1.0 / (2.0 * n as f64),
            epsilon = 1e-12
        );
    }

    #[test]
    fn discrepancy_golden_kronecker() {
        let pts: Vec<f64> = (1..=100_000).map(|n| frac_mul(n, GOLDEN)).collect();
        let d = star_discrepancy_1d(&pts).unwrap();
        assert!(d <= 2e-4, "D* = {d}");
    }

    #[test]
    fn discrepancy_envelope_for_quadratic_irrational() {
        // D*_N <= C log N / N with a modest C for frac(n sqrt2)
        for &n in &[1_000u64, 10_000, 100_000] {
            let pts: Vec<f64> = (1..=n).map(|k| frac_mul(k, SQRT2)).collect();
            let d = star_discrepancy_1d(&pts).unwrap();
            assert!(d <= 5.0 * (n as f64).ln() / n as f64, "N={n} D*={d}");
        }
    }

    #[test]
    fn discrepancy_invariances() {
        let pts: Vec<f64> = (1..=500).map(|n| frac_mul(n, SQRT2)).collect();
        let d = star_discrepancy_1d(&pts).unwrap();
        let mut shuffled = pts.clone();
        shuffled.reverse();
        assert_eq!(star_discrepancy_1d(&shuffled).unwrap(), d);
        let doubled: Vec<f64> = pts.iter().chain(pts.iter()).copied().collect();
        assert_abs_diff_eq!(star_discrepancy_1d(&doubled).unwrap(), d, epsilon = 1e-12);
    }

    #[test]
    fn discrepancy_rejects_outside_points() {
        assert!(matches!(
            star_discrepancy_1d(&[0.2, 1.0]),
            Err(Error::PointOutsideUnitInterval { .. })
        ));
    }

    #[test]
    fn qmc_constant_is_exact() {
        let seqs = [RealSeq::kronecker_frac(SQRT2)];
        let r = qmc_integrate(|_| 1.0, &seqs, 10_000).unwrap();
        assert_eq!(r.value, 1.0);
    }

    #[test]
    fn qmc_product_integral() {
        let seqs = [RealSeq::kronecker_frac(SQRT2), RealSeq::kronecker_frac(SQRT3)];
        let r = qmc_integrate(|p| p[0] * p[1], &seqs, 1_000_000).unwrap();
        assert_abs_diff_eq!(r.value, 0.25, epsilon = 1e-3);
    }

    #[test]
    fn qmc_cosine_matches_weyl_real_part() {
        let seqs = [RealSeq::kronecker_frac(GOLDEN)];
        let r = qmc_integrate(|p| (std::f64::consts::TAU * p[0]).cos(), &seqs, 1_000_000).unwrap();
        assert!(r.value.abs() <= 1e-5);
    }

    #[test]
    fn qmc_koksma_envelope_for_cubics() {
        // |estimate - integral| <= 10 D*_N V(psi) for psi(u) = u^3 - u
        let n = 10_000u64;
        let pts: Vec<f64> = (1..=n).map(|k| frac_mul(k, GOLDEN)).collect();
        let dstar = star_discrepancy_1d(&pts).unwrap();
        let psi = |u: f64| u * u * u - u;
        // V(psi) = integral of |3u^2 - 1| over [0,1]
        let variation = {
            let c = (1.0f64 / 3.0).sqrt();
            let anti = |u: f64| u * u * u - u;
            (anti(c) - anti(0.0)).abs() + (anti(1.0) - anti(c)).abs()
        };
        let exact = -0.25; // 1/4 - 1/2
        let seqs = [RealSeq::kronecker_frac(GOLDEN)];
        let r = qmc_integrate(|p| psi(p[0]), &seqs, n).unwrap();
        assert!((r.value - exact).abs() <= 10.0 * dstar * variation);
    }

    #[test]
    fn map_cosine_equals_direct_cosine() {
        let base = RealSeq::kronecker_frac(SQRT2);
        let mapped = map_independent(&[base], &[PiecewiseMonotone::cosine_2pi()]).unwrap();
        let direct = RealSeq::cosine(SQRT2);
        for n in [1u64, 10, 1000, 99_991] {
            assert_eq!(mapped[0].eval(n), direct.eval(n));
        }
    }

    #[test]
    fn map_identity_is_noop() {
        let base = RealSeq::kronecker_frac(SQRT2);
        let mapped = map_independent(&[base.clone()], &[PiecewiseMonotone::identity()]).unwrap();
        for n in [1u64, 7, 5000] {
            assert_eq!(mapped[0].eval(n), base.eval(n));
        }
    }

    #[test]
    fn map_threshold_has_half_density() {
        let base = RealSeq::kronecker_frac(GOLDEN);
        let mapped = map_independent(&[base], &[PiecewiseMonotone::threshold(0.5)]).unwrap();
        let n = 100_000u64;
        let ones: f64 = (1..=n).map(|k| mapped[0].eval(k)).sum::<f64>();
        assert!((ones / n as f64 - 0.5).abs() <= 2e-4);
    }

    #[test]
    fn map_rejects_non_monotone_piece() {
        let wiggle = MonotonePiece::new(0.0, 1.0, |u| (2.0 * std::f64::consts::TAU * u).sin());
        assert!(matches!(
            PiecewiseMonotone::new("wiggle", vec![wiggle]),
            Err(Error::NonMonotonePiece { index: 0 })
        ));
    }

    #[test]
    fn map_rejects_gappy_pieces() {
        let a = MonotonePiece::new(0.0, 0.4, |u| u);
        let b = MonotonePiece::new(0.6, 1.0, |u| u);
        assert!(matches!(
            PiecewiseMonotone::new("gap", vec![a, b]),
            Err(Error::PiecesDoNotTile)
        ));
    }
}

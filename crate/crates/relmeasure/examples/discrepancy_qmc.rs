//! Star discrepancy of Kronecker sequences and equidistribution-based
//! numerical integration.
//!
//! Run with: cargo run --example discrepancy_qmc

use relmeasure::equidistribution::{frac_mul, qmc_integrate, star_discrepancy_1d};
use relmeasure::sequences::RealSeq;

const GOLDEN: f64 = 1.618033988749895;
const SQRT2: f64 = std::f64::consts::SQRT_2;
const SQRT3: f64 = 1.7320508075688772;

fn main() {
    // D*_N ~ log N / N for quadratic irrationals; golden is the best
    for n in [1_000u64, 10_000, 100_000] {
        let pts: Vec<f64> = (1..=n).map(|k| frac_mul(k, GOLDEN)).collect();
        let d = star_discrepancy_1d(&pts).unwrap();
        println!("D*_N(golden) at N = {n:>6}: {d:.3e}  (log N / N = {:.3e})", (n as f64).ln() / n as f64);
    }

    // integrate u*v over the unit square along (n sqrt2, n sqrt3)
    let seqs = [RealSeq::kronecker_frac(SQRT2), RealSeq::kronecker_frac(SQRT3)];
    let r = qmc_integrate(|p| p[0] * p[1], &seqs, 1_000_000).unwrap();
    println!("\nintegral of uv estimate = {:.8} (exact 0.25)", r.value);
    for &(n, v) in r.trace.iter().rev().take(3).collect::<Vec<_>>().iter().rev() {
        println!("  N = {n:>8}: {v:.8}");
    }

    // a cubic in one dimension
    let seqs = [RealSeq::kronecker_frac(GOLDEN)];
    let r = qmc_integrate(|p| p[0] * p[0] * p[0] - p[0], &seqs, 1_000_000).unwrap();
    println!("integral of u^3 - u estimate = {:.8} (exact -0.25)", r.value);
}

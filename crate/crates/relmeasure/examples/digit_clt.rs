//! The sum-of-binary-digits law: s2(n) over [0, 2^m) is exactly
//! Binomial(m, 1/2), and the log2(n)-normalized statistic tends to normal.
//!
//! Run with: cargo run --release --example digit_clt

use relmeasure::arithmetic::digit_clt_cdf;
use relmeasure::gaussian::{binomial_coefficient, ks_step_vs_cdf, StdNormal};

fn main() {
    let d = digit_clt_cdf(20).unwrap();
    println!("m = 20: s2 counts over [0, 2^20) vs C(20, k):");
    for k in [0usize, 5, 10, 15, 20] {
        println!(
            "  k = {k:>2}: count {:>8}  binomial {:>8}",
            d.exact_counts[k],
            binomial_coefficient(20, k as u32)
        );
    }
    let exact_ks = ks_step_vs_cdf(
        d.exact_law.normalized_jumps(10.0, 5f64.sqrt()).into_iter(),
        &StdNormal,
    );
    println!("exact law (normalized) sup |F - Phi| = {exact_ks:.4}");

    // the empirical statistic uses each sample's own log2(n) scale and
    // still converges
    for m in [12u32, 16, 20, 24] {
        let d = digit_clt_cdf(m).unwrap();
        println!(
            "empirical KS at m = {m:>2}: {:.4}  (samples: {})",
            d.empirical.ks_to(&StdNormal),
            d.empirical.total()
        );
    }
}

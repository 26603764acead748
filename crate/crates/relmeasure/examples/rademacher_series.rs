//! Weighted Rademacher series: square-summable weights converge almost
//! everywhere, non-square-summable ones diverge, and the weight condition
//! decides whether the normalized sums go normal.
//!
//! Run with: cargo run --example rademacher_series

use relmeasure::lacunary::{
    lindeberg_bernoulli, rademacher_series_probe, weight_condition_check, WeightSequence,
};

fn main() {
    let samples: Vec<f64> = (1..=256).map(|i| (i as f64 - 0.5) / 256.0).collect();

    // a_k = 1/k: square-summable, the partial sums settle
    let probe = rademacher_series_probe(&WeightSequence::harmonic(), &samples, 4096).unwrap();
    println!(
        "a_k = 1/k:      cauchy fraction {:.3}, tail sum {:.2e}, divergence suspected: {}",
        probe.cauchy_fraction, probe.tail_sum, probe.divergence_suspected
    );

    // a_k = 1/sqrt(k): the squared tail alone carries ln 2 of mass
    let probe = rademacher_series_probe(&WeightSequence::inv_sqrt(), &samples, 4096).unwrap();
    println!(
        "a_k = 1/sqrt k: cauchy fraction {:.3}, tail sum {:.4} (ln 2 = {:.4}), divergence suspected: {}",
        probe.cauchy_fraction,
        probe.tail_sum,
        std::f64::consts::LN_2,
        probe.divergence_suspected
    );

    // the CLT weight condition max |a_k| / sqrt(sum a_k^2)
    println!("\nweight condition ratios (must vanish for the CLT):");
    for (label, w, n) in [
        ("a_k = 1", WeightSequence::constant(1.0), 10_000u32),
        ("a_k = 1/k", WeightSequence::harmonic(), 10_000),
        ("a_k = 2^k", WeightSequence::from_fn("2^k", |k| 2f64.powi(k as i32)), 20),
    ] {
        let r = weight_condition_check(&w, n).unwrap();
        println!("  {label:>10}: r_{n} = {r:.4}");
    }

    // Lindeberg sums for centered Bernoulli families
    let coins = vec![0.5; 100];
    let (l, s) = lindeberg_bernoulli(&coins, 0.5).unwrap();
    println!("\n100 fair coins, eps = 0.5: L_n = {l}, s_n = {s}");
    let primes = [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47];
    let p: Vec<f64> = primes.iter().map(|&q| 1.0 / q as f64).collect();
    for eps in [0.5, 0.9] {
        let (l, s) = lindeberg_bernoulli(&p, eps).unwrap();
        println!("prime reciprocals (15 terms), eps = {eps}: L_n = {l:.4}, s_n = {s:.4}");
    }
}

//! The convolution algebra of integer-valued laws: sums of independent
//! digit indicators convolve, and Bernoulli powers are binomial.
//!
//! Run with: cargo run --example convolution_algebra

use relmeasure::gaussian::binomial_pmf;
use relmeasure::sequences::{rho, rho_convolve, DiscreteLaw, RealSeq};

fn main() {
    // law of 1_{B1} + 1_{B2} counted directly...
    let n = 1u64 << 20;
    let sum = RealSeq::new("b1+b2", Some((0.0, 2.0)), |n| ((n & 1) + ((n >> 1) & 1)) as f64);
    let direct = rho(&sum, n).unwrap();

    // ...equals the convolution of the marginals
    let b1 = rho(&RealSeq::digit_indicator(1), n).unwrap();
    let b2 = rho(&RealSeq::digit_indicator(2), n).unwrap();
    let conv = rho_convolve(&b1, &b2);

    println!("law of 1_B1 + 1_B2 at n = 2^20:");
    for k in 0..=2i64 {
        println!(
            "  mass({k}) direct = {:.6}, convolved = {:.6}",
            direct.mass(k),
            conv.mass(k)
        );
    }

    // ten-fold Bernoulli(1/2) is Binomial(10, 1/2), mass for mass
    let b = DiscreteLaw::bernoulli_half();
    let mut law = b.clone();
    for _ in 1..10 {
        law = law.convolve(&b);
    }
    println!("\nten-fold Bernoulli(1/2) vs Binomial(10, 1/2):");
    for k in [0i64, 2, 5, 8, 10] {
        println!(
            "  mass({k:>2}) = {:.10}  binomial = {:.10}",
            law.mass(k),
            binomial_pmf(10, k)
        );
    }
    println!("total mass: {}", law.total_mass());
}

//! Central limit behavior of cosine sums with rationally independent
//! frequencies, verified twice: by direct sampling and by convolving the
//! arcsine law with itself.
//!
//! Run with: cargo run --release --example cosine_clt

use relmeasure::gaussian::{ks_distance, Scaled, StdNormal};
use relmeasure::sequences::{cosine_sum_cdf, iterated_self_convolution, Arcsine, SumMode};

fn main() {
    let primes = [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];
    let grid: Vec<f64> = (0..=1024).map(|i| -6.0 + 12.0 * i as f64 / 1024.0).collect();

    // route 1: sample sum_j cos(2 pi sqrt(p_j) n) / sqrt(m/2) over n
    for m in [1usize, 4, 16] {
        let alphas: Vec<f64> = primes[..m].iter().map(|&p| (p as f64).sqrt()).collect();
        let cdf = cosine_sum_cdf(&alphas, 1_000_000, &grid, SumMode::DiscreteN).unwrap();
        println!("m = {m:>2}: empirical KS to Phi = {:.5}", cdf.sup_distance_to(&StdNormal));
    }

    // route 2: the same law is the m-fold convolution of the arcsine law
    let conv = iterated_self_convolution(&Arcsine, 16, 4097).unwrap();
    let normalized = Scaled::new(conv, (16f64 / 2.0).sqrt());
    let ks = ks_distance(&normalized, &StdNormal, &grid).unwrap();
    println!("m = 16: convolution KS to Phi = {ks:.5}");

    // dependent frequencies break the normal limit
    let equal = [std::f64::consts::SQRT_2; 2];
    let cdf = cosine_sum_cdf(&equal, 200_000, &grid, SumMode::DiscreteN).unwrap();
    println!(
        "dependent pair (equal frequencies): KS to Phi = {:.3} (far from normal)",
        cdf.sup_distance_to(&StdNormal)
    );

    // continuous time gives the same limit
    let alphas: Vec<f64> = primes[..8].iter().map(|&p| (p as f64).sqrt()).collect();
    let cdf = cosine_sum_cdf(&alphas, 1 << 20, &grid, SumMode::continuous()).unwrap();
    println!("m = 8 continuous time: KS to Phi = {:.5}", cdf.sup_distance_to(&StdNormal));
}

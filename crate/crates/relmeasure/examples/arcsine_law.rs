//! The distribution function of cos(2 pi alpha n): the arcsine law, its
//! Stieltjes mean, and the mean/average cross-check.
//!
//! Run with: cargo run --example arcsine_law

use relmeasure::gaussian::Cdf;
use relmeasure::sequences::{
    arcsine_cdf, relative_average, relative_cdf, stieltjes_mean, Arcsine, RealSeq,
};

const SQRT2: f64 = std::f64::consts::SQRT_2;

fn main() {
    let seq = RealSeq::cosine(SQRT2);
    let grid: Vec<f64> = (0..=512).map(|i| -1.0 + 2.0 * i as f64 / 512.0).collect();
    let cdf = relative_cdf(&seq, 1_000_000, &grid).unwrap();

    println!("empirical CDF of cos(2 pi sqrt2 n) vs the arcsine law:");
    for &z in &[-0.9, -0.5, 0.0, 0.5, 0.9] {
        println!("  F({z:+.1}) = {:.5}   arcsine = {:.5}", cdf.eval(z), arcsine_cdf(z));
    }
    println!("sup distance = {:.2e}", cdf.sup_distance_to(&Arcsine));

    // the relative average equals the Stieltjes mean of the distribution
    let avg = relative_average(&seq, 1_000_000, 8);
    let sm = stieltjes_mean(&cdf).unwrap();
    println!("\nrelative average = {:+.2e}", avg.value);
    println!("stieltjes mean   = {:+.2e}", sm);

    // a two-valued sequence makes the identity exact
    let alt = RealSeq::new("(-1)^n", Some((-1.0, 1.0)), |n| if n % 2 == 0 { 1.0 } else { -1.0 });
    let cdf = relative_cdf(&alt, 100_000, &[-1.0, 0.0, 1.0]).unwrap();
    println!("alternating sequence: stieltjes mean = {}", stieltjes_mean(&cdf).unwrap());
}

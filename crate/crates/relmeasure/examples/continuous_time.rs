//! The continuous-time relative measure on (0, infinity) and composition
//! with finitely measurable maps.
//!
//! Run with: cargo run --example continuous_time

use relmeasure::density::continuous_density;
use relmeasure::equidistribution::{map_independent, PiecewiseMonotone};
use relmeasure::sequences::RealSeq;

const SQRT2: f64 = std::f64::consts::SQRT_2;

fn main() {
    // half of every period of cos(2 pi t) lies below zero
    let est = continuous_density(|t| (std::f64::consts::TAU * t).cos() <= 0.0, 1e4, 1e-3, 12)
        .unwrap();
    println!("density of {{t : cos(2 pi t) <= 0}}     = {:.5} ({:?})",
        est.checkpoints.last().unwrap().1, est.verdict);

    // the sublevel set {cos(2 pi sqrt2 t) <= -1/2} fills a third of each period
    let est = continuous_density(
        |t| (std::f64::consts::TAU * SQRT2 * t).cos() <= -0.5,
        1e4,
        1e-3,
        12,
    )
    .unwrap();
    println!("density of {{t : cos <= -1/2}}          = {:.5} ({:?})",
        est.checkpoints.last().unwrap().1, est.verdict);

    // bounded sets vanish in the limit
    let est = continuous_density(|t| t < 1.0, 1e4, 0.01, 16).unwrap();
    println!("density of (0, 1)                    = {:.5} ({:?})",
        est.checkpoints.last().unwrap().1, est.verdict);

    // a monotone-piece map applied to an equidistributed sequence keeps
    // measurability: cos pieces turn frac(n sqrt2) into cos(2 pi sqrt2 n)
    let base = RealSeq::kronecker_frac(SQRT2);
    let mapped = map_independent(&[base], &[PiecewiseMonotone::cosine_2pi()]).unwrap();
    let direct = RealSeq::cosine(SQRT2);
    println!(
        "\nmapped vs direct cosine at n = 10^6: {} vs {}",
        mapped[0].eval(1_000_000),
        direct.eval(1_000_000)
    );

    // thresholding gives a Bernoulli-like indicator sequence
    let base = RealSeq::kronecker_frac(1.618033988749895);
    let ind = map_independent(&[base], &[PiecewiseMonotone::threshold(0.5)]).unwrap();
    let n = 100_000u64;
    let ones: f64 = (1..=n).map(|k| ind[0].eval(k)).sum();
    println!("threshold map density: {:.5} (limit 1/2)", ones / n as f64);
}

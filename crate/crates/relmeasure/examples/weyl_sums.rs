//! Weyl's criterion in action: averaged exponential sums vanish exactly
//! when the underlying sequence equidistributes.
//!
//! Run with: cargo run --example weyl_sums

use relmeasure::equidistribution::weyl_sum;
use relmeasure::sequences::RealSeq;

const GOLDEN: f64 = 1.618033988749895;

fn main() {
    // irrational rotation: the averaged sum decays like 1/N
    let seq = RealSeq::kronecker_frac(GOLDEN);
    let r = weyl_sum(&[seq], &[1], 1_000_000).unwrap();
    println!("frac(n*golden), h=1:");
    for &(n, m) in &r.trace {
        println!("  N = {n:>8}  |S_N| = {m:.3e}");
    }

    // rational frequency resonates: |S_N| = 1 exactly
    let r = weyl_sum(&[RealSeq::kronecker_frac(0.5)], &[2], 1000).unwrap();
    println!("\nfrac(n/2), h=2: |S_N| = {}", r.magnitude);

    // joint equidistribution of (n sqrt2, n sqrt3): the mixed character
    // also vanishes
    let seqs = [
        RealSeq::kronecker_frac(std::f64::consts::SQRT_2),
        RealSeq::kronecker_frac(1.7320508075688772),
    ];
    let r = weyl_sum(&seqs, &[1, -1], 1_000_000).unwrap();
    println!("(n sqrt2, n sqrt3), h=(1,-1): |S_N| = {:.3e}", r.magnitude);
}

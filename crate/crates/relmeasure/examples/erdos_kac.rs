//! The Erdos-Kac law at desk scale: omega(n) behaves like a normal variable
//! with mean and variance ln ln N.
//!
//! Run with: cargo run --release --example erdos_kac

use relmeasure::arithmetic::{erdos_kac_cdf, hardy_ramanujan_fraction, EkNormalization};
use relmeasure::gaussian::StdNormal;

fn main() {
    let n_max = 1_000_000u64;
    let lnln = (n_max as f64).ln().ln();

    let r = erdos_kac_cdf(n_max, EkNormalization::ByNMax).unwrap();
    println!("n_max = {n_max}, ln ln N = {lnln:.4}");
    println!(
        "mean omega = {:.4} (shift over ln ln N: {:.4}, Mertens constant is 0.2615)",
        r.omega_mean,
        r.omega_mean - lnln
    );
    println!("variance   = {:.4}", r.omega_variance);
    println!("omega histogram: {:?}", &r.omega_histogram[..10]);
    println!(
        "sup |F - Phi| = {:.4}   (at attained values only: {:.4})",
        r.cdf.ks_to(&StdNormal),
        r.cdf.ks_at_atoms(&StdNormal)
    );

    // the distance shrinks with N, glacially (the scale is 1/sqrt(lnln N))
    for n in [1_000u64, 100_000, 1_000_000] {
        let r = erdos_kac_cdf(n, EkNormalization::ByNMax).unwrap();
        println!("KS at n_max = {:>9}: {:.4}", n, r.cdf.ks_to(&StdNormal));
    }

    // per-sample normalization (ln ln n instead of ln ln N)
    let r = erdos_kac_cdf(n_max, EkNormalization::by_sample()).unwrap();
    println!("per-sample normalization KS: {:.4}", r.cdf.ks_to(&StdNormal));

    // Hardy-Ramanujan: almost every n has about ln ln N distinct prime
    // factors
    for eps in [0.5, 1.0, 2.0] {
        let f = hardy_ramanujan_fraction(n_max, eps).unwrap();
        println!("fraction with |omega/lnlnN - 1| >= {eps}: {f:.5}");
    }
}

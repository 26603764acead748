//! Salem-Zygmund: cosine sums along a Hadamard gap sequence behave like
//! sums of independent variables and go normal.
//!
//! Run with: cargo run --release --example salem_zygmund

use relmeasure::gaussian::{Scaled, StdNormal};
use relmeasure::lacunary::{hadamard_check, salem_zygmund_cdf, GapSequence};
use relmeasure::sequences::Arcsine;

fn main() {
    let dyadic = GapSequence::powers_of_two();
    let gap = hadamard_check(&dyadic, 64).unwrap();
    println!("n_k = 2^k: min gap ratio {} (holds: {})", gap.min_ratio, gap.holds);

    // one term is just a cosine: the arcsine law again
    let cdf = salem_zygmund_cdf(&dyadic, 1, 20_000).unwrap();
    println!(
        "m =   1: KS to rescaled arcsine = {:.2e}",
        cdf.ks_to(&Scaled::new(Arcsine, 0.5f64.sqrt()))
    );

    // the normalized sums go normal as the term count grows
    for m in [16u32, 64, 256] {
        let cdf = salem_zygmund_cdf(&dyadic, m, 100_000).unwrap();
        println!(
            "m = {m:>3}: mean {:+.4}, variance {:.4}, KS to Phi {:.4}",
            cdf.mean(),
            cdf.variance(),
            cdf.ks_to(&StdNormal)
        );
    }

    // a thinner gap sequence works too
    let triadic = GapSequence::powers_of(3);
    let cdf = salem_zygmund_cdf(&triadic, 128, 50_000).unwrap();
    println!("n_k = 3^k, m = 128: KS to Phi {:.4}", cdf.ks_to(&StdNormal));

    // n_k = k is not lacunary and is rejected
    let linear = GapSequence::from_fn("k", |k| k as u64);
    println!(
        "n_k = k rejected: {}",
        salem_zygmund_cdf(&linear, 256, 10_000).unwrap_err()
    );
}

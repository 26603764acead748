//! The dyadic-dilation CLT: sums of f(2^k x) go normal with a variance
//! constant that remembers the correlations between dilates.
//!
//! Run with: cargo run --release --example kac_dilations

use relmeasure::gaussian::StdNormal;
use relmeasure::lacunary::{kac_clt_cdf, kac_sigma2, rademacher, PeriodicFn};

fn main() {
    let cos = PeriodicFn::cosine();
    let pair = PeriodicFn::callable("cos + cos2", |t| {
        (std::f64::consts::TAU * t).cos() + (2.0 * std::f64::consts::TAU * t).cos()
    });
    let rad = PeriodicFn::callable("r1", |t| rademacher(1, t) as f64);

    // sigma^2 is NOT just the L2 mass: the k = 1 dilate of cos + cos2
    // correlates and contributes twice the cross term
    for f in [&cos, &pair, &rad] {
        println!("sigma^2({}) = {:.6}", f.label(), kac_sigma2(f, 10).unwrap());
    }

    // degenerate construction: the cross term cancels the L2 mass exactly
    let cancel = PeriodicFn::callable("cos - cos2", |t| {
        (std::f64::consts::TAU * t).cos() - (2.0 * std::f64::consts::TAU * t).cos()
    });
    println!("sigma^2(cos - cos2) = {:.2e}", kac_sigma2(&cancel, 10).unwrap());
    println!("CLT for it: {}", kac_clt_cdf(&cancel, 64, 10_000).unwrap_err());

    // normalized dilation sums against the normal law
    for n in [16u32, 64, 256] {
        let clt = kac_clt_cdf(&cos, n, 100_000).unwrap();
        println!(
            "cos, N = {n:>3}: KS to Phi = {:.4} (sigma^2 = {})",
            clt.cdf.ks_to(&StdNormal),
            clt.sigma2
        );
    }
    let clt = kac_clt_cdf(&rad, 256, 100_000).unwrap();
    println!("rademacher, N = 256: KS to Phi = {:.4}", clt.cdf.ks_to(&StdNormal));
}

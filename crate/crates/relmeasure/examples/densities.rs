//! Exact and truncated natural densities, an oscillating counterexample,
//! and the no-measure witness for prime residue classes.
//!
//! Run with: cargo run --example densities

use relmeasure::density::{
    density_estimate, density_exact, no_measure_witness, oscillation_probe, IntegerSetSpec,
};

fn main() {
    // exact densities of symbolic sets
    for spec in [
        IntegerSetSpec::ap(6, 6),
        IntegerSetSpec::ap(7, 3),
        IntegerSetSpec::digit(3),
        IntegerSetSpec::Intersection(vec![IntegerSetSpec::ap(2, 2), IntegerSetSpec::ap(4, 4)]),
    ] {
        println!("density {:>28} = {}", spec.describe(), density_exact(&spec).unwrap());
    }

    // a truncated estimate converging to 1/3
    let est = density_estimate(&IntegerSetSpec::ap(3, 3), 1_000_000, 10).unwrap();
    println!("\nestimate ap(3,3): verdict {:?}, value {:?}", est.verdict, est.value);

    // the block counterexample has no density: partial densities along
    // powers of two swing between 1/3 and 2/3 forever
    let est = density_estimate(&IntegerSetSpec::BlockExample, 1 << 22, 16).unwrap();
    println!(
        "block example: verdict {:?}, liminf {:.4}, limsup {:.4}",
        est.verdict, est.liminf_probe, est.limsup_probe
    );
    let exps: Vec<u32> = (10..=22).collect();
    let (lo, hi) = oscillation_probe(&IntegerSetSpec::BlockExample, &exps).unwrap();
    println!("oscillation probe at 2^10..2^22: ({lo:.4}, {hi:.4})");

    // equal residue classes force every singleton below 1/p, so no finite
    // sigma-additive measure can see them all
    let report = no_measure_witness(97).unwrap();
    println!(
        "\nno-measure witness up to 97: {} primes checked, singleton bound {}, sigma additive: {}",
        report.rows.len(),
        report.singleton_bound,
        report.sigma_additive
    );
}

//! Product-rule independence defects for set families and for sequences
//! over interval grids.
//!
//! Run with: cargo run --example independence_defects

use relmeasure::density::IntegerSetSpec;
use relmeasure::independence::{
    sequence_independence_defect, set_family_defect, DefectMode,
};
use relmeasure::sequences::{Interval, RealSeq};

fn main() {
    // divisibility by distinct primes: every subfamily obeys the product
    // rule exactly
    let primes: Vec<IntegerSetSpec> =
        [2u64, 3, 5, 7, 11, 13].iter().map(|&p| IntegerSetSpec::ap(p, p)).collect();
    let rep = set_family_defect(&primes, 0, DefectMode::Exact).unwrap();
    println!(
        "first six primes: {} subsets checked, max defect = {}",
        rep.subsets_checked, rep.max_defect
    );

    // nested progressions are the canonical dependent pair
    let nested = [IntegerSetSpec::ap(2, 2), IntegerSetSpec::ap(4, 4)];
    let rep = set_family_defect(&nested, 0, DefectMode::Exact).unwrap();
    println!("multiples of 2 vs multiples of 4: max defect = {}", rep.max_defect);

    // binary digit positions are independent
    let digits: Vec<IntegerSetSpec> = (1..=4).map(IntegerSetSpec::digit).collect();
    let rep = set_family_defect(&digits, 0, DefectMode::Exact).unwrap();
    println!("digit sets 1..4: max defect = {}", rep.max_defect);

    // empirical mode converges to the exact defect
    for n_max in [10_000u64, 100_000, 1_000_000] {
        let rep = set_family_defect(&nested, n_max, DefectMode::Empirical).unwrap();
        println!("empirical defect at n={n_max}: {:.6} (exact 0.125)", rep.max_defect);
    }

    // cosines with rationally independent frequencies, quartile intervals
    let quartiles = vec![
        Interval::closed(-1.0, -0.5),
        Interval::left_open(-0.5, 0.0),
        Interval::left_open(0.0, 0.5),
        Interval::left_open(0.5, 1.0),
    ];
    let seqs = [
        RealSeq::cosine(std::f64::consts::SQRT_2),
        RealSeq::cosine(1.7320508075688772),
    ];
    let rep = sequence_independence_defect(&seqs, &[quartiles.clone(), quartiles], 1_000_000)
        .unwrap();
    println!(
        "\ncos(2pi sqrt2 n) vs cos(2pi sqrt3 n) over quartiles: max defect = {:.2e}",
        rep.max_defect
    );

    // the same sequence against itself is maximally dependent
    let x = RealSeq::cosine(std::f64::consts::SQRT_2);
    let grids = vec![vec![Interval::closed(0.0, 1.0)]; 2];
    let rep = sequence_independence_defect(&[x.clone(), x], &grids, 100_000).unwrap();
    println!("self-pair defect: {:.4} (theory 1/4)", rep.max_defect);
}

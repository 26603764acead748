//! Product-rule defects: how far a family of integer sets (or a family of
//! sequences over interval preimages) is from being independent under the
//! natural density.

use num::rational::BigRational;
use num::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::density::{density_exact, IntegerSetSpec};
use crate::error::{Error, Result};
use crate::parallel::{par_map_ranges, segment_ranges, DEFAULT_CHUNK};
use crate::sequences::{Interval, RealSeq};

/// Cap on family size; the subset lattice doubles per element.
pub const FAMILY_CAP: usize = 20;

/// Worst product-rule violation found across all checked subfamilies.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IndependenceReport {
    pub family_size: usize,
    pub subsets_checked: u64,
    pub max_defect: f64,
    /// Indices (into the input family) of the subfamily attaining the max.
    pub worst_subset: Vec<usize>,
    pub exact: bool,
}

/// How joint densities are computed in [`set_family_defect`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DefectMode {
    /// Rational arithmetic on symbolic specs; defects of truly independent
    /// families come out exactly zero.
    Exact,
    /// One streaming membership pass up to n_max; truncated densities.
    Empirical,
}

/// Check the product rule over every subfamily of size >= 2.
pub fn set_family_defect(
    specs: &[IntegerSetSpec],
    n_max: u64,
    mode: DefectMode,
) -> Result<IndependenceReport> {
    let m = specs.len();
    if !(2..=FAMILY_CAP).contains(&m) {
        return Err(Error::CombinatorialBlowup { size: m, cap: FAMILY_CAP });
    }
    match mode {
        DefectMode::Exact => exact_family_defect(specs),
        DefectMode::Empirical => empirical_family_defect(specs, n_max),
    }
}

fn exact_family_defect(specs: &[IntegerSetSpec]) -> Result<IndependenceReport> {
    let m = specs.len();
    let singles: Vec<BigRational> = specs.iter().map(density_exact).collect::<Result<_>>()?;
    let mut max_defect = BigRational::new(0.into(), 1.into());
    let mut worst: Vec<usize> = Vec::new();
    let mut checked = 0u64;
    for mask in 0u32..(1 << m) {
        if mask.count_ones() < 2 {
            continue;
        }
        checked += 1;
        let members: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 1).collect();
        let joint = density_exact(&IntegerSetSpec::Intersection(
            members.iter().map(|&i| specs[i].clone()).collect(),
        ))?;
        let mut product = BigRational::new(1.into(), 1.into());
        for &i in &members {
            product *= singles[i].clone();
        }
        let defect = if joint >= product { joint - product } else { product - joint };
        if defect > max_defect {
            max_defect = defect;
            worst = members;
        }
    }
    Ok(IndependenceReport {
        family_size: m,
        subsets_checked: checked,
        max_defect: max_defect.to_f64().unwrap_or(f64::NAN),
        worst_subset: worst,
        exact: true,
    })
}

fn empirical_family_defect(specs: &[IntegerSetSpec], n_max: u64) -> Result<IndependenceReport> {
    let m = specs.len();
    if n_max < 2 {
        return Err(Error::InvalidInput("empirical mode needs n_max >= 2".into()));
    }
    let size = 1usize << m;
    // chunk histograms over the full membership mask, merged in order
    let chunk = DEFAULT_CHUNK.max(n_max / 256);
    let ranges = segment_ranges(1, n_max + 1, &[], chunk);
    let partials = par_map_ranges(&ranges, |a, b| {
        let mut hist = vec![0u64; size];
        for n in a..b {
            let mut mask = 0usize;
            for (i, spec) in specs.iter().enumerate() {
                mask |= (spec.contains(n) as usize) << i;
            }
            hist[mask] += 1;
        }
        hist
    });
    let mut hist = vec![0u64; size];
    for part in partials {
        for (h, p) in hist.iter_mut().zip(part) {
            *h += p;
        }
    }
    // superset sums: joint[s] = #{n : every member of s is present}
    let mut joint = hist;
    for bit in 0..m {
        for mask in 0..size {
            if mask & (1 << bit) == 0 {
                joint[mask] += joint[mask | (1 << bit)];
            }
        }
    }
    let nf = n_max as f64;
    let marginal: Vec<f64> = (0..m).map(|i| joint[1 << i] as f64 / nf).collect();
    let mut max_defect = -1.0f64;
    let mut worst = Vec::new();
    let mut checked = 0u64;
    for mask in 0..size {
        if (mask as u32).count_ones() < 2 {
            continue;
        }
        checked += 1;
        let mut product = 1.0f64;
        for (i, p) in marginal.iter().enumerate() {
            if mask >> i & 1 == 1 {
                product *= p;
            }
        }
        let defect = (joint[mask] as f64 / nf - product).abs();
        if defect > max_defect {
            max_defect = defect;
            worst = (0..m).filter(|i| mask >> i & 1 == 1).collect();
        }
    }
    Ok(IndependenceReport {
        family_size: m,
        subsets_checked: checked,
        max_defect,
        worst_subset: worst,
        exact: false,
    })
}

/// Product-rule defect for sequences over caller-supplied interval grids:
/// every pair (and every triple when `tuple_cap` is 3) of sequences is
/// checked over all combinations of their intervals.
pub fn sequence_independence_defect(
    seqs: &[RealSeq],
    interval_grids: &[Vec<Interval>],
    n_max: u64,
) -> Result<IndependenceReport> {
    sequence_independence_defect_with(seqs, interval_grids, n_max, 2)
}

pub fn sequence_independence_defect_with(
    seqs: &[RealSeq],
    interval_grids: &[Vec<Interval>],
    n_max: u64,
    tuple_cap: usize,
) -> Result<IndependenceReport> {
    let m = seqs.len();
    if m < 2 || interval_grids.len() != m {
        return Err(Error::InvalidInput(
            "need >= 2 sequences and one interval grid per sequence".into(),
        ));
    }
    if !(2..=3).contains(&tuple_cap) {
        return Err(Error::InvalidInput("tuple_cap must be 2 or 3".into()));
    }
    for (index, grid) in interval_grids.iter().enumerate() {
        if grid.is_empty() {
            return Err(Error::EmptyIntervalGrid { index });
        }
    }
    if n_max < 10_000 {
        return Err(Error::InvalidInput("sequence defects need n_max >= 10^4".into()));
    }

    // flat layout: slot(i, a) indexes sequence i's interval a
    let offsets: Vec<usize> = interval_grids
        .iter()
        .scan(0usize, |acc, g| {
            let here = *acc;
            *acc += g.len();
            Some(here)
        })
        .collect();
    let slots: usize = interval_grids.iter().map(|g| g.len()).sum();

    struct Counts {
        single: Vec<u64>,
        pair: Vec<u64>,
        triple: Vec<u64>,
    }
    let pair_len = slots * slots;
    let triple_len = if tuple_cap >= 3 { slots * slots * slots } else { 0 };

    let ranges = segment_ranges(1, n_max + 1, &[], DEFAULT_CHUNK);
    let partials = par_map_ranges(&ranges, |a, b| {
        let mut c = Counts {
            single: vec![0u64; slots],
            pair: vec![0u64; pair_len],
            triple: vec![0u64; triple_len],
        };
        let mut hits: Vec<usize> = Vec::with_capacity(slots);
        for n in a..b {
            hits.clear();
            for (i, seq) in seqs.iter().enumerate() {
                let v = seq.eval(n);
                for (ia, interval) in interval_grids[i].iter().enumerate() {
                    if interval.contains(v) {
                        hits.push(offsets[i] + ia);
                    }
                }
            }
            for (pos, &s) in hits.iter().enumerate() {
                c.single[s] += 1;
                for &t in &hits[pos + 1..] {
                    c.pair[s * slots + t] += 1;
                }
                if tuple_cap >= 3 {
                    for (pos2, &t) in hits.iter().enumerate().skip(pos + 1) {
                        for &u in &hits[pos2 + 1..] {
                            c.triple[(s * slots + t) * slots + u] += 1;
                        }
                    }
                }
            }
        }
        c
    });
    let mut total = Counts {
        single: vec![0u64; slots],
        pair: vec![0u64; pair_len],
        triple: vec![0u64; triple_len],
    };
    for part in partials {
        for (x, y) in total.single.iter_mut().zip(part.single) {
            *x += y;
        }
        for (x, y) in total.pair.iter_mut().zip(part.pair) {
            *x += y;
        }
        for (x, y) in total.triple.iter_mut().zip(part.triple) {
            *x += y;
        }
    }

    let nf = n_max as f64;
    let mut max_defect = -1.0f64;
    let mut worst = Vec::new();
    let mut checked = 0u64;
    for i in 0..m {
        for j in (i + 1)..m {
            for ia in 0..interval_grids[i].len() {
                for jb in 0..interval_grids[j].len() {
                    checked += 1;
                    let s = offsets[i] + ia;
                    let t = offsets[j] + jb;
                    let joint = total.pair[s * slots + t] as f64 / nf;
                    let product =
                        (total.single[s] as f64 / nf) * (total.single[t] as f64 / nf);
                    let defect = (joint - product).abs();
                    if defect > max_defect {
                        max_defect = defect;
                        worst = vec![i, j];
                    }
                }
            }
        }
    }
    if tuple_cap >= 3 {
        for i in 0..m {
            for j in (i + 1)..m {
                for k in (j + 1)..m {
                    for ia in 0..interval_grids[i].len() {
                        for jb in 0..interval_grids[j].len() {
                            for kc in 0..interval_grids[k].len() {
                                checked += 1;
                                let s = offsets[i] + ia;
                                let t = offsets[j] + jb;
                                let u = offsets[k] + kc;
                                let joint =
                                    total.triple[(s * slots + t) * slots + u] as f64 / nf;
                                let product = (total.single[s] as f64 / nf)
                                    * (total.single[t] as f64 / nf)
                                    * (total.single[u] as f64 / nf);
                                let defect = (joint - product).abs();
                                if defect > max_defect {
                                    max_defect = defect;
                                    worst = vec![i, j, k];
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(IndependenceReport {
        family_size: m,
        subsets_checked: checked,
        max_defect,
        worst_subset: worst,
        exact: false,
    })
}

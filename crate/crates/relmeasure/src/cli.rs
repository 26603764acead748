//! Batch front end: every experiment as a subcommand with deterministic
//! CSV/JSON output.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::arithmetic::{self, EkNormalization};
use crate::density::{self, IntegerSetSpec};
use crate::equidistribution as equi;
use crate::error::Error;
use crate::gaussian::{ks_step_vs_cdf, StdNormal};
use crate::independence::{self, DefectMode};
use crate::lacunary::{self, GapSequence, PeriodicFn, WeightSequence};
use crate::sequences::{self, RealSeq, SumMode};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

/// Versioned summary envelope written next to every data file.
#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct Summary {
    pub schema: u32,
    pub subcommand: String,
    pub params: serde_json::Value,
    pub headline: serde_json::Value,
}

impl Summary {
    fn new(subcommand: &str, params: serde_json::Value, headline: serde_json::Value) -> Self {
        Summary { schema: 1, subcommand: subcommand.into(), params, headline }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "relmeasure",
    about = "Natural-density experiments: densities, independence defects, and central limit laws",
    version
)]
pub struct Cli {
    /// Run a reduced-size version of every experiment (CI smoke run).
    #[arg(long)]
    pub pilot: bool,

    /// Thread count for the parallel scans (0 = rayon default).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,

    /// Base path for output files: the data file lands at <output>.csv
    /// (or <output>.data.json with --format json) and the summary at
    /// <output>.json. Without it, the summary goes to stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Data file format.
    #[arg(long, global = true, value_parser = ["csv", "json"], default_value = "csv")]
    pub format: String,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Density of an integer set: exact value when available plus the
    /// checkpoint trace and oscillation probes.
    Density(DensityArgs),
    /// Product-rule defect of a family of integer sets.
    Independence(IndependenceArgs),
    /// Distinct-prime-factor statistic against the normal law.
    ErdosKac(ErdosKacArgs),
    /// Sum-of-binary-digits law: exact counts and the normalized CDF.
    DigitClt(DigitCltArgs),
    /// Averaged exponential sum for one integer character.
    Weyl(WeylArgs),
    /// Equidistribution average of a named integrand.
    Qmc(QmcArgs),
    /// Normalized cosine sum with rationally independent frequencies.
    CosineClt(CosineCltArgs),
    /// Salem-Zygmund experiment for a lacunary frequency sequence.
    Lacunary(LacunaryArgs),
    /// Dyadic-dilation CLT with its variance constant.
    KacClt(KacArgs),
    /// Weighted Rademacher series convergence probe.
    Rademacher(RademacherArgs),
}

#[derive(Debug, Args)]
#[command(after_help = "CSV columns: N,density (one row per checkpoint)")]
pub struct DensityArgs {
    /// Set spec: ap:<n>,<k> | digit:<j> | block-example | squares
    #[arg(long, default_value = "block-example")]
    pub set: String,
    #[arg(long, default_value_t = 1 << 22)]
    pub n_max: u64,
    #[arg(long, default_value_t = 16)]
    pub checkpoints: usize,
}

#[derive(Debug, Args)]
#[command(after_help = "CSV columns: field,value (family_size, subsets_checked, max_defect)")]
pub struct IndependenceArgs {
    /// Semicolon-separated family, e.g. "ap:2,2;ap:3,3;ap:5,5" or "digit:1;digit:2"
    #[arg(long, default_value = "ap:2,2;ap:3,3;ap:5,5")]
    pub family: String,
    #[arg(long, value_parser = ["exact", "empirical"], default_value = "exact")]
    pub mode: String,
    #[arg(long, default_value_t = 1_000_000)]
    pub n_max: u64,
}

#[derive(Debug, Args)]
#[command(after_help = "CSV columns: statistic,value,count (normalized omega histogram)")]
pub struct ErdosKacArgs {
    #[arg(long, default_value_t = 10_000_000)]
    pub n_max: u64,
    /// lnlnN (N = n_max) or lnln_n (per-sample normalization)
    #[arg(long, value_parser = ["lnlnN", "lnln_n"], default_value = "lnlnN")]
    pub mode: String,
    /// Smallest n kept in lnln_n mode.
    #[arg(long, default_value_t = 15)]
    pub cutoff: u64,
}

#[derive(Debug, Args)]
#[command(after_help = "CSV columns: statistic,value,count (exact s2 counts, then the normalized statistic histogram)")]
pub struct DigitCltArgs {
    #[arg(long, default_value_t = 20)]
    pub m: u32,
}

#[derive(Debug, Args)]
#[command(after_help = "CSV columns: N,magnitude (averaged exponential sum trace)")]
pub struct WeylArgs {
    /// Comma-separated frequencies, one per dimension.
    #[arg(long, value_delimiter = ',', default_value = "1.618033988749895")]
    pub alpha: Vec<f64>,
    /// Comma-separated integer character, one per dimension.
    #[arg(long, value_delimiter = ',', default_value = "1", allow_hyphen_values = true)]
    pub h: Vec<i64>,
    #[arg(long, default_value_t = 1_000_000)]
    pub n: u64,
}

#[derive(Debug, Args)]
#[command(after_help = "CSV columns: N,estimate (integration trace)")]
pub struct QmcArgs {
    /// Integrand: product | cos2pi | cubic
    #[arg(long, value_parser = ["product", "cos2pi", "cubic"], default_value = "product")]
    pub psi: String,
    #[arg(long, value_delimiter = ',', default_value = "1.4142135623730951,1.7320508075688772")]
    pub alpha: Vec<f64>,
    #[arg(long, default_value_t = 1_000_000)]
    pub n: u64,
}

#[derive(Debug, Args)]
#[command(after_help = "CSV columns: z,F (empirical CDF of the normalized cosine sum)")]
pub struct CosineCltArgs {
    /// Number of frequencies; defaults are sqrt(p) over the first m primes.
    #[arg(long, default_value_t = 16)]
    pub m: usize,
    /// Explicit frequencies (overrides --m).
    #[arg(long, value_delimiter = ',')]
    pub alpha: Option<Vec<f64>>,
    #[arg(long, default_value_t = 1_000_000)]
    pub n: u64,
    #[arg(long, value_parser = ["discrete", "continuous"], default_value = "discrete")]
    pub mode: String,
    /// Time step in continuous mode.
    #[arg(long, default_value_t = 1.0 / 64.0)]
    pub step: f64,
    #[arg(long, default_value_t = 513)]
    pub grid: usize,
}

#[derive(Debug, Args)]
#[command(after_help = "CSV columns: x_statistic,count (binned histogram of the normalized sum)")]
pub struct LacunaryArgs {
    /// Frequency sequence: pow2 | pow3
    #[arg(long, value_parser = ["pow2", "pow3"], default_value = "pow2")]
    pub seq: String,
    #[arg(long, default_value_t = 256)]
    pub terms: u32,
    #[arg(long, default_value_t = 100_000)]
    pub grid: usize,
}

#[derive(Debug, Args)]
#[command(after_help = "CSV columns: x_statistic,count (binned histogram of the normalized sum)")]
pub struct KacArgs {
    /// Periodic function: cos | cos-pair | rademacher
    #[arg(long, value_parser = ["cos", "cos-pair", "rademacher"], default_value = "cos")]
    pub f: String,
    #[arg(long, default_value_t = 256)]
    pub terms: u32,
    #[arg(long, default_value_t = 100_000)]
    pub grid: usize,
}

#[derive(Debug, Args)]
#[command(after_help = "CSV columns: t,s_quarter,s_half,s_full (partial sums per sample point)")]
pub struct RademacherArgs {
    /// Weights: harmonic (1/k) | inv-sqrt (1/sqrt k) | const:<c>
    #[arg(long, default_value = "harmonic")]
    pub weights: String,
    #[arg(long, default_value_t = 4096)]
    pub k_max: u32,
    #[arg(long, default_value_t = 256)]
    pub samples: usize,
}

/// Parse one integer-set spec of the form accepted by --set / --family.
fn parse_set(text: &str) -> Result<IntegerSetSpec, Error> {
    let text = text.trim();
    if let Some(rest) = text.strip_prefix("ap:") {
        let parts: Vec<&str> = rest.split(',').collect();
        if parts.len() != 2 {
            return Err(Error::InvalidInput(format!("bad progression spec '{text}'")));
        }
        let n: u64 = parts[0].trim().parse().map_err(|_| bad_spec(text))?;
        let k: u64 = parts[1].trim().parse().map_err(|_| bad_spec(text))?;
        if n < 1 || !(1..=n).contains(&k) {
            return Err(bad_spec(text));
        }
        return Ok(IntegerSetSpec::ap(n, k));
    }
    if let Some(rest) = text.strip_prefix("digit:") {
        let j: u32 = rest.trim().parse().map_err(|_| bad_spec(text))?;
        if !(1..=63).contains(&j) {
            return Err(bad_spec(text));
        }
        return Ok(IntegerSetSpec::digit(j));
    }
    match text {
        "block-example" => Ok(IntegerSetSpec::BlockExample),
        "squares" => Ok(IntegerSetSpec::predicate("squares", |n| {
            let r = (n as f64).sqrt().round() as u64;
            r * r == n
        })),
        _ => Err(bad_spec(text)),
    }
}

fn bad_spec(text: &str) -> Error {
    Error::InvalidInput(format!("unknown set spec '{text}'"))
}

struct Outcome {
    csv: String,
    data_json: serde_json::Value,
    summary: Summary,
}

fn run_density(args: &DensityArgs) -> Result<Outcome, Error> {
    let spec = parse_set(&args.set)?;
    let est = density::density_estimate(&spec, args.n_max, args.checkpoints)?;
    let exact = density::density_exact(&spec).ok();
    let mut csv = String::from("N,density\n");
    for &(n, d) in &est.checkpoints {
        csv.push_str(&format!("{n},{d}\n"));
    }
    let data_json = json!({"checkpoints": est.checkpoints});
    let headline = json!({
        "report": est,
        "exact": exact.map(|r| r.to_string()),
    });
    let params = json!({"set": args.set, "n_max": args.n_max, "checkpoints": args.checkpoints});
    Ok(Outcome { csv, data_json, summary: Summary::new("density", params, headline) })
}

fn run_independence(args: &IndependenceArgs) -> Result<Outcome, Error> {
    let specs: Vec<IntegerSetSpec> =
        args.family.split(';').map(parse_set).collect::<Result<_, _>>()?;
    let mode = if args.mode == "exact" { DefectMode::Exact } else { DefectMode::Empirical };
    let report = independence::set_family_defect(&specs, args.n_max, mode)?;
    let mut csv = String::from("field,value\n");
    csv.push_str(&format!("family_size,{}\n", report.family_size));
    csv.push_str(&format!("subsets_checked,{}\n", report.subsets_checked));
    csv.push_str(&format!("max_defect,{}\n", report.max_defect));
    let params = json!({"family": args.family, "mode": args.mode, "n_max": args.n_max});
    let data_json = json!(report);
    Ok(Outcome { csv, data_json, summary: Summary::new("independence", params, json!(report)) })
}

fn run_erdos_kac(args: &ErdosKacArgs) -> Result<Outcome, Error> {
    let mode = match args.mode.as_str() {
        "lnlnN" => EkNormalization::ByNMax,
        _ => EkNormalization::BySample { cutoff: args.cutoff },
    };
    let r = arithmetic::erdos_kac_cdf(args.n_max, mode)?;
    let mut csv = String::from("statistic,value,count\n");
    for (v, c) in r.cdf.pairs() {
        csv.push_str(&format!("omega_normalized,{v},{c}\n"));
    }
    let lnln = (args.n_max as f64).ln().ln();
    let headline = json!({
        "n_max": r.n_max,
        "mode": args.mode,
        "ks_to_phi": r.cdf.ks_to(&StdNormal),
        "ks_at_atoms": r.cdf.ks_at_atoms(&StdNormal),
        "mean": r.omega_mean,
        "variance": r.omega_variance,
        "mertens_shift": r.omega_mean - lnln,
    });
    let params = json!({"n_max": args.n_max, "mode": args.mode, "cutoff": args.cutoff});
    let data_json = json!({"pairs": r.cdf.pairs().collect::<Vec<_>>()});
    Ok(Outcome { csv, data_json, summary: Summary::new("erdos-kac", params, headline) })
}

fn run_digit_clt(args: &DigitCltArgs) -> Result<Outcome, Error> {
    let d = arithmetic::digit_clt_cdf(args.m)?;
    let mut csv = String::from("statistic,value,count\n");
    for (k, &c) in d.exact_counts.iter().enumerate() {
        csv.push_str(&format!("s2_count,{k},{c}\n"));
    }
    for (v, c) in d.empirical.pairs() {
        csv.push_str(&format!("s2_normalized,{v},{c}\n"));
    }
    let mean = args.m as f64 / 2.0;
    let sd = (args.m as f64 / 4.0).sqrt();
    let exact_ks = ks_step_vs_cdf(d.exact_law.normalized_jumps(mean, sd).into_iter(), &StdNormal);
    let headline = json!({
        "m": d.m,
        "ks_exact_to_phi": exact_ks,
        "ks_empirical_to_phi": d.empirical.ks_to(&StdNormal),
        "mean": d.empirical.mean(),
        "variance": d.empirical.variance(),
    });
    let data_json = json!({
        "exact_counts": d.exact_counts,
        "empirical_pairs": d.empirical.pairs().collect::<Vec<_>>(),
    });
    Ok(Outcome {
        csv,
        data_json,
        summary: Summary::new("digit-clt", json!({"m": args.m}), headline),
    })
}

fn run_weyl(args: &WeylArgs) -> Result<Outcome, Error> {
    let seqs: Vec<RealSeq> =
        args.alpha.iter().map(|&a| RealSeq::kronecker_frac(a)).collect();
    let r = equi::weyl_sum(&seqs, &args.h, args.n)?;
    let mut csv = String::from("N,magnitude\n");
    for &(n, m) in &r.trace {
        csv.push_str(&format!("{n},{m}\n"));
    }
    let headline = json!({"magnitude": r.magnitude, "n": r.n_trunc, "h": r.h});
    let params = json!({"alpha": args.alpha, "h": args.h, "n": args.n});
    let data_json = json!({"trace": r.trace});
    Ok(Outcome { csv, data_json, summary: Summary::new("weyl", params, headline) })
}

fn run_qmc(args: &QmcArgs) -> Result<Outcome, Error> {
    let seqs: Vec<RealSeq> =
        args.alpha.iter().map(|&a| RealSeq::kronecker_frac(a)).collect();
    let dims = seqs.len();
    let (estimate, exact): (equi::QmcResult, Option<f64>) = match args.psi.as_str() {
        "product" => (
            equi::qmc_integrate(|p| p.iter().product(), &seqs, args.n)?,
            Some(0.5f64.powi(dims as i32)),
        ),
        "cos2pi" => (
            equi::qmc_integrate(|p| (std::f64::consts::TAU * p[0]).cos(), &seqs, args.n)?,
            Some(0.0),
        ),
        _ => (
            equi::qmc_integrate(|p| p[0] * p[0] * p[0] - p[0], &seqs, args.n)?,
            Some(-0.25),
        ),
    };
    let mut csv = String::from("N,estimate\n");
    for &(n, v) in &estimate.trace {
        csv.push_str(&format!("{n},{v}\n"));
    }
    let headline = json!({
        "estimate": estimate.value,
        "exact": exact,
        "error": exact.map(|e| (estimate.value - e).abs()),
    });
    let params = json!({"psi": args.psi, "alpha": args.alpha, "n": args.n});
    let data_json = json!({"trace": estimate.trace});
    Ok(Outcome { csv, data_json, summary: Summary::new("qmc", params, headline) })
}

fn default_frequencies(m: usize) -> Vec<f64> {
    sieve_first_primes(m).iter().map(|&p| (p as f64).sqrt()).collect()
}

fn sieve_first_primes(count: usize) -> Vec<u64> {
    let mut primes = Vec::with_capacity(count);
    let mut n = 2u64;
    while primes.len() < count {
        if primes.iter().all(|&p| n % p != 0) {
            primes.push(n);
        }
        n += 1;
    }
    primes
}

fn run_cosine_clt(args: &CosineCltArgs) -> Result<Outcome, Error> {
    let alphas = args.alpha.clone().unwrap_or_else(|| default_frequencies(args.m));
    let grid: Vec<f64> = (0..args.grid)
        .map(|i| -6.0 + 12.0 * i as f64 / (args.grid.max(2) - 1) as f64)
        .collect();
    let mode = match args.mode.as_str() {
        "discrete" => SumMode::DiscreteN,
        _ => SumMode::ContinuousT { step: args.step },
    };
    let cdf = sequences::cosine_sum_cdf(&alphas, args.n, &grid, mode)?;
    let mut csv = String::from("z,F\n");
    for (&z, &v) in cdf.grid.iter().zip(&cdf.values) {
        csv.push_str(&format!("{z},{v}\n"));
    }
    let ks = cdf.sup_distance_to(&StdNormal);
    let headline = json!({
        "label": format!("cosine-sum(m={})", alphas.len()),
        "n_trunc": args.n,
        "ks_to_reference": ks,
    });
    let params = json!({
        "m": alphas.len(), "alpha": alphas, "n": args.n,
        "mode": args.mode, "step": args.step, "grid": args.grid,
    });
    let data_json = json!({"grid": cdf.grid, "values": cdf.values});
    Ok(Outcome { csv, data_json, summary: Summary::new("cosine-clt", params, headline) })
}

fn run_lacunary(args: &LacunaryArgs) -> Result<Outcome, Error> {
    let seq = match args.seq.as_str() {
        "pow2" => GapSequence::powers_of_two(),
        _ => GapSequence::powers_of(3),
    };
    let cdf = lacunary::salem_zygmund_cdf(&seq, args.terms, args.grid)?;
    let csv = histogram_csv(&cdf);
    let headline = json!({
        "m_terms": args.terms,
        "grid": args.grid,
        "ks_to_phi": cdf.ks_to(&StdNormal),
        "mean": cdf.mean(),
        "variance": cdf.variance(),
    });
    let params = json!({"seq": args.seq, "terms": args.terms, "grid": args.grid});
    let data_json = histogram_json(&cdf);
    Ok(Outcome { csv, data_json, summary: Summary::new("lacunary", params, headline) })
}

/// Bin an empirical CDF's samples (raw samples would be one row per grid
/// point).
fn histogram_bins(cdf: &crate::gaussian::EmpiricalCdf) -> Vec<(f64, u64)> {
    let bins = 256usize;
    let (lo, hi) = (-6.0f64, 6.0f64);
    let mut hist = vec![0u64; bins];
    for (v, c) in cdf.pairs() {
        let idx = (((v - lo) / (hi - lo) * bins as f64) as isize).clamp(0, bins as isize - 1);
        hist[idx as usize] += c;
    }
    hist.into_iter()
        .enumerate()
        .filter(|&(_, c)| c > 0)
        .map(|(i, c)| (lo + (hi - lo) * (i as f64 + 0.5) / bins as f64, c))
        .collect()
}

fn histogram_csv(cdf: &crate::gaussian::EmpiricalCdf) -> String {
    let mut csv = String::from("x_statistic,count\n");
    for (center, c) in histogram_bins(cdf) {
        csv.push_str(&format!("{center},{c}\n"));
    }
    csv
}

fn histogram_json(cdf: &crate::gaussian::EmpiricalCdf) -> serde_json::Value {
    json!({"histogram": histogram_bins(cdf)})
}

fn run_kac(args: &KacArgs) -> Result<Outcome, Error> {
    let f = match args.f.as_str() {
        "cos" => PeriodicFn::cosine(),
        "cos-pair" => PeriodicFn::callable("cos+cos2", |t| {
            (std::f64::consts::TAU * t).cos() + (2.0 * std::f64::consts::TAU * t).cos()
        }),
        _ => PeriodicFn::callable("rademacher", |t| lacunary::rademacher(1, t) as f64),
    };
    let clt = lacunary::kac_clt_cdf(&f, args.terms, args.grid)?;
    let csv = histogram_csv(&clt.cdf);
    let headline = json!({
        "m_terms": args.terms,
        "grid": args.grid,
        "sigma2": clt.sigma2,
        "ks_to_phi": clt.cdf.ks_to(&StdNormal),
        "mean": clt.cdf.mean(),
        "variance": clt.cdf.variance(),
    });
    let params = json!({"f": args.f, "terms": args.terms, "grid": args.grid});
    let data_json = histogram_json(&clt.cdf);
    Ok(Outcome { csv, data_json, summary: Summary::new("kac-clt", params, headline) })
}

fn run_rademacher(args: &RademacherArgs) -> Result<Outcome, Error> {
    let weights = if args.weights == "harmonic" {
        WeightSequence::harmonic()
    } else if args.weights == "inv-sqrt" {
        WeightSequence::inv_sqrt()
    } else if let Some(c) = args.weights.strip_prefix("const:") {
        let c: f64 = c
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad weights '{}'", args.weights)))?;
        WeightSequence::constant(c)
    } else {
        return Err(Error::InvalidInput(format!("unknown weights '{}'", args.weights)));
    };
    let samples: Vec<f64> = (1..=args.samples)
        .map(|i| (i as f64 - 0.5) / args.samples as f64)
        .collect();
    let probe = lacunary::rademacher_series_probe(&weights, &samples, args.k_max)?;
    let mut csv = String::from("t,s_quarter,s_half,s_full\n");
    for &(t, a, b, c) in &probe.partials {
        csv.push_str(&format!("{t},{a},{b},{c}\n"));
    }
    let headline = json!({
        "cauchy_fraction": probe.cauchy_fraction,
        "tail_sum": probe.tail_sum,
        "threshold": probe.threshold,
        "divergence_suspected": probe.divergence_suspected,
    });
    let params =
        json!({"weights": args.weights, "k_max": args.k_max, "samples": args.samples});
    let data_json = json!({"partials": probe.partials});
    Ok(Outcome { csv, data_json, summary: Summary::new("rademacher", params, headline) })
}

fn run_command(cmd: &Command) -> Result<Outcome, Error> {
    match cmd {
        Command::Density(a) => run_density(a),
        Command::Independence(a) => run_independence(a),
        Command::ErdosKac(a) => run_erdos_kac(a),
        Command::DigitClt(a) => run_digit_clt(a),
        Command::Weyl(a) => run_weyl(a),
        Command::Qmc(a) => run_qmc(a),
        Command::CosineClt(a) => run_cosine_clt(a),
        Command::Lacunary(a) => run_lacunary(a),
        Command::KacClt(a) => run_kac(a),
        Command::Rademacher(a) => run_rademacher(a),
    }
}

/// Reduced-size configurations covering every subcommand, used by --pilot.
pub fn pilot_commands() -> Vec<Command> {
    vec![
        Command::Density(DensityArgs {
            set: "block-example".into(),
            n_max: 1 << 16,
            checkpoints: 10,
        }),
        Command::Independence(IndependenceArgs {
            family: "ap:2,2;ap:3,3;ap:5,5".into(),
            mode: "exact".into(),
            n_max: 10_000,
        }),
        Command::ErdosKac(ErdosKacArgs { n_max: 100_000, mode: "lnlnN".into(), cutoff: 15 }),
        Command::DigitClt(DigitCltArgs { m: 12 }),
        Command::Weyl(WeylArgs {
            alpha: vec![1.618033988749895],
            h: vec![1],
            n: 100_000,
        }),
        Command::Qmc(QmcArgs {
            psi: "product".into(),
            alpha: vec![std::f64::consts::SQRT_2, 1.7320508075688772],
            n: 100_000,
        }),
        Command::CosineClt(CosineCltArgs {
            m: 8,
            alpha: None,
            n: 100_000,
            mode: "discrete".into(),
            step: 1.0 / 64.0,
            grid: 257,
        }),
        Command::Lacunary(LacunaryArgs { seq: "pow2".into(), terms: 64, grid: 10_000 }),
        Command::KacClt(KacArgs { f: "cos".into(), terms: 64, grid: 10_000 }),
        Command::Rademacher(RademacherArgs {
            weights: "harmonic".into(),
            k_max: 512,
            samples: 128,
        }),
    ]
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Density(_) => "density",
        Command::Independence(_) => "independence",
        Command::ErdosKac(_) => "erdos-kac",
        Command::DigitClt(_) => "digit-clt",
        Command::Weyl(_) => "weyl",
        Command::Qmc(_) => "qmc",
        Command::CosineClt(_) => "cosine-clt",
        Command::Lacunary(_) => "lacunary",
        Command::KacClt(_) => "kac-clt",
        Command::Rademacher(_) => "rademacher",
    }
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::MemoryBudget { .. } | Error::PeriodTooLarge { .. } => EXIT_RESOURCE,
        _ => EXIT_USAGE,
    }
}

fn write_outcome(outcome: &Outcome, output: Option<&PathBuf>, format: &str) -> std::io::Result<()> {
    let json = serde_json::to_string_pretty(&outcome.summary).expect("summary serializes");
    match output {
        Some(base) => {
            if let Some(dir) = base.parent() {
                if !dir.as_os_str().is_empty() {
                    std::fs::create_dir_all(dir)?;
                }
            }
            if format == "json" {
                let data = serde_json::to_string_pretty(&outcome.data_json)
                    .expect("data serializes");
                std::fs::write(base.with_extension("data.json"), data + "\n")?;
            } else {
                std::fs::write(base.with_extension("csv"), &outcome.csv)?;
            }
            std::fs::write(base.with_extension("json"), json + "\n")?;
        }
        None => println!("{json}"),
    }
    Ok(())
}

/// Entry point used by the binary; returns the process exit code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints its own usage/help text
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    if cli.pilot && cli.command.is_some() {
        eprintln!("error: --pilot cannot be combined with a subcommand");
        return EXIT_USAGE;
    }
    if !cli.pilot && cli.command.is_none() {
        eprintln!("error: either a subcommand or --pilot is required");
        return EXIT_USAGE;
    }
    let run_all = |cli: &Cli| -> i32 {
        let commands: Vec<Command> = if cli.pilot { pilot_commands() } else { Vec::new() };
        if let Some(cmd) = &cli.command {
            match run_command(cmd) {
                Ok(outcome) => {
                    if write_outcome(&outcome, cli.output.as_ref(), &cli.format).is_err() {
                        eprintln!("error: could not write output files");
                        return EXIT_RESOURCE;
                    }
                    EXIT_OK
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    exit_code_for(&e)
                }
            }
        } else {
            for cmd in &commands {
                let name = command_name(cmd);
                match run_command(cmd) {
                    Ok(outcome) => {
                        let output = cli
                            .output
                            .as_ref()
                            .map(|base| base.join(name));
                        if write_outcome(&outcome, output.as_ref(), &cli.format).is_err() {
                            eprintln!("error: could not write output for {name}");
                            return EXIT_RESOURCE;
                        }
                        eprintln!("pilot {name}: ok");
                    }
                    Err(e) => {
                        eprintln!("pilot {name}: error: {e}");
                        return exit_code_for(&e);
                    }
                }
            }
            EXIT_OK
        }
    };
    if cli.threads > 0 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build();
        match pool {
            Ok(pool) => pool.install(|| run_all(&cli)),
            Err(_) => {
                eprintln!("error: could not build thread pool");
                EXIT_RESOURCE
            }
        }
    } else {
        run_all(&cli)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_round_trips() {
        let s = Summary::new("weyl", json!({"n": 10}), json!({"magnitude": 1.0}));
        let text = serde_json::to_string(&s).unwrap();
        let back: Summary = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
        assert_eq!(back.schema, 1);
    }

    #[test]
    fn parse_set_specs() {
        assert!(parse_set("ap:6,6").is_ok());
        assert!(parse_set("digit:3").is_ok());
        assert!(parse_set("block-example").is_ok());
        assert!(parse_set("squares").is_ok());
        assert!(parse_set("ap:4").is_err());
        assert!(parse_set("ap:4,5").is_err());
        assert!(parse_set("nonsense").is_err());
    }

}

use thiserror::Error;

/// Errors shared across the whole crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("empty grid")]
    EmptyGrid,

    #[error("grid is not sorted ascending")]
    UnsortedGrid,

    #[error("no exact density for this set specification")]
    NoExactDensity,

    #[error("joint period {period} exceeds the expansion cap {cap}")]
    PeriodTooLarge { period: u128, cap: u64 },

    #[error("insufficient probes: need at least {need}, got {got}")]
    InsufficientProbes { need: usize, got: usize },

    #[error("combinatorial blowup: family size {size} exceeds the cap of {cap}")]
    CombinatorialBlowup { size: usize, cap: usize },

    #[error("estimated {required} bytes exceeds the memory budget of {budget} bytes")]
    MemoryBudget { required: u64, budget: u64 },

    #[error("empty interval grid for sequence {index}")]
    EmptyIntervalGrid { index: usize },

    #[error("sequence value {value} at n={n} is not an integer in range")]
    NonIntegerValue { n: u64, value: f64 },

    #[error("grid does not cover the support of the distribution")]
    SupportNotCovered,

    #[error("cannot convolve distributions with unbounded support")]
    UnboundedSupport,

    #[error("trivial character: h must not be the zero vector")]
    TrivialCharacter,

    #[error("point {value} lies outside [0,1)")]
    PointOutsideUnitInterval { value: f64 },

    #[error("piece {index} of the map is not monotone")]
    NonMonotonePiece { index: usize },

    #[error("map pieces must tile [0,1) without gaps")]
    PiecesDoNotTile,

    #[error("gap sequence is not increasing at k={k}: n_{{k+1}}={next} <= n_k={cur}")]
    NonIncreasingGaps { k: u32, cur: f64, next: f64 },

    #[error("not a Hadamard gap sequence: min ratio {min_ratio} below the required {required}")]
    NotHadamard { min_ratio: f64, required: f64 },

    #[error("degenerate variance: sigma^2 = {sigma2} is below tolerance")]
    DegenerateVariance { sigma2: f64 },

    #[error("periodic function has nonzero mean {mean}")]
    NonzeroMean { mean: f64 },

    #[error("truncation depth {k_max} aliases the sample grid of size {grid}")]
    DepthAliasesGrid { k_max: u32, grid: usize },

    #[error("all weights are zero")]
    AllZeroWeights,

    #[error("invalid argument: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

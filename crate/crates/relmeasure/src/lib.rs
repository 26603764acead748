//! # relmeasure
//!
//! A numerical laboratory for natural-density ("relative measure")
//! probability on the integers and reals.
//!
//! The crate computes exact and truncated densities of integer sets,
//! product-rule independence defects, relative distribution functions of
//! sequences, Weyl exponential sums and discrepancies, and reproduces at
//! desk scale the classical central limit theorems that emerge from
//! density-independence: binary digits and the sum-of-digits function,
//! the Erdos-Kac law for distinct prime factors, cosine sums with
//! rationally independent frequencies, and lacunary/dyadic series.
//!
//! Every long scan is chunked, compensated, and merged in a fixed order,
//! so results are identical at any thread count.
//!
//! The `examples/` directory exercises one capability per example; the
//! thin `relmeasure` binary exposes the same experiments as subcommands
//! with CSV/JSON output.

pub mod arithmetic;
pub mod cli;
pub mod density;
pub mod equidistribution;
pub mod error;
pub mod gaussian;
pub mod independence;
pub mod kahan;
pub mod lacunary;
pub mod parallel;
pub mod sequences;

pub use error::{Error, Result};

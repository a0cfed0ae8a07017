//! Monte-Carlo compressive optimization (MCCO) of rule-compressible
//! combinatorial cost functions.
//!
//! A cost function over `{0,1}^N` is compressible when a short list of
//! (substring pattern, reward) rules determines all `2^N` values. This
//! crate maximizes such functions from a small budget of cost queries:
//! draw a uniform sample, hard-threshold it, compress it into generalized
//! window moments (a sketch), and recover the maximizer with greedy sparse
//! decoding (matching pursuit / OMP), where structured sketches reduce the
//! atom search to a chain dynamic program. A budget-matched annealing
//! baseline, exhaustive brute-force oracles, and verification suites for
//! the supporting identities (transform algebra, substring-occurrence
//! combinatorics, moment concentration, threshold-variance behavior)
//! round out the library.
//!
//! Solver-path values (costs, sketch entries, temperatures) are generic
//! over the [`Scalar`] float trait; exact quantities (transform vectors,
//! occurrence counts) use integers. The CLI and benchmark harness run the
//! `f64` instantiations aliased at the crate root.

pub mod analysis;
pub mod anneal;
pub mod bits;
pub mod decode;
pub mod error;
pub mod harness;
pub mod plot;
pub mod problem;
pub mod rng;
pub mod sample;
pub mod scalar;
pub mod sketch;
pub mod transform;
pub mod verify;

pub use bits::{hamming, BitString};
pub use error::{Error, Result};
pub use scalar::Scalar;

/// Scalar type used by the CLI and benchmark harness.
pub type Real = f64;

pub type RuleSet64 = problem::RuleSet<f64>;
pub type RuleSet32 = problem::RuleSet<f32>;
pub type Sample64 = sample::Sample<f64>;
pub type SketchVector64 = sketch::SketchVector<f64>;
pub type SparseEstimate64 = decode::SparseEstimate<f64>;

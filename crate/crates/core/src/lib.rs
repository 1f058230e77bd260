//! Exact combinatorics of the down-up Markov chain on rooted unlabeled trees.
//!
//! The crate is organised bottom-up:
//!
//! * [`tree`] holds the canonical string form of a rooted tree, the
//!   per-tree statistics (hook lengths, removal/build-up counts, symmetry
//!   order), enumeration of all trees of a size, and the Otter count.
//! * [`operators`] builds the growth and pruning operators as sparse
//!   big-integer matrices and checks their commutation relation.
//! * [`chain`] constructs the Plancherel-type measure and the up, down,
//!   down-up and up-down kernels in exact rationals, and samples
//!   trajectories of the down-up chain.
//! * [`spectral`] computes the spectrum and the maximal separation distance
//!   by three independent routes, plus the large-`n` limit series and the
//!   sum-of-geometrics representation.
//! * [`dump`] reads and writes the plain-text table, matrix, measure,
//!   kernel and curve formats.
//!
//! All kernel arithmetic is exact; floating point is used only by the
//! large-`n` separation evaluation, the limit series and Monte Carlo.

pub mod chain;
pub mod dump;
mod error;
pub mod operators;
pub mod rational;
pub mod spectral;
pub mod tree;

pub use chain::{Measure, RationalKernel, TrajectorySample};
pub use error::{Error, Result};
pub use operators::CountMatrix;
pub use rational::RationalMatrix;
pub use spectral::{LimitSeries, Route, SeparationCurve, Spectrum};
pub use tree::{count_trees, enumerate_trees, CanonicalTree, Catalog, TreeStats, TreeTable};

/// Arbitrary-precision unsigned integer used for every count.
pub type BigUint = num_bigint::BigUint;
/// Exact rational used for every probability.
pub type Rational = num_rational::BigRational;

/// Binomial coefficient `C(n, 2)`.
pub fn choose2(n: usize) -> u64 {
    let n = n as u64;
    n * n.saturating_sub(1) / 2
}

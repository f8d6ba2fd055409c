//! Exact solvers for almost k-covers of the hypercube.
//!
//! An almost k-cover of `Q^n = {0,1}^n` is a multiset of affine hyperplanes
//! that covers every nonzero vertex at least `k` times and never touches the
//! origin. This crate computes the fractional optimum, the integral optimum
//! for small `n`, the deficiency variant, and checks the surrounding
//! combinatorics (a subset-sum LYM inequality, the cycle lemma, and zero
//! multiplicities of cover polynomials) in exact rational arithmetic.
//!
//! All algorithms are generic over [`Exact`]; the aliases below fix the
//! arbitrary-precision rational used by default.

pub mod constructions;
pub mod cube;
pub mod error;
pub mod formats;
pub mod geometry;
pub mod ilp;
pub mod lp;
pub mod lym;
pub mod poly;
pub mod sampling;
pub mod scalar;

pub use cube::{binomial, harmonic, lcm_binomials, vertex_weight, DemandVector, Vertex};
pub use error::{Error, Result};
pub use geometry::{maximal_traces, HyperplaneForm, Trace, WitnessedTrace};
pub use scalar::Exact;

/// Arbitrary-precision rational; the default scalar everywhere.
pub type Rational = num_rational::BigRational;
/// Fixed-width rational for hot loops whose values stay small.
pub type SmallRational = num_rational::Ratio<i64>;

pub type Hyperplane = geometry::HyperplaneForm<Rational>;
pub type MaximalTrace = geometry::WitnessedTrace<Rational>;




pub type Cover = constructions::MultiCover<Rational>;
pub type Coverage = constructions::CoverageReport<Rational>;
pub type Polynomial = poly::MultiPoly<Rational>;
pub type LpSolution = lp::CoverLpSolution<Rational>;

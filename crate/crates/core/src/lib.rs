//! Exact computation of the hypergraph Catalan numbers `C_n^(m)`.
//!
//! `C_n^(m)` weights the closed walks on a tree that cross every edge exactly
//! `2m` times by the inverse automorphism-group order of the tree, and sums
//! over all unlabeled trees with `n + 1` vertices. For `m = 1` it is the
//! ordinary Catalan number.
//!
//! The crate computes these numbers by three independent routes:
//!
//! * [`tours::hypercatalan`]: the closed-form tour count summed over a
//!   catalog of free trees ([`trees`]);
//! * [`series::hypercatalan_gf`]: coefficients of a generating function
//!   defined by a functional equation ([`series`]);
//! * [`plane::hypercatalan_via_labelings`]: brute-force counting of
//!   admissibly labeled plane trees ([`plane`]).
//!
//! [`gluing`] computes the matrix-model trace polynomials whose leading
//! coefficients are these numbers, and [`asymptotics`] estimates growth
//! constants by difference-operator acceleration.

pub mod arith;
pub mod asymptotics;
pub mod error;
pub mod gluing;
pub mod plane;
pub mod series;
pub mod tours;
pub mod trees;

pub use error::{Error, Result};
pub use gluing::{GWeightPolynomial, Gluing, NPolynomial};
pub use plane::{BallotSequence, DyckPath, MLabeling, PlaneTree, TourWord};
pub use series::FormalSeries;
pub use tours::TourCount;
pub use trees::FreeTree;

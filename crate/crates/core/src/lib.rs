//! Decision toolkit for hypergraph degree sequences.
//!
//! A vector `b` is a degree sequence when some hypergraph on `d` vertices
//! has exactly `b_i` edges through vertex `i`; equivalently, when `b` is
//! a sum of distinct nonzero 0/1 vectors. The crate provides:
//!
//! - [`oracle`]: exact dynamic-programming decisions with witnesses,
//!   feasible up to small dimensions;
//! - [`zonotope`]: exact-rational membership in the degree-sequence
//!   polytope via an implicit-column simplex, with self-verifying
//!   decompositions and separation certificates;
//! - [`realize`]: constructive realization of integer points whose
//!   shifted copies lie in the polytope, producing witnesses and
//!   replayable traces;
//! - [`counterexample`]: machine-checkable certificates for a family of
//!   non-realizable integer points on the boundary (first at d = 98);
//! - [`reductions`]: the three-uniform reduction, linear optimization
//!   over the polytope by enumeration, and knapsack counting through two
//!   such optimizations.

pub mod counterexample;
pub mod dim;
pub mod edge;
pub mod error;
pub mod json;
pub mod oracle;
pub mod realize;
pub mod reductions;
pub mod rng;
pub mod vector;
pub mod zonotope;

pub use dim::{Dimension, DEFAULT_MAX_DIMENSION, HARD_MAX_DIMENSION};
pub use edge::{degree_sequence, Edge, EdgeSet};
pub use error::{DspError, Result};
pub use vector::{reflect, DegreeVector, RationalVector};

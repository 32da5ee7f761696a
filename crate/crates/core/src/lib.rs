//! Exact invariants of negative definite plumbed rational homology spheres.
//!
//! The crate computes Casson–Walker invariants, Reidemeister–Turaev torsion,
//! Seiberg–Witten invariants and the twisted zeta function `H_{σ,v}` of a
//! plumbing tree, and checks the surgery formula relating a graph to the
//! components obtained by deleting one vertex. Everything is exact: rationals,
//! cyclotomic fields and integer polynomials. No floating point is used.

pub mod cyclotomic;
pub mod error;
pub mod graph;
pub mod invariants;
pub mod lattice;
pub mod matrix;
pub mod poly;
pub mod ratfunc;
pub mod seifert;
pub mod rational;
pub mod surgery;

pub use error::{Error, Result};
pub use graph::PlumbingGraph;
pub use lattice::{DiscriminantGroup, GroupElement, Lattice, LatticeVector};
pub use rational::Q;

//! Exact combinatorics of rank-2 K-contact 5-manifolds.
//!
//! A closed contact toric 5-manifold is encoded by a good cone in Z^3 (its
//! cyclically ordered inward normals) and a Reeb ray `R = p + sqrt(d) q`.
//! From that data this crate computes lens-space face invariants, the isotropy
//! profile and graph of the rank-2 torus, Seifert Euler numbers and their
//! global sum identity, contact blow-ups and blow-downs as cone surgeries, and
//! the explicit constructive families. All arithmetic is exact.

pub mod cli;
pub mod cone;
pub mod construct;
pub mod corpus;
pub mod error;
pub mod euler;
pub mod exactnum;
pub mod graph;
pub mod json;
pub mod reeb;
pub mod surgery;

pub use cone::{GoodCone, ValidityReport};
pub use error::{Error, Result};
pub use exactnum::{Quad, V3};
pub use reeb::ReebVector;


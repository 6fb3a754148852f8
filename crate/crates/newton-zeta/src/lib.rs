//! Exact computational toolkit for Newton polyhedra of polynomials vanishing
//! at the origin, the canonical fan of cones attached to their faces,
//! lattice-point generating series of rational cones, and closed forms for
//! naive motivic zeta functions and motivic Milnor fibers of nondegenerate
//! polynomials, together with brute-force finite-field oracles that check
//! every closed form against direct enumeration.
//!
//! All arithmetic is exact (`num-bigint` / `num-rational`); every public map
//! and report iterates in a canonical order (BTree collections throughout) so
//! repeated runs are byte-identical.

pub mod cone;
pub mod error;
pub mod linalg;
pub mod motivic;
pub mod oracle;
pub mod poly;
pub mod polyhedron;
pub mod problem;
pub mod report;
pub mod series;

pub use error::{Error, Result};

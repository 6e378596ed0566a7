//! Exact arithmetic for even lattices and finite quadratic forms, with a
//! classifier of admissible triples `(p, m, a)` for odd prime order
//! non-symplectic automorphisms of manifolds of K3^[n]-type.

pub mod arith;
pub mod classifier;
pub mod error;
pub mod existence;
pub mod expr;
pub mod fqf;
pub mod glue;
pub mod isometry;
pub mod golden;
pub mod lattice;
pub mod matrix;

pub use error::{Error, Result};
pub use expr::{parse, parse_lenient, LatticeExpr};
pub use fqf::{FiniteQuadraticForm, Subgroup};
pub use isometry::{direct_sum_isometry, LatticeIsometry};
pub use lattice::{named_lattice, GramLattice, Named, PrimitiveVector, Signature};

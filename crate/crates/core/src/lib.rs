//! Slab functions and mirror equations for toric Calabi-Yau degenerations.
//!
//! The input is a lattice polytope containing the origin, decomposed into
//! standard simplices. From it we derive the monoid of convex PL functions,
//! normalized slab functions as truncated series over `M + Z + Q^gp`, the
//! mirror degeneration equation, and two independent checks of the slab
//! functions: a signed count of tropical trees and broken-line lifts.

pub mod error;
pub mod fixtures;
pub mod kaehler;
pub mod linalg;
pub mod polytope;
pub mod series;
pub mod slab;
pub mod trees;

pub use error::{Error, Result, ValidationIssue, ValidationKind};
pub use kaehler::{kaehler_data, KaehlerData};
pub use polytope::{parse_input, validate, Decomposition, LatticeVector};

//! Exact combinatorics of minuscule configurations on resolved ADE surface
//! singularities: lattices, roots, Chevalley signs, (−1)-curves, minuscule
//! representations, invariant forms, formal ∂̄-deformations, descent data,
//! branching and blowup constructions.

pub mod blowup;
pub mod branching;
pub mod chevalley;
pub mod cli;
pub mod curves;
pub mod dbar;
pub mod descent;
pub mod error;
pub mod forms;
pub mod lattice;
pub mod linalg;
pub mod minrep;
pub mod rootsys;

pub use error::{Error, Result};

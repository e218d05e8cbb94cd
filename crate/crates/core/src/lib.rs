//! Schubert induction on flag manifolds: multiplicity posets, chain counts, and
//! numerical solution of Schubert problems given by osculating flags.

pub mod cli;
pub mod covers;
pub mod error;
pub mod geometry;
pub mod indexing;
pub mod multposet;
pub mod poly;
pub mod presets;
pub mod solver;

pub use error::{Error, Result};

//! Exact computations with group-graded algebras, their associated G-algebras,
//! twisting systems, Zhang twists and endomorphism G-algebras.

pub mod endo;
pub mod error;
pub mod fixtures;
pub mod foundations;
pub mod g_algebra;
pub mod graded_algebra;
pub mod twisting;
pub mod verdict;

pub use error::{Error, Result};
pub use verdict::Verdict;

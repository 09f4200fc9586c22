//! Central simple algebras over ℚ and abelian number fields: Brauer classes
//! by local invariants, group-ring transfer data, generic division algebras,
//! index-reduction gcds and simultaneous embedding checks.

pub mod arith;
pub mod brauer;
pub mod cli;
pub mod embed;
pub mod engine;
mod error;
pub mod generic;
pub mod groupring;
pub mod reduction;
mod report;

pub use error::{Error, Result};

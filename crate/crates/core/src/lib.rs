//! Constraint satisfaction over finite domains for languages preserved by a
//! weak near-unanimity operation.

pub mod algebra;
pub mod consistency;
pub mod error;
pub mod harness;
pub mod instance;
pub mod linear;
pub mod relation;
pub mod solver;

pub use error::{Error, Result};
pub use instance::{Constraint, Decision, Instance, RecursionKind, SubSolver};

#[cfg(test)]
mod testutil;

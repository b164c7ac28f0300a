//! Extensional relations and the structural predicates the solver needs.

mod domain;
mod essential;
mod structure;
mod table;

pub use domain::{CoordSet, Domain, DomainIter, MAX_UNIVERSE};
pub use table::{Relation, Tuple};

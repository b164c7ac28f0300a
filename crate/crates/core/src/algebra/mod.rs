//! Finite algebras `(A; w)`: operations, clones, congruences, absorption.

mod absorption;
mod clone;
mod congruence;
mod context;
mod linear;
mod operation;

pub use absorption::{
    classify, find_binary_absorbing, find_ternary_absorbing, Absorption, DomainClassification,
};
pub use clone::{
    derive_special_wnu, generate_clone, generate_subuniverse, search_clone, subuniverses,
    CloneBudget,
};
pub use congruence::{
    congruences, is_irreducible, maximal_congruences, minimal_above, principal_congruence,
    sigma_star, Congruence,
};
pub use context::{Algebra, DomainInfo};
pub use linear::{is_linear, minimal_linear_congruence, LinearStructure};
pub use operation::Operation;


#[cfg(test)]
mod tests;

//! Consistency reductions, linkedness, irreducibility and constraint
//! weakening.

mod cycle;
mod irreducible;
mod linked;
mod weaken;

pub use cycle::{establish_cycle_consistency, Consistency, PairNetwork};
pub use irreducible::{check_irreducibility, Irreducibility};
pub use linked::{is_fragmented, is_linked, linked_components, solve_nonlinked, variable_groups};
pub use weaken::{
    congruence_weakened, first_coordinate_congruence, is_weaker, remove_weaker, weaken_by, Weakened,
};

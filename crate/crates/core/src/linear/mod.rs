//! Linear algebra over products of prime fields: fitting equations to
//! affine relations, solving, and learning hyperplanes from a membership
//! oracle.

mod factor;
pub(crate) mod field;
mod learn;
mod system;

pub use factor::{affine_equations, FactorSystem};
pub use learn::{learn_equation, learn_hyperplane, Hyperplane, Learned};
pub use system::{Equation, LinearSystem, Parametrization};

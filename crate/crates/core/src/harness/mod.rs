//! Brute-force oracle, instance generation and files, differential runs.

mod analyze;
mod diff;
mod format;
mod generate;
mod named;
mod oracle;

pub use analyze::analyze;
pub use diff::{diff_run, DiffReport, Mismatch};
pub use format::{format_outcome, parse_instance, write_instance, InstanceFile};
pub use generate::{generate_instance, GeneratorConfig};
pub use named::{named_operation, NAMED_OPERATIONS};
pub use oracle::{all_solutions, brute_force_solve, DEFAULT_ORACLE_CAP};

#[cfg(test)]
mod tests;

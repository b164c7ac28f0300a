//! CSP instances over subsets of a finite universe.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{usage, Result};
use crate::relation::{Domain, Relation};

/// A constraint: distinct scope variables and a relation over their domains.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Constraint {
    pub scope: Vec<usize>,
    pub relation: Arc<Relation>,
}

impl fmt::Debug for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}:{:?}", self.scope, self.relation)
    }
}

impl PartialOrd for Relation {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Relation {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.radix(), self.domains(), self.codes()).cmp(&(other.radix(), other.domains(), other.codes()))
    }
}

impl Constraint {
    pub fn new(scope: Vec<usize>, relation: Relation) -> Result<Constraint> {
        if scope.len() != relation.arity() {
            return Err(usage!("scope length {} differs from arity {}", scope.len(), relation.arity()));
        }
        let distinct: BTreeSet<usize> = scope.iter().copied().collect();
        if distinct.len() != scope.len() {
            return Err(usage!("scope {scope:?} repeats a variable"));
        }
        Ok(Constraint { scope, relation: Arc::new(relation) })
    }

    pub fn arity(&self) -> usize {
        self.scope.len()
    }

    /// Position of variable `v` in the scope.
    pub fn position(&self, v: usize) -> Option<usize> {
        self.scope.iter().position(|&x| x == v)
    }

    pub fn holds(&self, assignment: &[u8]) -> bool {
        let t: Vec<u8> = self.scope.iter().map(|&v| assignment[v]).collect();
        self.relation.contains(&t)
    }

    /// Projection onto the scope variables listed in `vars` (kept in scope
    /// order). Returns `None` if no scope variable is listed.
    pub fn project_onto(&self, keep: impl Fn(usize) -> bool) -> Option<Constraint> {
        let positions: Vec<usize> = (0..self.arity()).filter(|&k| keep(self.scope[k])).collect();
        if positions.is_empty() {
            return None;
        }
        if positions.len() == self.arity() {
            return Some(self.clone());
        }
        let rel = self.relation.project_positions(&positions).expect("valid positions");
        Some(Constraint {
            scope: positions.iter().map(|&k| self.scope[k]).collect(),
            relation: Arc::new(rel),
        })
    }

    /// Projection onto the pair of scope positions `(p, q)`.
    pub fn pair_projection(&self, p: usize, q: usize) -> Relation {
        self.relation.project_positions(&[p, q]).expect("valid positions")
    }
}

/// Variables `0..n` with current domains, plus constraints.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Instance {
    pub radix: usize,
    pub domains: Vec<Domain>,
    pub constraints: Vec<Constraint>,
}

impl fmt::Debug for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Instance(radix={})", self.radix)?;
        for (i, d) in self.domains.iter().enumerate() {
            writeln!(f, "  x{i} in {d}")?;
        }
        for c in &self.constraints {
            writeln!(f, "  {c:?}")?;
        }
        Ok(())
    }
}

/// Verdict of a decision call; `Sat` may carry a verified solution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decision {
    Sat(Option<Vec<u8>>),
    Unsat,
}

impl Decision {
    pub fn is_sat(&self) -> bool {
        matches!(self, Decision::Sat(_))
    }

    pub fn witness(&self) -> Option<&[u8]> {
        match self {
            Decision::Sat(Some(w)) => Some(w),
            _ => None,
        }
    }
}

/// The four kinds of recursive calls the solver makes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum RecursionKind {
    /// One domain reduced.
    DomainReduction = 1,
    /// A linked component of a non-linked instance, or a class-restricted
    /// projection during the irreducibility check.
    NonLinked = 2,
    /// Every constraint replaced by its congruence-weakened constraint.
    Weakened = 3,
    /// Every nontrivial domain restricted to a class of its minimal linear
    /// congruence.
    LinearReduction = 4,
}

/// Callback into the full solver for recursive decisions.
pub trait SubSolver {
    fn decide_sub(&mut self, inst: &Instance, kind: RecursionKind) -> Result<Decision>;
}

impl Instance {
    pub fn new(radix: usize, domains: Vec<Domain>, constraints: Vec<Constraint>) -> Result<Instance> {
        let inst = Instance { radix, domains, constraints };
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<()> {
        let full = Domain::full(self.radix);
        for (i, d) in self.domains.iter().enumerate() {
            if !d.is_subset(full) {
                return Err(usage!("domain of x{i} outside the universe"));
            }
        }
        for c in &self.constraints {
            if c.relation.radix() != self.radix {
                return Err(usage!("relation universe differs from instance universe"));
            }
            if c.scope.len() != c.relation.arity() {
                return Err(usage!("scope length differs from arity"));
            }
            for &v in &c.scope {
                if v >= self.domains.len() {
                    return Err(usage!("scope variable {v} out of range"));
                }
            }
        }
        Ok(())
    }

    pub fn num_vars(&self) -> usize {
        self.domains.len()
    }

    pub fn is_solution(&self, assignment: &[u8]) -> bool {
        assignment.len() == self.num_vars()
            && assignment.iter().zip(&self.domains).all(|(&a, d)| d.contains(a))
            && self.constraints.iter().all(|c| c.holds(assignment))
    }

    /// Restricts every domain (and the constraint relations) to `domains`.
    pub fn restricted(&self, domains: &[Domain]) -> Instance {
        let constraints = self
            .constraints
            .iter()
            .map(|c| {
                let ds: Vec<Domain> = c.scope.iter().map(|&v| domains[v]).collect();
                if ds.as_slice() == c.relation.domains() {
                    c.clone()
                } else {
                    Constraint { scope: c.scope.clone(), relation: Arc::new(c.relation.restrict(&ds)) }
                }
            })
            .collect();
        Instance { radix: self.radix, domains: domains.to_vec(), constraints }
    }

    /// Same instance with `x_v` fixed to `a`.
    pub fn with_value(&self, v: usize, a: u8) -> Instance {
        let mut ds = self.domains.clone();
        ds[v] = ds[v].intersect(Domain::singleton(a));
        self.restricted(&ds)
    }

    /// Sorted, duplicate-free constraints; full relations dropped.
    pub fn normalized(&self) -> Instance {
        let mut cs: Vec<Constraint> =
            self.constraints.iter().filter(|c| !c.relation.is_full()).cloned().collect();
        cs.sort();
        cs.dedup();
        Instance { radix: self.radix, domains: self.domains.clone(), constraints: cs }
    }

    /// Instance on `vars` (renumbered in ascending order) whose constraints
    /// are the projections of this instance's constraints.
    pub fn projection(&self, vars: &[usize]) -> (Instance, Vec<usize>) {
        let mut sorted = vars.to_vec();
        sorted.sort();
        sorted.dedup();
        let mut index = vec![usize::MAX; self.num_vars()];
        for (k, &v) in sorted.iter().enumerate() {
            index[v] = k;
        }
        let constraints = self
            .constraints
            .iter()
            .filter_map(|c| c.project_onto(|v| index[v] != usize::MAX))
            .map(|c| Constraint {
                scope: c.scope.iter().map(|&v| index[v]).collect(),
                relation: c.relation,
            })
            .collect();
        let domains = sorted.iter().map(|&v| self.domains[v]).collect();
        (Instance { radix: self.radix, domains, constraints }, sorted)
    }

    /// Whether some domain or constraint relation is empty.
    pub fn trivially_unsat(&self) -> bool {
        self.domains.iter().any(|d| d.is_empty()) || self.constraints.iter().any(|c| c.relation.is_empty())
    }
}

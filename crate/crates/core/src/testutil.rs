use crate::algebra::Algebra;
use crate::error::Result;
use crate::harness::{brute_force_solve, generate_instance, named_operation, GeneratorConfig};
use crate::instance::{Constraint, Decision, Instance, RecursionKind, SubSolver};
use crate::relation::{Domain, Relation};

/// Recursive decisions answered by exhaustive search.
pub(crate) struct Exhaustive {
    pub calls: Vec<RecursionKind>,
}

impl Exhaustive {
    pub(crate) fn new() -> Exhaustive {
        Exhaustive { calls: Vec::new() }
    }
}

impl SubSolver for Exhaustive {
    fn decide_sub(&mut self, inst: &Instance, kind: RecursionKind) -> Result<Decision> {
        self.calls.push(kind);
        Ok(match brute_force_solve(inst, 1 << 24)? {
            Some(w) => Decision::Sat(Some(w)),
            None => Decision::Unsat,
        })
    }
}

pub(crate) fn algebra(name: &str) -> Algebra {
    Algebra::new(named_operation(name).unwrap())
}


pub(crate) fn rel(radix: usize, arity: usize, tuples: &[&[u8]]) -> Relation {
    Relation::uniform(radix, Domain::full(radix), arity, tuples.iter().map(|t| t.to_vec())).unwrap()
}

pub(crate) fn eq2(radix: usize) -> Relation {
    Relation::equality(radix, Domain::full(radix), 2)
}

pub(crate) fn neq2() -> Relation {
    rel(2, 2, &[&[0, 1], &[1, 0]])
}

pub(crate) fn cstr(scope: &[usize], r: &Relation) -> Constraint {
    Constraint::new(scope.to_vec(), r.clone()).unwrap()
}

pub(crate) fn instance(radix: usize, n: usize, cs: Vec<Constraint>) -> Instance {
    let ds = vec![Domain::full(radix); n];
    Instance::new(radix, ds.clone(), cs).unwrap().restricted(&ds)
}

/// Small generated instances for the named operation.
pub(crate) fn sample(alg: &Algebra, count: u64, vars: usize, density: f64) -> Vec<Instance> {
    (0..count)
        .map(|seed| {
            let cfg = GeneratorConfig { seed, vars, constraints: vars + 1, max_arity: 3, density, restrict: 0.15 };
            generate_instance(alg, &cfg).unwrap()
        })
        .collect()
}

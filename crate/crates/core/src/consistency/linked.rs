use crate::error::{usage, Result};
use crate::instance::{Decision, Instance, RecursionKind, SubSolver};
use crate::relation::Domain;

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> UnionFind {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// Linked components: classes of `(variable, value)` pairs joined through
/// constraint projections. Each component is given as per-variable value
/// sets; components are ordered by their least `(variable, value)`.
///
/// Only variables that occur in some constraint take part.
pub fn linked_components(inst: &Instance) -> Vec<Vec<Domain>> {
    let r = inst.radix;
    let n = inst.num_vars();
    let mut uf = UnionFind::new(n * r);
    let mut occurs = vec![false; n];
    for c in &inst.constraints {
        for &v in &c.scope {
            occurs[v] = true;
        }
        for t in c.relation.tuples() {
            let root = c.scope[0] * r + t[0] as usize;
            for (p, &v) in c.scope.iter().enumerate().skip(1) {
                uf.union(root, v * r + t[p] as usize);
            }
        }
    }
    let mut comps: Vec<(usize, Vec<Domain>)> = Vec::new();
    for v in 0..n {
        if !occurs[v] {
            continue;
        }
        for a in inst.domains[v].iter() {
            let root = uf.find(v * r + a as usize);
            let k = match comps.iter().position(|(rt, _)| *rt == root) {
                Some(k) => k,
                None => {
                    comps.push((root, vec![Domain::EMPTY; n]));
                    comps.len() - 1
                }
            };
            comps[k].1[v].insert(a);
        }
    }
    comps.into_iter().map(|(_, d)| d).collect()
}

/// Whether, for every constrained variable, all its values lie in one
/// linked component.
pub fn is_linked(inst: &Instance) -> bool {
    let comps = linked_components(inst);
    inst.constraints.iter().flat_map(|c| c.scope.iter()).all(|&v| {
        comps.iter().filter(|d| !d[v].is_empty()).count() <= 1
    })
}

/// Groups of variables connected through constraint scopes, ordered by
/// least variable. Unconstrained variables form singleton groups.
pub fn variable_groups(inst: &Instance) -> Vec<Vec<usize>> {
    let n = inst.num_vars();
    let mut uf = UnionFind::new(n);
    for c in &inst.constraints {
        for &v in &c.scope[1..] {
            uf.union(c.scope[0], v);
        }
    }
    let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
    for v in 0..n {
        let root = uf.find(v);
        match groups.iter_mut().find(|(r, _)| *r == root) {
            Some((_, g)) => g.push(v),
            None => groups.push((root, vec![v])),
        }
    }
    groups.into_iter().map(|(_, g)| g).collect()
}

pub fn is_fragmented(inst: &Instance) -> bool {
    variable_groups(inst).len() > 1
}

/// Decides a 1-consistent, non-fragmented instance that is not linked by
/// restricting it to each linked component in turn.
pub fn solve_nonlinked(inst: &Instance, solver: &mut dyn SubSolver) -> Result<Decision> {
    if is_fragmented(inst) {
        return Err(usage!("solve_nonlinked needs a non-fragmented instance"));
    }
    let comps = linked_components(inst);
    if comps.len() < 2 {
        return Err(usage!("solve_nonlinked needs an instance that is not linked"));
    }
    for comp in &comps {
        for (v, d) in comp.iter().enumerate() {
            if d.is_empty() || *d == inst.domains[v] {
                return Err(usage!(
                    "component does not properly restrict x{v}; instance is not 1-consistent"
                ));
            }
        }
    }
    for comp in comps {
        let sub = inst.restricted(&comp);
        if let Decision::Sat(w) = solver.decide_sub(&sub, RecursionKind::NonLinked)? {
            return Ok(Decision::Sat(w.filter(|w| inst.is_solution(w))));
        }
    }
    Ok(Decision::Unsat)
}

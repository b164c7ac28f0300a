use std::sync::Arc;

use crate::algebra::DomainClassification;
use crate::consistency::{congruence_weakened, first_coordinate_congruence};
use crate::error::{invariant, resource, Result};
use crate::instance::{Constraint, Decision, Instance, RecursionKind, SubSolver};
use crate::relation::Domain;

use super::Solver;

/// Constraints on the essential projections of `c`; full ones dropped.
pub(crate) fn essential_parts(c: &Constraint) -> Vec<Constraint> {
    if c.relation.is_essential() {
        return vec![c.clone()];
    }
    c.relation
        .essential_representation()
        .into_iter()
        .map(|set| {
            let pos = set.to_vec();
            Constraint {
                scope: pos.iter().map(|&k| c.scope[k]).collect(),
                relation: Arc::new(c.relation.project_positions(&pos).expect("valid positions")),
            }
        })
        .filter(|c| !c.relation.is_full())
        .collect()
}

fn closed(c: Constraint) -> Constraint {
    if c.relation.has_parallelogram() {
        c
    } else {
        Constraint { scope: c.scope, relation: Arc::new(c.relation.parallelogram_closure()) }
    }
}

fn dedup(mut cs: Vec<Constraint>) -> Vec<Constraint> {
    cs.retain(|c| !c.relation.is_full());
    cs.sort();
    cs.dedup();
    cs
}

impl Solver<'_> {
    /// Replaces constraints by essential projections, closes them under
    /// the parallelogram rule, and weakens those whose first-coordinate
    /// congruence is reducible, until nothing changes.
    pub(crate) fn transform(&mut self, inst: &Instance) -> Result<Instance> {
        let mut cs = inst.constraints.clone();
        for _ in 0..self.config.transform_cap {
            cs = dedup(cs.iter().flat_map(essential_parts).map(closed).collect());
            if cs.iter().any(|c| !c.relation.is_essential()) {
                continue;
            }
            let mut next = Vec::with_capacity(cs.len());
            let mut changed = false;
            for c in &cs {
                let (theta, exact) = first_coordinate_congruence(&c.relation, self.alg)?;
                if !exact || theta.is_full() {
                    return Err(invariant!("first-coordinate relation of {c:?} is not a proper congruence"));
                }
                if self.alg.sigma_star(&theta)?.is_some() {
                    next.push(c.clone());
                } else {
                    changed = true;
                    next.extend(
                        congruence_weakened(c, self.alg)?
                            .into_iter()
                            .filter(|w| !w.constraint.relation.is_full())
                            .map(|w| w.constraint),
                    );
                }
            }
            if !changed {
                return Ok(Instance { radix: inst.radix, domains: inst.domains.clone(), constraints: cs });
            }
            cs = next;
        }
        Err(resource!("constraint transformation did not settle within {} rounds", self.config.transform_cap))
    }

    /// Projections of the weakened instance onto each variable; `None` if
    /// it has no solutions.
    pub(crate) fn weakened_projection(&mut self, inst: &Instance) -> Result<Option<Vec<Domain>>> {
        let mut cs = Vec::with_capacity(inst.constraints.len());
        for c in &inst.constraints {
            let ws = congruence_weakened(c, self.alg)?;
            if ws.len() != 1 {
                return Err(invariant!("{c:?} has {} weakenings, expected one", ws.len()));
            }
            let w = ws.into_iter().next().unwrap();
            if !w.constraint.relation.is_full() {
                cs.push(closed(w.constraint));
            }
        }
        let weak = Instance { radix: inst.radix, domains: inst.domains.clone(), constraints: dedup(cs) };
        self.projection_of(&weak, RecursionKind::Weakened)
    }

    /// Per-variable projections of the solution set, found by fixing one
    /// value at a time; witnesses cover many pairs at once.
    pub(crate) fn projection_of(&mut self, inst: &Instance, kind: RecursionKind) -> Result<Option<Vec<Domain>>> {
        let n = inst.num_vars();
        let mut covered = vec![Domain::EMPTY; n];
        for v in 0..n {
            for a in inst.domains[v].iter() {
                if covered[v].contains(a) {
                    continue;
                }
                match self.decide_sub(&inst.with_value(v, a), kind)? {
                    Decision::Sat(Some(w)) if inst.is_solution(&w) => {
                        for (u, &b) in w.iter().enumerate() {
                            covered[u].insert(b);
                        }
                    }
                    Decision::Sat(_) => covered[v].insert(a),
                    Decision::Unsat => {}
                }
            }
            if covered[v].is_empty() {
                return Ok(None);
            }
        }
        Ok(Some(covered))
    }

    /// An absorbing subuniverse of some domain, else a congruence class of
    /// a domain with a PC quotient.
    pub(crate) fn absorption_reduction(&mut self, inst: &Instance) -> Result<Option<(&'static str, usize, Domain)>> {
        let mut pc = None;
        for (v, d) in inst.domains.iter().enumerate() {
            match self.alg.classify(*d)? {
                Some(DomainClassification::BinaryAbsorbing(a)) => return Ok(Some(("7:binary", v, a.subset))),
                Some(DomainClassification::TernaryAbsorbing(a)) => return Ok(Some(("7:ternary", v, a.subset))),
                Some(DomainClassification::PcQuotient(s)) if pc.is_none() => pc = Some((v, s.classes()[0])),
                _ => {}
            }
        }
        Ok(pc.map(|(v, d)| ("8:pc", v, d)))
    }
}

//! The decision procedure and solution extraction.

mod audit;
mod linear_phase;
mod steps;

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::algebra::Algebra;
use crate::consistency::{
    check_irreducibility, establish_cycle_consistency, is_linked, solve_nonlinked, variable_groups,
    Consistency, Irreducibility,
};
use crate::error::{invariant, usage, Result};
use crate::instance::{Decision, Instance, RecursionKind, SubSolver};
use crate::relation::Domain;

pub use audit::{AuditEvent, AuditKind, AuditLog};

/// Limits and optional instrumentation.
#[derive(Clone, Debug)]
pub struct SolverConfig {
    /// Largest parameter space enumerated when looking for extensions of a
    /// prefix.
    pub max_enumeration: u128,
    /// Learned equations are checked against every point of the parameter
    /// space when it is at most this large.
    pub verify_limit: u128,
    /// Cap on rounds of the constraint transformation loops.
    pub transform_cap: usize,
    /// Record reductions of instances with at most this many variables.
    pub audit_max_vars: Option<usize>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { max_enumeration: 1 << 16, verify_limit: 64, transform_cap: 100_000, audit_max_vars: None }
    }
}

/// Counters collected while solving.
#[derive(Clone, Debug, Default, Serialize)]
pub struct SolverStats {
    /// Recursive calls by kind (1 to 4).
    pub calls: BTreeMap<u8, usize>,
    /// Deepest nesting seen for each kind.
    pub max_depth: BTreeMap<u8, usize>,
    pub memo_hits: usize,
    pub decisions: usize,
    /// How often each step fired.
    pub steps: BTreeMap<&'static str, usize>,
    pub learned_equations: usize,
    pub max_linear_dimension: usize,
}

pub struct Solver<'a> {
    alg: &'a Algebra,
    config: SolverConfig,
    memo: HashMap<Instance, Decision>,
    depth: [usize; 5],
    stats: SolverStats,
    audit: AuditLog,
}

impl<'a> Solver<'a> {
    pub fn new(alg: &'a Algebra) -> Solver<'a> {
        Solver::with_config(alg, SolverConfig::default())
    }

    pub fn with_config(alg: &'a Algebra, config: SolverConfig) -> Solver<'a> {
        Solver { alg, config, memo: HashMap::new(), depth: [0; 5], stats: SolverStats::default(), audit: AuditLog::default() }
    }

    pub fn algebra(&self) -> &'a Algebra {
        self.alg
    }

    pub fn stats(&self) -> &SolverStats {
        &self.stats
    }

    pub fn audit_log(&self) -> &AuditLog {
        &self.audit
    }

    /// Bound on the nesting of calls of a kind.
    pub fn depth_bound(&self, kind: RecursionKind) -> usize {
        let a = self.alg.size();
        match kind {
            RecursionKind::Weakened => {
                let e = (a * a) as u32;
                if e >= 63 { usize::MAX } else { (1usize << e) - 1 }
            }
            RecursionKind::NonLinked | RecursionKind::LinearReduction => a,
            RecursionKind::DomainReduction => usize::MAX,
        }
    }

    fn check_instance(&self, inst: &Instance) -> Result<()> {
        inst.validate()?;
        if inst.radix != self.alg.size() {
            return Err(usage!("instance universe has {} elements, algebra has {}", inst.radix, self.alg.size()));
        }
        for (v, d) in inst.domains.iter().enumerate() {
            if !d.is_empty() && !self.alg.is_subuniverse(*d) {
                return Err(usage!("domain {d} of x{v} is not closed under the operation"));
            }
        }
        Ok(())
    }

    /// Decides satisfiability. A returned witness is always a solution.
    pub fn decide(&mut self, inst: &Instance) -> Result<Decision> {
        self.check_instance(inst)?;
        let d = self.decide_rec(inst)?;
        Ok(match d {
            Decision::Sat(w) => Decision::Sat(w.filter(|w| inst.is_solution(w))),
            Decision::Unsat => Decision::Unsat,
        })
    }

    /// Finds a solution, fixing variables one at a time in ascending value
    /// order when the decision does not supply one.
    pub fn solve(&mut self, inst: &Instance) -> Result<Option<Vec<u8>>> {
        let mut cur = match self.decide(inst)? {
            Decision::Unsat => return Ok(None),
            Decision::Sat(Some(w)) => return Ok(Some(w)),
            Decision::Sat(None) => inst.clone(),
        };
        for v in 0..cur.num_vars() {
            let mut fixed = false;
            for a in cur.domains[v].iter() {
                let next = cur.with_value(v, a);
                match self.decide_rec(&next)? {
                    Decision::Sat(Some(w)) if inst.is_solution(&w) => return Ok(Some(w)),
                    Decision::Sat(_) => {
                        cur = next;
                        fixed = true;
                        break;
                    }
                    Decision::Unsat => {}
                }
            }
            if !fixed {
                return Err(invariant!("x{v} has no value extending a satisfiable partial assignment"));
            }
        }
        let w: Vec<u8> = cur.domains.iter().map(|d| d.first().unwrap()).collect();
        if !inst.is_solution(&w) {
            return Err(invariant!("self-reduction produced a non-solution"));
        }
        Ok(Some(w))
    }

    fn bump(&mut self, step: &'static str) {
        *self.stats.steps.entry(step).or_default() += 1;
    }

    fn decide_rec(&mut self, inst: &Instance) -> Result<Decision> {
        let inst = inst.normalized();
        if inst.trivially_unsat() {
            return Ok(Decision::Unsat);
        }
        if inst.domains.iter().all(|d| d.len() == 1) {
            let w: Vec<u8> = inst.domains.iter().map(|d| d.first().unwrap()).collect();
            return Ok(if inst.is_solution(&w) { Decision::Sat(Some(w)) } else { Decision::Unsat });
        }
        if let Some(d) = self.memo.get(&inst) {
            self.stats.memo_hits += 1;
            return Ok(d.clone());
        }
        self.stats.decisions += 1;
        let d = self.run(&inst)?;
        let d = match d {
            Decision::Sat(w) => Decision::Sat(w.filter(|w| inst.is_solution(w))),
            u => u,
        };
        self.memo.insert(inst, d.clone());
        Ok(d)
    }

    fn decide_groups(&mut self, inst: &Instance, groups: Vec<Vec<usize>>) -> Result<Decision> {
        self.bump("split");
        let mut witness = Some(vec![0u8; inst.num_vars()]);
        for g in groups {
            let (sub, vars) = inst.projection(&g);
            match self.decide_rec(&sub)? {
                Decision::Unsat => return Ok(Decision::Unsat),
                Decision::Sat(w) => match (w, witness.as_mut()) {
                    (Some(w), Some(acc)) => {
                        for (k, &v) in vars.iter().enumerate() {
                            acc[v] = w[k];
                        }
                    }
                    _ => witness = None,
                },
            }
        }
        Ok(Decision::Sat(witness))
    }

    fn run(&mut self, input: &Instance) -> Result<Decision> {
        let mut cur = input.clone();
        loop {
            let before = cur.clone();
            cur = match establish_cycle_consistency(&cur) {
                Consistency::NoSolution => {
                    self.bump("1:no-solution");
                    self.record("cycle-consistency", AuditKind::Solutions, &before, None);
                    return Ok(Decision::Unsat);
                }
                Consistency::Reduced(r, _) => r.normalized(),
            };
            if cur.domains != before.domains {
                self.bump("1:reduce");
                self.record("cycle-consistency", AuditKind::Solutions, &before, Some(&cur));
            }
            if cur.domains.iter().all(|d| d.len() == 1) {
                return self.decide_rec(&cur);
            }
            let groups = variable_groups(&cur);
            if groups.len() > 1 {
                return self.decide_groups(&cur, groups);
            }
            if !is_linked(&cur) {
                self.bump("2:not-linked");
                return solve_nonlinked(&cur, self);
            }
            let alg = self.alg;
            match check_irreducibility(&cur, alg, self)? {
                Irreducibility::NoSolution => {
                    self.bump("2:no-solution");
                    self.record("irreducibility", AuditKind::Solutions, &cur, None);
                    return Ok(Decision::Unsat);
                }
                Irreducibility::Reduce(list) => {
                    self.bump("2:reduce");
                    let mut ds = cur.domains.clone();
                    for (v, d) in list {
                        ds[v] = d;
                    }
                    let next = cur.restricted(&ds);
                    self.record("irreducibility", AuditKind::Solutions, &cur, Some(&next));
                    cur = next;
                    continue;
                }
                Irreducibility::Irreducible => {}
            }
            let t = self.transform(&cur)?;
            if t != cur {
                self.bump("3-5:transform");
                self.record("transform", AuditKind::Satisfiability, &cur, Some(&t));
            }
            match self.weakened_projection(&t)? {
                None => {
                    self.bump("6:no-solution");
                    self.record("weakened-projection", AuditKind::Solutions, &t, None);
                    return Ok(Decision::Unsat);
                }
                Some(ds) if ds != t.domains => {
                    self.bump("6:reduce");
                    let next = t.restricted(&ds);
                    self.record("weakened-projection", AuditKind::Solutions, &t, Some(&next));
                    cur = next;
                    continue;
                }
                Some(_) => {}
            }
            if let Some((step, v, d)) = self.absorption_reduction(&t)? {
                self.bump(step);
                let mut ds = t.domains.clone();
                ds[v] = d;
                let next = t.restricted(&ds);
                self.record(step, AuditKind::Satisfiability, &t, Some(&next));
                cur = next;
                continue;
            }
            self.bump("9:linear");
            return self.linear_phase(&t);
        }
    }

    fn record(&mut self, step: &'static str, kind: AuditKind, before: &Instance, after: Option<&Instance>) {
        if let Some(max) = self.config.audit_max_vars {
            if before.num_vars() <= max {
                self.audit.push(AuditEvent { step, kind, before: before.clone(), after: after.cloned() });
            }
        }
    }

    /// Restriction of `inst` to `classes`, intersected with its domains.
    fn within(inst: &Instance, classes: &[Domain]) -> Instance {
        let ds: Vec<Domain> = inst.domains.iter().zip(classes).map(|(d, c)| d.intersect(*c)).collect();
        inst.restricted(&ds)
    }
}

impl SubSolver for Solver<'_> {
    fn decide_sub(&mut self, inst: &Instance, kind: RecursionKind) -> Result<Decision> {
        let k = kind as usize;
        self.depth[k] += 1;
        *self.stats.calls.entry(k as u8).or_default() += 1;
        let m = self.stats.max_depth.entry(k as u8).or_default();
        *m = (*m).max(self.depth[k]);
        if self.depth[k] > self.depth_bound(kind) {
            self.depth[k] -= 1;
            return Err(invariant!("{kind:?} recursion nested {} deep, above its bound", self.depth[k] + 1));
        }
        let r = self.decide_rec(inst);
        self.depth[k] -= 1;
        r
    }
}

#[cfg(test)]
mod tests;

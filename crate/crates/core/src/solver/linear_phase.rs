use std::collections::HashMap;

use crate::algebra::DomainClassification;
use crate::consistency::{congruence_weakened, is_linked, remove_weaker};
use crate::error::{invariant, resource, Result};
use crate::instance::{Constraint, Decision, Instance, RecursionKind, SubSolver};
use crate::linear::{learn_equation, Equation, FactorSystem, Hyperplane, Parametrization};

use super::steps::essential_parts;
use super::Solver;

/// Every point of `Π Z_{moduli[j]}` in lexicographic order.
fn all_points(moduli: &[u8]) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    for &q in moduli {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..q).map(move |a| {
                    let mut x = p.clone();
                    x.push(a);
                    x
                })
            })
            .collect();
    }
    out
}

fn unit(k: usize, j: usize) -> Vec<u8> {
    let mut e = vec![0u8; k];
    e[j] = 1;
    e
}

/// The equation on parameters rewritten on the system's variables.
fn on_variables(e: &Equation, par: &Parametrization) -> Equation {
    Equation { prime: e.prime, terms: e.terms.iter().map(|&(j, c)| (par.params[j], c)).collect(), rhs: e.rhs }
}

impl Solver<'_> {
    /// Steps for instances whose nontrivial domains all have linear
    /// quotients.
    pub(crate) fn linear_phase(&mut self, inst: &Instance) -> Result<Decision> {
        let mut structures = Vec::with_capacity(inst.num_vars());
        for d in &inst.domains {
            if d.len() == 1 {
                structures.push(self.alg.minimal_linear(*d)?);
                continue;
            }
            match self.alg.classify(*d)? {
                Some(DomainClassification::LinearQuotient(c, s)) if !c.is_full() => structures.push((c, s)),
                other => return Err(invariant!("domain {d} reached the linear steps as {other:?}")),
            }
        }
        let fs = FactorSystem::build(inst, structures)?;
        let mut learned: Vec<Equation> = Vec::new();
        loop {
            let mut sys = fs.system.clone();
            sys.equations.extend(learned.iter().cloned());
            let Some(par) = sys.solve() else {
                self.bump("10:inconsistent");
                return Ok(Decision::Unsat);
            };
            let k = par.dimension();
            self.stats.max_linear_dimension = self.stats.max_linear_dimension.max(k);
            let zero = vec![0u8; k];
            let here = Solver::within(inst, &fs.classes(&par.apply(&zero)));
            if k == 0 {
                self.bump("10:unique");
                return self.decide_sub(&here, RecursionKind::LinearReduction);
            }
            let d = self.decide_sub(&here, RecursionKind::LinearReduction)?;
            if d.is_sat() {
                self.bump("11:sat");
                return Ok(d);
            }
            let weak = remove_weaker(&inst.constraints);
            let weak = self.weaken_to_theta_prime(inst, weak, &fs, &par)?;
            let omega = Instance { radix: inst.radix, domains: inst.domains.clone(), constraints: weak };
            let eq = if !is_linked(&omega) {
                self.bump("15:prefix");
                self.prefix_equation(&omega, &fs, &par)?
            } else {
                self.bump("16:linked");
                self.linked_equation(&omega, &fs, &par)?
            };
            match eq {
                Some(e) => {
                    self.stats.learned_equations += 1;
                    learned.push(on_variables(&e, &par));
                }
                None => {
                    self.bump("16:no-equation");
                    return Ok(Decision::Unsat);
                }
            }
        }
    }

    fn solvable_at(&mut self, omega: &Instance, fs: &FactorSystem, par: &Parametrization, y: &[u8]) -> Result<bool> {
        let sub = Solver::within(omega, &fs.classes(&par.apply(y)));
        Ok(self.decide_sub(&sub, RecursionKind::LinearReduction)?.is_sat())
    }

    /// Solvable in every class of the parameter space; checking zero and
    /// the unit vectors suffices since the solvable points form a
    /// subgroup once they contain zero.
    fn solvable_everywhere(&mut self, omega: &Instance, fs: &FactorSystem, par: &Parametrization) -> Result<bool> {
        let k = par.dimension();
        if !self.solvable_at(omega, fs, par, &vec![0u8; k])? {
            return Ok(false);
        }
        for j in 0..k {
            if !self.solvable_at(omega, fs, par, &unit(k, j))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn replace(omega: &[Constraint], idx: usize, new: Vec<Constraint>) -> Vec<Constraint> {
        let mut cs: Vec<Constraint> = omega.iter().enumerate().filter(|&(i, _)| i != idx).map(|(_, c)| c.clone()).collect();
        cs.extend(new.iter().flat_map(essential_parts));
        remove_weaker(&cs)
    }

    /// Weakens constraints while the result still fails somewhere on the
    /// parameter space.
    fn weaken_to_theta_prime(
        &mut self,
        inst: &Instance,
        mut cs: Vec<Constraint>,
        fs: &FactorSystem,
        par: &Parametrization,
    ) -> Result<Vec<Constraint>> {
        let mk = |cs: Vec<Constraint>| Instance { radix: inst.radix, domains: inst.domains.clone(), constraints: cs };
        'outer: for _ in 0..self.config.transform_cap {
            for idx in 0..cs.len() {
                let ws = congruence_weakened(&cs[idx], self.alg)?;
                let new = ws.into_iter().filter(|w| !w.constraint.relation.is_full()).map(|w| w.constraint).collect();
                let omega = Solver::replace(&cs, idx, new);
                if !self.solvable_everywhere(&mk(omega.clone()), fs, par)? {
                    self.bump("13:weaken");
                    cs = omega;
                    continue 'outer;
                }
            }
            for idx in 0..cs.len() {
                let c = &cs[idx];
                let new: Vec<Constraint> = (0..c.arity())
                    .filter_map(|drop| c.project_onto(|v| v != c.scope[drop]))
                    .filter(|_| c.arity() > 1)
                    .collect();
                let omega = Solver::replace(&cs, idx, new);
                if !self.solvable_everywhere(&mk(omega.clone()), fs, par)? {
                    self.bump("14:project");
                    cs = omega;
                    continue 'outer;
                }
            }
            return Ok(cs);
        }
        Err(resource!("weakening loop did not settle within {} rounds", self.config.transform_cap))
    }

    fn enumeration_guard(&self, par: &Parametrization) -> Result<()> {
        if par.size() > self.config.max_enumeration {
            return Err(resource!(
                "parameter space of {} points exceeds the enumeration limit {}",
                par.size(),
                self.config.max_enumeration
            ));
        }
        Ok(())
    }

    /// Equation on a prefix of the parameters satisfied exactly by the
    /// prefixes that extend to a solvable point. `None` when no point is
    /// solvable.
    fn prefix_equation(&mut self, omega: &Instance, fs: &FactorSystem, par: &Parametrization) -> Result<Option<Equation>> {
        self.enumeration_guard(par)?;
        let moduli = par.param_moduli();
        let k = moduli.len();
        let mut member: HashMap<Vec<u8>, bool> = HashMap::new();
        let mut extends = |s: &mut Self, prefix: &[u8]| -> Result<bool> {
            for suffix in all_points(&moduli[prefix.len()..]) {
                let mut y = prefix.to_vec();
                y.extend(suffix);
                let ok = match member.get(&y) {
                    Some(&b) => b,
                    None => {
                        let b = s.solvable_at(omega, fs, par, &y)?;
                        member.insert(y, b);
                        b
                    }
                };
                if ok {
                    return Ok(true);
                }
            }
            Ok(false)
        };
        for i in 1..=k {
            let mut any = false;
            let mut all = true;
            for prefix in all_points(&moduli[..i]) {
                if extends(self, &prefix)? {
                    any = true;
                } else {
                    all = false;
                }
            }
            if !any {
                return Ok(None);
            }
            if all {
                continue;
            }
            let mut oracle = |p: &[u8]| extends(self, p);
            let learned = learn_equation(&moduli[..i], &mut oracle)?;
            return match learned.result {
                Hyperplane::Equation(e) => Ok(Some(e)),
                other => Err(invariant!("prefix projection of length {i} is not a hyperplane: {other:?}")),
            };
        }
        Err(invariant!("every parameter point is solvable after an unsolvable one was seen"))
    }

    /// Equation whose solutions are all solvable points, for a linked
    /// weakened instance. `None` when there is none.
    fn linked_equation(&mut self, omega: &Instance, fs: &FactorSystem, par: &Parametrization) -> Result<Option<Equation>> {
        let moduli = par.param_moduli();
        let mut oracle = |y: &[u8]| self.solvable_at(omega, fs, par, y);
        let learned = learn_equation(&moduli, &mut oracle)?;
        let exhaustive = par.size() <= self.config.verify_limit;
        match learned.result {
            Hyperplane::Equation(e) => {
                if exhaustive {
                    for y in all_points(&moduli) {
                        if e.holds(&y) && !self.solvable_at(omega, fs, par, &y)? {
                            return Err(invariant!("learned equation admits an unsolvable point {y:?}"));
                        }
                    }
                }
                Ok(Some(e))
            }
            Hyperplane::NotAffine => {
                if exhaustive {
                    for y in all_points(&moduli) {
                        if self.solvable_at(omega, fs, par, &y)? {
                            return Err(invariant!("no equation found although {y:?} is solvable"));
                        }
                    }
                }
                Ok(None)
            }
            Hyperplane::FullSpace => Err(invariant!("every parameter point solvable after a failure at zero")),
        }
    }
}

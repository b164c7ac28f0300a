use crate::algebra::{Algebra, Congruence};
use crate::error::{usage, Result};
use crate::instance::{Decision, Instance, RecursionKind, SubSolver};
use crate::relation::{Domain, Relation};

use super::linked::{is_fragmented, is_linked};

/// Result of the irreducibility check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Irreducibility {
    Irreducible,
    /// Domains that can be shrunk without losing solutions.
    Reduce(Vec<(usize, Domain)>),
    NoSolution,
}

/// The relation `σ_j(x, y) = ∃x' y': δ(x', x) ∧ δ(y', y) ∧ σ_i(x', y')` if it
/// is a proper equivalence on `D_j`.
fn propagate_congruence(delta: &Relation, sigma_i: &Congruence, dj: Domain) -> Option<Congruence> {
    let mut reach = [0u32; 16];
    for t in delta.tuples() {
        reach[t[1] as usize] |= 1 << sigma_i.class_index(t[0]);
    }
    let vals = dj.to_vec();
    let mut classes: Vec<Domain> = Vec::new();
    for &x in &vals {
        if classes.iter().any(|c| c.contains(x)) {
            continue;
        }
        let class: Domain =
            vals.iter().copied().filter(|&y| reach[x as usize] & reach[y as usize] != 0).collect();
        // Transitivity: every member must see exactly this class.
        for y in class.iter() {
            let cy: Domain =
                vals.iter().copied().filter(|&z| reach[y as usize] & reach[z as usize] != 0).collect();
            if cy != class {
                return None;
            }
        }
        classes.push(class);
    }
    if classes.len() < 2 {
        return None;
    }
    Congruence::from_classes(dj, classes).ok()
}

/// Checks, for each variable and each maximal congruence on its domain,
/// that the solution set of the projection onto the variables reached by
/// propagating the congruence is subdirect. Recursive calls go through
/// `solver` on instances where every domain is a proper congruence class.
///
/// The instance must be cycle-consistent, linked and not fragmented.
pub fn check_irreducibility(
    inst: &Instance,
    alg: &Algebra,
    solver: &mut dyn SubSolver,
) -> Result<Irreducibility> {
    if is_fragmented(inst) || !is_linked(inst) {
        return Err(usage!("irreducibility check needs a linked, non-fragmented instance"));
    }
    let n = inst.num_vars();
    for k in 0..n {
        if inst.domains[k].len() < 2 {
            continue;
        }
        let info = alg.info(inst.domains[k])?;
        for sigma_k in &info.maximal {
            let mut sigma: Vec<Option<Congruence>> = vec![None; n];
            // For each reached variable: parent variable and the connecting
            // binary projection.
            let mut parent: Vec<Option<(usize, Relation)>> = vec![None; n];
            let mut order = vec![k];
            sigma[k] = Some(sigma_k.clone());
            let mut grew = true;
            while grew {
                grew = false;
                for c in &inst.constraints {
                    for p in 0..c.arity() {
                        let i = c.scope[p];
                        let Some(si) = sigma[i].clone() else { continue };
                        for q in 0..c.arity() {
                            let j = c.scope[q];
                            if sigma[j].is_some() {
                                continue;
                            }
                            let delta = c.pair_projection(p, q);
                            if let Some(sj) = propagate_congruence(&delta, &si, inst.domains[j]) {
                                sigma[j] = Some(sj);
                                parent[j] = Some((i, delta));
                                order.push(j);
                                grew = true;
                            }
                        }
                    }
                }
            }
            let (proj, vars) = inst.projection(&order);
            let mut solvable = vec![Domain::EMPTY; vars.len()];
            for class in sigma_k.classes() {
                let mut cls = vec![Domain::EMPTY; n];
                cls[k] = *class;
                for &j in &order[1..] {
                    let (i, delta) = parent[j].as_ref().unwrap();
                    let image: Domain =
                        delta.tuples().filter(|t| cls[*i].contains(t[0])).map(|t| t[1]).collect();
                    let rep = image.first().expect("subdirect projection");
                    cls[j] = sigma[j].as_ref().unwrap().class(rep);
                }
                let doms: Vec<Domain> = vars.iter().map(|&v| cls[v]).collect();
                let sub = proj.restricted(&doms);
                for (idx, d) in doms.iter().enumerate() {
                    for a in d.iter() {
                        if solvable[idx].contains(a) {
                            continue;
                        }
                        match solver.decide_sub(&sub.with_value(idx, a), RecursionKind::NonLinked)? {
                            Decision::Sat(Some(w)) if sub.is_solution(&w) => {
                                for (t, &b) in w.iter().enumerate() {
                                    solvable[t].insert(b);
                                }
                            }
                            Decision::Sat(_) => solvable[idx].insert(a),
                            Decision::Unsat => {}
                        }
                    }
                }
            }
            if solvable.iter().all(|d| d.is_empty()) {
                return Ok(Irreducibility::NoSolution);
            }
            let reductions: Vec<(usize, Domain)> = vars
                .iter()
                .zip(&solvable)
                .filter(|(&v, d)| **d != inst.domains[v])
                .map(|(&v, &d)| (v, d))
                .collect();
            if !reductions.is_empty() {
                return Ok(Irreducibility::Reduce(reductions));
            }
        }
    }
    Ok(Irreducibility::Irreducible)
}

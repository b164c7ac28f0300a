use std::sync::Arc;

use crate::algebra::{principal_congruence, Algebra, Congruence};
use crate::error::{invariant, Result};
use crate::instance::Constraint;
use crate::relation::Relation;

/// Whether `c1` is weaker than `c2`: the scope of `c1` lies inside that of
/// `c2`, `c2` implies `c1`, and `c1` does not imply `c2`.
pub fn is_weaker(c1: &Constraint, c2: &Constraint) -> bool {
    let Some(pos): Option<Vec<usize>> = c1.scope.iter().map(|&v| c2.position(v)).collect() else {
        return false;
    };
    let r1 = &c1.relation;
    let r2 = &c2.relation;
    let proj = r2.project_positions(&pos).expect("valid positions");
    if !proj.tuples().all(|t| r1.contains(t)) {
        return false;
    }
    // c2 implies c1; equivalence holds iff c2 is all of c1 extended freely.
    let within = r1
        .tuples()
        .filter(|t| t.iter().zip(&pos).all(|(&a, &p)| r2.domain(p).contains(a)))
        .count() as u128;
    let extra: u128 = (0..c2.arity())
        .filter(|p| !pos.contains(p))
        .map(|p| r2.domain(p).len() as u128)
        .product();
    (r2.len() as u128) != within * extra
}

/// Iteratively drops constraints weaker than some remaining constraint.
/// Exact duplicates are merged first.
pub fn remove_weaker(constraints: &[Constraint]) -> Vec<Constraint> {
    let mut cs = constraints.to_vec();
    cs.sort();
    cs.dedup();
    loop {
        let weak = (0..cs.len())
            .find(|&i| (0..cs.len()).any(|j| j != i && is_weaker(&cs[i], &cs[j])));
        match weak {
            Some(i) => {
                cs.remove(i);
            }
            None => return cs,
        }
    }
}

/// One congruence-weakened constraint.
#[derive(Clone, Debug)]
pub struct Weakened {
    pub constraint: Constraint,
    pub congruence: Congruence,
    /// Places no restriction on the first variable: the weakened relation
    /// is full, or `Con(ρ, 1)` already was.
    pub tautological: bool,
}

/// The least congruence of the first coordinate's domain containing
/// `Con(ρ, 1)`, and whether `Con(ρ, 1)` is already that congruence.
pub fn first_coordinate_congruence(rel: &Relation, alg: &Algebra) -> Result<(Congruence, bool)> {
    let dom = rel.domain(0);
    let con = rel.con(0)?;
    let mut theta = Congruence::identity(dom);
    for t in con.tuples() {
        if t[0] != t[1] && !theta.related(t[0], t[1]) {
            theta = theta.join(&principal_congruence(dom, t[0], t[1], alg.operation()));
        }
    }
    let exact = theta.to_relation(rel.radix()) == con;
    Ok((theta, exact))
}

/// `ρ'(y1, ..) = ∃z ρ(z, y2, ..) ∧ σ(z, y1)`.
pub fn weaken_by(rel: &Relation, sigma: &Congruence) -> Relation {
    let mut t2 = Vec::with_capacity(rel.len());
    for t in rel.tuples() {
        for b in sigma.class(t[0]).iter() {
            let mut u = t.to_vec();
            u[0] = b;
            t2.push(u);
        }
    }
    Relation::new(rel.radix(), rel.domains().to_vec(), t2).expect("same shape")
}

/// Congruence-weakened constraints of `c`, one for each congruence minimal
/// among those strictly containing `Con(ρ, 1)` (or for the congruence it
/// generates, when `Con(ρ, 1)` is not transitive). When `Con(ρ, 1)` is
/// already full there is nothing above it; the single result is then
/// flagged tautological.
pub fn congruence_weakened(c: &Constraint, alg: &Algebra) -> Result<Vec<Weakened>> {
    let rel = &c.relation;
    if rel.is_empty() {
        return Err(invariant!("weakening an empty relation"));
    }
    let (theta, exact) = first_coordinate_congruence(rel, alg)?;
    let degenerate = theta.is_full();
    let targets = if degenerate {
        vec![theta]
    } else if exact {
        alg.minimal_above(&theta)?
    } else {
        vec![theta]
    };
    Ok(targets
        .into_iter()
        .map(|sigma| {
            let r = weaken_by(rel, &sigma);
            Weakened {
                tautological: degenerate || r.is_full(),
                constraint: Constraint { scope: c.scope.clone(), relation: Arc::new(r) },
                congruence: sigma,
            }
        })
        .collect())
}

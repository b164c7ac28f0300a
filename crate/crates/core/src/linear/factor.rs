use std::collections::BTreeSet;

use crate::algebra::{Congruence, LinearStructure};
use crate::error::{invariant, Result};
use crate::instance::Instance;
use crate::relation::Domain;

use super::field::{add, mul, rref, sub};
use super::system::{Equation, LinearSystem};

/// Equations cutting out exactly `points` (a set of vectors whose entry
/// `t` lives in `Z_{moduli[t]}` and names variable `vars[t]`). Fails if
/// the set is not an affine subspace of the product.
pub fn affine_equations(points: &[Vec<u8>], vars: &[usize], moduli: &[u8]) -> Result<Vec<Equation>> {
    let distinct: BTreeSet<&Vec<u8>> = points.iter().collect();
    if distinct.is_empty() {
        return Err(invariant!("cannot fit an affine subspace to no points"));
    }
    let mut primes: Vec<u8> = moduli.to_vec();
    primes.sort();
    primes.dedup();
    let mut product: u128 = 1;
    let mut eqs = Vec::new();
    for &p in &primes {
        let coords: Vec<usize> = (0..moduli.len()).filter(|&t| moduli[t] == p).collect();
        let h = coords.len();
        let proj: BTreeSet<Vec<u8>> =
            distinct.iter().map(|x| coords.iter().map(|&t| x[t]).collect()).collect();
        let v0 = proj.iter().next().unwrap().clone();
        let mut rows: Vec<Vec<u8>> = proj
            .iter()
            .skip(1)
            .map(|x| x.iter().zip(&v0).map(|(&a, &b)| sub(a, b, p)).collect())
            .collect();
        let pivots = rref(&mut rows, h, p);
        let dim = pivots.len() as u32;
        let size = (p as u128).checked_pow(dim);
        if size != Some(proj.len() as u128) {
            return Err(invariant!(
                "relation is not affine over Z_{p}: {} points span dimension {dim}",
                proj.len()
            ));
        }
        product = product.saturating_mul(proj.len() as u128);
        for f in (0..h).filter(|c| !pivots.contains(c)) {
            let mut c = vec![0u8; h];
            c[f] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                c[pc] = sub(0, rows[r][f], p);
            }
            let rhs = c.iter().zip(&v0).fold(0u8, |s, (&a, &b)| add(s, mul(a, b, p), p));
            let terms = coords
                .iter()
                .zip(&c)
                .filter(|(_, &a)| a != 0)
                .map(|(&t, &a)| (vars[t], a))
                .collect();
            eqs.push(Equation { prime: p, terms, rhs });
        }
    }
    if product != distinct.len() as u128 {
        return Err(invariant!("relation is not a product of its prime components"));
    }
    Ok(eqs)
}

/// An instance's image in the quotients by minimal linear congruences,
/// written as a linear system.
#[derive(Clone, Debug)]
pub struct FactorSystem {
    pub system: LinearSystem,
    /// First linear variable of each instance variable.
    pub var_offset: Vec<usize>,
    pub structures: Vec<(Congruence, LinearStructure)>,
}

impl FactorSystem {
    /// Builds the system; `structures[i]` is the minimal linear congruence
    /// of `D_i` with the quotient's group structure.
    pub fn build(inst: &Instance, structures: Vec<(Congruence, LinearStructure)>) -> Result<FactorSystem> {
        let mut system = LinearSystem::default();
        let mut var_offset = Vec::with_capacity(inst.num_vars());
        for (cong, s) in &structures {
            var_offset.push(system.moduli.len());
            if s.size() != cong.num_classes() {
                return Err(invariant!("structure size differs from number of classes"));
            }
            for &p in &s.primes {
                system.add_variable(p);
            }
        }
        let fs = FactorSystem { system, var_offset, structures };
        let mut equations = Vec::new();
        for c in &inst.constraints {
            let mut vars = Vec::new();
            let mut moduli = Vec::new();
            for &v in &c.scope {
                for (f, &p) in fs.structures[v].1.primes.iter().enumerate() {
                    vars.push(fs.var_offset[v] + f);
                    moduli.push(p);
                }
            }
            if vars.is_empty() {
                continue;
            }
            let points: Vec<Vec<u8>> = c
                .relation
                .tuples()
                .map(|t| {
                    c.scope
                        .iter()
                        .zip(t)
                        .flat_map(|(&v, &a)| fs.coords_of(v, a).to_vec())
                        .collect()
                })
                .collect();
            equations.extend(affine_equations(&points, &vars, &moduli)?);
        }
        let mut fs = fs;
        fs.system.equations = equations;
        Ok(fs)
    }

    pub fn coords_of(&self, v: usize, a: u8) -> &[u8] {
        let (cong, s) = &self.structures[v];
        &s.coords[cong.class_index(a)]
    }

    /// The congruence class of each variable named by a point `x` of the
    /// linear system.
    pub fn classes(&self, x: &[u8]) -> Vec<Domain> {
        (0..self.structures.len())
            .map(|v| {
                let (cong, s) = &self.structures[v];
                let k = s.primes.len();
                let at = self.var_offset[v];
                let e = s.element(&x[at..at + k]).expect("coordinates of an element");
                cong.classes()[e as usize]
            })
            .collect()
    }
}

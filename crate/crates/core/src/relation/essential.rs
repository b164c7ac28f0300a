use std::collections::HashSet;

use crate::error::{usage, Result};

use super::domain::CoordSet;
use super::table::{Relation, Tuple};

impl Relation {
    /// Whether `α ∉ ρ` and every single coordinate of `α` can be changed to
    /// land in `ρ`.
    pub fn is_essential_tuple(&self, alpha: &[u8]) -> bool {
        if alpha.len() != self.arity() || self.contains(alpha) {
            return false;
        }
        let mut t = alpha.to_vec();
        (0..self.arity()).all(|i| {
            let keep = t[i];
            let ok = self.domain(i).iter().any(|b| {
                t[i] = b;
                self.contains(&t)
            });
            t[i] = keep;
            ok
        })
    }

    /// Some essential tuple, scanning non-members at Hamming distance one
    /// from a member in lexicographic order.
    pub fn essential_tuple(&self) -> Option<Tuple> {
        let n = self.arity();
        if n == 0 || self.is_empty() {
            return None;
        }
        if n == 1 {
            return self.domain(0).iter().find(|&a| !self.contains(&[a])).map(|a| vec![a]);
        }
        let fibers: Vec<HashSet<u64>> =
            (0..n).map(|i| self.fibers(i).into_keys().collect()).collect();
        let weights: Vec<u64> = (0..n).map(|i| self.weight(i)).collect();
        let mut tried = HashSet::new();
        for (&c, t) in self.codes().iter().zip(self.tuples()) {
            for i in 0..n {
                let base = c - t[i] as u64 * weights[i];
                for b in self.domain(i).iter() {
                    let code = base + b as u64 * weights[i];
                    if self.contains_code(code) || !tried.insert(code) {
                        continue;
                    }
                    let alpha = self.decode(code);
                    let repairable = (0..n).all(|j| {
                        j == i || fibers[j].contains(&(code - alpha[j] as u64 * weights[j]))
                    });
                    if repairable {
                        return Some(alpha);
                    }
                }
            }
        }
        None
    }

    /// Whether `ρ` is not a conjunction of relations of smaller arity.
    pub fn is_essential(&self) -> bool {
        self.essential_tuple().is_some()
    }

    /// A minimal coordinate set `I` with `pr_I(α) ∉ pr_I(ρ)`, found by
    /// growing prefixes: extend `{0..k} ∪ I` until `α` drops out, add `k`,
    /// and restart until `I` alone witnesses the exclusion.
    pub fn min_witness_projection(&self, alpha: &[u8]) -> Result<CoordSet> {
        if alpha.len() != self.arity() {
            return Err(usage!("tuple length {} differs from arity {}", alpha.len(), self.arity()));
        }
        if self.contains(alpha) {
            return Err(usage!("tuple {alpha:?} is a member of the relation"));
        }
        let mut set = CoordSet::EMPTY;
        loop {
            let mut k = 0;
            while self.projection_contains(CoordSet::prefix(k + 1).union(set), alpha) {
                k += 1;
            }
            set.insert(k);
            if !self.projection_contains(set, alpha) {
                return Ok(set);
            }
        }
    }

    /// Coordinate sets `G` such that each `pr_I(ρ)` is essential (or a
    /// proper unary projection) and their conjunction is `ρ`. Only
    /// inclusion-maximal sets are kept, in ascending order.
    pub fn essential_representation(&self) -> Vec<CoordSet> {
        let n = self.arity();
        if n == 0 {
            return Vec::new();
        }
        if n == 1 {
            return if self.is_full() { Vec::new() } else { vec![CoordSet::all(1)] };
        }
        let last = n - 1;
        let wl = self.weight(last);
        let mut found: HashSet<CoordSet> = HashSet::new();
        let mut tried = HashSet::new();
        for (&c, t) in self.codes().iter().zip(self.tuples()) {
            let base = c - t[last] as u64 * wl;
            if !tried.insert(base) {
                continue;
            }
            for b in self.domain(last).iter() {
                let code = base + b as u64 * wl;
                if !self.contains_code(code) {
                    let alpha = self.decode(code);
                    found.insert(self.min_witness_projection(&alpha).expect("non-member"));
                }
            }
        }
        let prefix = self.project(CoordSet::prefix(last)).expect("valid prefix");
        found.extend(prefix.essential_representation());
        let all: Vec<CoordSet> = found.iter().copied().collect();
        let mut out: Vec<CoordSet> = all
            .iter()
            .copied()
            .filter(|s| !all.iter().any(|o| o != s && s.is_subset(*o)))
            .collect();
        out.sort();
        out
    }
}

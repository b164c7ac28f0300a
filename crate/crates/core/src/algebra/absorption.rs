use serde::Serialize;

use crate::error::Result;
use crate::relation::Domain;

use super::clone::{search_clone, subuniverses, tuples_over, CloneBudget};
use super::congruence::Congruence;
use super::linear::{is_linear, LinearStructure};
use super::operation::Operation;

/// A proper absorbing subuniverse with a witnessing term restricted to the
/// argument tuples that matter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Absorption {
    pub subset: Domain,
    /// Argument tuples where some position is outside `subset` and all
    /// others inside.
    pub points: Vec<Vec<u8>>,
    /// Term values on `points`.
    pub values: Vec<u8>,
}

impl Absorption {
    /// Re-checks the witness: every value lands in the subset and every
    /// point has exactly the required shape.
    pub fn verify(&self, domain: Domain, arity: usize) -> bool {
        let expected = absorption_points(self.subset, domain, arity);
        expected == self.points && self.values.iter().all(|&v| self.subset.contains(v))
    }
}

/// The outcome of the domain trichotomy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DomainClassification {
    BinaryAbsorbing(Absorption),
    TernaryAbsorbing(Absorption),
    /// A maximal congruence whose (simple, absorption-free) quotient is not
    /// linear, hence polynomially complete.
    PcQuotient(Congruence),
    /// The minimal linear congruence and the structure of its quotient.
    LinearQuotient(Congruence, LinearStructure),
}

#[derive(Serialize)]
struct Tag<'a> {
    kind: &'a str,
    witness: Vec<Vec<u8>>,
}

impl DomainClassification {
    pub fn kind(&self) -> &'static str {
        match self {
            DomainClassification::BinaryAbsorbing(_) => "binary-absorbing",
            DomainClassification::TernaryAbsorbing(_) => "ternary-absorbing",
            DomainClassification::PcQuotient(_) => "pc-quotient",
            DomainClassification::LinearQuotient(..) => "linear-quotient",
        }
    }

    /// A short JSON rendering for reports.
    pub fn to_json(&self) -> String {
        let witness = match self {
            DomainClassification::BinaryAbsorbing(a) | DomainClassification::TernaryAbsorbing(a) => {
                vec![a.subset.to_vec()]
            }
            DomainClassification::PcQuotient(c) | DomainClassification::LinearQuotient(c, _) => {
                c.classes().iter().map(|k| k.to_vec()).collect()
            }
        };
        serde_json::to_string(&Tag { kind: self.kind(), witness }).unwrap()
    }
}

/// Argument tuples over `domain` of length `k` with at most one entry
/// outside `subset`, in lexicographic order.
pub(crate) fn absorption_points(subset: Domain, domain: Domain, k: usize) -> Vec<Vec<u8>> {
    tuples_over(domain, k)
        .into_iter()
        .filter(|t| t.iter().filter(|&&a| !subset.contains(a)).count() <= 1)
        .collect()
}

fn find_absorbing(
    domain: Domain,
    w: &Operation,
    k: usize,
    budget: CloneBudget,
) -> Result<Option<Absorption>> {
    for b in subuniverses(domain, w) {
        if b == domain {
            continue;
        }
        let points = absorption_points(b, domain, k);
        if let Some(values) = search_clone(w, &points, k, budget, |f| f.iter().all(|&v| b.contains(v)))? {
            return Ok(Some(Absorption { subset: b, points, values }));
        }
    }
    Ok(None)
}

/// Least proper subuniverse absorbing `domain` with a binary term.
pub fn find_binary_absorbing(
    domain: Domain,
    w: &Operation,
    budget: CloneBudget,
) -> Result<Option<Absorption>> {
    find_absorbing(domain, w, 2, budget)
}

/// Least proper subuniverse absorbing `domain` with a ternary term.
pub fn find_ternary_absorbing(
    domain: Domain,
    w: &Operation,
    budget: CloneBudget,
) -> Result<Option<Absorption>> {
    find_absorbing(domain, w, 3, budget)
}

/// Applies the trichotomy: binary absorption, ternary absorption, a
/// non-linear maximal quotient, else the minimal linear congruence.
pub fn classify(
    domain: Domain,
    w: &Operation,
    all: &[Congruence],
    maximal: &[Congruence],
    budget: CloneBudget,
) -> Result<Option<DomainClassification>> {
    if domain.len() < 2 {
        return Ok(None);
    }
    if let Some(a) = find_binary_absorbing(domain, w, budget)? {
        return Ok(Some(DomainClassification::BinaryAbsorbing(a)));
    }
    if let Some(a) = find_ternary_absorbing(domain, w, budget)? {
        return Ok(Some(DomainClassification::TernaryAbsorbing(a)));
    }
    for sigma in maximal {
        if is_linear(&sigma.quotient(w)).is_none() {
            return Ok(Some(DomainClassification::PcQuotient(sigma.clone())));
        }
    }
    Ok(super::linear::minimal_linear_congruence(all, w, domain)
        .map(|(c, s)| DomainClassification::LinearQuotient(c, s)))
}

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{invariant, Result};
use crate::relation::{Domain, Relation};

use super::absorption::{classify, DomainClassification};
use super::clone::{generate_subuniverse, CloneBudget};
use super::congruence::{congruences, maximal_congruences, minimal_above, sigma_star, Congruence};
use super::linear::{minimal_linear_congruence, LinearStructure};
use super::operation::Operation;

/// Cached algebraic facts about one subuniverse.
#[derive(Debug)]
pub struct DomainInfo {
    pub domain: Domain,
    pub congruences: Vec<Congruence>,
    pub maximal: Vec<Congruence>,
    classification: OnceLock<Result<Option<DomainClassification>>>,
    min_linear: OnceLock<Option<(Congruence, LinearStructure)>>,
    stars: Mutex<HashMap<Congruence, Option<Arc<Relation>>>>,
}

/// The algebra `(A; w)` for a special WNU `w`, with per-domain caches.
///
/// Safe to share between threads; caches are internally synchronized.
#[derive(Debug)]
pub struct Algebra {
    w: Operation,
    budget: CloneBudget,
    infos: Mutex<HashMap<Domain, Arc<DomainInfo>>>,
}

impl Algebra {
    pub fn new(w: Operation) -> Algebra {
        Algebra::with_budget(w, CloneBudget::default())
    }

    pub fn with_budget(w: Operation, budget: CloneBudget) -> Algebra {
        Algebra { w, budget, infos: Mutex::new(HashMap::new()) }
    }

    pub fn operation(&self) -> &Operation {
        &self.w
    }

    pub fn size(&self) -> usize {
        self.w.size()
    }

    pub fn arity(&self) -> usize {
        self.w.arity()
    }

    pub fn universe(&self) -> Domain {
        Domain::full(self.w.size())
    }

    pub fn is_subuniverse(&self, d: Domain) -> bool {
        !d.is_empty() && generate_subuniverse(d, &self.w) == d
    }

    pub fn info(&self, d: Domain) -> Result<Arc<DomainInfo>> {
        if let Some(i) = self.infos.lock().unwrap().get(&d) {
            return Ok(i.clone());
        }
        if !self.is_subuniverse(d) {
            return Err(invariant!("domain {d} is not a subuniverse"));
        }
        let all = congruences(d, &self.w);
        let maximal = maximal_congruences(&all);
        let info = Arc::new(DomainInfo {
            domain: d,
            congruences: all,
            maximal,
            classification: OnceLock::new(),
            min_linear: OnceLock::new(),
            stars: Mutex::new(HashMap::new()),
        });
        Ok(self.infos.lock().unwrap().entry(d).or_insert(info).clone())
    }

    pub fn classify(&self, d: Domain) -> Result<Option<DomainClassification>> {
        let info = self.info(d)?;
        info.classification
            .get_or_init(|| classify(d, &self.w, &info.congruences, &info.maximal, self.budget))
            .clone()
    }

    pub fn minimal_linear(&self, d: Domain) -> Result<(Congruence, LinearStructure)> {
        let info = self.info(d)?;
        info.min_linear
            .get_or_init(|| minimal_linear_congruence(&info.congruences, &self.w, d))
            .clone()
            .ok_or_else(|| invariant!("meet of linear congruences on {d} is not linear"))
    }

    /// `σ*` if `σ` is irreducible.
    pub fn sigma_star(&self, sigma: &Congruence) -> Result<Option<Arc<Relation>>> {
        let info = self.info(sigma.domain())?;
        let mut stars = info.stars.lock().unwrap();
        Ok(stars
            .entry(sigma.clone())
            .or_insert_with(|| sigma_star(sigma, &self.w, self.size()).map(Arc::new))
            .clone())
    }

    /// Congruences of `d` minimal among those strictly above `sigma`.
    pub fn minimal_above(&self, sigma: &Congruence) -> Result<Vec<Congruence>> {
        let info = self.info(sigma.domain())?;
        Ok(minimal_above(&info.congruences, sigma))
    }
}

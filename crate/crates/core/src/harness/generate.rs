use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{subuniverses, Algebra};
use crate::error::{usage, Result};
use crate::instance::{Constraint, Instance};
use crate::relation::{Domain, Relation};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub seed: u64,
    pub vars: usize,
    pub constraints: usize,
    pub max_arity: usize,
    /// Seed tuples per relation as a fraction of the scope's domain
    /// product; 1.0 gives full relations.
    pub density: f64,
    /// Chance that a variable starts on a random proper subuniverse.
    pub restrict: f64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig { seed: 0, vars: 5, constraints: 6, max_arity: 3, density: 0.25, restrict: 0.0 }
    }
}

/// A random instance whose relations are closures of random tuples under
/// the algebra's operation. Deterministic in `cfg`.
pub fn generate_instance(alg: &Algebra, cfg: &GeneratorConfig) -> Result<Instance> {
    if cfg.vars == 0 || cfg.max_arity == 0 {
        return Err(usage!("generator needs at least one variable and arity one"));
    }
    if !(0.0..=1.0).contains(&cfg.density) || !(0.0..=1.0).contains(&cfg.restrict) {
        return Err(usage!("density and restrict must lie in [0, 1]"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let w = alg.operation();
    let radix = alg.size();
    let universe = alg.universe();
    let proper: Vec<Domain> = subuniverses(universe, w).into_iter().filter(|d| *d != universe).collect();
    let domains: Vec<Domain> = (0..cfg.vars)
        .map(|_| {
            if !proper.is_empty() && rng.gen_bool(cfg.restrict) {
                proper[rng.gen_range(0..proper.len())]
            } else {
                universe
            }
        })
        .collect();
    let mut constraints = Vec::with_capacity(cfg.constraints);
    for _ in 0..cfg.constraints {
        let arity = rng.gen_range(1..=cfg.max_arity.min(cfg.vars));
        let scope: Vec<usize> = sample(&mut rng, cfg.vars, arity).into_vec();
        let values: Vec<Vec<u8>> = scope.iter().map(|&v| domains[v].to_vec()).collect();
        let product: usize = values.iter().map(|v| v.len()).product();
        let count = ((cfg.density * product as f64).round() as usize).clamp(1, product);
        let picks = sample(&mut rng, product, count).into_vec();
        let tuples: Vec<Vec<u8>> = picks
            .into_iter()
            .map(|mut k| {
                let mut t = vec![0u8; arity];
                for p in (0..arity).rev() {
                    t[p] = values[p][k % values[p].len()];
                    k /= values[p].len();
                }
                t
            })
            .collect();
        let rel = Relation::new(radix, vec![universe; arity], tuples)?.close_under(w)?;
        constraints.push(Constraint::new(scope, rel)?);
    }
    Ok(Instance::new(radix, domains.clone(), constraints)?.restricted(&domains))
}

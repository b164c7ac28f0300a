use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::Algebra;
use crate::error::Result;
use crate::instance::Instance;
use crate::solver::{Solver, SolverStats};

use super::format::write_instance;
use super::generate::{generate_instance, GeneratorConfig};
use super::oracle::brute_force_solve;

/// A disagreement between the solver and the oracle.
#[derive(Clone, Debug, Serialize)]
pub struct Mismatch {
    pub seed: u64,
    pub solver: String,
    pub oracle_sat: bool,
    pub instance: String,
    /// Greedily shrunk instance that still disagrees.
    pub minimized: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct DiffReport {
    pub runs: usize,
    pub sat: usize,
    pub unsat: usize,
    pub mismatches: Vec<Mismatch>,
    /// Deepest nesting per recursion kind over all runs.
    pub max_depth: BTreeMap<u8, usize>,
}

impl DiffReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Solver outcome as text, or `None` when it agrees with the oracle.
fn disagreement(alg: &Algebra, inst: &Instance, oracle_cap: u128) -> Result<(Option<String>, bool, SolverStats)> {
    let oracle = brute_force_solve(inst, oracle_cap)?.is_some();
    let mut solver = Solver::new(alg);
    let got = solver.solve(inst);
    let stats = solver.stats().clone();
    let bad = match got {
        Err(e) => Some(format!("error: {e}")),
        Ok(Some(x)) if !inst.is_solution(&x) => Some(format!("invalid witness {x:?}")),
        Ok(Some(_)) if !oracle => Some("SAT".into()),
        Ok(None) if oracle => Some("UNSAT".into()),
        Ok(_) => None,
    };
    Ok((bad, oracle, stats))
}

fn minimize(alg: &Algebra, inst: &Instance, oracle_cap: u128) -> Instance {
    let mut cur = inst.clone();
    let mut k = 0;
    while k < cur.constraints.len() {
        let mut next = cur.clone();
        next.constraints.remove(k);
        match disagreement(alg, &next, oracle_cap) {
            Ok((Some(_), _, _)) => cur = next,
            _ => k += 1,
        }
    }
    cur
}

/// Generates `runs` instances with seeds `cfg.seed, cfg.seed + 1, ..` and
/// compares the solver with the oracle on each, in parallel.
pub fn diff_run(alg: &Algebra, cfg: &GeneratorConfig, runs: usize, oracle_cap: u128) -> Result<DiffReport> {
    let results: Vec<Result<(u64, Option<Mismatch>, bool, SolverStats)>> = (0..runs as u64)
        .into_par_iter()
        .map(|i| {
            let seed = cfg.seed.wrapping_add(i);
            let inst = generate_instance(alg, &GeneratorConfig { seed, ..cfg.clone() })?;
            let (bad, oracle, stats) = disagreement(alg, &inst, oracle_cap)?;
            let mismatch = bad.map(|solver| Mismatch {
                seed,
                solver,
                oracle_sat: oracle,
                instance: write_instance(alg.operation(), &inst),
                minimized: write_instance(alg.operation(), &minimize(alg, &inst, oracle_cap)),
            });
            Ok((seed, mismatch, oracle, stats))
        })
        .collect();
    let mut report = DiffReport { runs, ..Default::default() };
    for r in results {
        let (_, mismatch, oracle, stats) = r?;
        if oracle {
            report.sat += 1;
        } else {
            report.unsat += 1;
        }
        for (k, d) in stats.max_depth {
            let e = report.max_depth.entry(k).or_default();
            *e = (*e).max(d);
        }
        report.mismatches.extend(mismatch);
    }
    Ok(report)
}

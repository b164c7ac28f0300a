use std::collections::HashSet;

use crate::error::{usage, Error, Result};
use crate::relation::Domain;

use super::operation::{decode_args, Operation};

/// Limits for generating term operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CloneBudget {
    /// Maximum number of distinct functions discovered.
    pub max_functions: usize,
    /// Maximum number of coordinatewise applications of `w`.
    pub max_applications: u64,
}

impl Default for CloneBudget {
    fn default() -> Self {
        CloneBudget { max_functions: 200_000, max_applications: 200_000_000 }
    }
}

/// Term operations of arity `k` restricted to a finite set of argument
/// tuples `points`, generated from the `k` projections by applying `w`
/// coordinatewise. Stops early and returns the first function accepted by
/// `stop`; returns `Ok(None)` when the restricted clone is exhausted.
pub fn search_clone(
    w: &Operation,
    points: &[Vec<u8>],
    k: usize,
    budget: CloneBudget,
    mut stop: impl FnMut(&[u8]) -> bool,
) -> Result<Option<Vec<u8>>> {
    let m = w.arity();
    let size = w.size();
    let mut funcs: Vec<Vec<u8>> = Vec::new();
    let mut seen: HashSet<Vec<u8>> = HashSet::new();
    for j in 0..k {
        let f: Vec<u8> = points.iter().map(|p| p[j]).collect();
        if stop(&f) {
            return Ok(Some(f));
        }
        if seen.insert(f.clone()) {
            funcs.push(f);
        }
    }
    let mut applications = 0u64;
    let mut frontier = 0usize;
    let mut out = vec![0u8; points.len()];
    while frontier < funcs.len() {
        let end = funcs.len();
        let mut pick = vec![0usize; m];
        'outer: loop {
            if pick.iter().any(|&p| p >= frontier) {
                applications += points.len() as u64;
                if applications > budget.max_applications {
                    return Err(Error::Resource(format!(
                        "clone generation exceeded {} applications",
                        budget.max_applications
                    )));
                }
                for (x, slot) in out.iter_mut().enumerate() {
                    let mut idx = 0usize;
                    for &p in &pick {
                        idx = idx * size + funcs[p][x] as usize;
                    }
                    *slot = w.apply_index(idx);
                }
                if !seen.contains(&out) {
                    if stop(&out) {
                        return Ok(Some(out));
                    }
                    seen.insert(out.clone());
                    funcs.push(out.clone());
                    if funcs.len() > budget.max_functions {
                        return Err(Error::Resource(format!(
                            "clone generation exceeded {} functions",
                            budget.max_functions
                        )));
                    }
                }
            }
            let mut j = m;
            loop {
                if j == 0 {
                    break 'outer;
                }
                j -= 1;
                pick[j] += 1;
                if pick[j] < end {
                    break;
                }
                pick[j] = 0;
            }
        }
        frontier = end;
    }
    Ok(None)
}

/// All term operations of arity `k` restricted to `points`.
pub fn generate_clone(
    w: &Operation,
    points: &[Vec<u8>],
    k: usize,
    budget: CloneBudget,
) -> Result<Vec<Vec<u8>>> {
    let mut all = Vec::new();
    search_clone(w, points, k, budget, |f| {
        all.push(f.to_vec());
        false
    })?;
    Ok(all)
}

/// All `k`-tuples over `d` in lexicographic order.
pub(crate) fn tuples_over(d: Domain, k: usize) -> Vec<Vec<u8>> {
    let elems = d.to_vec();
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        let mut next = Vec::with_capacity(out.len() * elems.len());
        for t in &out {
            for &a in &elems {
                let mut u = t.clone();
                u.push(a);
                next.push(u);
            }
        }
        out = next;
    }
    out
}

/// A special WNU of the same arity in the clone of `w`. Returns `w` itself
/// when it is already special.
pub fn derive_special_wnu(w: &Operation, budget: CloneBudget) -> Result<Operation> {
    if !w.is_idempotent() || !w.is_wnu() {
        return Err(usage!("operation is not an idempotent WNU"));
    }
    if w.is_special_wnu() {
        return Ok(w.clone());
    }
    let m = w.arity();
    let n = w.size();
    let points = tuples_over(Domain::full(n), m);
    let found = search_clone(w, &points, m, budget, |f| {
        Operation::new(m, n, f.to_vec()).is_ok_and(|op| op.is_special_wnu())
    })?;
    match found {
        Some(table) => Operation::new(m, n, table),
        None => Err(Error::Resource(format!(
            "the clone has no special WNU of arity {m}; a different arity is required"
        ))),
    }
}

/// Least subset of the universe containing `gens` and closed under `w`.
pub fn generate_subuniverse(gens: Domain, w: &Operation) -> Domain {
    let m = w.arity();
    let mut cur = gens;
    let mut args = vec![0u8; m];
    loop {
        let elems = cur.to_vec();
        let mut next = cur;
        let total = elems.len().pow(m as u32);
        for idx in 0..total {
            decode_args(idx, elems.len(), &mut args);
            let vals: Vec<u8> = args.iter().map(|&i| elems[i as usize]).collect();
            next.insert(w.apply(&vals));
        }
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

/// Nonempty subuniverses of `d`, ordered by size then by sorted elements.
pub fn subuniverses(d: Domain, w: &Operation) -> Vec<Domain> {
    let elems = d.to_vec();
    let mut found: HashSet<Domain> = HashSet::new();
    for mask in 1u64..(1 << elems.len()) {
        let gens: Domain = elems
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &a)| a)
            .collect();
        found.insert(generate_subuniverse(gens, w));
    }
    let mut out: Vec<Domain> = found.into_iter().collect();
    out.sort_by_key(|s| (s.len(), s.to_vec()));
    out
}

use crate::error::{resource, Result};
use crate::instance::Instance;

/// Default bound on the product of domain sizes.
pub const DEFAULT_ORACLE_CAP: u128 = 10_000_000;

/// Lexicographically first solution by exhaustive search with early
/// constraint checks. Fails if the domain product exceeds `cap`.
pub fn brute_force_solve(inst: &Instance, cap: u128) -> Result<Option<Vec<u8>>> {
    let n = inst.num_vars();
    let product = inst.domains.iter().fold(1u128, |acc, d| acc.saturating_mul(d.len() as u128));
    if product > cap {
        return Err(resource!("{product} assignments exceed the oracle cap {cap}"));
    }
    if inst.domains.iter().any(|d| d.is_empty()) {
        return Ok(None);
    }
    // Constraints grouped by the last variable of their scope.
    let mut due: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (k, c) in inst.constraints.iter().enumerate() {
        match c.scope.iter().max() {
            Some(&v) => due[v].push(k),
            None => {
                if c.relation.is_empty() {
                    return Ok(None);
                }
            }
        }
    }
    let values: Vec<Vec<u8>> = inst.domains.iter().map(|d| d.to_vec()).collect();
    let mut pick = vec![0usize; n];
    let mut x = vec![0u8; n];
    let mut v = 0;
    let ok = |x: &[u8], v: usize| due[v].iter().all(|&k| inst.constraints[k].holds(x));
    if n == 0 {
        return Ok(Some(x));
    }
    loop {
        if pick[v] < values[v].len() {
            x[v] = values[v][pick[v]];
            if ok(&x, v) {
                if v + 1 == n {
                    return Ok(Some(x));
                }
                v += 1;
                pick[v] = 0;
            } else {
                pick[v] += 1;
            }
        } else {
            if v == 0 {
                return Ok(None);
            }
            v -= 1;
            pick[v] += 1;
        }
    }
}

/// Every solution, in lexicographic order.
pub fn all_solutions(inst: &Instance, cap: u128) -> Result<Vec<Vec<u8>>> {
    let product = inst.domains.iter().fold(1u128, |acc, d| acc.saturating_mul(d.len() as u128));
    if product > cap {
        return Err(resource!("{product} assignments exceed the oracle cap {cap}"));
    }
    let mut out: Vec<Vec<u8>> = vec![Vec::new()];
    for d in &inst.domains {
        out = out
            .into_iter()
            .flat_map(|x| {
                d.iter().map(move |a| {
                    let mut y = x.clone();
                    y.push(a);
                    y
                })
            })
            .collect();
    }
    out.retain(|x| inst.is_solution(x));
    Ok(out)
}

use std::fmt::Write as _;

use crate::algebra::Algebra;
use crate::error::Result;

use super::format::InstanceFile;

/// Text report: per-domain classification and congruence lattice, then
/// per-relation structure.
pub fn analyze(file: &InstanceFile) -> Result<String> {
    let alg = Algebra::new(file.operation.clone());
    let inst = &file.instance;
    let mut out = String::new();
    if file.operation != file.declared {
        writeln!(out, "operation: not special; using a derived special WNU of arity {}", file.operation.arity()).unwrap();
    } else {
        writeln!(out, "operation: special WNU of arity {}", file.operation.arity()).unwrap();
    }
    let mut domains = inst.domains.clone();
    domains.sort();
    domains.dedup();
    for d in domains.into_iter().filter(|d| !d.is_empty()) {
        let info = alg.info(d)?;
        writeln!(out, "domain {d}").unwrap();
        let cons: Vec<String> = info.congruences.iter().map(|c| format!("{c:?}")).collect();
        writeln!(out, "  congruences: {}", cons.join(" ")).unwrap();
        let max: Vec<String> = info.maximal.iter().map(|c| format!("{c:?}")).collect();
        writeln!(out, "  maximal: {}", max.join(" ")).unwrap();
        match alg.classify(d)? {
            Some(c) => writeln!(out, "  classification: {}", c.to_json()).unwrap(),
            None => writeln!(out, "  classification: trivial").unwrap(),
        }
    }
    for (k, c) in inst.constraints.iter().enumerate() {
        let r = &c.relation;
        let vars: Vec<&str> = c.scope.iter().map(|&v| file.var_names[v].as_str()).collect();
        writeln!(
            out,
            "constraint {k} on ({}): {} tuples, essential={}, parallelogram={}, rectangular={}, subdirect={}",
            vars.join(", "),
            r.len(),
            r.is_essential(),
            r.has_parallelogram(),
            r.is_rectangular(),
            r.is_subdirect()
        )
        .unwrap();
    }
    Ok(out)
}

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::algebra::{derive_special_wnu, generate_subuniverse, CloneBudget, Operation};
use crate::error::{input, Result};
use crate::instance::{Constraint, Instance};
use crate::relation::{Domain, Relation};

/// A parsed instance file.
#[derive(Clone, Debug)]
pub struct InstanceFile {
    /// The operation as written in the file.
    pub declared: Operation,
    /// A special WNU in the clone of `declared`; equal to it when it is
    /// already special.
    pub operation: Operation,
    pub var_names: Vec<String>,
    pub rel_names: Vec<String>,
    pub instance: Instance,
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    /// Next non-empty line with comments stripped, as (line number, tokens).
    fn next(&mut self) -> Option<(usize, Vec<&'a str>)> {
        for (no, line) in self.inner.by_ref() {
            let line = line.split('#').next().unwrap_or("");
            let toks: Vec<&str> = line.split_whitespace().collect();
            if !toks.is_empty() {
                return Some((no + 1, toks));
            }
        }
        None
    }
}

fn num<T: std::str::FromStr>(tok: &str, line: usize) -> Result<T> {
    tok.parse().map_err(|_| input!("line {line}: expected a number, found `{tok}`"))
}

fn element(tok: &str, line: usize, size: usize) -> Result<u8> {
    let v: usize = num(tok, line)?;
    if v >= size {
        return Err(input!("line {line}: element {v} outside universe of size {size}"));
    }
    Ok(v as u8)
}

/// Parses the line-oriented instance format.
pub fn parse_instance(text: &str) -> Result<InstanceFile> {
    let mut lines = Lines { inner: text.lines().enumerate() };
    match lines.next() {
        Some((_, t)) if t == ["CSPv1"] => {}
        Some((no, _)) => return Err(input!("line {no}: expected header `CSPv1`")),
        None => return Err(input!("empty input")),
    }
    let mut declared: Option<Operation> = None;
    let mut var_names: Vec<String> = Vec::new();
    let mut var_index: HashMap<String, usize> = HashMap::new();
    let mut domains: Vec<Domain> = Vec::new();
    let mut rel_names: Vec<String> = Vec::new();
    let mut rel_index: HashMap<String, usize> = HashMap::new();
    let mut relations: Vec<Relation> = Vec::new();
    let mut constraints: Vec<Constraint> = Vec::new();
    while let Some((no, toks)) = lines.next() {
        match toks[0] {
            "algebra" => {
                if declared.is_some() {
                    return Err(input!("line {no}: second `algebra` line"));
                }
                if toks.len() != 3 {
                    return Err(input!("line {no}: expected `algebra <size> <arity>`"));
                }
                let size: usize = num(toks[1], no)?;
                let arity: usize = num(toks[2], no)?;
                if !(1..=16).contains(&size) || !(2..=8).contains(&arity) {
                    return Err(input!("line {no}: unsupported algebra size {size} or arity {arity}"));
                }
                let rows = size.pow(arity as u32);
                let mut table = Vec::with_capacity(rows);
                for idx in 0..rows {
                    let (wno, wt) = lines.next().ok_or_else(|| input!("operation table ends early"))?;
                    if wt[0] != "w" || wt.len() != arity + 2 {
                        return Err(input!("line {wno}: expected `w` with {arity} arguments and a result"));
                    }
                    let mut expect = idx;
                    let mut args = vec![0usize; arity];
                    for a in args.iter_mut().rev() {
                        *a = expect % size;
                        expect /= size;
                    }
                    for (k, &a) in args.iter().enumerate() {
                        if element(wt[1 + k], wno, size)? as usize != a {
                            return Err(input!("line {wno}: operation rows must be in lexicographic order"));
                        }
                    }
                    table.push(element(wt[arity + 1], wno, size)?);
                }
                declared = Some(Operation::new(arity, size, table)?);
            }
            "var" => {
                let w = declared.as_ref().ok_or_else(|| input!("line {no}: `var` before `algebra`"))?;
                if toks.len() < 2 {
                    return Err(input!("line {no}: expected `var <name> <elements>`"));
                }
                let name = toks[1].to_string();
                if var_index.contains_key(&name) {
                    return Err(input!("line {no}: variable `{name}` declared twice"));
                }
                let mut d = Domain::EMPTY;
                for t in &toks[2..] {
                    d.insert(element(t, no, w.size())?);
                }
                var_index.insert(name.clone(), var_names.len());
                var_names.push(name);
                domains.push(d);
            }
            "rel" => {
                let w = declared.as_ref().ok_or_else(|| input!("line {no}: `rel` before `algebra`"))?;
                if toks.len() != 4 {
                    return Err(input!("line {no}: expected `rel <name> <arity> <ntuples>`"));
                }
                let name = toks[1].to_string();
                if rel_index.contains_key(&name) {
                    return Err(input!("line {no}: relation `{name}` declared twice"));
                }
                let arity: usize = num(toks[2], no)?;
                let count: usize = num(toks[3], no)?;
                if arity == 0 {
                    return Err(input!("line {no}: relation arity must be positive"));
                }
                let mut tuples = Vec::with_capacity(count);
                for _ in 0..count {
                    let (tno, tt) = lines.next().ok_or_else(|| input!("relation `{name}` ends early"))?;
                    if tt.len() != arity {
                        return Err(input!("line {tno}: expected {arity} elements"));
                    }
                    let t: Vec<u8> = tt.iter().map(|x| element(x, tno, w.size())).collect::<Result<_>>()?;
                    tuples.push(t);
                }
                let rel = Relation::new(w.size(), vec![Domain::full(w.size()); arity], tuples)?;
                if let Some(bad) = rel.find_violation(w) {
                    return Err(input!("line {no}: relation `{name}` is not preserved by the operation; {bad:?} escapes"));
                }
                rel_index.insert(name.clone(), relations.len());
                rel_names.push(name);
                relations.push(rel);
            }
            "cstr" => {
                if toks.len() < 2 {
                    return Err(input!("line {no}: expected `cstr <relation> <variables>`"));
                }
                let r = *rel_index.get(toks[1]).ok_or_else(|| input!("line {no}: unknown relation `{}`", toks[1]))?;
                let scope: Vec<usize> = toks[2..]
                    .iter()
                    .map(|t| var_index.get(*t).copied().ok_or_else(|| input!("line {no}: unknown variable `{t}`")))
                    .collect::<Result<_>>()?;
                if scope.len() != relations[r].arity() {
                    return Err(input!("line {no}: relation `{}` has arity {}", toks[1], relations[r].arity()));
                }
                constraints.push(Constraint::new(scope, relations[r].clone()).map_err(|e| input!("line {no}: {e}"))?);
            }
            other => return Err(input!("line {no}: unknown directive `{other}`")),
        }
    }
    let declared = declared.ok_or_else(|| input!("missing `algebra` section"))?;
    if !declared.is_idempotent() || !declared.is_wnu() {
        return Err(input!("the operation is not an idempotent weak near-unanimity operation"));
    }
    for (name, d) in var_names.iter().zip(&domains) {
        if !d.is_empty() && generate_subuniverse(*d, &declared) != *d {
            return Err(input!("domain of `{name}` is not closed under the operation"));
        }
    }
    let operation = derive_special_wnu(&declared, CloneBudget::default())?;
    let instance = Instance::new(declared.size(), domains.clone(), constraints)?.restricted(&domains);
    Ok(InstanceFile { declared, operation, var_names, rel_names, instance })
}

/// Writes `inst` with variables `x0, x1, ..` and one relation per
/// constraint.
pub fn write_instance(w: &Operation, inst: &Instance) -> String {
    let mut s = String::from("CSPv1\n");
    let (n, m) = (w.size(), w.arity());
    writeln!(s, "algebra {n} {m}").unwrap();
    for (idx, &r) in w.table().iter().enumerate() {
        let mut args = vec![0usize; m];
        let mut k = idx;
        for a in args.iter_mut().rev() {
            *a = k % n;
            k /= n;
        }
        let args: Vec<String> = args.iter().map(|a| a.to_string()).collect();
        writeln!(s, "w {} {r}", args.join(" ")).unwrap();
    }
    for (v, d) in inst.domains.iter().enumerate() {
        let elems: Vec<String> = d.iter().map(|a| a.to_string()).collect();
        writeln!(s, "var x{v} {}", elems.join(" ")).unwrap();
    }
    for (k, c) in inst.constraints.iter().enumerate() {
        writeln!(s, "rel r{k} {} {}", c.arity(), c.relation.len()).unwrap();
        for t in c.relation.tuples() {
            let t: Vec<String> = t.iter().map(|a| a.to_string()).collect();
            writeln!(s, "{}", t.join(" ")).unwrap();
        }
    }
    for (k, c) in inst.constraints.iter().enumerate() {
        let vs: Vec<String> = c.scope.iter().map(|v| format!("x{v}")).collect();
        writeln!(s, "cstr r{k} {}", vs.join(" ")).unwrap();
    }
    s
}

/// `SAT` with one `name = value` line per variable, or `UNSAT`.
pub fn format_outcome(names: &[String], solution: Option<&[u8]>) -> String {
    match solution {
        None => "UNSAT\n".to_string(),
        Some(x) => {
            let mut s = String::from("SAT\n");
            for (name, a) in names.iter().zip(x) {
                writeln!(s, "{name} = {a}").unwrap();
            }
            s
        }
    }
}

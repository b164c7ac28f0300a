//! Brute-force reference implementations shared by the integration tests.
//! None of these call into the solver, consistency or algebra code.
#![allow(dead_code)]

use std::collections::HashSet;

use csp_core::algebra::{CloneBudget, Congruence, Operation};
use csp_core::relation::{CoordSet, Domain, Relation, Tuple};
use csp_core::{Constraint, Instance};

pub fn neq() -> Relation {
    Relation::uniform(2, Domain::full(2), 2, [[0u8, 1], [1, 0]]).unwrap()
}

/// `x0 != x1 != .. != x_{n-1}`, closed into a cycle when asked.
pub fn neq_chain(n: usize, cycle: bool) -> Instance {
    let mut cs: Vec<Constraint> = (0..n - 1).map(|i| Constraint::new(vec![i, i + 1], neq()).unwrap()).collect();
    if cycle {
        cs.push(Constraint::new(vec![n - 1, 0], neq()).unwrap());
    }
    Instance::new(2, vec![Domain::full(2); n], cs).unwrap()
}

/// A symmetric idempotent WNU on three elements that is not special; its
/// special companion comes out of the clone search.
pub fn derived_three_element_wnu() -> Operation {
    let table = vec![0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 2];
    let w = Operation::new(3, 3, table).unwrap();
    csp_core::algebra::derive_special_wnu(&w, CloneBudget::default()).unwrap()
}

/// Every tuple of the product of the relation's domains.
pub fn product(rel: &Relation) -> Vec<Tuple> {
    let mut out = vec![Vec::new()];
    for d in rel.domains() {
        let mut next = Vec::new();
        for t in &out {
            for a in d.iter() {
                let mut u = t.clone();
                u.push(a);
                next.push(u);
            }
        }
        out = next;
    }
    out
}

fn pick(t: &[u8], idx: &[usize]) -> Vec<u8> {
    idx.iter().map(|&i| t[i]).collect()
}

/// Tuples of the product whose projections onto each set lie in the
/// corresponding projection of `rel`.
pub fn conjunction(rel: &Relation, sets: &[Vec<usize>]) -> Vec<Tuple> {
    let tuples: Vec<&[u8]> = rel.tuples().collect();
    let proj: Vec<HashSet<Vec<u8>>> = sets.iter().map(|s| tuples.iter().map(|t| pick(t, s)).collect()).collect();
    product(rel)
        .into_iter()
        .filter(|t| sets.iter().zip(&proj).all(|(s, p)| p.contains(&pick(t, s))))
        .collect()
}

pub fn tuple_set(rel: &Relation) -> Vec<Tuple> {
    let mut v: Vec<Tuple> = rel.tuples().map(|t| t.to_vec()).collect();
    v.sort();
    v
}

/// Not the conjunction of all its projections onto proper coordinate sets.
pub fn essential_by_definition(rel: &Relation) -> bool {
    let n = rel.arity();
    let proper: Vec<Vec<usize>> =
        (1..(1u32 << n) - 1).map(|m| (0..n).filter(|&i| m >> i & 1 == 1).collect()).collect();
    let mut c = conjunction(rel, &proper);
    c.sort();
    c != tuple_set(rel)
}

/// Pairs `(a, b)` such that some tuple with `a` at `i` stays in `rel` when
/// `a` is replaced by `b`.
pub fn con_pairs(rel: &Relation, i: usize) -> Vec<(u8, u8)> {
    let mut out = Vec::new();
    for a in rel.domain(i).iter() {
        for b in rel.domain(i).iter() {
            let shared = rel.tuples().any(|t| {
                t[i] == a && {
                    let mut u = t.to_vec();
                    u[i] = b;
                    rel.contains(&u)
                }
            });
            if shared {
                out.push((a, b));
            }
        }
    }
    out
}

pub fn rectangular_at(rel: &Relation, i: usize) -> bool {
    let con = con_pairs(rel, i);
    rel.tuples().all(|t| {
        con.iter().filter(|p| p.0 == t[i]).all(|&(_, b)| {
            let mut u = t.to_vec();
            u[i] = b;
            rel.contains(&u)
        })
    })
}

/// Closure under the rectangle rule: with `a1, a2, a3` in the relation and
/// every coordinate of `a1` agreeing with `a2` or `a3`, add the fourth
/// corner.
pub fn rectangle_closure(rel: &Relation) -> Vec<Tuple> {
    let n = rel.arity();
    let mut tuples: Vec<Tuple> = rel.tuples().map(|t| t.to_vec()).collect();
    loop {
        let snapshot = tuples.clone();
        let mut added = false;
        for a1 in &snapshot {
            for a2 in &snapshot {
                for a3 in &snapshot {
                    if !(0..n).all(|i| a1[i] == a2[i] || a1[i] == a3[i]) {
                        continue;
                    }
                    let a4: Tuple = (0..n).map(|i| if a1[i] == a2[i] { a3[i] } else { a2[i] }).collect();
                    if !tuples.contains(&a4) {
                        tuples.push(a4);
                        added = true;
                    }
                }
            }
        }
        if !added {
            tuples.sort();
            return tuples;
        }
    }
}

/// The parallelogram property over every split of the coordinates.
pub fn has_parallelogram(rel: &Relation) -> bool {
    let n = rel.arity();
    let tuples: Vec<&[u8]> = rel.tuples().collect();
    for mask in 1..(1u32 << n) - 1 {
        let side = |t: &[u8], s: u32| (0..n).filter(|&i| (mask >> i & 1) == s).map(|i| t[i]).collect::<Vec<_>>();
        for x in &tuples {
            for y in &tuples {
                for z in &tuples {
                    if side(y, 1) == side(z, 1) && side(x, 0) == side(z, 0) {
                        let t: Vec<u8> = (0..n).map(|i| if mask >> i & 1 == 1 { x[i] } else { y[i] }).collect();
                        if !rel.contains(&t) {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}

/// Every partition of `elems`.
pub fn partitions(elems: &[u8]) -> Vec<Vec<Vec<u8>>> {
    let Some((first, rest)) = elems.split_first() else { return vec![Vec::new()] };
    let mut out = Vec::new();
    for p in partitions(rest) {
        for k in 0..p.len() {
            let mut q = p.clone();
            q[k].insert(0, *first);
            out.push(q);
        }
        let mut q = p;
        q.push(vec![*first]);
        out.push(q);
    }
    out
}

/// Whether applying `w` to related argument lists gives related results,
/// over every choice of related pairs.
fn partition_preserved(class: &[usize], elems: &[u8], w: &Operation) -> bool {
    let pairs: Vec<(u8, u8)> = elems
        .iter()
        .flat_map(|&a| elems.iter().map(move |&b| (a, b)))
        .filter(|&(a, b)| class[a as usize] == class[b as usize])
        .collect();
    let m = w.arity();
    let mut idx = vec![0usize; m];
    loop {
        let xs: Vec<u8> = idx.iter().map(|&i| pairs[i].0).collect();
        let ys: Vec<u8> = idx.iter().map(|&i| pairs[i].1).collect();
        if class[w.apply(&xs) as usize] != class[w.apply(&ys) as usize] {
            return false;
        }
        let mut j = m;
        loop {
            if j == 0 {
                return true;
            }
            j -= 1;
            idx[j] += 1;
            if idx[j] < pairs.len() {
                break;
            }
            idx[j] = 0;
        }
    }
}

/// Congruences of `(d; w)` as sorted class lists.
pub fn congruences_by_partition(d: Domain, w: &Operation) -> Vec<Vec<Vec<u8>>> {
    let elems = d.to_vec();
    let mut out: Vec<Vec<Vec<u8>>> = partitions(&elems)
        .into_iter()
        .filter(|p| {
            let mut class = vec![usize::MAX; w.size()];
            for (k, c) in p.iter().enumerate() {
                for &a in c {
                    class[a as usize] = k;
                }
            }
            partition_preserved(&class, &elems, w)
        })
        .map(|mut p| {
            for c in p.iter_mut() {
                c.sort();
            }
            p.sort();
            p
        })
        .collect();
    out.sort();
    out
}

pub fn classes_of(c: &Congruence) -> Vec<Vec<u8>> {
    let mut p: Vec<Vec<u8>> = c.classes().iter().map(|d| d.to_vec()).collect();
    p.sort();
    p
}

pub fn coordset(idx: &[usize]) -> CoordSet {
    let mut s = CoordSet::EMPTY;
    for &i in idx {
        s.insert(i);
    }
    s
}

/// Consistency of a system `Σ_{i ∈ mask} x_i = rhs` over Z_2 by Gaussian
/// elimination on bit rows.
pub fn gf2_consistent(rows: &[(u64, bool)]) -> bool {
    // pivot bit -> reduced row
    let mut basis: std::collections::BTreeMap<u32, (u64, bool)> = Default::default();
    for &(mut m, mut r) in rows {
        loop {
            if m == 0 {
                if r {
                    return false;
                }
                break;
            }
            let top = 63 - m.leading_zeros();
            match basis.get(&top) {
                Some(&(b, br)) => {
                    m ^= b;
                    r ^= br;
                }
                None => {
                    basis.insert(top, (m, r));
                    break;
                }
            }
        }
    }
    true
}

/// The solution set of one equation `Σ x_i = rhs` on `k` variables.
pub fn parity_relation(k: usize, rhs: bool) -> Relation {
    let tuples: Vec<Vec<u8>> = (0..1u32 << k)
        .filter(|m| (m.count_ones() % 2 == 1) == rhs)
        .map(|m| (0..k).map(|i| (m >> i & 1) as u8).collect())
        .collect();
    Relation::uniform(2, Domain::full(2), k, tuples).unwrap()
}

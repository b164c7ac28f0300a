use std::collections::HashSet;
use std::fmt;

use crate::error::{usage, Result};
use crate::relation::{Domain, Relation};

use super::operation::{decode_args, Operation};

const NONE: u8 = u8::MAX;

/// A partition of a domain, intended to be preserved by the algebra.
///
/// Classes are ordered by their least element.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Congruence {
    domain: Domain,
    classes: Vec<Domain>,
    class_of: [u8; 16],
}

impl fmt::Debug for Congruence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, c) in self.classes.iter().enumerate() {
            if k > 0 {
                write!(f, "|")?;
            }
            for a in c.iter() {
                write!(f, "{a}")?;
            }
        }
        Ok(())
    }
}

impl Congruence {
    pub fn from_classes(domain: Domain, mut classes: Vec<Domain>) -> Result<Congruence> {
        let mut seen = Domain::EMPTY;
        for c in &classes {
            if c.is_empty() || !c.intersect(seen).is_empty() {
                return Err(usage!("classes are not disjoint and nonempty"));
            }
            seen = seen.union(*c);
        }
        if seen != domain {
            return Err(usage!("classes do not cover the domain"));
        }
        if domain.iter().any(|a| a >= 16) {
            return Err(usage!("domain exceeds 16 elements"));
        }
        classes.sort_by_key(|c| c.first());
        let mut class_of = [NONE; 16];
        for (k, c) in classes.iter().enumerate() {
            for a in c.iter() {
                class_of[a as usize] = k as u8;
            }
        }
        Ok(Congruence { domain, classes, class_of })
    }

    pub fn identity(domain: Domain) -> Congruence {
        Congruence::from_classes(domain, domain.iter().map(Domain::singleton).collect()).unwrap()
    }

    pub fn full(domain: Domain) -> Congruence {
        Congruence::from_classes(domain, vec![domain]).unwrap()
    }

    /// Equivalence relation generated by `pairs` on `domain`.
    pub fn from_pairs(domain: Domain, pairs: impl IntoIterator<Item = (u8, u8)>) -> Congruence {
        let mut parent: Vec<u8> = (0..16).collect();
        for (a, b) in pairs {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra as usize] = rb;
        }
        let mut classes: Vec<Domain> = Vec::new();
        let mut root_class = [NONE; 16];
        for a in domain.iter() {
            let r = find(&mut parent, a) as usize;
            if root_class[r] == NONE {
                root_class[r] = classes.len() as u8;
                classes.push(Domain::EMPTY);
            }
            classes[root_class[r] as usize].insert(a);
        }
        Congruence::from_classes(domain, classes).unwrap()
    }

    /// Interprets a binary relation as an equivalence on `domain`, if it is one.
    pub fn from_relation(domain: Domain, rel: &Relation) -> Option<Congruence> {
        if rel.arity() != 2 {
            return None;
        }
        let c = Congruence::from_pairs(domain, rel.tuples().map(|t| (t[0], t[1])));
        let exact = rel.len() == c.classes.iter().map(|k| k.len() * k.len()).sum::<usize>()
            && rel.tuples().all(|t| domain.contains(t[0]) && domain.contains(t[1]))
            && domain.iter().all(|a| rel.contains(&[a, a]));
        exact.then_some(c)
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn classes(&self) -> &[Domain] {
        &self.classes
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    /// Index of the class containing `a`.
    pub fn class_index(&self, a: u8) -> usize {
        let k = self.class_of[a as usize];
        assert!(k != NONE, "element {a} outside the congruence domain");
        k as usize
    }

    pub fn class(&self, a: u8) -> Domain {
        self.classes[self.class_index(a)]
    }

    pub fn related(&self, a: u8, b: u8) -> bool {
        self.class_of[a as usize] != NONE && self.class_of[a as usize] == self.class_of[b as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.classes.len() == self.domain.len()
    }

    pub fn is_full(&self) -> bool {
        self.classes.len() == 1
    }

    /// Whether every class of `self` lies inside a class of `other`.
    pub fn refines(&self, other: &Congruence) -> bool {
        self.classes.iter().all(|c| c.is_subset(other.class(c.first().unwrap())))
    }

    pub fn meet(&self, other: &Congruence) -> Congruence {
        let mut classes = Vec::new();
        for a in &self.classes {
            for b in &other.classes {
                let c = a.intersect(*b);
                if !c.is_empty() {
                    classes.push(c);
                }
            }
        }
        Congruence::from_classes(self.domain, classes).unwrap()
    }

    pub fn join(&self, other: &Congruence) -> Congruence {
        let pairs = self
            .classes
            .iter()
            .chain(&other.classes)
            .flat_map(|c| {
                let m = c.first().unwrap();
                c.iter().map(move |a| (m, a))
            })
            .collect::<Vec<_>>();
        Congruence::from_pairs(self.domain, pairs)
    }

    /// The relation `{(a,b) : a σ b}` over `D × D`.
    pub fn to_relation(&self, radix: usize) -> Relation {
        let mut pairs = Vec::new();
        for c in &self.classes {
            for a in c.iter() {
                for b in c.iter() {
                    pairs.push([a, b]);
                }
            }
        }
        Relation::new(radix, vec![self.domain; 2], pairs).unwrap()
    }

    /// Whether changing one argument of `w` within a class keeps the value
    /// within a class.
    pub fn is_preserved_by(&self, w: &Operation) -> bool {
        let elems = self.domain.to_vec();
        let m = w.arity();
        let mut others = vec![0u8; m - 1];
        let mut args = vec![0u8; m];
        let total = elems.len().pow(m as u32 - 1);
        for c in &self.classes {
            let rep = c.first().unwrap();
            for b in c.iter().filter(|&b| b != rep) {
                for pos in 0..m {
                    for idx in 0..total {
                        decode_args(idx, elems.len(), &mut others);
                        let mut k = 0;
                        for (j, slot) in args.iter_mut().enumerate() {
                            if j == pos {
                                *slot = rep;
                            } else {
                                *slot = elems[others[k] as usize];
                                k += 1;
                            }
                        }
                        let x = w.apply(&args);
                        args[pos] = b;
                        if !self.related(x, w.apply(&args)) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// The quotient algebra `(D; w)/σ` on class indices `0..k`.
    pub fn quotient(&self, w: &Operation) -> Operation {
        let reps: Vec<u8> = self.classes.iter().map(|c| c.first().unwrap()).collect();
        let k = reps.len();
        Operation::from_fn(w.arity(), k, |args| {
            let vals: Vec<u8> = args.iter().map(|&i| reps[i as usize]).collect();
            self.class_index(w.apply(&vals)) as u8
        })
        .expect("quotient table")
    }

    /// Preimage of a relation on class indices.
    pub(crate) fn lift(&self, radix: usize, pairs: &HashSet<(u8, u8)>) -> Relation {
        let mut out = Vec::new();
        for &(x, y) in pairs {
            for a in self.classes[x as usize].iter() {
                for b in self.classes[y as usize].iter() {
                    out.push([a, b]);
                }
            }
        }
        Relation::new(radix, vec![self.domain; 2], out).unwrap()
    }
}

fn find(parent: &mut [u8], mut x: u8) -> u8 {
    while parent[x as usize] != x {
        parent[x as usize] = parent[parent[x as usize] as usize];
        x = parent[x as usize];
    }
    x
}

/// Least congruence of `(D; w)` relating `a` and `b`.
pub fn principal_congruence(domain: Domain, a: u8, b: u8, w: &Operation) -> Congruence {
    let elems = domain.to_vec();
    let m = w.arity();
    let mut parent: Vec<u8> = (0..16).collect();
    let mut queue = vec![(a, b)];
    let mut others = vec![0u8; m - 1];
    let mut args = vec![0u8; m];
    let total = elems.len().pow(m as u32 - 1);
    while let Some((x, y)) = queue.pop() {
        let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
        if rx == ry {
            continue;
        }
        parent[rx as usize] = ry;
        // images of the new pair under every basic translation
        for pos in 0..m {
            for idx in 0..total {
                decode_args(idx, elems.len(), &mut others);
                let mut k = 0;
                for (j, slot) in args.iter_mut().enumerate() {
                    if j != pos {
                        *slot = elems[others[k] as usize];
                        k += 1;
                    }
                }
                args[pos] = x;
                let u = w.apply(&args);
                args[pos] = y;
                let v = w.apply(&args);
                if find(&mut parent, u) != find(&mut parent, v) {
                    queue.push((u, v));
                }
            }
        }
    }
    let pairs: Vec<(u8, u8)> = elems.iter().map(|&e| (e, find(&mut parent, e))).collect();
    Congruence::from_pairs(domain, pairs)
}

/// Every congruence of `(D; w)`, as joins of principal congruences,
/// sorted by the `Ord` on class lists.
pub fn congruences(domain: Domain, w: &Operation) -> Vec<Congruence> {
    let elems = domain.to_vec();
    let mut found: HashSet<Congruence> = HashSet::new();
    found.insert(Congruence::identity(domain));
    let mut principals = Vec::new();
    for (i, &a) in elems.iter().enumerate() {
        for &b in &elems[i + 1..] {
            principals.push(principal_congruence(domain, a, b, w));
        }
    }
    let mut frontier: Vec<Congruence> = Vec::new();
    for p in principals.iter() {
        if found.insert(p.clone()) {
            frontier.push(p.clone());
        }
    }
    while let Some(c) = frontier.pop() {
        for p in &principals {
            let j = c.join(p);
            if found.insert(j.clone()) {
                frontier.push(j);
            }
        }
    }
    let mut out: Vec<Congruence> = found.into_iter().collect();
    out.sort();
    out
}

/// Proper congruences with no proper congruence strictly above them.
pub fn maximal_congruences(all: &[Congruence]) -> Vec<Congruence> {
    all.iter()
        .filter(|c| !c.is_full())
        .filter(|c| !all.iter().any(|o| !o.is_full() && o != *c && c.refines(o)))
        .cloned()
        .collect()
}

/// Congruences strictly above `sigma` with nothing strictly in between.
pub fn minimal_above(all: &[Congruence], sigma: &Congruence) -> Vec<Congruence> {
    let above: Vec<&Congruence> =
        all.iter().filter(|c| *c != sigma && sigma.refines(c)).collect();
    above
        .iter()
        .filter(|c| !above.iter().any(|o| o != *c && o.refines(c)))
        .map(|c| (*c).clone())
        .collect()
}

/// Closure of a binary relation on `0..q.size()` under `q`.
fn close_pairs(q: &Operation, start: HashSet<(u8, u8)>) -> HashSet<(u8, u8)> {
    let m = q.arity();
    let mut all: Vec<(u8, u8)> = start.iter().copied().collect();
    let mut seen = start;
    let mut frontier = 0;
    let mut xs = vec![0u8; m];
    let mut ys = vec![0u8; m];
    while frontier < all.len() {
        let end = all.len();
        let mut pick = vec![0usize; m];
        'outer: loop {
            if pick.iter().any(|&p| p >= frontier) {
                for (j, &p) in pick.iter().enumerate() {
                    xs[j] = all[p].0;
                    ys[j] = all[p].1;
                }
                let pair = (q.apply(&xs), q.apply(&ys));
                if seen.insert(pair) {
                    all.push(pair);
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
    seen
}

/// `σ*` for an irreducible congruence: the least binary subuniverse
/// compatible with `σ` that strictly contains it. `None` when `σ` is the
/// full relation or is an intersection of strictly larger compatible
/// relations.
pub fn sigma_star(sigma: &Congruence, w: &Operation, radix: usize) -> Option<Relation> {
    let k = sigma.num_classes();
    if k <= 1 {
        return None;
    }
    let q = sigma.quotient(w);
    let diagonal: HashSet<(u8, u8)> = (0..k as u8).map(|a| (a, a)).collect();
    let mut meet: Option<HashSet<(u8, u8)>> = None;
    for a in 0..k as u8 {
        for b in 0..k as u8 {
            if a == b {
                continue;
            }
            let mut start = diagonal.clone();
            start.insert((a, b));
            let delta = close_pairs(&q, start);
            meet = Some(match meet {
                None => delta,
                Some(m) => m.intersection(&delta).copied().collect(),
            });
        }
    }
    let meet = meet.unwrap();
    if meet.len() == k {
        None
    } else {
        Some(sigma.lift(radix, &meet))
    }
}

pub fn is_irreducible(sigma: &Congruence, w: &Operation, radix: usize) -> bool {
    sigma_star(sigma, w, radix).is_some()
}

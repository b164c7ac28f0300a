use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};

use crate::algebra::Operation;
use crate::error::{usage, Error, Result};

use super::domain::{CoordSet, Domain};

/// A tuple of element indices.
pub type Tuple = Vec<u8>;

/// Largest code space for which a dense membership bitset is kept.
const DENSE_LIMIT: u64 = 1 << 14;

/// An extensional relation `ρ ⊆ D_1 × .. × D_n`.
///
/// Tuples are encoded as base-`radix` integers with coordinate 0 most
/// significant, kept sorted, so iteration order is lexicographic.
/// Coordinates are 0-based throughout the API.
#[derive(Clone)]
pub struct Relation {
    radix: u8,
    domains: Vec<Domain>,
    codes: Vec<u64>,
    data: Vec<u8>,
    dense: Option<Vec<u64>>,
}

impl PartialEq for Relation {
    fn eq(&self, other: &Self) -> bool {
        self.radix == other.radix && self.domains == other.domains && self.codes == other.codes
    }
}

impl Eq for Relation {}

impl Hash for Relation {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.radix.hash(state);
        self.domains.hash(state);
        self.codes.hash(state);
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Relation[")?;
        for (k, d) in self.domains.iter().enumerate() {
            if k > 0 {
                write!(f, "x")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, "]{{")?;
        for (k, t) in self.tuples().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            for a in t {
                write!(f, "{a}")?;
            }
        }
        write!(f, "}}")
    }
}

impl Relation {
    /// Builds a relation from tuples; duplicates are merged.
    pub fn new<I, T>(radix: usize, domains: Vec<Domain>, tuples: I) -> Result<Relation>
    where
        I: IntoIterator<Item = T>,
        T: AsRef<[u8]>,
    {
        check_shape(radix, &domains)?;
        let arity = domains.len();
        let mut codes = Vec::new();
        for t in tuples {
            let t = t.as_ref();
            if t.len() != arity {
                return Err(Error::Input(format!(
                    "tuple of length {} in relation of arity {arity}",
                    t.len()
                )));
            }
            for (i, &a) in t.iter().enumerate() {
                if !domains[i].contains(a) {
                    return Err(Error::Input(format!(
                        "value {a} outside domain {} of coordinate {i}",
                        domains[i]
                    )));
                }
            }
            codes.push(encode(radix as u8, t));
        }
        Ok(Relation::from_codes(radix as u8, domains, codes))
    }

    /// Relation over `D^arity` with every coordinate domain equal to `domain`.
    pub fn uniform<I, T>(radix: usize, domain: Domain, arity: usize, tuples: I) -> Result<Relation>
    where
        I: IntoIterator<Item = T>,
        T: AsRef<[u8]>,
    {
        Relation::new(radix, vec![domain; arity], tuples)
    }

    pub fn full(radix: usize, domains: Vec<Domain>) -> Relation {
        check_shape(radix, &domains).expect("invalid relation shape");
        let mut codes = vec![0u64];
        for d in &domains {
            let mut next = Vec::with_capacity(codes.len() * d.len());
            for &c in &codes {
                for a in d.iter() {
                    next.push(c * radix as u64 + a as u64);
                }
            }
            codes = next;
        }
        Relation::from_codes(radix as u8, domains, codes)
    }

    pub fn empty(radix: usize, domains: Vec<Domain>) -> Relation {
        check_shape(radix, &domains).expect("invalid relation shape");
        Relation::from_codes(radix as u8, domains, Vec::new())
    }

    /// Equality relation `{(a,..,a)}` over `domain^arity`.
    pub fn equality(radix: usize, domain: Domain, arity: usize) -> Relation {
        let tuples: Vec<Tuple> = domain.iter().map(|a| vec![a; arity]).collect();
        Relation::uniform(radix, domain, arity, tuples).unwrap()
    }

    pub(crate) fn from_codes(radix: u8, domains: Vec<Domain>, mut codes: Vec<u64>) -> Relation {
        codes.sort_unstable();
        codes.dedup();
        let arity = domains.len();
        let mut data = vec![0u8; codes.len() * arity];
        for (k, &c) in codes.iter().enumerate() {
            decode_into(radix, c, &mut data[k * arity..(k + 1) * arity]);
        }
        let space = (radix as u64).checked_pow(arity as u32);
        let dense = match space {
            Some(s) if s <= DENSE_LIMIT && codes.len() > 8 => {
                let mut bits = vec![0u64; (s as usize).div_ceil(64)];
                for &c in &codes {
                    bits[(c / 64) as usize] |= 1 << (c % 64);
                }
                Some(bits)
            }
            _ => None,
        };
        Relation { radix, domains, codes, data, dense }
    }

    pub fn radix(&self) -> usize {
        self.radix as usize
    }

    pub fn arity(&self) -> usize {
        self.domains.len()
    }

    pub fn domains(&self) -> &[Domain] {
        &self.domains
    }

    pub fn domain(&self, i: usize) -> Domain {
        self.domains[i]
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn codes(&self) -> &[u64] {
        &self.codes
    }

    /// Number of tuples in `D_1 × .. × D_n`.
    pub fn product_size(&self) -> u128 {
        self.domains.iter().map(|d| d.len() as u128).product()
    }

    pub fn is_full(&self) -> bool {
        self.len() as u128 == self.product_size()
    }

    pub fn tuple(&self, k: usize) -> &[u8] {
        let n = self.arity();
        &self.data[k * n..(k + 1) * n]
    }

    /// Tuples in lexicographic order.
    pub fn tuples(&self) -> impl ExactSizeIterator<Item = &[u8]> + '_ {
        let n = self.arity().max(1);
        let count = self.codes.len();
        (0..count).map(move |k| {
            if self.arity() == 0 {
                &self.data[0..0]
            } else {
                &self.data[k * n..(k + 1) * n]
            }
        })
    }

    pub fn encode(&self, t: &[u8]) -> u64 {
        encode(self.radix, t)
    }

    pub fn decode(&self, code: u64) -> Tuple {
        let mut t = vec![0u8; self.arity()];
        decode_into(self.radix, code, &mut t);
        t
    }

    #[inline]
    pub fn contains_code(&self, code: u64) -> bool {
        match &self.dense {
            Some(bits) => bits
                .get((code / 64) as usize)
                .is_some_and(|w| w >> (code % 64) & 1 == 1),
            None => self.codes.binary_search(&code).is_ok(),
        }
    }

    pub fn contains(&self, t: &[u8]) -> bool {
        t.len() == self.arity()
            && t.iter().all(|&a| a < self.radix)
            && self.contains_code(encode(self.radix, t))
    }

    /// Positional value `radix^(n-1-i)` of coordinate `i` in a code.
    #[inline]
    pub(crate) fn weight(&self, i: usize) -> u64 {
        (self.radix as u64).pow((self.arity() - 1 - i) as u32)
    }

    fn check_coords(&self, coords: &[usize]) -> Result<()> {
        for &i in coords {
            if i >= self.arity() {
                return Err(usage!("coordinate {i} out of range for arity {}", self.arity()));
            }
        }
        Ok(())
    }

    /// Projection onto `coords` in ascending order.
    pub fn project(&self, coords: CoordSet) -> Result<Relation> {
        self.project_positions(&coords.to_vec())
    }

    /// Projection onto an arbitrary sequence of coordinates (may permute or
    /// repeat coordinates).
    pub fn project_positions(&self, coords: &[usize]) -> Result<Relation> {
        self.check_coords(coords)?;
        let domains: Vec<Domain> = coords.iter().map(|&i| self.domains[i]).collect();
        let mut buf = vec![0u8; coords.len()];
        let mut codes = Vec::with_capacity(self.len());
        for t in self.tuples() {
            for (slot, &i) in buf.iter_mut().zip(coords) {
                *slot = t[i];
            }
            codes.push(encode(self.radix, &buf));
        }
        Ok(Relation::from_codes(self.radix, domains, codes))
    }

    /// Whether `pr_coords(t) ∈ pr_coords(ρ)` where `t` is a full-length tuple.
    pub fn projection_contains(&self, coords: CoordSet, t: &[u8]) -> bool {
        let idx = coords.to_vec();
        self.tuples().any(|u| idx.iter().all(|&i| u[i] == t[i]))
    }

    /// Keeps tuples whose entries lie in `domains`, which become the new
    /// coordinate domains.
    pub fn restrict(&self, domains: &[Domain]) -> Relation {
        assert_eq!(domains.len(), self.arity());
        let codes = self
            .codes
            .iter()
            .zip(self.tuples())
            .filter(|(_, t)| t.iter().zip(domains).all(|(&a, d)| d.contains(a)))
            .map(|(&c, _)| c)
            .collect();
        Relation::from_codes(self.radix, domains.to_vec(), codes)
    }

    /// Same tuples over new (larger) coordinate domains.
    pub fn with_domains(&self, domains: Vec<Domain>) -> Result<Relation> {
        if domains.len() != self.arity() {
            return Err(usage!("domain list length mismatch"));
        }
        for t in self.tuples() {
            for (i, &a) in t.iter().enumerate() {
                if !domains[i].contains(a) {
                    return Err(usage!("tuple value {a} outside new domain {}", domains[i]));
                }
            }
        }
        Ok(Relation::from_codes(self.radix, domains, self.codes.clone()))
    }

    pub fn intersect(&self, other: &Relation) -> Relation {
        assert_eq!(self.arity(), other.arity());
        let domains: Vec<Domain> = self
            .domains
            .iter()
            .zip(&other.domains)
            .map(|(a, b)| a.intersect(*b))
            .collect();
        let codes = self.codes.iter().copied().filter(|&c| other.contains_code(c)).collect();
        Relation::from_codes(self.radix, domains, codes)
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.codes.iter().all(|&c| other.contains_code(c))
    }

    /// Inserts extra tuples (by code), returning a new relation.
    pub(crate) fn with_codes(&self, extra: impl IntoIterator<Item = u64>) -> Relation {
        let mut codes = self.codes.clone();
        codes.extend(extra);
        Relation::from_codes(self.radix, self.domains.clone(), codes)
    }

    /// `pr_i(ρ)` as a domain.
    pub fn coordinate_values(&self, i: usize) -> Domain {
        self.tuples().map(|t| t[i]).collect()
    }

    /// Whether every coordinate projection equals its domain.
    pub fn is_subdirect(&self) -> bool {
        (0..self.arity()).all(|i| self.coordinate_values(i) == self.domains[i])
    }

    /// Groups tuples by their entries outside coordinate `i`; each group
    /// maps to the set of values seen at `i`.
    pub(crate) fn fibers(&self, i: usize) -> HashMap<u64, Domain> {
        let wgt = self.weight(i);
        let r = self.radix as u64;
        let mut map: HashMap<u64, Domain> = HashMap::new();
        for (&c, t) in self.codes.iter().zip(self.tuples()) {
            let key = c - t[i] as u64 * wgt;
            debug_assert!(key / wgt % r == 0);
            map.entry(key).or_default().insert(t[i]);
        }
        map
    }

    /// `Con(ρ, i)`: pairs `(y, y')` sharing a completion on all other
    /// coordinates. Returned over `D_i × D_i`.
    pub fn con(&self, i: usize) -> Result<Relation> {
        self.check_coords(&[i])?;
        let d = self.domains[i];
        let mut pairs: Vec<[u8; 2]> = Vec::new();
        for vals in self.fibers(i).values() {
            for a in vals.iter() {
                for b in vals.iter() {
                    pairs.push([a, b]);
                }
            }
        }
        Relation::new(self.radix as usize, vec![d, d], pairs)
    }

    /// Whether every tuple of `ρ` stays in `ρ` when coordinate `i` is
    /// replaced by a `Con(ρ,i)`-related value.
    pub fn is_rectangular_at(&self, i: usize) -> bool {
        let fibers = self.fibers(i);
        // values Con-related to a, i.e. the union of every fiber containing a
        let mut related = vec![Domain::EMPTY; self.radix as usize];
        for vals in fibers.values() {
            for a in vals.iter() {
                related[a as usize] = related[a as usize].union(*vals);
            }
        }
        fibers.values().all(|vals| vals.iter().all(|a| related[a as usize] == *vals))
    }

    pub fn is_rectangular(&self) -> bool {
        (0..self.arity()).all(|i| self.is_rectangular_at(i))
    }

    /// Whether `ρ` is closed under `f` applied coordinatewise.
    pub fn preserved_by(&self, f: &Operation) -> Result<bool> {
        for d in &self.domains {
            if d.iter().any(|a| a as usize >= f.size()) {
                return Err(usage!(
                    "operation universe of size {} does not cover domain {d}",
                    f.size()
                ));
            }
        }
        Ok(self.find_violation(f).is_none())
    }

    /// Returns some image tuple of `f` outside `ρ`, if any.
    pub fn find_violation(&self, f: &Operation) -> Option<Tuple> {
        let m = f.arity();
        let n = self.arity();
        let len = self.len();
        if len == 0 || n == 0 {
            return None;
        }
        let mut pick = vec![0usize; m];
        let mut out = vec![0u8; n];
        let size = f.size();
        let idempotent = f.is_idempotent();
        loop {
            // a constant pick maps a tuple to itself under an idempotent f
            if !idempotent || pick.iter().any(|&p| p != pick[0]) {
                for (i, slot) in out.iter_mut().enumerate() {
                    let mut idx = 0usize;
                    for &p in &pick {
                        idx = idx * size + self.tuple(p)[i] as usize;
                    }
                    *slot = f.apply_index(idx);
                }
                if !self.contains(&out) {
                    return Some(out);
                }
            }
            let mut k = m;
            loop {
                if k == 0 {
                    return None;
                }
                k -= 1;
                pick[k] += 1;
                if pick[k] < len {
                    break;
                }
                pick[k] = 0;
            }
        }
    }

    /// Least superset of `ρ` closed under `f` applied coordinatewise.
    ///
    /// Domains are left untouched; with an idempotent `f` and subuniverse
    /// domains the result stays inside them.
    pub fn close_under(&self, f: &Operation) -> Result<Relation> {
        let m = f.arity();
        let n = self.arity();
        let size = f.size();
        if size > self.radix as usize {
            return Err(usage!("operation universe larger than relation universe"));
        }
        let full: u128 = self.domains.iter().map(|d| d.len() as u128).product();
        let mut all: Vec<Tuple> = self.tuples().map(|t| t.to_vec()).collect();
        let mut seen: std::collections::HashSet<u64> = self.codes.iter().copied().collect();
        let mut old = 0usize;
        let mut out = vec![0u8; n];
        while old < all.len() && (all.len() as u128) < full {
            let end = all.len();
            let mut fresh = Vec::new();
            // Picks whose first index in [old, end) sits at position j: earlier
            // positions range over [0, old), later ones over [0, end).
            'positions: for j in 0..m {
                if j > 0 && old == 0 {
                    break;
                }
                let mut pick = vec![0usize; m];
                pick[j] = old;
                'outer: loop {
                    for (i, slot) in out.iter_mut().enumerate() {
                        let mut idx = 0usize;
                        for &p in &pick {
                            idx = idx * size + all[p][i] as usize;
                        }
                        *slot = f.apply_index(idx);
                    }
                    if seen.insert(encode(self.radix, &out)) {
                        fresh.push(out.clone());
                        if (end + fresh.len()) as u128 >= full {
                            break 'positions;
                        }
                    }
                    let mut k = m;
                    loop {
                        if k == 0 {
                            break 'outer;
                        }
                        k -= 1;
                        let (lo, hi) = if k < j { (0, old) } else if k == j { (old, end) } else { (0, end) };
                        pick[k] += 1;
                        if pick[k] < hi {
                            break;
                        }
                        pick[k] = lo;
                    }
                }
            }
            old = end;
            all.extend(fresh);
        }
        for t in &all {
            for (i, &a) in t.iter().enumerate() {
                if !self.domains[i].contains(a) {
                    return Err(usage!("closure leaves domain {} at coordinate {i}", self.domains[i]));
                }
            }
        }
        Relation::new(self.radix as usize, self.domains.clone(), &all)
    }
}

fn check_shape(radix: usize, domains: &[Domain]) -> Result<()> {
    if radix == 0 || radix > 16 {
        return Err(usage!("universe size {radix} outside 1..=16"));
    }
    if (radix as u64).checked_pow(domains.len() as u32).is_none() {
        return Err(usage!("relation arity {} too large for universe size {radix}", domains.len()));
    }
    let full = Domain::full(radix);
    for d in domains {
        if !d.is_subset(full) {
            return Err(usage!("domain {d} outside universe of size {radix}"));
        }
    }
    Ok(())
}

#[inline]
pub(crate) fn encode(radix: u8, t: &[u8]) -> u64 {
    t.iter().fold(0u64, |acc, &a| acc * radix as u64 + a as u64)
}

#[inline]
pub(crate) fn decode_into(radix: u8, mut code: u64, out: &mut [u8]) {
    for slot in out.iter_mut().rev() {
        *slot = (code % radix as u64) as u8;
        code /= radix as u64;
    }
}

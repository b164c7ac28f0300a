use serde::{Deserialize, Serialize};

use crate::relation::Domain;

use super::congruence::Congruence;
use super::operation::Operation;

/// An isomorphism from an algebra onto `Z_{p1} × .. × Z_{ps}` with `w`
/// becoming the m-ary sum.
///
/// Elements are indexed `0..size` (for a quotient these are class indices).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LinearStructure {
    /// One entry per cyclic factor, ascending.
    pub primes: Vec<u8>,
    /// `coords[e]` is the image of element `e`.
    pub coords: Vec<Vec<u8>>,
}

impl LinearStructure {
    pub fn size(&self) -> usize {
        self.coords.len()
    }

    /// Element with the given coordinates.
    pub fn element(&self, coords: &[u8]) -> Option<u8> {
        self.coords.iter().position(|c| c == coords).map(|e| e as u8)
    }

    /// Checks that `w` is the coordinatewise sum under the map.
    pub fn verify(&self, w: &Operation) -> bool {
        let n = self.coords.len();
        if w.size() != n {
            return false;
        }
        let mut distinct = self.coords.clone();
        distinct.sort();
        distinct.dedup();
        if distinct.len() != n {
            return false;
        }
        let m = w.arity();
        let mut args = vec![0u8; m];
        for idx in 0..n.pow(m as u32) {
            super::operation::decode_args(idx, n, &mut args);
            let got = &self.coords[w.apply(&args) as usize];
            for (f, &p) in self.primes.iter().enumerate() {
                let s: usize = args.iter().map(|&a| self.coords[a as usize][f] as usize).sum();
                if got[f] as usize != s % p as usize {
                    return false;
                }
            }
        }
        true
    }
}

fn is_prime(n: usize) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Decides whether `(0..n; w)` is linear and returns the isomorphism.
///
/// With element 0 as zero, `x + y = w(x, y, 0, .., 0)`; the algebra is
/// linear exactly when this is an abelian group of squarefree exponent and
/// `w` is the m-ary sum in it.
pub fn is_linear(w: &Operation) -> Option<LinearStructure> {
    let n = w.size();
    let m = w.arity();
    if n == 1 {
        return Some(LinearStructure { primes: Vec::new(), coords: vec![Vec::new()] });
    }
    if m < 2 {
        return None;
    }
    let add = |x: u8, y: u8| -> u8 {
        let mut args = vec![0u8; m];
        args[0] = x;
        args[1] = y;
        w.apply(&args)
    };
    // group axioms with identity 0
    for x in 0..n as u8 {
        if add(x, 0) != x || add(0, x) != x {
            return None;
        }
        if !(0..n as u8).any(|y| add(x, y) == 0) {
            return None;
        }
        for y in 0..n as u8 {
            if add(x, y) != add(y, x) {
                return None;
            }
            for z in 0..n as u8 {
                if add(add(x, y), z) != add(x, add(y, z)) {
                    return None;
                }
            }
        }
    }
    let order = |x: u8| -> usize {
        let mut acc = x;
        let mut k = 1;
        while acc != 0 {
            acc = add(acc, x);
            k += 1;
        }
        k
    };
    let squarefree = |k: usize| (2..=k).all(|d| k % (d * d) != 0);
    if !(1..n as u8).all(|x| squarefree(order(x))) {
        return None;
    }
    // basis of each p-component, greedily in element order
    let mut primes_present: Vec<usize> = (1..n as u8).map(order).filter(|&k| is_prime(k)).collect();
    primes_present.sort();
    primes_present.dedup();
    let mut factors: Vec<(u8, u8)> = Vec::new(); // (prime, generator)
    for &p in &primes_present {
        let mut span: Vec<u8> = vec![0];
        for x in 1..n as u8 {
            if order(x) != p || span.contains(&x) {
                continue;
            }
            factors.push((p as u8, x));
            let mut next = Vec::new();
            for &s in &span {
                let mut acc = s;
                for _ in 0..p {
                    next.push(acc);
                    acc = add(acc, x);
                }
            }
            span = next;
        }
    }
    // enumerate all combinations sum c_f * g_f
    let mut coords = vec![Vec::new(); n];
    let mut combo = vec![0u8; factors.len()];
    loop {
        let mut e = 0u8;
        for (f, &(_, g)) in factors.iter().enumerate() {
            for _ in 0..combo[f] {
                e = add(e, g);
            }
        }
        if !coords[e as usize].is_empty() || (e == 0 && combo.iter().any(|&c| c != 0)) {
            return None;
        }
        coords[e as usize] = combo.clone();
        let mut f = factors.len();
        loop {
            if f == 0 {
                let primes: Vec<u8> = factors.iter().map(|&(p, _)| p).collect();
                let s = LinearStructure { primes, coords };
                return s.verify(w).then_some(s);
            }
            f -= 1;
            combo[f] += 1;
            if combo[f] < factors[f].0 {
                break;
            }
            combo[f] = 0;
        }
    }
}

/// Least congruence whose quotient is linear, with the quotient's
/// structure. Linear quotients are closed under intersection, so this is
/// the meet of all congruences with a linear quotient.
pub fn minimal_linear_congruence(
    all: &[Congruence],
    w: &Operation,
    domain: Domain,
) -> Option<(Congruence, LinearStructure)> {
    let mut meet = Congruence::full(domain);
    for c in all {
        if is_linear(&c.quotient(w)).is_some() {
            meet = meet.meet(c);
        }
    }
    let s = is_linear(&meet.quotient(w))?;
    Some((meet, s))
}

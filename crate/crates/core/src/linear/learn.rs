use std::collections::HashMap;

use crate::error::Result;

use super::field::{add, inv, mul, sub};
use super::system::Equation;

/// What a membership oracle revealed about its set `V`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Hyperplane {
    FullSpace,
    /// `V` is exactly the solution set; the first nonzero coefficient is 1.
    Equation(Equation),
    /// `V` is not a hyperplane nor the whole space.
    NotAffine,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Learned {
    pub result: Hyperplane,
    /// Distinct oracle calls made.
    pub queries: usize,
}

struct Memo<'a> {
    oracle: &'a mut dyn FnMut(&[u8]) -> Result<bool>,
    seen: HashMap<Vec<u8>, bool>,
}

impl Memo<'_> {
    fn ask(&mut self, x: &[u8]) -> Result<bool> {
        if let Some(&b) = self.seen.get(x) {
            return Ok(b);
        }
        let b = (self.oracle)(x)?;
        self.seen.insert(x.to_vec(), b);
        Ok(b)
    }
}

/// Finds the hyperplane `c·x = c0` of `Z_p^h` equal to `V` using at most
/// `p·h + 1` distinct oracle calls. Leftover calls from that allowance are
/// spent on further points in lexicographic order; any disagreement
/// yields `NotAffine`.
pub fn learn_hyperplane(
    p: u8,
    h: usize,
    oracle: &mut dyn FnMut(&[u8]) -> Result<bool>,
) -> Result<Learned> {
    let mut memo = Memo { oracle, seen: HashMap::new() };
    let budget = p as usize * h + 1;
    let zero = vec![0u8; h];
    let mut outside = None;
    if !memo.ask(&zero)? {
        outside = Some(zero.clone());
    } else {
        for i in 0..h {
            let mut e = zero.clone();
            e[i] = 1;
            if !memo.ask(&e)? {
                outside = Some(e);
                break;
            }
        }
    }
    let candidate = match outside {
        None => Hyperplane::FullSpace,
        Some(_) if h == 0 => Hyperplane::NotAffine,
        Some(d) => sweep(&mut memo, p, &d)?,
    };
    let result = match candidate {
        Hyperplane::NotAffine => Hyperplane::NotAffine,
        c => {
            if verify(&mut memo, p, h, budget, &c)? {
                c
            } else {
                Hyperplane::NotAffine
            }
        }
    };
    Ok(Learned { result, queries: memo.seen.len() })
}

fn sweep(memo: &mut Memo<'_>, p: u8, d: &[u8]) -> Result<Hyperplane> {
    let h = d.len();
    let mut c = vec![0u8; h];
    for i in 0..h {
        let mut accepted = None;
        for a in 0..p {
            if a == d[i] {
                continue;
            }
            let mut x = d.to_vec();
            x[i] = a;
            if memo.ask(&x)? {
                if accepted.is_some() {
                    return Ok(Hyperplane::NotAffine);
                }
                accepted = Some(a);
            }
        }
        if let Some(a) = accepted {
            c[i] = inv(sub(a, d[i], p), p);
        }
    }
    let Some(first) = c.iter().position(|&x| x != 0) else {
        return Ok(Hyperplane::NotAffine);
    };
    let dot = c.iter().zip(d).fold(0u8, |s, (&a, &b)| add(s, mul(a, b, p), p));
    let rhs = add(dot, 1, p);
    let norm = inv(c[first], p);
    let terms = c
        .iter()
        .enumerate()
        .filter(|(_, &a)| a != 0)
        .map(|(i, &a)| (i, mul(a, norm, p)))
        .collect();
    Ok(Hyperplane::Equation(Equation { prime: p, terms, rhs: mul(rhs, norm, p) }))
}

fn predicts(c: &Hyperplane, x: &[u8]) -> bool {
    match c {
        Hyperplane::FullSpace => true,
        Hyperplane::Equation(e) => e.holds(x),
        Hyperplane::NotAffine => unreachable!(),
    }
}

fn verify(memo: &mut Memo<'_>, p: u8, h: usize, budget: usize, c: &Hyperplane) -> Result<bool> {
    if memo.seen.iter().any(|(x, &b)| predicts(c, x) != b) {
        return Ok(false);
    }
    let mut x = vec![0u8; h];
    while memo.seen.len() < budget {
        if !memo.seen.contains_key(&x) && memo.ask(&x)? != predicts(c, &x) {
            return Ok(false);
        }
        // Next point in lexicographic order.
        let mut i = h;
        loop {
            if i == 0 {
                return Ok(true);
            }
            i -= 1;
            x[i] += 1;
            if x[i] < p {
                break;
            }
            x[i] = 0;
        }
    }
    Ok(true)
}

/// Learns an equation over a product of prime cyclic groups, one prime
/// block at a time with the other blocks held at zero. A block whose
/// section is empty is skipped: the equation then lives in another block.
/// The first block with a proper nonempty section decides the answer.
pub fn learn_equation(
    moduli: &[u8],
    oracle: &mut dyn FnMut(&[u8]) -> Result<bool>,
) -> Result<Learned> {
    let mut primes: Vec<u8> = moduli.to_vec();
    primes.sort();
    primes.dedup();
    let mut queries = 0;
    let mut empty_blocks = 0;
    for p in primes {
        let coords: Vec<usize> = (0..moduli.len()).filter(|&t| moduli[t] == p).collect();
        let mut hit = false;
        let mut block = |y: &[u8]| -> Result<bool> {
            let mut x = vec![0u8; moduli.len()];
            for (&t, &v) in coords.iter().zip(y) {
                x[t] = v;
            }
            let b = oracle(&x)?;
            hit |= b;
            Ok(b)
        };
        let learned = learn_hyperplane(p, coords.len(), &mut block)?;
        queries += learned.queries;
        match learned.result {
            Hyperplane::FullSpace => continue,
            Hyperplane::NotAffine if !hit => {
                empty_blocks += 1;
                continue;
            }
            Hyperplane::NotAffine => return Ok(Learned { result: Hyperplane::NotAffine, queries }),
            Hyperplane::Equation(e) => {
                let terms = e.terms.iter().map(|&(i, c)| (coords[i], c)).collect();
                let e = Equation { prime: p, terms, rhs: e.rhs };
                return Ok(Learned { result: Hyperplane::Equation(e), queries });
            }
        }
    }
    let result = if empty_blocks > 0 { Hyperplane::NotAffine } else { Hyperplane::FullSpace };
    Ok(Learned { result, queries })
}

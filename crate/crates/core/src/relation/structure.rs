use std::collections::HashMap;

use super::table::{encode, Relation};

/// Splits each tuple into its `I`-part and complement part (as codes).
fn split(rel: &Relation, left: &[usize], right: &[usize]) -> Vec<(u64, u64)> {
    let r = rel.radix() as u8;
    let mut lbuf = vec![0u8; left.len()];
    let mut rbuf = vec![0u8; right.len()];
    rel.tuples()
        .map(|t| {
            for (s, &i) in lbuf.iter_mut().zip(left) {
                *s = t[i];
            }
            for (s, &i) in rbuf.iter_mut().zip(right) {
                *s = t[i];
            }
            (encode(r, &lbuf), encode(r, &rbuf))
        })
        .collect()
}

/// Connected components of the bipartite graph whose edges are the tuples.
/// Each component is returned as (left parts, right parts, edge count).
fn components(edges: &[(u64, u64)]) -> Vec<(Vec<u64>, Vec<u64>, usize)> {
    let mut left_id: HashMap<u64, usize> = HashMap::new();
    let mut right_id: HashMap<u64, usize> = HashMap::new();
    for &(u, v) in edges {
        let n = left_id.len();
        left_id.entry(u).or_insert(n);
        let n = right_id.len();
        right_id.entry(v).or_insert(n);
    }
    let nl = left_id.len();
    let mut parent: Vec<usize> = (0..nl + right_id.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for &(u, v) in edges {
        let a = find(&mut parent, left_id[&u]);
        let b = find(&mut parent, nl + right_id[&v]);
        parent[a] = b;
    }
    let mut comps: HashMap<usize, (Vec<u64>, Vec<u64>, usize)> = HashMap::new();
    for (&u, &i) in &left_id {
        let root = find(&mut parent, i);
        comps.entry(root).or_default().0.push(u);
    }
    for (&v, &j) in &right_id {
        let root = find(&mut parent, nl + j);
        comps.entry(root).or_default().1.push(v);
    }
    for &(u, _) in edges {
        let root = find(&mut parent, left_id[&u]);
        comps.get_mut(&root).unwrap().2 += 1;
    }
    let mut out: Vec<_> = comps.into_values().collect();
    out.sort();
    out
}

/// Proper bipartitions `(I, complement)` with coordinate 0 in `I`; the
/// rectangle condition is symmetric in the two sides.
fn bipartitions(n: usize) -> impl Iterator<Item = (Vec<usize>, Vec<usize>)> {
    let full = if n == 0 { 0u64 } else { (1u64 << n) - 1 };
    (0..full).filter(|m| m & 1 == 1).map(move |mask| {
        let left = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let right = (0..n).filter(|&i| mask >> i & 1 == 0).collect();
        (left, right)
    })
}

impl Relation {
    /// Whether for every split of the coordinates into two parts,
    /// `αβ', α'β, α'β' ∈ ρ` implies `αβ ∈ ρ`.
    pub fn has_parallelogram(&self) -> bool {
        if self.arity() < 2 {
            return true;
        }
        bipartitions(self.arity()).all(|(l, r)| {
            components(&split(self, &l, &r))
                .iter()
                .all(|(us, vs, e)| us.len() * vs.len() == *e)
        })
    }

    /// Least superset of `ρ` with the parallelogram property: the fixed
    /// point of completing the fourth corner of every rectangle.
    pub fn parallelogram_closure(&self) -> Relation {
        let n = self.arity();
        if n < 2 {
            return self.clone();
        }
        let r = self.radix() as u64;
        let splits: Vec<(Vec<usize>, Vec<usize>)> = bipartitions(n).collect();
        let mut rel = self.clone();
        let mut stable = 0usize;
        let mut k = 0usize;
        // cycle through splits until every split is complete in a row
        while stable < splits.len() {
            let (l, rt) = &splits[k % splits.len()];
            k += 1;
            let mut extra = Vec::new();
            for (us, vs, e) in components(&split(&rel, l, rt)) {
                if us.len() * vs.len() == e {
                    continue;
                }
                for &u in &us {
                    for &v in &vs {
                        extra.push(merge(r, n, l, u, rt, v));
                    }
                }
            }
            if extra.is_empty() {
                stable += 1;
            } else {
                stable = 1;
                rel = rel.with_codes(extra);
            }
        }
        rel
    }
}

/// Rebuilds a full tuple code from its two parts.
fn merge(r: u64, n: usize, left: &[usize], u: u64, right: &[usize], v: u64) -> u64 {
    let mut digits = vec![0u64; n];
    let mut x = u;
    for &i in left.iter().rev() {
        digits[i] = x % r;
        x /= r;
    }
    let mut y = v;
    for &i in right.iter().rev() {
        digits[i] = y % r;
        y /= r;
    }
    digits.iter().fold(0, |acc, &d| acc * r + d)
}

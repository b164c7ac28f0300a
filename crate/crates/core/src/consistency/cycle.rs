use std::collections::{BTreeSet, VecDeque};

use crate::instance::Instance;
use crate::relation::{Domain, Relation};

/// Binary relations on the edges of a chordal graph containing every pair
/// of variables that share a constraint, kept path consistent on its
/// triangles together with the variable domains. On a chordal graph this
/// prunes the tracked edges exactly as path consistency on all pairs would,
/// so the domains agree with the dense computation.
#[derive(Clone, Debug)]
pub struct PairNetwork {
    n: usize,
    radix: usize,
    domains: Vec<Domain>,
    /// Neighbours of each variable with the id of the shared edge, sorted.
    adj: Vec<Vec<(usize, usize)>>,
    /// Edge endpoints `(lo, hi)`.
    ends: Vec<(usize, usize)>,
    /// Third vertices of the triangles on each edge.
    triangles: Vec<Vec<usize>>,
    /// `rows[slot * radix + a]` is the set of `b` with `(a, b)` in the
    /// relation of the directed edge `slot`; see [`PairNetwork::slot`].
    rows: Vec<u16>,
    queued: Vec<bool>,
    queue: VecDeque<usize>,
    removals: Vec<(usize, u8)>,
}

/// Adds fill edges along a minimum-degree elimination order.
fn chordal_completion(n: usize, edges: &[(usize, usize)]) -> Vec<BTreeSet<usize>> {
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for &(i, j) in edges {
        adj[i].insert(j);
        adj[j].insert(i);
    }
    let mut live: Vec<BTreeSet<usize>> = adj.clone();
    let mut done = vec![false; n];
    for _ in 0..n {
        let v = (0..n).filter(|&v| !done[v]).min_by_key(|&v| (live[v].len(), v)).expect("vertex left");
        done[v] = true;
        let nb: Vec<usize> = live[v].iter().copied().collect();
        for (x, &a) in nb.iter().enumerate() {
            live[a].remove(&v);
            for &b in &nb[x + 1..] {
                if adj[a].insert(b) {
                    adj[b].insert(a);
                    live[a].insert(b);
                    live[b].insert(a);
                }
            }
        }
    }
    adj
}

impl PairNetwork {
    fn new(inst: &Instance, domains: &[Domain]) -> PairNetwork {
        let (n, radix) = (domains.len(), inst.radix);
        let mut edges = Vec::new();
        for c in &inst.constraints {
            for (p, &i) in c.scope.iter().enumerate() {
                for &j in &c.scope[p + 1..] {
                    if i != j {
                        edges.push((i, j));
                    }
                }
            }
        }
        let full = chordal_completion(n, &edges);
        let mut adj = vec![Vec::new(); n];
        let mut ends = Vec::new();
        for (i, nb) in full.iter().enumerate() {
            for &j in nb.range(i + 1..) {
                adj[i].push((j, ends.len()));
                adj[j].push((i, ends.len()));
                ends.push((i, j));
            }
        }
        for list in adj.iter_mut() {
            list.sort_unstable();
        }
        let triangles = ends.iter().map(|&(i, j)| full[i].intersection(&full[j]).copied().collect()).collect();
        let mut rows = vec![0u16; 2 * ends.len() * radix];
        for (e, &(i, j)) in ends.iter().enumerate() {
            for a in domains[i].iter() {
                rows[2 * e * radix + a as usize] = domains[j].bits() as u16;
            }
            for b in domains[j].iter() {
                rows[(2 * e + 1) * radix + b as usize] = domains[i].bits() as u16;
            }
        }
        PairNetwork {
            n,
            radix,
            domains: domains.to_vec(),
            adj,
            queued: vec![false; ends.len()],
            ends,
            triangles,
            rows,
            queue: VecDeque::new(),
            removals: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn domains(&self) -> &[Domain] {
        &self.domains
    }

    /// Whether the relation between `x_i` and `x_j` is tracked.
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.edge(i, j).is_some()
    }

    fn edge(&self, i: usize, j: usize) -> Option<usize> {
        self.adj.get(i)?.binary_search_by_key(&j, |&(k, _)| k).ok().map(|p| self.adj[i][p].1)
    }

    /// Directed edge id: `2e` runs from the lower endpoint to the higher.
    fn slot(&self, i: usize, j: usize) -> usize {
        let e = self.edge(i, j).expect("tracked edge");
        2 * e + usize::from(i > j)
    }

    fn idx(&self, i: usize, j: usize, a: u8) -> usize {
        self.slot(i, j) * self.radix + a as usize
    }

    /// Values of `x_j` compatible with `x_i = a`, or `None` when the pair
    /// is not tracked.
    pub fn row(&self, i: usize, j: usize, a: u8) -> Option<Domain> {
        if i == j {
            return Some(if self.domains[i].contains(a) { Domain::singleton(a) } else { Domain::EMPTY });
        }
        self.edge(i, j)?;
        Some(Domain::from_bits(self.rows[self.idx(i, j, a)] as u64))
    }

    /// The relation currently kept for `(x_i, x_j)`, if tracked.
    pub fn pair(&self, i: usize, j: usize) -> Option<Relation> {
        let mut tuples = Vec::new();
        for a in self.domains[i].iter() {
            for b in self.row(i, j, a)?.iter() {
                tuples.push([a, b]);
            }
        }
        Some(Relation::new(self.radix, vec![self.domains[i], self.domains[j]], tuples).expect("in range"))
    }

    fn enqueue(&mut self, i: usize, j: usize) {
        let e = self.slot(i, j) / 2;
        if !self.queued[e] {
            self.queued[e] = true;
            self.queue.push_back(e);
        }
    }

    /// Intersects the `(x_i, x_j)` relation with `allowed`, given as rows.
    fn tighten(&mut self, i: usize, j: usize, a: u8, allowed: u16) {
        let k = self.idx(i, j, a);
        let old = self.rows[k];
        let new = old & allowed;
        if new == old {
            return;
        }
        self.rows[k] = new;
        let gone = old & !new;
        let back = self.slot(j, i) * self.radix;
        for b in Domain::from_bits(gone as u64).iter() {
            let t = back + b as usize;
            self.rows[t] &= !(1u16 << a);
            if self.rows[t] == 0 && self.domains[j].contains(b) {
                self.removals.push((j, b));
            }
        }
        if new == 0 && self.domains[i].contains(a) {
            self.removals.push((i, a));
        }
        self.enqueue(i, j);
    }

    fn remove_value(&mut self, i: usize, a: u8) {
        if !self.domains[i].contains(a) {
            return;
        }
        self.domains[i].remove(a);
        for p in 0..self.adj[i].len() {
            let j = self.adj[i][p].0;
            self.tighten(i, j, a, 0);
        }
    }

    fn drain_removals(&mut self) -> bool {
        while let Some((i, a)) = self.removals.pop() {
            self.remove_value(i, a);
            if self.domains[i].is_empty() {
                return false;
            }
        }
        true
    }

    /// `x_i` relation rows composed through `x_j` into `x_k`, intersected
    /// into the `(x_i, x_k)` relation.
    fn revise(&mut self, i: usize, j: usize, k: usize) {
        let (ij, jk) = (self.slot(i, j) * self.radix, self.slot(j, k) * self.radix);
        for a in self.domains[i].iter() {
            let mut comp = 0u16;
            for b in Domain::from_bits(self.rows[ij + a as usize] as u64).iter() {
                comp |= self.rows[jk + b as usize];
            }
            self.tighten(i, k, a, comp);
        }
    }

    /// Runs the propagation to a fixpoint. Returns `false` on a wipe-out.
    fn propagate(&mut self) -> bool {
        if !self.drain_removals() {
            return false;
        }
        while let Some(e) = self.queue.pop_front() {
            self.queued[e] = false;
            let (i, j) = self.ends[e];
            for t in 0..self.triangles[e].len() {
                let k = self.triangles[e][t];
                self.revise(i, j, k);
                self.revise(j, i, k);
                if !self.drain_removals() {
                    return false;
                }
            }
        }
        true
    }
}

/// Outcome of establishing cycle consistency.
#[derive(Clone, Debug)]
pub enum Consistency {
    /// Some domain or relation became empty.
    NoSolution,
    /// Same solutions, reduced domains and constraints.
    Reduced(Instance, PairNetwork),
}

/// Reduces domains until every constraint is subdirect and the pair
/// network is path consistent on a chordal completion of the constraint
/// graph; the latter implies cycle consistency.
/// Never removes a solution.
pub fn establish_cycle_consistency(inst: &Instance) -> Consistency {
    let mut domains = inst.domains.clone();
    let mut net: Option<PairNetwork> = None;
    loop {
        let cur = inst.restricted(&domains);
        if cur.trivially_unsat() {
            return Consistency::NoSolution;
        }
        let mut changed = false;
        for c in &cur.constraints {
            for (p, &v) in c.scope.iter().enumerate() {
                let vals = c.relation.coordinate_values(p);
                if !domains[v].is_subset(vals) {
                    domains[v] = domains[v].intersect(vals);
                    changed = true;
                }
            }
        }
        if changed {
            continue;
        }
        let net_ref = net.get_or_insert_with(|| PairNetwork::new(inst, &domains));
        for (v, d) in domains.iter().enumerate() {
            for a in net_ref.domains[v].minus(*d).iter() {
                net_ref.removals.push((v, a));
            }
        }
        if !net_ref.drain_removals() {
            return Consistency::NoSolution;
        }
        for c in &cur.constraints {
            for p in 0..c.arity() {
                for q in (p + 1)..c.arity() {
                    let (i, j) = (c.scope[p], c.scope[q]);
                    let proj = c.pair_projection(p, q);
                    let mut fwd = vec![0u16; inst.radix];
                    let mut bwd = vec![0u16; inst.radix];
                    for t in proj.tuples() {
                        fwd[t[0] as usize] |= 1 << t[1];
                        bwd[t[1] as usize] |= 1 << t[0];
                    }
                    for a in domains[i].iter() {
                        net_ref.tighten(i, j, a, fwd[a as usize]);
                    }
                    for b in domains[j].iter() {
                        net_ref.tighten(j, i, b, bwd[b as usize]);
                    }
                }
            }
        }
        if !net_ref.propagate() {
            return Consistency::NoSolution;
        }
        if net_ref.domains == domains {
            let net = net.take().unwrap();
            return Consistency::Reduced(cur, net);
        }
        domains = net_ref.domains.clone();
    }
}

use serde::Serialize;

use super::field::{add, mul, rref, sub};

/// `Σ c·x_v = rhs` over `Z_prime`; every variable in `terms` has that
/// modulus.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Equation {
    pub prime: u8,
    pub terms: Vec<(usize, u8)>,
    pub rhs: u8,
}

impl Equation {
    pub fn holds(&self, x: &[u8]) -> bool {
        let s = self.terms.iter().fold(0u8, |s, &(v, c)| add(s, mul(c, x[v], self.prime), self.prime));
        s == self.rhs % self.prime
    }

    pub fn is_trivial(&self) -> bool {
        self.terms.iter().all(|&(_, c)| c % self.prime == 0)
    }
}

/// Variables over `Z_{moduli[v]}` (moduli prime) and equations on them.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LinearSystem {
    pub moduli: Vec<u8>,
    pub equations: Vec<Equation>,
}

/// Solution set of a consistent system as an affine image
/// `x = offset + M·y` of `Z = Π Z_{moduli[params[j]]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Parametrization {
    pub moduli: Vec<u8>,
    pub offset: Vec<u8>,
    /// Free variables, ascending; `y_j` is the value of `x_{params[j]}`.
    pub params: Vec<usize>,
    /// `matrix[v][j]`, zero unless `x_v` and `x_{params[j]}` share a modulus.
    pub matrix: Vec<Vec<u8>>,
}

impl Parametrization {
    pub fn dimension(&self) -> usize {
        self.params.len()
    }

    pub fn param_moduli(&self) -> Vec<u8> {
        self.params.iter().map(|&v| self.moduli[v]).collect()
    }

    pub fn apply(&self, y: &[u8]) -> Vec<u8> {
        (0..self.moduli.len())
            .map(|v| {
                let p = self.moduli[v];
                self.matrix[v]
                    .iter()
                    .zip(y)
                    .fold(self.offset[v], |s, (&c, &yj)| add(s, mul(c, yj, p), p))
            })
            .collect()
    }

    /// Number of points of `Z`, saturating.
    pub fn size(&self) -> u128 {
        self.params.iter().fold(1u128, |s, &v| s.saturating_mul(self.moduli[v] as u128))
    }
}

impl LinearSystem {
    pub fn add_variable(&mut self, modulus: u8) -> usize {
        self.moduli.push(modulus);
        self.moduli.len() - 1
    }

    /// Solves by per-prime elimination with leftmost pivots. `None` when
    /// inconsistent.
    pub fn solve(&self) -> Option<Parametrization> {
        let n = self.moduli.len();
        let mut primes: Vec<u8> = self.moduli.clone();
        primes.sort();
        primes.dedup();
        let mut offset = vec![0u8; n];
        let mut free = Vec::new();
        // (pivot variable, per-free-variable coefficients to subtract)
        let mut pivot_rows: Vec<(usize, u8, Vec<(usize, u8)>)> = Vec::new();
        for &p in &primes {
            let vars: Vec<usize> = (0..n).filter(|&v| self.moduli[v] == p).collect();
            let mut local = vec![usize::MAX; n];
            for (k, &v) in vars.iter().enumerate() {
                local[v] = k;
            }
            let h = vars.len();
            let mut rows: Vec<Vec<u8>> = Vec::new();
            for e in self.equations.iter().filter(|e| e.prime == p) {
                let mut row = vec![0u8; h + 1];
                for &(v, c) in &e.terms {
                    debug_assert_eq!(self.moduli[v], p);
                    row[local[v]] = add(row[local[v]], c % p, p);
                }
                row[h] = e.rhs % p;
                rows.push(row);
            }
            let pivots = rref(&mut rows, h, p);
            if rows[pivots.len()..].iter().any(|r| r[h] != 0) {
                return None;
            }
            let local_free: Vec<usize> = (0..h).filter(|c| !pivots.contains(c)).collect();
            free.extend(local_free.iter().map(|&c| vars[c]));
            for (r, &c) in pivots.iter().enumerate() {
                let deps = local_free
                    .iter()
                    .filter(|&&f| rows[r][f] != 0)
                    .map(|&f| (vars[f], rows[r][f]))
                    .collect();
                pivot_rows.push((vars[c], rows[r][h], deps));
            }
        }
        free.sort();
        let k = free.len();
        let mut matrix = vec![vec![0u8; k]; n];
        for (j, &v) in free.iter().enumerate() {
            matrix[v][j] = 1;
        }
        for (v, rhs, deps) in pivot_rows {
            let p = self.moduli[v];
            offset[v] = rhs;
            for (f, c) in deps {
                let j = free.binary_search(&f).unwrap();
                matrix[v][j] = sub(0, c, p);
            }
        }
        Some(Parametrization { moduli: self.moduli.clone(), offset, params: free, matrix })
    }

    pub fn is_solution(&self, x: &[u8]) -> bool {
        x.len() == self.moduli.len()
            && x.iter().zip(&self.moduli).all(|(&a, &p)| a < p)
            && self.equations.iter().all(|e| e.holds(x))
    }
}

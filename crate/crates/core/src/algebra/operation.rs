use serde::{Deserialize, Serialize};

use crate::error::{usage, Error, Result};

/// A total operation `A^m -> A` stored as a lookup table.
///
/// Arguments are indexed lexicographically with the first argument most
/// significant, so `table[a1*n^(m-1) + ... + am]` is `f(a1, .., am)`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Operation {
    arity: usize,
    size: usize,
    table: Vec<u8>,
}

impl std::fmt::Debug for Operation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Operation(arity={}, size={})", self.arity, self.size)
    }
}

impl Operation {
    pub fn new(arity: usize, size: usize, table: Vec<u8>) -> Result<Operation> {
        if arity == 0 || size == 0 {
            return Err(usage!("operation needs positive arity and universe size"));
        }
        if size > 16 {
            return Err(usage!("universe size {size} exceeds the supported maximum of 16"));
        }
        let expected = size
            .checked_pow(arity as u32)
            .ok_or_else(|| usage!("operation table too large"))?;
        if table.len() != expected {
            return Err(Error::Input(format!(
                "operation table has {} entries, expected {expected}",
                table.len()
            )));
        }
        if let Some(bad) = table.iter().find(|&&v| v as usize >= size) {
            return Err(Error::Input(format!("operation value {bad} outside universe of size {size}")));
        }
        Ok(Operation { arity, size, table })
    }

    pub fn from_fn(arity: usize, size: usize, f: impl Fn(&[u8]) -> u8) -> Result<Operation> {
        let total = size
            .checked_pow(arity as u32)
            .ok_or_else(|| usage!("operation table too large"))?;
        let mut args = vec![0u8; arity];
        let mut table = Vec::with_capacity(total);
        for idx in 0..total {
            decode_args(idx, size, &mut args);
            table.push(f(&args));
        }
        Operation::new(arity, size, table)
    }

    /// Ternary majority on `{0,1}` (the median).
    pub fn majority() -> Operation {
        Operation::from_fn(3, 2, |a| (a[0] & a[1]) | (a[0] & a[2]) | (a[1] & a[2])).unwrap()
    }

    /// `x1 + .. + xm mod p`.
    pub fn sum_mod(p: usize, arity: usize) -> Operation {
        Operation::from_fn(arity, p, |a| (a.iter().map(|&x| x as usize).sum::<usize>() % p) as u8)
            .unwrap()
    }

    /// Ternary minimum on a chain of the given size.
    pub fn min3(size: usize) -> Operation {
        Operation::from_fn(3, size, |a| *a.iter().min().unwrap()).unwrap()
    }

    /// Symmetric ternary operation on `{0,1,2}`: majority on `{0,1}`, and
    /// otherwise `2` when an odd number of arguments equal `2`, else the
    /// majority of the remaining `{0,1}` arguments. `{0,1}` is a
    /// congruence class whose quotient is `Z_2` with `x+y+z`.
    pub fn affine_majority() -> Operation {
        Operation::from_fn(3, 3, |a| {
            let twos = a.iter().filter(|&&x| x == 2).count();
            if twos % 2 == 1 {
                return 2;
            }
            let rest: Vec<u8> = a.iter().copied().filter(|&x| x != 2).collect();
            match rest.len() {
                3 => (rest[0] & rest[1]) | (rest[0] & rest[2]) | (rest[1] & rest[2]),
                // two 2s cancel; the single remaining value wins
                _ => rest[0],
            }
        })
        .unwrap()
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn table(&self) -> &[u8] {
        &self.table
    }

    #[inline]
    pub fn apply(&self, args: &[u8]) -> u8 {
        debug_assert_eq!(args.len(), self.arity);
        let mut idx = 0usize;
        for &a in args {
            idx = idx * self.size + a as usize;
        }
        self.table[idx]
    }

    #[inline]
    pub fn apply_index(&self, idx: usize) -> u8 {
        self.table[idx]
    }

    /// `x ∘ y = w(x, .., x, y)`.
    pub fn circ(&self, x: u8, y: u8) -> u8 {
        let mut idx = 0usize;
        for _ in 0..self.arity - 1 {
            idx = idx * self.size + x as usize;
        }
        idx = idx * self.size + y as usize;
        self.table[idx]
    }

    /// `w(y, x, .., x)` with `y` at `pos`.
    fn near_unanimous(&self, x: u8, y: u8, pos: usize) -> u8 {
        let mut idx = 0usize;
        for k in 0..self.arity {
            idx = idx * self.size + if k == pos { y } else { x } as usize;
        }
        self.table[idx]
    }

    pub fn is_idempotent(&self) -> bool {
        (0..self.size as u8).all(|x| self.near_unanimous(x, x, 0) == x)
    }

    pub fn is_wnu(&self) -> bool {
        if !self.is_idempotent() {
            return false;
        }
        for x in 0..self.size as u8 {
            for y in 0..self.size as u8 {
                let first = self.near_unanimous(x, y, 0);
                if (1..self.arity).any(|p| self.near_unanimous(x, y, p) != first) {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_special_wnu(&self) -> bool {
        self.is_wnu()
            && (0..self.size as u8).all(|x| {
                (0..self.size as u8).all(|y| {
                    let xy = self.circ(x, y);
                    self.circ(x, xy) == xy
                })
            })
    }
}

/// Writes the base-`size` digits of `idx` into `out`, most significant first.
pub(crate) fn decode_args(mut idx: usize, size: usize, out: &mut [u8]) {
    for slot in out.iter_mut().rev() {
        *slot = (idx % size) as u8;
        idx /= size;
    }
}

use std::fmt;

use serde::{Deserialize, Serialize};

/// Maximum universe size supported by the bitmask representation.
pub const MAX_UNIVERSE: usize = 64;

/// A finite set of element indices, stored as a bitmask.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Domain(u64);

impl Domain {
    pub const EMPTY: Domain = Domain(0);

    pub fn full(size: usize) -> Domain {
        assert!(size <= MAX_UNIVERSE, "universe too large");
        if size == MAX_UNIVERSE {
            Domain(u64::MAX)
        } else {
            Domain((1u64 << size) - 1)
        }
    }

    pub fn singleton(a: u8) -> Domain {
        Domain(1u64 << a)
    }

    pub fn from_bits(bits: u64) -> Domain {
        Domain(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, a: u8) -> bool {
        (a as usize) < MAX_UNIVERSE && self.0 >> a & 1 == 1
    }

    pub fn insert(&mut self, a: u8) {
        self.0 |= 1u64 << a;
    }

    pub fn remove(&mut self, a: u8) {
        self.0 &= !(1u64 << a);
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn first(self) -> Option<u8> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as u8)
    }

    pub fn intersect(self, other: Domain) -> Domain {
        Domain(self.0 & other.0)
    }

    pub fn union(self, other: Domain) -> Domain {
        Domain(self.0 | other.0)
    }

    pub fn minus(self, other: Domain) -> Domain {
        Domain(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Domain) -> bool {
        self.0 & !other.0 == 0
    }

    /// Elements in ascending order.
    pub fn iter(self) -> DomainIter {
        DomainIter(self.0)
    }

    pub fn to_vec(self) -> Vec<u8> {
        self.iter().collect()
    }
}

impl FromIterator<u8> for Domain {
    fn from_iter<T: IntoIterator<Item = u8>>(iter: T) -> Self {
        let mut d = Domain::EMPTY;
        for a in iter {
            d.insert(a);
        }
        d
    }
}

pub struct DomainIter(u64);

impl Iterator for DomainIter {
    type Item = u8;

    fn next(&mut self) -> Option<u8> {
        if self.0 == 0 {
            return None;
        }
        let a = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(a as u8)
    }
}

impl fmt::Debug for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, a) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "}}")
    }
}

/// A set of coordinate positions of a relation (0-based).
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoordSet(u64);

impl CoordSet {
    pub const EMPTY: CoordSet = CoordSet(0);

    pub fn all(arity: usize) -> CoordSet {
        CoordSet(Domain::full(arity).bits())
    }

    pub fn from_bits(bits: u64) -> CoordSet {
        CoordSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, i: usize) -> bool {
        i < 64 && self.0 >> i & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1u64 << i;
    }

    pub fn with(self, i: usize) -> CoordSet {
        CoordSet(self.0 | 1u64 << i)
    }

    pub fn union(self, other: CoordSet) -> CoordSet {
        CoordSet(self.0 | other.0)
    }

    pub fn is_subset(self, other: CoordSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Members in ascending order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        DomainIter(self.0).map(usize::from)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// The first `k` coordinates `{0, .., k-1}`.
    pub fn prefix(k: usize) -> CoordSet {
        CoordSet::all(k)
    }
}

impl FromIterator<usize> for CoordSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        let mut s = CoordSet::EMPTY;
        for i in iter {
            s.insert(i);
        }
        s
    }
}

impl fmt::Debug for CoordSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn domain_basics() {
        let d: Domain = [2u8, 0].into_iter().collect();
        assert_eq!(d.to_vec(), vec![0, 2]);
        assert_eq!(d.len(), 2);
        assert!(d.contains(2) && !d.contains(1));
        assert_eq!(d.first(), Some(0));
        assert_eq!(Domain::full(3).minus(d), Domain::singleton(1));
        assert_eq!(format!("{d}"), "{0,2}");
    }

    #[test]
    fn coordset_iterates_ascending() {
        let s: CoordSet = [4usize, 1, 3].into_iter().collect();
        assert_eq!(s.to_vec(), vec![1, 3, 4]);
        assert!(CoordSet::prefix(5).is_subset(CoordSet::all(5)));
    }
}

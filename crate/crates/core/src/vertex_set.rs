//! Fixed-domain vertex sets backed by 64-bit blocks with a cached cardinality.
//!
//! All subset bookkeeping in the library runs on these sets; membership,
//! insertion, and removal are O(1), the bulk operations are O(domain / 64),
//! and iteration yields members in ascending order.

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    blocks: Vec<u64>,
    domain: usize,
    len: usize,
}

impl VertexSet {
    /// Empty set over vertex ids `0..domain`.
    pub fn new(domain: usize) -> Self {
        VertexSet {
            blocks: vec![0; domain.div_ceil(64)],
            domain,
            len: 0,
        }
    }

    /// Full set over `0..domain`.
    pub fn full(domain: usize) -> Self {
        let mut blocks = vec![u64::MAX; domain.div_ceil(64)];
        if domain % 64 != 0 {
            if let Some(last) = blocks.last_mut() {
                *last = (1u64 << (domain % 64)) - 1;
            }
        }
        VertexSet {
            blocks,
            domain,
            len: domain,
        }
    }

    /// Builds a set from member ids, rejecting out-of-range ids.
    /// Duplicate members are tolerated.
    pub fn from_members<I: IntoIterator<Item = u32>>(domain: usize, members: I) -> Result<Self> {
        let mut set = VertexSet::new(domain);
        for v in members {
            if (v as usize) >= domain {
                return Err(Error::VertexOutOfRange {
                    vertex: v,
                    n: domain,
                });
            }
            set.insert(v);
        }
        Ok(set)
    }

    pub fn singleton(domain: usize, v: u32) -> Result<Self> {
        Self::from_members(domain, [v])
    }

    pub fn domain(&self) -> usize {
        self.domain
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn contains(&self, v: u32) -> bool {
        let v = v as usize;
        v < self.domain && self.blocks[v / 64] & (1u64 << (v % 64)) != 0
    }

    /// Inserts `v`; returns true if it was absent. Panics if out of range.
    pub fn insert(&mut self, v: u32) -> bool {
        let i = v as usize;
        assert!(i < self.domain, "vertex {v} outside domain {}", self.domain);
        let mask = 1u64 << (i % 64);
        let block = &mut self.blocks[i / 64];
        if *block & mask == 0 {
            *block |= mask;
            self.len += 1;
            true
        } else {
            false
        }
    }

    /// Removes `v`; returns true if it was present.
    pub fn remove(&mut self, v: u32) -> bool {
        let i = v as usize;
        if i >= self.domain {
            return false;
        }
        let mask = 1u64 << (i % 64);
        let block = &mut self.blocks[i / 64];
        if *block & mask != 0 {
            *block &= !mask;
            self.len -= 1;
            true
        } else {
            false
        }
    }

    pub fn clear(&mut self) {
        self.blocks.fill(0);
        self.len = 0;
    }

    fn recount(&mut self) {
        self.len = self.blocks.iter().map(|b| b.count_ones() as usize).sum();
    }

    fn check_domain(&self, other: &VertexSet) {
        assert_eq!(
            self.domain, other.domain,
            "vertex sets over different domains"
        );
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        self.check_domain(other);
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a |= b;
        }
        self.recount();
    }

    pub fn intersect_with(&mut self, other: &VertexSet) {
        self.check_domain(other);
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a &= b;
        }
        self.recount();
    }

    pub fn subtract(&mut self, other: &VertexSet) {
        self.check_domain(other);
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a &= !b;
        }
        self.recount();
    }

    pub fn intersection_len(&self, other: &VertexSet) -> usize {
        self.check_domain(other);
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn is_disjoint_from(&self, other: &VertexSet) -> bool {
        self.check_domain(other);
        self.blocks.iter().zip(&other.blocks).all(|(a, b)| a & b == 0)
    }

    pub fn is_subset_of(&self, other: &VertexSet) -> bool {
        self.check_domain(other);
        self.blocks
            .iter()
            .zip(&other.blocks)
            .all(|(a, b)| a & !b == 0)
    }

    /// Smallest member, if any.
    pub fn first(&self) -> Option<u32> {
        for (i, &block) in self.blocks.iter().enumerate() {
            if block != 0 {
                return Some((i * 64 + block.trailing_zeros() as usize) as u32);
            }
        }
        None
    }

    /// Members in ascending order.
    pub fn iter(&self) -> Iter<'_> {
        Iter {
            set: self,
            block_idx: 0,
            current: self.blocks.first().copied().unwrap_or(0),
        }
    }

    pub fn to_vec(&self) -> Vec<u32> {
        self.iter().collect()
    }
}

pub struct Iter<'a> {
    set: &'a VertexSet,
    block_idx: usize,
    current: u64,
}

impl Iterator for Iter<'_> {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros();
                self.current &= self.current - 1;
                return Some((self.block_idx * 64) as u32 + bit);
            }
            self.block_idx += 1;
            if self.block_idx >= self.set.blocks.len() {
                return None;
            }
            self.current = self.set.blocks[self.block_idx];
        }
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = u32;
    type IntoIter = Iter<'a>;

    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

impl std::fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn insert_remove_track_len() {
        let mut s = VertexSet::new(130);
        assert!(s.insert(0));
        assert!(s.insert(129));
        assert!(!s.insert(0));
        assert_eq!(s.len(), 2);
        assert!(s.remove(0));
        assert!(!s.remove(0));
        assert_eq!(s.len(), 1);
        assert_eq!(s.to_vec(), vec![129]);
    }

    #[test]
    fn full_set_respects_partial_last_block() {
        let s = VertexSet::full(70);
        assert_eq!(s.len(), 70);
        assert!(s.contains(69));
        assert_eq!(s.iter().count(), 70);
    }

    #[test]
    fn bulk_ops_recount() {
        let a = VertexSet::from_members(100, [1, 5, 64, 99]).unwrap();
        let b = VertexSet::from_members(100, [5, 64, 70]).unwrap();
        let mut u = a.clone();
        u.union_with(&b);
        assert_eq!(u.len(), 5);
        let mut i = a.clone();
        i.intersect_with(&b);
        assert_eq!(i.to_vec(), vec![5, 64]);
        let mut d = a.clone();
        d.subtract(&b);
        assert_eq!(d.to_vec(), vec![1, 99]);
        assert_eq!(a.intersection_len(&b), 2);
        assert!(!a.is_disjoint_from(&b));
        assert!(i.is_subset_of(&a));
    }

    #[test]
    fn out_of_range_rejected() {
        assert!(VertexSet::from_members(4, [4]).is_err());
        assert!(VertexSet::from_members(4, [0, 3]).is_ok());
    }

    #[test]
    fn iteration_is_ascending() {
        let s = VertexSet::from_members(200, [150, 3, 64, 63, 65]).unwrap();
        assert_eq!(s.to_vec(), vec![3, 63, 64, 65, 150]);
        assert_eq!(s.first(), Some(3));
    }
}

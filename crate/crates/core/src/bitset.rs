//! Fixed-width vertex sets.

use std::fmt;
use std::ops::{BitAnd, BitAndAssign, BitOr, BitOrAssign, Sub, SubAssign};

/// Number of 64-bit blocks in a [`VertexSet`].
pub const BLOCKS: usize = 8;

/// Largest vertex count any [`crate::Graph`] can hold.
pub const MAX_VERTICES: usize = BLOCKS * 64;

/// A set of vertices `0..MAX_VERTICES` stored as a fixed array of bit blocks.
///
/// The type is `Copy`, so search code can pass masks by value and use them
/// directly as memo keys.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct VertexSet {
    blocks: [u64; BLOCKS],
}

impl VertexSet {
    pub const fn new() -> Self {
        VertexSet { blocks: [0; BLOCKS] }
    }

    /// The set `{0, 1, ..., n-1}`.
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_VERTICES, "vertex set width exceeded");
        let mut s = Self::new();
        let whole = n / 64;
        for b in s.blocks.iter_mut().take(whole) {
            *b = u64::MAX;
        }
        if !n.is_multiple_of(64) {
            s.blocks[whole] = (1u64 << (n % 64)) - 1;
        }
        s
    }

    pub fn singleton(v: usize) -> Self {
        let mut s = Self::new();
        s.insert(v);
        s
    }

    #[inline]
    pub fn insert(&mut self, v: usize) {
        self.blocks[v >> 6] |= 1u64 << (v & 63);
    }

    #[inline]
    pub fn remove(&mut self, v: usize) {
        self.blocks[v >> 6] &= !(1u64 << (v & 63));
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        v < MAX_VERTICES && self.blocks[v >> 6] & (1u64 << (v & 63)) != 0
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.blocks.iter().all(|&b| b == 0)
    }

    /// Smallest element, if any.
    #[inline]
    pub fn first(&self) -> Option<usize> {
        self.blocks
            .iter()
            .enumerate()
            .find(|(_, &b)| b != 0)
            .map(|(i, &b)| i * 64 + b.trailing_zeros() as usize)
    }

    /// Largest element, if any.
    pub fn last(&self) -> Option<usize> {
        self.blocks
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &b)| b != 0)
            .map(|(i, &b)| i * 64 + 63 - b.leading_zeros() as usize)
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.blocks
            .iter()
            .zip(other.blocks.iter())
            .all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.blocks
            .iter()
            .zip(other.blocks.iter())
            .all(|(a, b)| a & b == 0)
    }

    /// Size of the intersection without materialising it.
    #[inline]
    pub fn intersection_len(&self, other: &VertexSet) -> usize {
        self.blocks
            .iter()
            .zip(other.blocks.iter())
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn iter(&self) -> Iter {
        Iter {
            blocks: self.blocks,
            idx: 0,
        }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = VertexSet::new();
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl<'a> FromIterator<&'a usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = &'a usize>>(iter: I) -> Self {
        iter.into_iter().copied().collect()
    }
}

/// Ascending iterator over the members of a [`VertexSet`].
pub struct Iter {
    blocks: [u64; BLOCKS],
    idx: usize,
}

impl Iterator for Iter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        while self.idx < BLOCKS {
            let b = self.blocks[self.idx];
            if b != 0 {
                self.blocks[self.idx] = b & (b - 1);
                return Some(self.idx * 64 + b.trailing_zeros() as usize);
            }
            self.idx += 1;
        }
        None
    }
}

impl IntoIterator for VertexSet {
    type Item = usize;
    type IntoIter = Iter;
    fn into_iter(self) -> Iter {
        self.iter()
    }
}

impl IntoIterator for &VertexSet {
    type Item = usize;
    type IntoIter = Iter;
    fn into_iter(self) -> Iter {
        self.iter()
    }
}

macro_rules! blockwise {
    ($tr:ident, $f:ident, $tra:ident, $fa:ident, |$a:ident, $b:ident| $e:expr) => {
        impl $tr for VertexSet {
            type Output = VertexSet;
            #[inline]
            fn $f(mut self, rhs: VertexSet) -> VertexSet {
                for (x, y) in self.blocks.iter_mut().zip(rhs.blocks.iter()) {
                    let ($a, $b) = (*x, *y);
                    *x = $e;
                }
                self
            }
        }
        impl $tra for VertexSet {
            #[inline]
            fn $fa(&mut self, rhs: VertexSet) {
                for (x, y) in self.blocks.iter_mut().zip(rhs.blocks.iter()) {
                    let ($a, $b) = (*x, *y);
                    *x = $e;
                }
            }
        }
    };
}

blockwise!(BitAnd, bitand, BitAndAssign, bitand_assign, |a, b| a & b);
blockwise!(BitOr, bitor, BitOrAssign, bitor_assign, |a, b| a | b);
blockwise!(Sub, sub, SubAssign, sub_assign, |a, b| a & !b);

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

//! Fixed-width vertex bitsets.
//!
//! Every edge of a [`HyperGraph`](crate::HyperGraph) carries one of these so
//! that spans and unions cost `O(n / 64)` word operations.

use std::fmt;

const WORD: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    pub fn with_capacity(n: usize) -> Self {
        BitSet {
            words: vec![0; n.div_ceil(WORD)],
        }
    }

    pub fn from_iter_n<I: IntoIterator<Item = u32>>(n: usize, iter: I) -> Self {
        let mut s = Self::with_capacity(n);
        for v in iter {
            s.insert(v as usize);
        }
        s
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        self.words[i / WORD] |= 1u64 << (i % WORD);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        self.words[i / WORD] &= !(1u64 << (i % WORD));
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        self.words
            .get(i / WORD)
            .is_some_and(|w| w & (1u64 << (i % WORD)) != 0)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn clear(&mut self) {
        self.words.iter_mut().for_each(|w| *w = 0);
    }

    #[inline]
    pub fn union_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= *b;
        }
    }

    /// Overwrites `self` with `a ∪ b` without allocating.
    #[inline]
    pub fn set_union(&mut self, a: &BitSet, b: &BitSet) {
        for ((dst, x), y) in self.words.iter_mut().zip(&a.words).zip(&b.words) {
            *dst = x | y;
        }
    }

    #[inline]
    pub fn intersection_len(&self, other: &BitSet) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    #[inline]
    pub fn union_len(&self, other: &BitSet) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a | b).count_ones() as usize)
            .sum()
    }

    /// `|self \ other|`
    #[inline]
    pub fn difference_len(&self, other: &BitSet) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & !b).count_ones() as usize)
            .sum()
    }

    pub fn is_subset(&self, other: &BitSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn iter(&self) -> Ones<'_> {
        Ones {
            words: &self.words,
            idx: 0,
            cur: self.words.first().copied().unwrap_or(0),
        }
    }
}

pub struct Ones<'a> {
    words: &'a [u64],
    idx: usize,
    cur: u64,
}

impl Iterator for Ones<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let bit = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.idx * WORD + bit);
            }
            self.idx += 1;
            if self.idx >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.idx];
        }
    }
}

impl fmt::Debug for BitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn insert_iter_len() {
        let mut s = BitSet::with_capacity(130);
        for i in [0, 5, 63, 64, 129] {
            s.insert(i);
        }
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![0, 5, 63, 64, 129]);
        assert_eq!(s.len(), 5);
        s.remove(63);
        assert!(!s.contains(63));
        assert!(s.contains(64));
        assert!(!s.contains(1000));
    }

    #[test]
    fn set_algebra() {
        let a = BitSet::from_iter_n(70, [0, 1, 2, 65]);
        let b = BitSet::from_iter_n(70, [2, 3, 65, 69]);
        assert_eq!(a.union_len(&b), 6);
        assert_eq!(a.intersection_len(&b), 2);
        assert_eq!(a.difference_len(&b), 2);
        let mut u = BitSet::with_capacity(70);
        u.set_union(&a, &b);
        assert_eq!(u.len(), 6);
        assert!(a.is_subset(&u));
        assert!(!u.is_subset(&a));
    }
}

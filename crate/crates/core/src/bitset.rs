//! Fixed-universe bitsets over vertex ids and pair indices.
//!
//! Bit `i` of word `i / 64` is element `i`; iteration is ascending.

use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

#[inline]
pub(crate) fn words_for(universe: usize) -> usize {
    universe.div_ceil(64)
}

#[inline]
pub(crate) fn popcount(words: &[u64]) -> u32 {
    words.iter().map(|w| w.count_ones()).sum()
}

#[inline]
pub(crate) fn and_popcount(a: &[u64], b: &[u64]) -> u32 {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones()).sum()
}

#[inline]
pub(crate) fn and_assign(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d &= *s;
    }
}

#[inline]
pub(crate) fn test_bit(words: &[u64], i: usize) -> bool {
    words[i >> 6] >> (i & 63) & 1 == 1
}

#[inline]
pub(crate) fn set_bit(words: &mut [u64], i: usize) {
    words[i >> 6] |= 1u64 << (i & 63);
}

#[inline]
pub(crate) fn clear_bit(words: &mut [u64], i: usize) {
    words[i >> 6] &= !(1u64 << (i & 63));
}

/// Words with the low `universe` bits set.
pub(crate) fn full_words(universe: usize) -> Vec<u64> {
    let mut w = alloc::vec![u64::MAX; words_for(universe)];
    let rem = universe & 63;
    if rem != 0 {
        if let Some(last) = w.last_mut() {
            *last = (1u64 << rem) - 1;
        }
    }
    w
}

/// Ascending iterator over the set bits of a word slice.
#[derive(Clone)]
pub struct Ones<'a> {
    words: &'a [u64],
    idx: usize,
    cur: u64,
}

impl<'a> Ones<'a> {
    pub(crate) fn new(words: &'a [u64]) -> Self {
        let cur = words.first().copied().unwrap_or(0);
        Ones { words, idx: 0, cur }
    }
}

impl Iterator for Ones<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let bit = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.idx * 64 + bit);
            }
            self.idx += 1;
            if self.idx >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.idx];
        }
    }
}

/// Bitset over `0..universe` with a cached cardinality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitSet {
    universe: usize,
    words: Vec<u64>,
    len: usize,
}

impl BitSet {
    pub fn empty(universe: usize) -> Self {
        BitSet {
            universe,
            words: alloc::vec![0; words_for(universe)],
            len: 0,
        }
    }

    pub fn full(universe: usize) -> Self {
        BitSet {
            universe,
            words: full_words(universe),
            len: universe,
        }
    }

    pub fn from_indices<I>(universe: usize, items: I) -> Result<Self>
    where
        I: IntoIterator<Item = usize>,
    {
        let mut words = alloc::vec![0; words_for(universe)];
        for i in items {
            if i >= universe {
                return Err(Error::OutOfRange {
                    vertex: i as u32,
                    n: universe as u32,
                });
            }
            set_bit(&mut words, i);
        }
        Ok(Self::from_words(universe, words))
    }

    /// Takes ownership of raw words; bits beyond `universe` are cleared.
    pub(crate) fn from_words(universe: usize, mut words: Vec<u64>) -> Self {
        words.resize(words_for(universe), 0);
        let mask = full_words(universe);
        and_assign(&mut words, &mask);
        let len = popcount(&words) as usize;
        BitSet {
            universe,
            words,
            len,
        }
    }

    #[inline]
    pub fn universe(&self) -> usize {
        self.universe
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < self.universe && test_bit(&self.words, i)
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn iter(&self) -> Ones<'_> {
        Ones::new(&self.words)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(u64, u64) -> u64) -> Self {
        debug_assert_eq!(self.universe, other.universe);
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| f(*a, *b))
            .collect();
        Self::from_words(self.universe, words)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn union(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a & !b)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn intersection_len(&self, other: &Self) -> usize {
        and_popcount(&self.words, &other.words) as usize
    }
}

impl fmt::Debug for BitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

macro_rules! set_newtype {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, PartialEq, Eq, Hash, Debug)]
        pub struct $name(BitSet);

        impl $name {
            pub fn empty(universe: usize) -> Self {
                $name(BitSet::empty(universe))
            }

            pub fn full(universe: usize) -> Self {
                $name(BitSet::full(universe))
            }

            pub fn from_indices<I: IntoIterator<Item = usize>>(universe: usize, items: I) -> Result<Self> {
                BitSet::from_indices(universe, items).map($name)
            }

            #[allow(dead_code)]
            pub(crate) fn from_words(universe: usize, words: Vec<u64>) -> Self {
                $name(BitSet::from_words(universe, words))
            }

            pub fn intersection(&self, other: &Self) -> Self {
                $name(self.0.intersection(&other.0))
            }

            pub fn union(&self, other: &Self) -> Self {
                $name(self.0.union(&other.0))
            }

            pub fn difference(&self, other: &Self) -> Self {
                $name(self.0.difference(&other.0))
            }

            pub fn is_subset(&self, other: &Self) -> bool {
                self.0.is_subset(&other.0)
            }

            pub fn as_bitset(&self) -> &BitSet {
                &self.0
            }
        }

        impl core::ops::Deref for $name {
            type Target = BitSet;

            fn deref(&self) -> &BitSet {
                &self.0
            }
        }
    };
}

set_newtype!(
    /// Subset of the vertex set `0..n`.
    VertexSet
);
set_newtype!(
    /// Subset of the unordered vertex pairs, addressed by [`PairIndex`](crate::PairIndex).
    PairSet
);

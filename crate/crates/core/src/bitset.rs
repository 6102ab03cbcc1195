//! Fixed-width packed bit sets.
//!
//! [`BitSet`] carries a marker type so that object sets and attribute sets
//! cannot be mixed up at compile time. Both derivation operators are plain
//! word-wise intersections over these sets.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::marker::PhantomData;

const WORD: usize = 64;

/// Marker for sets of objects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Objects {}

/// Marker for sets of attributes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Attributes {}

/// A subset of `{0, .., width-1}` stored as packed 64-bit words.
pub struct BitSet<T> {
    width: usize,
    words: Vec<u64>,
    marker: PhantomData<T>,
}

/// Subset of a context's objects.
pub type ObjectSet = BitSet<Objects>;
/// Subset of a context's attributes.
pub type AttributeSet = BitSet<Attributes>;

#[inline]
fn word_count(width: usize) -> usize {
    width.div_ceil(WORD)
}

impl<T> BitSet<T> {
    pub fn empty(width: usize) -> Self {
        Self {
            width,
            words: vec![0; word_count(width)],
            marker: PhantomData,
        }
    }

    pub fn full(width: usize) -> Self {
        let mut set = Self::empty(width);
        for w in set.words.iter_mut() {
            *w = u64::MAX;
        }
        set.trim();
        set
    }

    /// Builds a set from member indices. Panics if an index is out of range.
    pub fn from_indices<I: IntoIterator<Item = usize>>(width: usize, indices: I) -> Self {
        let mut set = Self::empty(width);
        for i in indices {
            set.insert(i);
        }
        set
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        Self::from_indices(bits.len(), bits.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i))
    }

    /// Number of positions (not members).
    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < self.width && (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        assert!(i < self.width, "index {i} out of range for width {}", self.width);
        self.words[i / WORD] |= 1 << (i % WORD);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        assert!(i < self.width, "index {i} out of range for width {}", self.width);
        self.words[i / WORD] &= !(1 << (i % WORD));
    }

    pub fn set(&mut self, i: usize, value: bool) {
        if value {
            self.insert(i)
        } else {
            self.remove(i)
        }
    }

    /// Number of members.
    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.width
    }

    pub fn intersect_with(&mut self, other: &Self) {
        debug_assert_eq!(self.width, other.width);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn union_with(&mut self, other: &Self) {
        debug_assert_eq!(self.width, other.width);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn difference_with(&mut self, other: &Self) {
        debug_assert_eq!(self.width, other.width);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.intersect_with(other);
        out
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    pub fn difference(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.difference_with(other);
        out
    }

    /// Complement within `0..width`.
    pub fn complement(&self) -> Self {
        let mut out = self.clone();
        for w in out.words.iter_mut() {
            *w = !*w;
        }
        out.trim();
        out
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        debug_assert_eq!(self.width, other.width);
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn is_proper_subset(&self, other: &Self) -> bool {
        self.is_subset(other) && self.words != other.words
    }

    /// True if `self` and `other` agree on every position below `bound`.
    pub fn agrees_below(&self, other: &Self, bound: usize) -> bool {
        let full_words = bound / WORD;
        if self.words[..full_words] != other.words[..full_words] {
            return false;
        }
        let rem = bound % WORD;
        if rem == 0 {
            return true;
        }
        let mask = (1u64 << rem) - 1;
        (self.words[full_words] ^ other.words[full_words]) & mask == 0
    }

    /// Member indices in increasing order.
    pub fn iter(&self) -> Ones<'_> {
        Ones {
            words: &self.words,
            index: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Reinterprets the bits under another marker. Used where a set of one
    /// context's attributes is another context's objects (e.g. canonical scales).
    pub fn cast<U>(&self) -> BitSet<U> {
        BitSet {
            width: self.width,
            words: self.words.clone(),
            marker: PhantomData,
        }
    }

    fn trim(&mut self) {
        let rem = self.width % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

/// Iterator over the members of a [`BitSet`].
pub struct Ones<'a> {
    words: &'a [u64],
    index: usize,
    current: u64,
}

impl Iterator for Ones<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.index * WORD + bit);
            }
            self.index += 1;
            self.current = *self.words.get(self.index)?;
        }
    }
}

impl<T> Clone for BitSet<T> {
    fn clone(&self) -> Self {
        Self {
            width: self.width,
            words: self.words.clone(),
            marker: PhantomData,
        }
    }
}

impl<T> PartialEq for BitSet<T> {
    fn eq(&self, other: &Self) -> bool {
        self.width == other.width && self.words == other.words
    }
}

impl<T> Eq for BitSet<T> {}

impl<T> Hash for BitSet<T> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.width.hash(state);
        self.words.hash(state);
    }
}

/// Canonical order: by cardinality, then lexicographically by member indices.
impl<T> Ord for BitSet<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.width
            .cmp(&other.width)
            .then_with(|| self.len().cmp(&other.len()))
            .then_with(|| self.iter().cmp(other.iter()))
    }
}

impl<T> PartialOrd for BitSet<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T> fmt::Debug for BitSet<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

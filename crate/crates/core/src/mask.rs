//! Fixed-width bit masks over element (or point) indices.

use std::cmp::Ordering;
use std::fmt;

const WORDS: usize = 8;

/// Largest index count a [`Mask`] can hold.
pub const MASK_CAPACITY: usize = WORDS * 64;

/// A set of indices below [`MASK_CAPACITY`], stored as a 512-bit mask.
///
/// Ordering compares masks as unsigned integers with bit 0 least significant,
/// which is the tie-breaker used for canonical subgroup order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Mask([u64; WORDS]);

impl Mask {
    pub const EMPTY: Mask = Mask([0; WORDS]);

    /// Mask with bits `0..n` set.
    pub fn full(n: usize) -> Mask {
        assert!(n <= MASK_CAPACITY, "mask capacity exceeded");
        let mut m = Mask::EMPTY;
        for w in 0..WORDS {
            let lo = w * 64;
            if n >= lo + 64 {
                m.0[w] = u64::MAX;
            } else if n > lo {
                m.0[w] = (1u64 << (n - lo)) - 1;
            }
        }
        m
    }

    pub fn singleton(i: usize) -> Mask {
        let mut m = Mask::EMPTY;
        m.insert(i);
        m
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Mask {
        let mut m = Mask::EMPTY;
        for i in it {
            m.insert(i);
        }
        m
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        self.0[i >> 6] |= 1u64 << (i & 63);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        self.0[i >> 6] &= !(1u64 << (i & 63));
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < MASK_CAPACITY && (self.0[i >> 6] >> (i & 63)) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    pub fn union(&self, other: &Mask) -> Mask {
        let mut m = *self;
        for w in 0..WORDS {
            m.0[w] |= other.0[w];
        }
        m
    }

    pub fn intersection(&self, other: &Mask) -> Mask {
        let mut m = *self;
        for w in 0..WORDS {
            m.0[w] &= other.0[w];
        }
        m
    }

    pub fn difference(&self, other: &Mask) -> Mask {
        let mut m = *self;
        for w in 0..WORDS {
            m.0[w] &= !other.0[w];
        }
        m
    }

    pub fn intersection_len(&self, other: &Mask) -> usize {
        (0..WORDS).map(|w| (self.0[w] & other.0[w]).count_ones() as usize).sum()
    }

    pub fn is_subset(&self, other: &Mask) -> bool {
        (0..WORDS).all(|w| self.0[w] & !other.0[w] == 0)
    }

    pub fn first(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn iter(&self) -> MaskIter {
        MaskIter { words: self.0, word: 0 }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl Ord for Mask {
    fn cmp(&self, other: &Self) -> Ordering {
        for w in (0..WORDS).rev() {
            match self.0[w].cmp(&other.0[w]) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Mask {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Mask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<usize> for Mask {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Mask::from_indices(iter)
    }
}

pub struct MaskIter {
    words: [u64; WORDS],
    word: usize,
}

impl Iterator for MaskIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        while self.word < WORDS {
            let w = self.words[self.word];
            if w != 0 {
                let bit = w.trailing_zeros() as usize;
                self.words[self.word] = w & (w - 1);
                return Some(self.word * 64 + bit);
            }
            self.word += 1;
        }
        None
    }
}

//! Fixed-length bit set used for constraint sets and DP count tables.

use std::fmt;

const WORD: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitSet {
    len: usize,
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(len: usize) -> Self {
        BitSet {
            len,
            words: vec![0; len.div_ceil(WORD)],
        }
    }

    pub fn full(len: usize) -> Self {
        let mut set = BitSet::new(len);
        for w in set.words.iter_mut() {
            *w = u64::MAX;
        }
        set.trim();
        set
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < self.len && self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        self.words[i / WORD] |= 1 << (i % WORD);
    }

    pub fn remove(&mut self, i: usize) {
        if i < self.len {
            self.words[i / WORD] &= !(1 << (i % WORD));
        }
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &word)| {
            let mut w = word;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * WORD + bit)
            })
        })
    }

    /// Smallest member in `lo..=hi`, if any.
    pub fn first_in(&self, lo: usize, hi: usize) -> Option<usize> {
        if lo > hi || lo >= self.len {
            return None;
        }
        let hi = hi.min(self.len - 1);
        let (mut wi, last) = (lo / WORD, hi / WORD);
        let mut word = self.words[wi] & (u64::MAX << (lo % WORD));
        loop {
            if wi == last {
                let keep = hi % WORD;
                let mask = if keep == WORD - 1 {
                    u64::MAX
                } else {
                    (1u64 << (keep + 1)) - 1
                };
                word &= mask;
            }
            if word != 0 {
                return Some(wi * WORD + word.trailing_zeros() as usize);
            }
            if wi == last {
                return None;
            }
            wi += 1;
            word = self.words[wi];
        }
    }

    pub fn any_in(&self, lo: usize, hi: usize) -> bool {
        self.first_in(lo, hi).is_some()
    }

    /// Returns a copy grown to `len` bits with every member shifted up by one.
    pub fn shifted_up(&self, len: usize) -> BitSet {
        let mut out = BitSet::new(len);
        let mut carry = 0u64;
        for (i, &w) in self.words.iter().enumerate() {
            if i < out.words.len() {
                out.words[i] = (w << 1) | carry;
            }
            carry = w >> (WORD - 1);
        }
        if self.words.len() < out.words.len() {
            out.words[self.words.len()] |= carry;
        }
        out.trim();
        out
    }

    /// Returns a copy resized to `len` bits, dropping members beyond it.
    pub fn resized(&self, len: usize) -> BitSet {
        let mut out = BitSet::new(len);
        let n = out.words.len().min(self.words.len());
        out.words[..n].copy_from_slice(&self.words[..n]);
        out.trim();
        out
    }

    pub fn union_with(&mut self, other: &BitSet) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    fn trim(&mut self) {
        let tail = self.len % WORD;
        if tail != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << tail) - 1;
            }
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
    fn shift_crosses_word_boundary() {
        let mut s = BitSet::new(70);
        s.insert(0);
        s.insert(63);
        let t = s.shifted_up(71);
        assert_eq!(t.iter().collect::<Vec<_>>(), vec![1, 64]);
    }

    #[test]
    fn first_in_ranges() {
        let mut s = BitSet::new(200);
        for i in [3, 64, 130, 199] {
            s.insert(i);
        }
        assert_eq!(s.first_in(0, 199), Some(3));
        assert_eq!(s.first_in(4, 64), Some(64));
        assert_eq!(s.first_in(65, 129), None);
        assert_eq!(s.first_in(131, 500), Some(199));
        assert_eq!(s.first_in(10, 5), None);
    }

    #[test]
    fn full_is_trimmed() {
        let s = BitSet::full(5);
        assert_eq!(s.count(), 5);
        assert_eq!(s.shifted_up(5).iter().collect::<Vec<_>>(), vec![1, 2, 3, 4]);
    }
}

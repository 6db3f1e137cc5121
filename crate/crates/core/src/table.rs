//! Packed truth tables over `{0,1}^n`.
//!
//! Tuple `(a_1, ..., a_n)` lives at index `sum a_i * 2^(n-i)`, so variable 1
//! is the most significant index bit. Variable position `p` (0-based) is
//! therefore index bit `n - 1 - p`.

use core::cmp::Ordering;
use smallvec::{smallvec, SmallVec};

/// Words kept inline before spilling to the heap (arity <= 8).
pub(crate) type Words = SmallVec<[u64; 4]>;

/// Masks of in-word indices whose bit `b` is set, for `b < 6`.
const LOW: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

#[inline]
fn word_count(arity: usize) -> usize {
    if arity <= 6 {
        1
    } else {
        1 << (arity - 6)
    }
}

#[inline]
fn tail_mask(arity: usize) -> u64 {
    if arity >= 6 {
        u64::MAX
    } else {
        (1u64 << (1u32 << arity)) - 1
    }
}

/// A set of Boolean tuples of a fixed arity, stored as a bit vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Table {
    arity: u8,
    words: Words,
}

impl Table {
    pub fn empty(arity: usize) -> Self {
        assert!(arity < 40, "arity {arity} too large for an explicit table");
        Table { arity: arity as u8, words: smallvec![0; word_count(arity)] }
    }

    pub fn full(arity: usize) -> Self {
        let mut t = Table::empty(arity);
        for w in t.words.iter_mut() {
            *w = u64::MAX;
        }
        t.words[0] &= tail_mask(arity);
        t
    }

    /// Builds a table from a predicate on tuple indices.
    pub fn from_fn(arity: usize, mut f: impl FnMut(usize) -> bool) -> Self {
        let mut t = Table::empty(arity);
        for i in 0..t.len() {
            if f(i) {
                t.set(i, true);
            }
        }
        t
    }

    #[inline]
    pub fn arity(&self) -> usize {
        self.arity as usize
    }

    /// Number of bits, `2^arity`.
    #[inline]
    pub fn len(&self) -> usize {
        1usize << self.arity
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, index: usize) -> bool {
        (self.words[index >> 6] >> (index & 63)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, index: usize, value: bool) {
        let bit = 1u64 << (index & 63);
        if value {
            self.words[index >> 6] |= bit;
        } else {
            self.words[index >> 6] &= !bit;
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        *self == Table::full(self.arity())
    }

    /// Indices of the set bits, ascending.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            core::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let b = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    Some(wi * 64 + b)
                }
            })
        })
    }

    pub fn and(&self, other: &Table) -> Table {
        debug_assert_eq!(self.arity, other.arity);
        let mut out = self.clone();
        for (a, b) in out.words.iter_mut().zip(other.words.iter()) {
            *a &= *b;
        }
        out
    }

    pub fn or(&self, other: &Table) -> Table {
        debug_assert_eq!(self.arity, other.arity);
        let mut out = self.clone();
        for (a, b) in out.words.iter_mut().zip(other.words.iter()) {
            *a |= *b;
        }
        out
    }

    pub fn not(&self) -> Table {
        let mut out = self.clone();
        for w in out.words.iter_mut() {
            *w = !*w;
        }
        out.words[0] &= tail_mask(self.arity());
        if self.arity() < 6 {
            out.words[0] &= tail_mask(self.arity());
        }
        out
    }

    /// `self ⊆ other`.
    pub fn is_subset(&self, other: &Table) -> bool {
        self.words.iter().zip(other.words.iter()).all(|(a, b)| a & !b == 0)
    }

    /// Index bit carrying variable position `pos`.
    #[inline]
    fn index_bit(&self, pos: usize) -> usize {
        self.arity() - 1 - pos
    }

    /// Exchanges index bits `lo < hi` (a transposition of two variables).
    fn swap_index_bits(&mut self, lo: usize, hi: usize) {
        debug_assert!(lo < hi);
        if hi < 6 {
            let shift = (1u32 << hi) - (1u32 << lo);
            let up = LOW[lo] & !LOW[hi];
            let down = LOW[hi] & !LOW[lo];
            for w in self.words.iter_mut() {
                let x = *w;
                *w = (x & !(up | down)) | ((x & up) << shift) | ((x & down) >> shift);
            }
        } else if lo < 6 {
            let step = 1usize << (hi - 6);
            let s = 1u32 << lo;
            let m = LOW[lo];
            let n = self.words.len();
            let mut base = 0;
            while base < n {
                for w in base..base + step {
                    let a = self.words[w];
                    let b = self.words[w + step];
                    self.words[w] = (a & !m) | ((b & !m) << s);
                    self.words[w + step] = (b & m) | ((a & m) >> s);
                }
                base += 2 * step;
            }
        } else {
            let (l, h) = (lo - 6, hi - 6);
            for w in 0..self.words.len() {
                if (w >> l) & 1 == 1 && (w >> h) & 1 == 0 {
                    let partner = w ^ (1 << l) ^ (1 << h);
                    self.words.swap(w, partner);
                }
            }
        }
    }

    /// Exchanges variable positions `p` and `q`.
    pub fn swap_vars(&mut self, p: usize, q: usize) {
        if p == q {
            return;
        }
        let (a, b) = (self.index_bit(p), self.index_bit(q));
        self.swap_index_bits(a.min(b), a.max(b));
    }

    /// Table of `x -> self(x_{perm[0]}, ..., x_{perm[n-1]})` with 0-based `perm`.
    pub fn permute(&self, perm: &[usize]) -> Table {
        let n = self.arity();
        debug_assert_eq!(perm.len(), n);
        let mut out = Table::empty(n);
        for x in 0..self.len() {
            let mut y = 0usize;
            for (i, &pi) in perm.iter().enumerate() {
                let bit = (x >> (n - 1 - pi)) & 1;
                y |= bit << (n - 1 - i);
            }
            if self.get(y) {
                out.set(x, true);
            }
        }
        out
    }

    /// Moves variable `pos` to the front, keeping the others in order.
    pub fn move_to_front(&self, pos: usize) -> Table {
        let mut t = self.clone();
        for p in (0..pos).rev() {
            t.swap_vars(p, p + 1);
        }
        t
    }

    /// Splits on the first variable: (tuples with x_1 = 0, tuples with x_1 = 1).
    pub fn split_first(&self) -> (Table, Table) {
        let n = self.arity();
        assert!(n >= 1);
        let half = n - 1;
        if n <= 6 {
            let w = self.words[0];
            let h = 1u32 << half;
            let mask = tail_mask(half);
            let lo = Table { arity: half as u8, words: smallvec![w & mask] };
            let hi = Table { arity: half as u8, words: smallvec![(w >> h) & mask] };
            (lo, hi)
        } else {
            let mid = self.words.len() / 2;
            let lo = Table { arity: half as u8, words: self.words[..mid].iter().copied().collect() };
            let hi = Table { arity: half as u8, words: self.words[mid..].iter().copied().collect() };
            (lo, hi)
        }
    }

    /// Inverse of [`Table::split_first`].
    pub fn join_first(lo: &Table, hi: &Table) -> Table {
        debug_assert_eq!(lo.arity, hi.arity);
        let half = lo.arity();
        let n = half + 1;
        if n <= 6 {
            let h = 1u32 << half;
            Table { arity: n as u8, words: smallvec![lo.words[0] | (hi.words[0] << h)] }
        } else {
            let mut words: Words = SmallVec::with_capacity(2 * lo.words.len());
            words.extend_from_slice(&lo.words);
            words.extend_from_slice(&hi.words);
            Table { arity: n as u8, words }
        }
    }

    /// True iff the truth value never depends on variable `pos`.
    pub fn is_dummy(&self, pos: usize) -> bool {
        let b = self.index_bit(pos);
        if b < 6 {
            let s = 1u32 << b;
            self.words.iter().all(|&w| (w & LOW[b]) >> s == w & !LOW[b] & tail_mask(self.arity()))
        } else {
            let step = 1usize << (b - 6);
            (0..self.words.len()).filter(|w| (w >> (b - 6)) & 1 == 0).all(|w| self.words[w] == self.words[w + step])
        }
    }

    /// Removes variable `pos`, keeping the slice where it is 0.
    pub fn remove_var(&self, pos: usize) -> Table {
        self.move_to_front(pos).split_first().0
    }

    /// Inserts a dummy variable at position `pos`.
    pub fn insert_dummy(&self, pos: usize) -> Table {
        let front = Table::join_first(self, self);
        // `front` has the new variable first; shift it to `pos`.
        let mut t = front;
        for p in 0..pos {
            t.swap_vars(p, p + 1);
        }
        t
    }

    /// Restricts the first two variables to be equal and merges them.
    pub fn identify_first_two(&self) -> Table {
        let n = self.arity();
        assert!(n >= 2);
        let (x0, x1) = self.split_first();
        let (x00, _) = x0.split_first();
        let (_, x11) = x1.split_first();
        Table::join_first(&x00, &x11)
    }

    /// `exists z. a(z, x) and b(z, y)` with the result ordered `(x, y)`.
    pub fn compose_first(a: &Table, b: &Table) -> Table {
        let (a0, a1) = a.split_first();
        let (b0, b1) = b.split_first();
        let na = a0.arity();
        let nb = b0.arity();
        let mut out = Table::empty(na + nb);
        let block = 1usize << nb;
        for i in 0..a0.len() {
            let (p, q) = (a0.get(i), a1.get(i));
            if !p && !q {
                continue;
            }
            let base = i * block;
            if block >= 64 {
                let wb = base / 64;
                for (j, w) in out.words[wb..wb + block / 64].iter_mut().enumerate() {
                    let mut v = 0;
                    if p {
                        v |= b0.words[j];
                    }
                    if q {
                        v |= b1.words[j];
                    }
                    *w = v;
                }
            } else {
                let mut v = 0;
                if p {
                    v |= b0.words[0];
                }
                if q {
                    v |= b1.words[0];
                }
                out.words[base / 64] |= v << (base % 64);
            }
        }
        out
    }

    /// Lexicographic order on bit vectors, reading index 0 first.
    pub fn lex_cmp(&self, other: &Table) -> Ordering {
        debug_assert_eq!(self.arity, other.arity);
        for (a, b) in self.words.iter().zip(other.words.iter()) {
            let d = a ^ b;
            if d != 0 {
                let bit = d.trailing_zeros();
                return if (a >> bit) & 1 == 0 { Ordering::Less } else { Ordering::Greater };
            }
        }
        Ordering::Equal
    }

    /// Number of tuples with variable `pos` equal to 1.
    pub fn ones_at(&self, pos: usize) -> usize {
        let b = self.index_bit(pos);
        if b < 6 {
            self.words.iter().map(|w| (w & LOW[b]).count_ones() as usize).sum()
        } else {
            self.words
                .iter()
                .enumerate()
                .filter(|(w, _)| (w >> (b - 6)) & 1 == 1)
                .map(|(_, w)| w.count_ones() as usize)
                .sum()
        }
    }

    /// Number of tuples with variables `p` and `q` both equal to 1.
    pub fn ones_at_pair(&self, p: usize, q: usize) -> usize {
        let (bp, bq) = (self.index_bit(p), self.index_bit(q));
        self.words
            .iter()
            .enumerate()
            .map(|(wi, &w)| {
                let mut m = w;
                for b in [bp, bq] {
                    if b < 6 {
                        m &= LOW[b];
                    } else if (wi >> (b - 6)) & 1 == 0 {
                        m = 0;
                    }
                }
                m.count_ones() as usize
            })
            .sum()
    }
}

impl core::fmt::Debug for Table {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "Table[{}]{{", self.arity)?;
        let n = self.arity();
        let mut first = true;
        for t in self.ones() {
            if !first {
                write!(f, ",")?;
            }
            first = false;
            for i in (0..n).rev() {
                write!(f, "{}", (t >> i) & 1)?;
            }
        }
        write!(f, "}}")
    }
}

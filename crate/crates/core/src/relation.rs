//! k-sorted Boolean relations and the base predicates.

use alloc::vec::Vec;
use core::fmt;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::table::Table;

/// Largest arity accepted for an explicit relation.
pub const MAX_ARITY: usize = 26;

pub(crate) type Sorts = SmallVec<[u8; 8]>;

/// A k-sorted Boolean relation stored as a truth table.
///
/// Variables are numbered from 0 in the API; sorts are 1-based as in the
/// usual notation `x^i`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    k: u8,
    sorts: Sorts,
    table: Table,
}

/// Which base predicate to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseKind {
    Bottom,
    Equality,
}

fn check_sorts(k: usize, sorts: &[u8]) -> Result<()> {
    if k == 0 {
        return Err(Error::ZeroSorts);
    }
    if k > u8::MAX as usize {
        return Err(Error::SortOutOfRange { sort: k, k: u8::MAX as usize });
    }
    if sorts.len() > MAX_ARITY {
        return Err(Error::ArityTooLarge(sorts.len()));
    }
    for &s in sorts {
        if s == 0 || s as usize > k {
            return Err(Error::SortOutOfRange { sort: s as usize, k });
        }
    }
    Ok(())
}

/// Index of a tuple under the variable-1-most-significant convention.
pub fn tuple_index(bits: &[bool]) -> usize {
    bits.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
}

/// Inverse of [`tuple_index`].
pub fn index_tuple(index: usize, arity: usize) -> Vec<bool> {
    (0..arity).map(|p| (index >> (arity - 1 - p)) & 1 == 1).collect()
}

impl Relation {
    /// Builds a relation from explicit tuples.
    pub fn new<I, T>(k: usize, sorts: &[u8], tuples: I) -> Result<Self>
    where
        I: IntoIterator<Item = T>,
        T: AsRef<[bool]>,
    {
        check_sorts(k, sorts)?;
        let mut table = Table::empty(sorts.len());
        for t in tuples {
            let t = t.as_ref();
            if t.len() != sorts.len() {
                return Err(Error::TupleLength { expected: sorts.len(), got: t.len() });
            }
            table.set(tuple_index(t), true);
        }
        Ok(Relation { k: k as u8, sorts: sorts.iter().copied().collect(), table })
    }

    /// Wraps a truth table; its arity must match `sorts`.
    pub fn from_table(k: usize, sorts: &[u8], table: Table) -> Result<Self> {
        check_sorts(k, sorts)?;
        if table.arity() != sorts.len() {
            return Err(Error::ArityMismatch(table.arity(), sorts.len()));
        }
        Ok(Relation { k: k as u8, sorts: sorts.iter().copied().collect(), table })
    }

    pub(crate) fn from_parts(k: u8, sorts: Sorts, table: Table) -> Self {
        debug_assert_eq!(sorts.len(), table.arity());
        Relation { k, sorts, table }
    }

    pub fn base_predicate(kind: BaseKind, k: usize, sort: Option<u8>) -> Result<Self> {
        match kind {
            BaseKind::Bottom => Relation::from_table(k, &[], Table::empty(0)),
            BaseKind::Equality => {
                let s = sort.ok_or_else(|| Error::Invalid("equality needs a sort".into()))?;
                Relation::new(k, &[s, s], [[false, false], [true, true]])
            }
        }
    }

    /// The arity-0 relation with its bit clear.
    pub fn bottom(k: usize) -> Self {
        Relation { k: k as u8, sorts: Sorts::new(), table: Table::empty(0) }
    }

    /// The arity-0 relation with its bit set.
    pub fn top(k: usize) -> Self {
        Relation { k: k as u8, sorts: Sorts::new(), table: Table::full(0) }
    }

    /// `x = y` on sort `sort`.
    pub fn equality(k: usize, sort: u8) -> Self {
        Relation::base_predicate(BaseKind::Equality, k, Some(sort)).expect("valid sort")
    }

    pub fn full(k: usize, sorts: &[u8]) -> Self {
        Relation { k: k as u8, sorts: sorts.iter().copied().collect(), table: Table::full(sorts.len()) }
    }

    pub fn empty(k: usize, sorts: &[u8]) -> Self {
        Relation { k: k as u8, sorts: sorts.iter().copied().collect(), table: Table::empty(sorts.len()) }
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k as usize
    }

    #[inline]
    pub fn arity(&self) -> usize {
        self.sorts.len()
    }

    #[inline]
    pub fn sorts(&self) -> &[u8] {
        &self.sorts
    }

    #[inline]
    pub fn table(&self) -> &Table {
        &self.table
    }

    /// Number of tuples.
    pub fn size(&self) -> usize {
        self.table.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.table.is_full()
    }

    pub fn contains_index(&self, index: usize) -> bool {
        self.table.get(index)
    }

    pub fn eval(&self, a: &[bool]) -> Result<bool> {
        if a.len() != self.arity() {
            return Err(Error::TupleLength { expected: self.arity(), got: a.len() });
        }
        Ok(self.table.get(tuple_index(a)))
    }

    /// Tuples in ascending index order.
    pub fn tuples(&self) -> impl Iterator<Item = Vec<bool>> + '_ {
        let n = self.arity();
        self.table.ones().map(move |i| index_tuple(i, n))
    }

    pub fn is_dummy(&self, pos: usize) -> bool {
        self.table.is_dummy(pos)
    }

    pub fn has_dummies(&self) -> bool {
        (0..self.arity()).any(|p| self.is_dummy(p))
    }

    /// Removes every dummy variable; also returns their (0-based) positions.
    pub fn drop_dummies(&self) -> (Relation, Vec<usize>) {
        let mut removed = Vec::new();
        let mut table = self.table.clone();
        let mut sorts = Sorts::new();
        let mut cur = 0;
        for p in 0..self.arity() {
            if table.is_dummy(cur) {
                table = table.remove_var(cur);
                removed.push(p);
            } else {
                sorts.push(self.sorts[p]);
                cur += 1;
            }
        }
        (Relation { k: self.k, sorts, table }, removed)
    }

    /// Inserts dummy variables so that they end up at the given ascending
    /// positions of the result; inverse of [`Relation::drop_dummies`].
    pub fn insert_dummies(&self, positions: &[usize], sorts: &[u8]) -> Relation {
        debug_assert_eq!(positions.len(), sorts.len());
        let mut r = self.clone();
        for (&p, &s) in positions.iter().zip(sorts) {
            r.table = r.table.insert_dummy(p);
            r.sorts.insert(p, s);
        }
        r
    }

    /// Relation with the same sort data and another table.
    pub(crate) fn with_table(&self, table: Table) -> Relation {
        Relation { k: self.k, sorts: self.sorts.clone(), table }
    }

    /// `x -> self(x_{perm[0]}, ..., x_{perm[n-1]})`; no validation.
    pub(crate) fn permuted(&self, perm: &[usize]) -> Relation {
        let mut sorts: Sorts = self.sorts.clone();
        for (j, &p) in perm.iter().enumerate() {
            sorts[p] = self.sorts[j];
        }
        Relation { k: self.k, sorts, table: self.table.permute(perm) }
    }

    /// Swaps two variables in place.
    pub(crate) fn swap_vars(&mut self, p: usize, q: usize) {
        self.table.swap_vars(p, q);
        self.sorts.swap(p, q);
    }

    /// Complement within the same arity and sorts.
    pub fn complement(&self) -> Relation {
        self.with_table(self.table.not())
    }

    /// `self ⊆ other` (same arity assumed).
    pub fn is_subset(&self, other: &Relation) -> bool {
        self.arity() == other.arity() && self.table.is_subset(&other.table)
    }

    /// A permutation `perm` with `self.permuted(perm) == other`, if any.
    pub fn is_similar(&self, other: &Relation) -> Option<Vec<usize>> {
        if self.k != other.k || self.arity() != other.arity() || self.size() != other.size() {
            return None;
        }
        let n = self.arity();
        let mut found = None;
        for_each_permutation(n, |perm| {
            let sorts_ok = perm.iter().enumerate().all(|(j, &p)| other.sorts[p] == self.sorts[j]);
            if sorts_ok && self.table.permute(perm) == other.table {
                found = Some(perm.to_vec());
                return true;
            }
            false
        });
        found
    }

    /// Dedup representative: dummies dropped, variables stably ordered by
    /// sort, then the lexicographically least table over all
    /// sort-preserving permutations.
    pub fn canonical(&self) -> Relation {
        let (mut r, _) = self.drop_dummies();
        r.sort_by_sort();
        r.table = min_table_over_blocks(&r.table, &sort_blocks(&r.sorts));
        r
    }

    /// Stable reordering of the variables by ascending sort.
    pub(crate) fn sort_by_sort(&mut self) {
        let n = self.arity();
        for i in 1..n {
            let mut j = i;
            while j > 0 && self.sorts[j - 1] > self.sorts[j] {
                self.swap_vars(j - 1, j);
                j -= 1;
            }
        }
    }
}

/// Maximal runs of equal sorts as `(start, len)`.
pub(crate) fn sort_blocks(sorts: &[u8]) -> SmallVec<[(usize, usize); 4]> {
    let mut out = SmallVec::new();
    let mut i = 0;
    while i < sorts.len() {
        let mut j = i + 1;
        while j < sorts.len() && sorts[j] == sorts[i] {
            j += 1;
        }
        out.push((i, j - i));
        i = j;
    }
    out
}

/// Transpositions of Heap's algorithm: applying them in order visits every
/// permutation of `n` items exactly once.
pub(crate) fn heap_swaps(n: usize) -> Vec<(usize, usize)> {
    let mut swaps = Vec::new();
    let mut c = alloc::vec![0usize; n];
    let mut i = 1;
    while i < n {
        if c[i] < i {
            let j = if i % 2 == 0 { 0 } else { c[i] };
            swaps.push((j, i));
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    swaps
}

/// Calls `f` on every table reachable by permuting variables inside the
/// given blocks. Stops early when `f` returns true.
pub(crate) fn for_each_block_permutation(
    table: &Table,
    blocks: &[(usize, usize)],
    f: &mut dyn FnMut(&Table) -> bool,
) -> bool {
    fn rec(t: &mut Table, blocks: &[(usize, usize)], f: &mut dyn FnMut(&Table) -> bool) -> bool {
        let Some((&(start, len), rest)) = blocks.split_first() else {
            return f(t);
        };
        if len <= 1 {
            return rec(t, rest, f);
        }
        let swaps = heap_swaps(len);
        let mut cur = t.clone();
        if rec(&mut cur, rest, f) {
            return true;
        }
        for (a, b) in swaps {
            t.swap_vars(start + a, start + b);
            let mut cur = t.clone();
            if rec(&mut cur, rest, f) {
                return true;
            }
        }
        false
    }
    let mut t = table.clone();
    rec(&mut t, blocks, f)
}

pub(crate) fn min_table_over_blocks(table: &Table, blocks: &[(usize, usize)]) -> Table {
    let mut best = table.clone();
    for_each_block_permutation(table, blocks, &mut |t| {
        if t.lex_cmp(&best).is_lt() {
            best = t.clone();
        }
        false
    });
    best
}

/// Calls `f` on every permutation of `0..n`; stops when `f` returns true.
pub fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize]) -> bool) {
    let mut perm: Vec<usize> = (0..n).collect();
    if f(&perm) {
        return;
    }
    for (a, b) in heap_swaps(n) {
        perm.swap(a, b);
        if f(&perm) {
            return;
        }
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rel k={} sorts={:?} {:?}", self.k, self.sorts.as_slice(), self.table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn rel(k: usize, sorts: &[u8], tuples: &[&str]) -> Relation {
        let ts: Vec<Vec<bool>> = tuples.iter().map(|s| s.bytes().map(|b| b == b'1').collect()).collect();
        Relation::new(k, sorts, ts).unwrap()
    }

    #[test]
    fn make_relation_examples() {
        let xor = rel(1, &[1, 1], &["01", "10"]);
        assert!(xor.contains_index(1) && xor.contains_index(2));
        assert_eq!(xor.size(), 2);
        assert!(rel(2, &[1, 2], &[]).is_empty());
        assert!(rel(1, &[1, 1], &["00", "01", "10", "11"]).is_full());
        assert_eq!(
            Relation::new(1, &[1, 1], [[true]]).unwrap_err(),
            Error::TupleLength { expected: 2, got: 1 }
        );
        assert_eq!(
            Relation::new(1, &[2], [[true]]).unwrap_err(),
            Error::SortOutOfRange { sort: 2, k: 1 }
        );
    }

    #[test]
    fn base_predicates() {
        let b = Relation::base_predicate(BaseKind::Bottom, 1, None).unwrap();
        assert_eq!(b.arity(), 0);
        assert!(!b.eval(&[]).unwrap());
        let e = Relation::base_predicate(BaseKind::Equality, 2, Some(2)).unwrap();
        assert_eq!(e, rel(2, &[2, 2], &["00", "11"]));
        assert!(Relation::base_predicate(BaseKind::Equality, 2, None).is_err());
        assert!(Relation::base_predicate(BaseKind::Equality, 2, Some(3)).is_err());
    }

    #[test]
    fn eval_examples() {
        let xor = rel(1, &[1, 1], &["01", "10"]);
        assert!(xor.eval(&[false, true]).unwrap());
        assert!(!xor.eval(&[true, true]).unwrap());
        assert!(xor.eval(&[true]).is_err());
    }

    #[test]
    fn drop_dummies_examples() {
        let x0 = rel(1, &[1, 1], &["00", "01"]);
        let (r, removed) = x0.drop_dummies();
        assert_eq!(r, rel(1, &[1], &["0"]));
        assert_eq!(removed, vec![1]);
        assert_eq!(r.insert_dummies(&removed, &[1]), x0);
        let xor = rel(1, &[1, 1], &["01", "10"]);
        assert_eq!(xor.drop_dummies(), (xor.clone(), vec![]));
        let (t, removed) = Relation::full(1, &[1, 1]).drop_dummies();
        assert_eq!(t, Relation::top(1));
        assert_eq!(removed, vec![0, 1]);
    }

    #[test]
    fn similarity() {
        let a = rel(1, &[1, 1], &["00", "01", "11"]);
        let b = rel(1, &[1, 1], &["00", "10", "11"]);
        assert_eq!(a.is_similar(&b), Some(vec![1, 0]));
        assert_eq!(a.is_similar(&a), Some(vec![0, 1]));
        assert_eq!(rel(1, &[1], &["0"]).is_similar(&rel(1, &[1], &["1"])), None);
        let mixed = rel(2, &[1, 2], &["01"]);
        assert_eq!(mixed.is_similar(&rel(2, &[2, 1], &["10"])), Some(vec![1, 0]));
        assert_eq!(mixed.is_similar(&rel(2, &[1, 2], &["10"])), None);
    }

    #[test]
    fn heap_visits_all_permutations() {
        for n in 0..=6 {
            let mut seen = Vec::new();
            for_each_permutation(n, |p| {
                seen.push(p.to_vec());
                false
            });
            let count = seen.len();
            seen.sort();
            seen.dedup();
            assert_eq!(seen.len(), count);
            assert_eq!(count, (1..=n).product::<usize>());
        }
    }

    #[test]
    fn canonical_is_permutation_invariant() {
        let r = rel(2, &[2, 1, 1, 2], &["0010", "1100", "0111", "1011"]);
        let c = r.canonical();
        for_each_permutation(4, |p| {
            assert_eq!(r.permuted(p).canonical(), c);
            false
        });
        assert_eq!(c.sorts(), &[1, 1, 2, 2]);
    }
}

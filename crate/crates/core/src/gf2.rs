//! Linear equations over GF(2) and the disjunctive form of key relations.
//!
//! A key relation is a disjunction of linear equations, equivalently the
//! complement of an affine subspace (or the full or empty relation). The
//! canonical form takes the complement's affine system in reduced row
//! echelon form and negates each row.

use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::relation::{Relation, Sorts};
use crate::table::Table;

/// `sum_j coeffs_j * x_j = rhs`; bit `j` of `coeffs` is the coefficient of
/// variable `j` (0-based).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearEquation {
    pub arity: u8,
    pub coeffs: u64,
    pub rhs: bool,
}

impl LinearEquation {
    pub fn new(arity: usize, vars: &[usize], rhs: bool) -> Self {
        let mut coeffs = 0u64;
        for &v in vars {
            assert!(v < arity, "variable {v} outside arity {arity}");
            coeffs ^= 1 << v;
        }
        LinearEquation { arity: arity as u8, coeffs, rhs }
    }

    /// True iff the assignment (bit `j` = variable `j`) satisfies the equation.
    #[inline]
    pub fn holds(&self, assignment: u64) -> bool {
        ((self.coeffs & assignment).count_ones() & 1 == 1) == self.rhs
    }

    /// Leftmost variable with a nonzero coefficient.
    pub fn pivot(&self) -> Option<usize> {
        (self.coeffs != 0).then(|| self.coeffs.trailing_zeros() as usize)
    }

    pub fn mentions(&self, var: usize) -> bool {
        (self.coeffs >> var) & 1 == 1
    }

    pub fn negated(&self) -> Self {
        LinearEquation { rhs: !self.rhs, ..*self }
    }

    /// Variables with nonzero coefficient, ascending.
    pub fn vars(&self) -> impl Iterator<Item = usize> {
        let mut rest = self.coeffs;
        core::iter::from_fn(move || {
            (rest != 0).then(|| {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                v
            })
        })
    }
}

impl fmt::Debug for LinearEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for LinearEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs == 0 {
            write!(f, "0")?;
        }
        for (i, v) in self.vars().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            write!(f, "x{}", v + 1)?;
        }
        write!(f, "={}", self.rhs as u8)
    }
}

/// Assignment vector (bit `j` = variable `j`) of a table index.
#[inline]
pub fn index_to_vars(index: usize, arity: usize) -> u64 {
    let mut v = 0u64;
    for j in 0..arity {
        v |= (((index >> (arity - 1 - j)) & 1) as u64) << j;
    }
    v
}

#[inline]
pub fn vars_to_index(vars: u64, arity: usize) -> usize {
    let mut idx = 0usize;
    for j in 0..arity {
        idx |= (((vars >> j) & 1) as usize) << (arity - 1 - j);
    }
    idx
}

/// An affine system in reduced row echelon form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffineSystem {
    pub arity: usize,
    pub rows: Vec<LinearEquation>,
}

impl AffineSystem {
    pub fn is_inconsistent(&self) -> bool {
        self.rows.len() == 1 && self.rows[0].coeffs == 0 && self.rows[0].rhs
    }

    /// Solution set as a truth table.
    pub fn solutions(&self) -> Table {
        let n = self.arity;
        Table::from_fn(n, |i| {
            let v = index_to_vars(i, n);
            self.rows.iter().all(|r| r.holds(v))
        })
    }
}

/// Gauss-Jordan elimination with the leftmost nonzero column as pivot.
pub fn rref(equations: &[LinearEquation]) -> Result<AffineSystem> {
    let arity = equations.first().map_or(0, |e| e.arity as usize);
    rref_with_arity(arity, equations)
}

pub fn rref_with_arity(arity: usize, equations: &[LinearEquation]) -> Result<AffineSystem> {
    let mut rows: Vec<LinearEquation> = Vec::with_capacity(equations.len());
    for e in equations {
        if e.arity as usize != arity {
            return Err(Error::ArityMismatch(arity, e.arity as usize));
        }
        let mut e = *e;
        for r in &rows {
            let p = r.pivot().expect("stored rows have pivots");
            if e.mentions(p) {
                e.coeffs ^= r.coeffs;
                e.rhs ^= r.rhs;
            }
        }
        match e.pivot() {
            None if e.rhs => {
                return Ok(AffineSystem {
                    arity,
                    rows: alloc::vec![LinearEquation { arity: arity as u8, coeffs: 0, rhs: true }],
                })
            }
            None => {}
            Some(p) => {
                for r in rows.iter_mut() {
                    if r.mentions(p) {
                        r.coeffs ^= e.coeffs;
                        r.rhs ^= e.rhs;
                    }
                }
                rows.push(e);
            }
        }
    }
    rows.sort_by_key(|r| r.pivot());
    Ok(AffineSystem { arity, rows })
}

/// Affine system whose solution set is exactly `set`, if `set` is an affine
/// subspace (the empty set maps to the inconsistent system).
pub fn affine_system_of(set: &Table) -> Option<AffineSystem> {
    let n = set.arity();
    let mut points = set.ones();
    let Some(first) = points.next() else {
        return Some(AffineSystem {
            arity: n,
            rows: alloc::vec![LinearEquation { arity: n as u8, coeffs: 0, rhs: true }],
        });
    };
    let c0 = index_to_vars(first, n);
    // xor basis keyed by leading bit
    let mut basis: [u64; 64] = [0; 64];
    let mut rank = 0usize;
    let mut size = 1usize;
    for idx in points {
        size += 1;
        let mut v = index_to_vars(idx, n) ^ c0;
        while v != 0 {
            let lead = v.trailing_zeros() as usize;
            if basis[lead] == 0 {
                basis[lead] = v;
                rank += 1;
                break;
            }
            v ^= basis[lead];
        }
    }
    if size != 1usize << rank {
        return None;
    }
    // Reduce the direction space to RREF, then read off its annihilator.
    let mut dir: Vec<u64> = basis.iter().copied().filter(|&v| v != 0).collect();
    dir.sort_by_key(|v| v.trailing_zeros());
    for i in 0..dir.len() {
        let p = dir[i].trailing_zeros();
        for j in 0..dir.len() {
            if j != i && (dir[j] >> p) & 1 == 1 {
                dir[j] ^= dir[i];
            }
        }
    }
    let pivots: u64 = dir.iter().fold(0, |acc, v| acc | (1 << v.trailing_zeros()));
    let mut eqs = Vec::new();
    for f in 0..n {
        if (pivots >> f) & 1 == 1 {
            continue;
        }
        let mut a = 1u64 << f;
        for v in &dir {
            if (v >> f) & 1 == 1 {
                a |= 1 << v.trailing_zeros();
            }
        }
        let rhs = (a & c0).count_ones() & 1 == 1;
        eqs.push(LinearEquation { arity: n as u8, coeffs: a, rhs });
    }
    rref_with_arity(n, &eqs).ok()
}

/// True iff the complement of `rel` is affine (full and empty included).
pub fn is_key(rel: &Relation) -> bool {
    affine_system_of(&rel.table().not()).is_some()
}

/// A disjunction of linear equations over a sorted variable list.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DisjunctiveForm {
    k: u8,
    sorts: Sorts,
    clauses: Vec<LinearEquation>,
}

impl DisjunctiveForm {
    pub fn new(k: usize, sorts: &[u8], clauses: Vec<LinearEquation>) -> Result<Self> {
        if k == 0 {
            return Err(Error::ZeroSorts);
        }
        for &s in sorts {
            if s == 0 || s as usize > k {
                return Err(Error::SortOutOfRange { sort: s as usize, k });
            }
        }
        if sorts.len() > 64 {
            return Err(Error::ArityTooLarge(sorts.len()));
        }
        for c in &clauses {
            if c.arity as usize != sorts.len() {
                return Err(Error::ArityMismatch(sorts.len(), c.arity as usize));
            }
        }
        Ok(DisjunctiveForm { k: k as u8, sorts: sorts.iter().copied().collect(), clauses })
    }

    pub(crate) fn from_parts(k: u8, sorts: Sorts, clauses: Vec<LinearEquation>) -> Self {
        DisjunctiveForm { k, sorts, clauses }
    }

    pub fn k(&self) -> usize {
        self.k as usize
    }

    pub fn arity(&self) -> usize {
        self.sorts.len()
    }

    pub fn sorts(&self) -> &[u8] {
        &self.sorts
    }

    pub fn clauses(&self) -> &[LinearEquation] {
        &self.clauses
    }

    /// The relation defined by the disjunction.
    pub fn materialize(&self) -> Relation {
        let n = self.arity();
        let table = Table::from_fn(n, |i| {
            let v = index_to_vars(i, n);
            self.clauses.iter().any(|c| c.holds(v))
        });
        Relation::from_parts(self.k, self.sorts.clone(), table)
    }

    /// Canonical form computed symbolically: negate, eliminate, negate back.
    pub fn canonical(&self) -> DisjunctiveForm {
        let dual: Vec<LinearEquation> = self.clauses.iter().map(|c| c.negated()).collect();
        let sys = rref_with_arity(self.arity(), &dual).expect("clauses share the arity");
        DisjunctiveForm { k: self.k, sorts: self.sorts.clone(), clauses: sys.rows.iter().map(|r| r.negated()).collect() }
    }

    /// Variables appearing in some clause.
    pub fn support(&self) -> u64 {
        self.clauses.iter().fold(0, |acc, c| acc | c.coeffs)
    }
}

impl fmt::Debug for DisjunctiveForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "disj k={} sorts={:?} :", self.k, self.sorts.as_slice())?;
        for (i, c) in self.clauses.iter().enumerate() {
            write!(f, "{}{}", if i == 0 { " " } else { " | " }, c)?;
        }
        Ok(())
    }
}

/// Canonical disjunctive form of a key relation, or `None`.
pub fn to_disjunctive_form(rel: &Relation) -> Option<DisjunctiveForm> {
    let sys = affine_system_of(&rel.table().not())?;
    let clauses = sys.rows.iter().map(|r| r.negated()).collect();
    Some(DisjunctiveForm { k: rel.k() as u8, sorts: rel.sorts().iter().copied().collect(), clauses })
}

pub fn materialize(df: &DisjunctiveForm) -> Relation {
    df.materialize()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use alloc::vec::Vec;

    fn eq(n: usize, vars: &[usize], rhs: u8) -> LinearEquation {
        LinearEquation::new(n, vars, rhs == 1)
    }

    fn rel(tuples: &[&str]) -> Relation {
        let n = tuples.first().map_or(0, |t| t.len());
        let ts: Vec<Vec<bool>> = tuples.iter().map(|s| s.bytes().map(|b| b == b'1').collect()).collect();
        Relation::new(1, &vec![1; n], ts).unwrap()
    }

    #[test]
    fn rref_examples() {
        let s = rref(&[eq(2, &[0, 1], 1), eq(2, &[1], 1)]).unwrap();
        assert_eq!(s.rows, vec![eq(2, &[0], 0), eq(2, &[1], 1)]);
        let s = rref(&[eq(1, &[], 1)]).unwrap();
        assert!(s.is_inconsistent());
        let s = rref(&[eq(2, &[0, 1], 0), eq(2, &[0, 1], 0)]).unwrap();
        assert_eq!(s.rows, vec![eq(2, &[0, 1], 0)]);
        assert!(rref(&[eq(2, &[0], 0), eq(3, &[0], 0)]).is_err());
    }

    #[test]
    fn is_key_examples() {
        assert!(is_key(&rel(&["00", "11"])));
        assert!(!is_key(&rel(&["11"])));
        assert!(is_key(&Relation::full(1, &[1, 1])));
        assert!(is_key(&Relation::empty(1, &[1, 1])));
        assert!(is_key(&Relation::bottom(1)));
    }

    #[test]
    fn disjunctive_form_examples() {
        let df = to_disjunctive_form(&rel(&["00", "01", "11"])).unwrap();
        assert_eq!(df.clauses(), &[eq(2, &[0], 0), eq(2, &[1], 1)]);
        let df = to_disjunctive_form(&rel(&["01", "10"])).unwrap();
        assert_eq!(df.clauses(), &[eq(2, &[0, 1], 1)]);
        assert!(to_disjunctive_form(&rel(&["11"])).is_none());
        let full = to_disjunctive_form(&Relation::full(1, &[1])).unwrap();
        assert_eq!(full.clauses(), &[eq(1, &[], 0)]);
        let empty = to_disjunctive_form(&Relation::empty(1, &[1, 1])).unwrap();
        assert!(empty.clauses().is_empty());
    }

    #[test]
    fn materialize_examples() {
        let df = DisjunctiveForm::new(1, &[1, 1], vec![eq(2, &[0], 0), eq(2, &[1], 1)]).unwrap();
        assert_eq!(df.materialize(), rel(&["00", "01", "11"]));
        let df = DisjunctiveForm::new(1, &[1, 1], vec![]).unwrap();
        assert!(df.materialize().is_empty());
        let df = DisjunctiveForm::new(1, &[1], vec![eq(1, &[], 0)]).unwrap();
        assert!(df.materialize().is_full());
    }

    #[test]
    fn symbolic_canonical_matches_semantic() {
        let df = DisjunctiveForm::new(
            1,
            &[1, 1, 1],
            vec![eq(3, &[1, 2], 1), eq(3, &[0, 1], 0), eq(3, &[0, 2], 1)],
        )
        .unwrap();
        let sem = to_disjunctive_form(&df.materialize()).unwrap();
        assert_eq!(df.canonical(), sem);
    }

    #[test]
    fn index_vars_round_trip() {
        for n in 0..8 {
            for i in 0..(1usize << n) {
                assert_eq!(vars_to_index(index_to_vars(i, n), n), i);
            }
        }
    }
}

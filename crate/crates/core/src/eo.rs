//! The elementary operations on relations, plus the symbolic versions of
//! composition and universal quantification on disjunctive forms.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::gf2::{DisjunctiveForm, LinearEquation};
use crate::relation::{Relation, Sorts, MAX_ARITY};
use crate::table::Table;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DummyAction {
    /// Append a dummy variable of the given sort as the last variable.
    Append(u8),
    /// Remove the dummy variable at a 0-based position.
    Remove(usize),
}

pub fn eo_dummy(rel: &Relation, action: DummyAction) -> Result<Relation> {
    match action {
        DummyAction::Append(sort) => {
            if sort == 0 || sort as usize > rel.k() {
                return Err(Error::SortOutOfRange { sort: sort as usize, k: rel.k() });
            }
            if rel.arity() + 1 > MAX_ARITY {
                return Err(Error::ArityTooLarge(rel.arity() + 1));
            }
            Ok(rel.insert_dummies(&[rel.arity()], &[sort]))
        }
        DummyAction::Remove(pos) => {
            if pos >= rel.arity() {
                return Err(Error::VarOutOfRange(pos));
            }
            if !rel.is_dummy(pos) {
                return Err(Error::NotDummy(pos));
            }
            let mut sorts: Sorts = rel.sorts().iter().copied().collect();
            sorts.remove(pos);
            Ok(Relation::from_parts(rel.k() as u8, sorts, rel.table().remove_var(pos)))
        }
    }
}

/// `x -> rel(x_{perm[0]}, ..., x_{perm[n-1]})` for a 0-based permutation.
pub fn eo_permute(rel: &Relation, perm: &[usize]) -> Result<Relation> {
    let n = rel.arity();
    if perm.len() != n {
        return Err(Error::NotAPermutation);
    }
    let mut seen = alloc::vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::NotAPermutation);
        }
        seen[p] = true;
    }
    Ok(rel.permuted(perm))
}

/// Merges the first two variables.
pub fn eo_identify(rel: &Relation) -> Result<Relation> {
    if rel.arity() < 2 {
        return Err(Error::ArityTooSmall(2));
    }
    if rel.sorts()[0] != rel.sorts()[1] {
        return Err(Error::SortMismatch);
    }
    let sorts: Sorts = rel.sorts()[1..].iter().copied().collect();
    Ok(Relation::from_parts(rel.k() as u8, sorts, rel.table().identify_first_two()))
}

fn check_composable(a_k: usize, b_k: usize, a_sorts: &[u8], b_sorts: &[u8]) -> Result<()> {
    if a_k != b_k {
        return Err(Error::KMismatch(a_k, b_k));
    }
    if a_sorts.is_empty() || b_sorts.is_empty() {
        return Err(Error::ArityTooSmall(1));
    }
    if a_sorts[0] != b_sorts[0] {
        return Err(Error::SortMismatch);
    }
    Ok(())
}

/// `exists z. a(z, x...) and b(z, y...)`, result variables `x...` then `y...`.
pub fn eo_compose(a: &Relation, b: &Relation) -> Result<Relation> {
    check_composable(a.k(), b.k(), a.sorts(), b.sorts())?;
    if a.is_dummy(0) || b.is_dummy(0) {
        return Err(Error::FirstVarDummy);
    }
    let n = a.arity() + b.arity() - 2;
    if n > MAX_ARITY {
        return Err(Error::ArityTooLarge(n));
    }
    Ok(compose_unchecked(a, b))
}

pub(crate) fn compose_unchecked(a: &Relation, b: &Relation) -> Relation {
    let mut sorts: Sorts = a.sorts()[1..].iter().copied().collect();
    sorts.extend_from_slice(&b.sorts()[1..]);
    Relation::from_parts(a.k() as u8, sorts, Table::compose_first(a.table(), b.table()))
}

/// `forall y. rel(y, x...)`.
pub fn eo_forall(rel: &Relation) -> Result<Relation> {
    if rel.arity() == 0 {
        return Err(Error::ArityTooSmall(1));
    }
    let (lo, hi) = rel.table().split_first();
    let sorts: Sorts = rel.sorts()[1..].iter().copied().collect();
    Ok(Relation::from_parts(rel.k() as u8, sorts, lo.and(&hi)))
}

pub fn eo_conjoin(a: &Relation, b: &Relation) -> Result<Relation> {
    if a.k() != b.k() {
        return Err(Error::KMismatch(a.k(), b.k()));
    }
    if a.arity() != b.arity() {
        return Err(Error::ArityMismatch(a.arity(), b.arity()));
    }
    if a.sorts() != b.sorts() {
        return Err(Error::SortMismatch);
    }
    Ok(a.with_table(a.table().and(b.table())))
}

/// Moves variable `pos` to the front.
pub fn to_front(rel: &Relation, pos: usize) -> Relation {
    let mut r = rel.clone();
    for p in (0..pos).rev() {
        r.swap_vars(p, p + 1);
    }
    r
}

/// Moves variables `p` and `q` (distinct) to positions 0 and 1.
pub fn pair_to_front(rel: &Relation, p: usize, q: usize) -> Relation {
    debug_assert_ne!(p, q);
    let r = to_front(rel, q);
    let p = if p < q { p + 1 } else { p };
    to_front(&r, p)
}

/// Splits the clauses of a canonical form on variable 0.
fn split_on_first(df: &DisjunctiveForm) -> Result<(LinearEquation, Vec<LinearEquation>)> {
    let canon = df.canonical();
    let mut with: Option<LinearEquation> = None;
    let mut without = Vec::new();
    for c in canon.clauses() {
        if c.mentions(0) {
            debug_assert!(with.is_none(), "canonical form has one clause per pivot");
            with = Some(*c);
        } else {
            without.push(*c);
        }
    }
    with.map(|w| (w, without)).ok_or(Error::FirstVarDummy)
}

fn remap(c: &LinearEquation, arity: usize, offset: usize) -> LinearEquation {
    // Drops variable 0 and shifts the rest to start at `offset`.
    LinearEquation { arity: arity as u8, coeffs: (c.coeffs >> 1) << offset, rhs: c.rhs }
}

/// Composition on disjunctive forms: the two clauses solving for the shared
/// variable are added, the remaining clauses are carried over.
pub fn compose_forms(a: &DisjunctiveForm, b: &DisjunctiveForm) -> Result<DisjunctiveForm> {
    check_composable(a.k(), b.k(), a.sorts(), b.sorts())?;
    let (ca, rest_a) = split_on_first(a)?;
    let (cb, rest_b) = split_on_first(b)?;
    let na = a.arity() - 1;
    let n = na + b.arity() - 1;
    if n > 64 {
        return Err(Error::ArityTooLarge(n));
    }
    let ja = remap(&ca, n, 0);
    let jb = remap(&cb, n, na);
    let mut clauses = alloc::vec![LinearEquation { arity: n as u8, coeffs: ja.coeffs ^ jb.coeffs, rhs: ja.rhs ^ jb.rhs }];
    clauses.extend(rest_a.iter().map(|c| remap(c, n, 0)));
    clauses.extend(rest_b.iter().map(|c| remap(c, n, na)));
    let mut sorts: Sorts = a.sorts()[1..].iter().copied().collect();
    sorts.extend_from_slice(&b.sorts()[1..]);
    Ok(DisjunctiveForm::from_parts(a.k() as u8, sorts, clauses))
}

/// Universal quantification of variable 0 on a disjunctive form: clauses
/// mentioning it are dropped.
pub fn forall_form(df: &DisjunctiveForm) -> Result<DisjunctiveForm> {
    if df.arity() == 0 {
        return Err(Error::ArityTooSmall(1));
    }
    let n = df.arity() - 1;
    let canon = df.canonical();
    let clauses = canon.clauses().iter().filter(|c| !c.mentions(0)).map(|c| remap(c, n, 0)).collect();
    Ok(DisjunctiveForm::from_parts(df.k() as u8, df.sorts()[1..].iter().copied().collect(), clauses))
}

//! Constructive reductions of key relations towards canonical ones: the
//! pivot rearrangement, the split into an equality/constant disjunction and
//! single equations, and the generator-set identities used along the way.
//! Each identity is packaged as an [`Instance`] whose two sides must
//! generate each other.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::closure::{closure_with, ClosureConfig, Ops};
use crate::error::{Error, Result};
use crate::gf2::{affine_system_of, DisjunctiveForm, LinearEquation};
use crate::relation::Relation;

/// A key relation written with its variables ordered as pivots `x`, free
/// variables `y` and constant-literal variables `z`:
/// `x_i = sum_j a_ij y_j + b_i` for each row, or `z_h = c_h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rearranged {
    k: usize,
    /// Original positions in `x`, `y`, `z` order.
    order: Vec<usize>,
    sorts: Vec<u8>,
    /// Per `x_i`: bit `j` of the mask is `a_ij`, then `b_i`.
    rows: Vec<(u64, bool)>,
    /// `c_h` per `z_h`.
    consts: Vec<bool>,
    /// Full relation: no clause fits the shape, every variable is a `y`.
    full: bool,
}

impl Rearranged {
    pub fn m(&self) -> usize {
        self.rows.len()
    }

    pub fn n(&self) -> usize {
        self.order.len() - self.rows.len() - self.consts.len()
    }

    pub fn l(&self) -> usize {
        self.consts.len()
    }

    pub fn is_full(&self) -> bool {
        self.full
    }

    /// Original variable positions listed as `x`, `y`, `z`.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Sorts in `x`, `y`, `z` order.
    pub fn sorts(&self) -> &[u8] {
        &self.sorts
    }

    pub fn rows(&self) -> &[(u64, bool)] {
        &self.rows
    }

    pub fn consts(&self) -> &[bool] {
        &self.consts
    }

    pub fn form(&self) -> DisjunctiveForm {
        let arity = self.order.len();
        let (m, n) = (self.m(), self.n());
        let mut clauses = Vec::new();
        if self.full {
            clauses.push(LinearEquation { arity: arity as u8, coeffs: 0, rhs: false });
        }
        for (i, &(a, b)) in self.rows.iter().enumerate() {
            let mut vars = vec![i];
            vars.extend((0..n).filter(|j| (a >> j) & 1 == 1).map(|j| m + j));
            clauses.push(LinearEquation::new(arity, &vars, b));
        }
        for (h, &c) in self.consts.iter().enumerate() {
            clauses.push(LinearEquation::new(arity, &[m + n + h], c));
        }
        DisjunctiveForm::new(self.k, &self.sorts, clauses).expect("sorts valid")
    }

    pub fn materialize(&self) -> Relation {
        self.form().materialize()
    }
}

/// Rewrites a key relation into pivot form; the result materializes to a
/// relation similar to `rel` (variables reordered as in `order`).
pub fn rearrange(rel: &Relation) -> Result<Rearranged> {
    let n = rel.arity();
    let system = affine_system_of(&rel.table().not()).ok_or(Error::NotKey)?;
    let full = system.is_inconsistent();
    let mut pivots_x = Vec::new();
    let mut pivots_z = Vec::new();
    if !full {
        for row in &system.rows {
            let p = row.pivot().expect("consistent rows have pivots");
            // the disjunct is the negated row
            if row.coeffs == 1 << p {
                pivots_z.push((p, !row.rhs));
            } else {
                pivots_x.push((p, row.coeffs, !row.rhs));
            }
        }
    }
    let pivot_mask: u64 = system.rows.iter().filter_map(|r| r.pivot()).fold(0, |a, p| a | (1 << p));
    let free: Vec<usize> = (0..n).filter(|&v| full || (pivot_mask >> v) & 1 == 0).collect();
    let mut order: Vec<usize> = pivots_x.iter().map(|r| r.0).collect();
    order.extend(&free);
    order.extend(pivots_z.iter().map(|z| z.0));
    let rows = pivots_x
        .iter()
        .map(|&(_, coeffs, b)| {
            let a = free.iter().enumerate().filter(|(_, &v)| (coeffs >> v) & 1 == 1).fold(0u64, |a, (j, _)| a | (1 << j));
            (a, b)
        })
        .collect();
    let sorts = order.iter().map(|&v| rel.sorts()[v]).collect();
    Ok(Rearranged { k: rel.k(), order, sorts, rows, consts: pivots_z.iter().map(|z| z.1).collect(), full })
}

/// The equality/constant part `sigma` and the single equations `lambda_i`
/// of a rearranged relation.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub sigma: Relation,
    pub lambdas: Vec<Relation>,
}

/// `sigma(u, v, z) = OR u_i = v_i OR z_h = c_h` and
/// `lambda_i(x_i, y) = (x_i = sum_j a_ij y_j + b_i)`.
pub fn decompose(r: &Rearranged) -> Result<Decomposition> {
    if r.full {
        return Err(Error::Invalid("the full relation has no decomposition".into()));
    }
    let (m, n, l) = (r.m(), r.n(), r.l());
    let xs = &r.sorts[..m];
    let ys = &r.sorts[m..m + n];
    let zs = &r.sorts[m + n..];
    let mut sorts: Vec<u8> = xs.to_vec();
    sorts.extend_from_slice(xs);
    sorts.extend_from_slice(zs);
    let arity = 2 * m + l;
    let mut clauses: Vec<LinearEquation> = (0..m).map(|i| LinearEquation::new(arity, &[i, m + i], false)).collect();
    clauses.extend(r.consts.iter().enumerate().map(|(h, &c)| LinearEquation::new(arity, &[2 * m + h], c)));
    let sigma = DisjunctiveForm::new(r.k, &sorts, clauses)?.materialize();
    let mut lambdas = Vec::with_capacity(m);
    for (i, &(a, b)) in r.rows.iter().enumerate() {
        let mut s = vec![xs[i]];
        s.extend_from_slice(ys);
        let mut vars = vec![0];
        vars.extend((0..n).filter(|j| (a >> j) & 1 == 1).map(|j| j + 1));
        let eq = LinearEquation::new(n + 1, &vars, b);
        lambdas.push(DisjunctiveForm::new(r.k, &s, vec![eq])?.materialize());
    }
    Ok(Decomposition { sigma, lambdas })
}

/// Which closure the two sides of an [`Instance`] are compared in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Each side lies in the quantified clone of the other.
    Mutual,
    /// The left side lies in the (unquantified) relational clone of the
    /// right side.
    PpInto,
}

/// One instantiated generator-set identity.
#[derive(Clone, Debug)]
pub struct Instance {
    pub family: &'static str,
    pub params: String,
    pub mode: Mode,
    pub lhs: Vec<Relation>,
    pub rhs: Vec<Relation>,
}

impl Instance {
    pub fn max_arity(&self) -> usize {
        self.lhs.iter().chain(&self.rhs).map(|r| r.arity()).max().unwrap_or(0)
    }
}

/// True iff every target is a conjunction of relations reachable from
/// `langs` within some working arity up to `cap`.
pub fn all_derivable(targets: &[Relation], langs: &[Relation], k: usize, cap: usize, ops: Ops) -> Result<bool> {
    let mut pending: Vec<&Relation> = targets.iter().collect();
    let start = langs.iter().chain(targets).map(|r| r.arity()).max().unwrap_or(0).max(1);
    for w in start..=cap {
        let set = closure_with(langs, &ClosureConfig::new(k, w, 1), ops)?;
        pending.retain(|t| !set.conj_contains(t));
        if pending.is_empty() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Checks an instance with working arities up to `cap`.
pub fn check_instance(inst: &Instance, k: usize, cap: usize) -> Result<bool> {
    match inst.mode {
        Mode::Mutual => Ok(all_derivable(&inst.lhs, &inst.rhs, k, cap, Ops::UpToForall)?
            && all_derivable(&inst.rhs, &inst.lhs, k, cap, Ops::UpToForall)?),
        Mode::PpInto => all_derivable(&inst.lhs, &inst.rhs, k, cap, Ops::UpToCompose),
    }
}

fn disj(k: usize, sorts: &[u8], clauses: &[(&[usize], bool)]) -> Relation {
    let n = sorts.len();
    let eqs = clauses.iter().map(|(v, b)| LinearEquation::new(n, v, *b)).collect();
    DisjunctiveForm::new(k, sorts, eqs).expect("valid sorts").materialize()
}

/// Equality-disjunction plus constant literals over `pairs` sorts and
/// `(sort, constant)` literals, variables `u_1 v_1 ... u_m v_m z_1 ...`.
fn eq_const(k: usize, pairs: &[u8], lits: &[(u8, bool)]) -> Relation {
    let mut sorts = Vec::new();
    let mut clauses: Vec<(Vec<usize>, bool)> = Vec::new();
    for &p in pairs {
        clauses.push((vec![sorts.len(), sorts.len() + 1], false));
        sorts.extend([p, p]);
    }
    for &(r, c) in lits {
        clauses.push((vec![sorts.len()], c));
        sorts.push(r);
    }
    let refs: Vec<(&[usize], bool)> = clauses.iter().map(|(v, b)| (v.as_slice(), *b)).collect();
    disj(k, &sorts, &refs)
}

/// `x^i = 0 or y^i = 1` followed by constant literals.
fn zero_one_const(k: usize, i: u8, lits: &[(u8, bool)]) -> Relation {
    let mut sorts = vec![i, i];
    let mut clauses: Vec<(Vec<usize>, bool)> = vec![(vec![0], false), (vec![1], true)];
    for &(r, c) in lits {
        clauses.push((vec![sorts.len()], c));
        sorts.push(r);
    }
    let refs: Vec<(&[usize], bool)> = clauses.iter().map(|(v, b)| (v.as_slice(), *b)).collect();
    disj(k, &sorts, &refs)
}

fn sum(k: usize, sorts: &[u8], b: bool) -> Relation {
    let all: Vec<usize> = (0..sorts.len()).collect();
    disj(k, sorts, &[(&all, b)])
}

fn sort_vectors(k: usize, n: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                (1..=k as u8).map(move |s| {
                    let mut w = v.clone();
                    w.push(s);
                    w
                })
            })
            .collect();
    }
    out
}

fn lits(k: usize, l: usize) -> Vec<Vec<(u8, bool)>> {
    let mut out = vec![Vec::new()];
    for _ in 0..l {
        out = out
            .into_iter()
            .flat_map(|v| {
                (1..=k as u8).flat_map(move |s| {
                    let v = v.clone();
                    [false, true].into_iter().map(move |c| {
                        let mut w = v.clone();
                        w.push((s, c));
                        w
                    })
                })
            })
            .collect();
    }
    out
}

/// Parity sums `x_1 + ... + x_t = b` with per-sort counts and total at
/// least 3, against their listed generators.
pub fn parity_sum_instances(k: usize, max_arity: usize) -> Vec<Instance> {
    let mut out = Vec::new();
    let mut counts = vec![0usize; k];
    loop {
        let total: usize = counts.iter().sum();
        if (3..=max_arity).contains(&total) {
            for b in [false, true] {
                let sorts: Vec<u8> = counts.iter().enumerate().flat_map(|(s, &c)| vec![s as u8 + 1; c]).collect();
                let used: Vec<u8> = (1..=k as u8).filter(|&s| counts[s as usize - 1] > 0).collect();
                let odd: Vec<u8> = (1..=k as u8).filter(|&s| counts[s as usize - 1] % 2 == 1).collect();
                let mut rhs = Vec::new();
                for &i in &used {
                    for &j in &used {
                        if i <= j {
                            rhs.push(sum(k, &[i, i, j, j], false));
                        }
                    }
                }
                if odd.is_empty() {
                    if b {
                        rhs.extend(used.iter().map(|&i| sum(k, &[i, i], true)));
                    }
                } else {
                    rhs.push(sum(k, &odd, b));
                }
                out.push(Instance {
                    family: "parity sum",
                    params: format!("counts={counts:?} b={}", b as u8),
                    mode: Mode::Mutual,
                    lhs: vec![sum(k, &sorts, b)],
                    rhs,
                });
            }
        }
        let mut p = 0;
        while p < k {
            counts[p] += 1;
            if counts.iter().sum::<usize>() <= max_arity {
                break;
            }
            counts[p] = 0;
            p += 1;
        }
        if p == k {
            break;
        }
    }
    out
}

/// Splitting the first constant literal off an equality disjunction.
pub fn split_constant_instances(k: usize, max_arity: usize) -> Vec<Instance> {
    let mut out = Vec::new();
    for m in 1..=max_arity / 2 {
        for l in 1..=max_arity - 2 * m {
            for pairs in sort_vectors(k, m) {
                for ls in lits(k, l) {
                    let lhs = eq_const(k, &pairs, &ls);
                    let rest = eq_const(k, &pairs, &ls[1..]);
                    let head = eq_const(k, &pairs[..1], &ls[..1]);
                    out.push(Instance {
                        family: "split constant literal",
                        params: format!("pairs={pairs:?} literals={ls:?}"),
                        mode: Mode::Mutual,
                        lhs: vec![lhs],
                        rhs: vec![rest, head],
                    });
                }
            }
        }
    }
    out
}

/// Splitting an equality disjunction into two-literal ones, and the
/// same-sort rewrite to a shared variable.
pub fn split_equality_instances(k: usize, max_arity: usize) -> Vec<Instance> {
    let mut out = Vec::new();
    for m in 2..=max_arity / 2 {
        for pairs in sort_vectors(k, m) {
            out.push(Instance {
                family: "split equality",
                params: format!("pairs={pairs:?}"),
                mode: Mode::Mutual,
                lhs: vec![eq_const(k, &pairs, &[])],
                rhs: vec![eq_const(k, &pairs[1..], &[]), eq_const(k, &pairs[..2], &[])],
            });
        }
    }
    if max_arity >= 4 {
        for i in 1..=k as u8 {
            out.push(Instance {
                family: "shared variable",
                params: format!("i={i}"),
                mode: Mode::Mutual,
                lhs: vec![eq_const(k, &[i, i], &[])],
                rhs: vec![disj(k, &[i, i, i], &[(&[0, 1], false), (&[1, 2], false)])],
            });
        }
    }
    out
}

/// Splitting the first constant literal off `x = 0 or y = 1 or ...`.
pub fn zero_one_split_instances(k: usize, max_arity: usize) -> Vec<Instance> {
    let mut out = Vec::new();
    for i in 1..=k as u8 {
        for l in 1..=max_arity.saturating_sub(2) {
            for ls in lits(k, l) {
                out.push(Instance {
                    family: "split zero-one literal",
                    params: format!("i={i} literals={ls:?}"),
                    mode: Mode::Mutual,
                    lhs: vec![zero_one_const(k, i, &ls)],
                    rhs: vec![zero_one_const(k, i, &ls[1..]), zero_one_const(k, i, &ls[..1])],
                });
            }
        }
    }
    out
}

/// `x = 0 or y = 1 or z = b` against `x = y or z = b` with `x = 0 or y = 1`.
pub fn zero_one_equality_instances(k: usize) -> Vec<Instance> {
    let mut out = Vec::new();
    for i in 1..=k as u8 {
        for j in 1..=k as u8 {
            for b in [false, true] {
                out.push(Instance {
                    family: "zero-one to equality",
                    params: format!("i={i} j={j} b={}", b as u8),
                    mode: Mode::Mutual,
                    lhs: vec![zero_one_const(k, i, &[(j, b)])],
                    rhs: vec![eq_const(k, &[i], &[(j, b)]), zero_one_const(k, i, &[])],
                });
            }
        }
    }
    out
}

/// Every key relation of arity at most `max_arity` over `k` sorts, one per
/// similarity class, dummy-free and not full.
pub fn key_representatives(k: usize, max_arity: usize) -> Vec<Relation> {
    let mut seen = hashbrown::HashSet::new();
    let mut out = Vec::new();
    for n in 1..=max_arity {
        for sorts in sort_vectors(k, n) {
            if sorts.windows(2).any(|w| w[0] > w[1]) {
                continue;
            }
            for bits in 0u64..(1u64 << (1usize << n)) {
                let t = crate::table::Table::from_fn(n, |i| (bits >> i) & 1 == 1);
                let r = Relation::from_table(k, &sorts, t).expect("valid");
                if r.is_full() || r.has_dummies() || !crate::gf2::is_key(&r) {
                    continue;
                }
                let c = r.canonical();
                if seen.insert(c.clone()) {
                    out.push(c);
                }
            }
        }
    }
    out
}

/// For each key relation: `sigma` lies in its relational clone, and it
/// generates the same quantified clone as `sigma` with the `lambda_i`.
pub fn decomposition_instances(k: usize, max_arity: usize) -> Result<Vec<Instance>> {
    let mut out = Vec::new();
    for rel in key_representatives(k, max_arity) {
        let r = rearrange(&rel)?;
        let d = decompose(&r)?;
        let rho = r.materialize();
        out.push(Instance {
            family: "sigma from rho",
            params: format!("{rel:?}"),
            mode: Mode::PpInto,
            lhs: vec![d.sigma.clone()],
            rhs: vec![rho.clone()],
        });
        let mut rhs = vec![d.sigma];
        rhs.extend(d.lambdas);
        out.push(Instance { family: "sigma and lambdas", params: format!("{rel:?}"), mode: Mode::Mutual, lhs: vec![rho], rhs });
    }
    Ok(out)
}

/// All instance families up to `max_arity`.
pub fn all_instances(k: usize, max_arity: usize) -> Result<Vec<Instance>> {
    let mut v = decomposition_instances(k, max_arity)?;
    v.extend(parity_sum_instances(k, max_arity));
    v.extend(split_constant_instances(k, max_arity));
    v.extend(split_equality_instances(k, max_arity));
    v.extend(zero_one_split_instances(k, max_arity));
    v.extend(zero_one_equality_instances(k));
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::Table;

    fn rel1(n: usize, bits: u64) -> Relation {
        Relation::from_table(1, &vec![1; n], Table::from_fn(n, |i| (bits >> i) & 1 == 1)).unwrap()
    }

    #[test]
    fn rearrange_examples() {
        // x=0 or y=1: two constant literals
        let r = rearrange(&rel1(2, 0b1011)).unwrap();
        assert_eq!((r.m(), r.n(), r.l()), (0, 0, 2));
        // x+y=1
        let r = rearrange(&rel1(2, 0b0110)).unwrap();
        assert_eq!((r.m(), r.n(), r.l()), (1, 1, 0));
        assert_eq!(r.rows(), &[(1, true)]);
        let empty = rearrange(&rel1(2, 0)).unwrap();
        assert_eq!((empty.m(), empty.n(), empty.l()), (0, 2, 0));
        assert!(rearrange(&rel1(2, 0b1000)).is_err());
        assert!(rearrange(&rel1(2, 0b1111)).unwrap().is_full());
    }

    #[test]
    fn rearrange_round_trip_arity_three() {
        for n in 0..=3 {
            for bits in 0u64..(1 << (1 << n)) {
                let rel = rel1(n, bits);
                if let Ok(r) = rearrange(&rel) {
                    assert!(r.materialize().is_similar(&rel).is_some(), "{rel:?}");
                    let mut inv = vec![0; n];
                    for (i, &v) in r.order().iter().enumerate() {
                        inv[v] = i;
                    }
                    let back = rel.permuted(&inv);
                    assert_eq!(back.table(), r.materialize().table());
                }
            }
        }
    }

    #[test]
    fn decomposition_example() {
        // x = y + 1 or z = 0 over (x, y, z)
        let rel = disj(1, &[1, 1, 1], &[(&[0, 1], true), (&[2], false)]);
        let r = rearrange(&rel).unwrap();
        let d = decompose(&r).unwrap();
        assert_eq!(d.sigma, eq_const(1, &[1], &[(1, false)]));
        assert_eq!(d.lambdas, vec![sum(1, &[1, 1], true)]);
    }

    #[test]
    fn small_instances_hold() {
        for inst in all_instances(1, 3).unwrap() {
            assert!(check_instance(&inst, 1, 6).unwrap(), "{} {}", inst.family, inst.params);
        }
    }

    #[test]
    fn wrong_identity_fails() {
        let inst = Instance {
            family: "bogus",
            params: String::new(),
            mode: Mode::Mutual,
            lhs: vec![zero_one_const(1, 1, &[])],
            rhs: vec![sum(1, &[1, 1], true)],
        };
        assert!(!check_instance(&inst, 1, 5).unwrap());
    }
}

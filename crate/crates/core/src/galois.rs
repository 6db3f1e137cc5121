//! k-operations and the bounded Pol/sPol/Inv operators.
//!
//! An m-ary k-operation is stored as k truth tables of length `2^m` packed
//! into `u64`s; input `(a_1, ..., a_m)` sits at index `sum a_i 2^(m-i)`.
//! Enumeration is guarded by a table-bit budget (`k * 2^m` bits).

use alloc::vec::Vec;
use core::fmt;
use hashbrown::{HashMap, HashSet};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::relation::Relation;
use crate::table::Table;

/// Largest operation arity representable (one `u64` per coordinate).
pub const MAX_OP_ARITY: usize = 6;

/// Default enumeration budget in table bits.
pub const DEFAULT_BUDGET: usize = 20;

#[inline]
fn table_mask(m: usize) -> u64 {
    if m >= 6 {
        u64::MAX
    } else {
        (1u64 << (1u32 << m)) - 1
    }
}

/// A k-tuple of m-ary Boolean functions.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KOperation {
    k: u8,
    arity: u8,
    tables: SmallVec<[u64; 2]>,
}

impl KOperation {
    pub fn new(k: usize, arity: usize, tables: &[u64]) -> Result<Self> {
        if k == 0 {
            return Err(Error::ZeroSorts);
        }
        if arity > MAX_OP_ARITY {
            return Err(Error::ArityTooLarge(arity));
        }
        if tables.len() != k {
            return Err(Error::KMismatch(k, tables.len()));
        }
        let mask = table_mask(arity);
        if tables.iter().any(|&t| t & !mask != 0) {
            return Err(Error::Invalid("table has bits beyond 2^arity".into()));
        }
        Ok(KOperation { k: k as u8, arity: arity as u8, tables: tables.iter().copied().collect() })
    }

    /// Projection onto argument `i` (0-based) in every coordinate.
    pub fn projection(k: usize, arity: usize, i: usize) -> Self {
        assert!(i < arity && arity <= MAX_OP_ARITY);
        let t = Table::from_fn(arity, |x| (x >> (arity - 1 - i)) & 1 == 1).words()[0];
        KOperation { k: k as u8, arity: arity as u8, tables: core::iter::repeat(t).take(k).collect() }
    }

    /// Every coordinate the constant `b`.
    pub fn constant(k: usize, arity: usize, b: bool) -> Self {
        let t = if b { table_mask(arity) } else { 0 };
        KOperation { k: k as u8, arity: arity as u8, tables: core::iter::repeat(t).take(k).collect() }
    }

    /// Builds coordinates from closures over the argument bits.
    pub fn from_fns(k: usize, arity: usize, mut f: impl FnMut(usize, &[bool]) -> bool) -> Self {
        let mut tables = SmallVec::new();
        for s in 0..k {
            let mut t = 0u64;
            for x in 0..(1usize << arity) {
                let args: SmallVec<[bool; 8]> = (0..arity).map(|i| (x >> (arity - 1 - i)) & 1 == 1).collect();
                if f(s, &args) {
                    t |= 1 << x;
                }
            }
            tables.push(t);
        }
        KOperation { k: k as u8, arity: arity as u8, tables }
    }

    pub fn k(&self) -> usize {
        self.k as usize
    }

    pub fn arity(&self) -> usize {
        self.arity as usize
    }

    /// Coordinate tables, coordinate `i` at index `i - 1`.
    pub fn tables(&self) -> &[u64] {
        &self.tables
    }

    /// Value of coordinate `sort` (1-based) on the input with index `x`.
    #[inline]
    pub fn value(&self, sort: usize, x: usize) -> bool {
        (self.tables[sort - 1] >> x) & 1 == 1
    }

    /// Every coordinate takes both values (arity-0 operations never do).
    pub fn is_surjective(&self) -> bool {
        let mask = table_mask(self.arity());
        self.arity > 0 && self.tables.iter().all(|&t| t != 0 && t != mask)
    }

    /// Whether coordinate `sort` (1-based) is the constant `b`.
    pub fn is_constant_at(&self, sort: usize, b: bool) -> bool {
        self.tables[sort - 1] == if b { table_mask(self.arity()) } else { 0 }
    }

    /// The tuple listing each coordinate table in input order, coordinate
    /// blocks one after another.
    pub fn encode(&self) -> Vec<bool> {
        let len = 1usize << self.arity;
        let mut out = Vec::with_capacity(self.k() * len);
        for &t in &self.tables {
            for x in 0..len {
                out.push((t >> x) & 1 == 1);
            }
        }
        out
    }

    pub fn decode(k: usize, arity: usize, bits: &[bool]) -> Result<Self> {
        let len = 1usize << arity;
        if bits.len() != k * len {
            return Err(Error::TupleLength { expected: k * len, got: bits.len() });
        }
        let tables: Vec<u64> = (0..k)
            .map(|s| bits[s * len..(s + 1) * len].iter().enumerate().fold(0u64, |t, (x, &b)| t | ((b as u64) << x)))
            .collect();
        KOperation::new(k, arity, &tables)
    }

    /// Inverse of packing coordinate `s` at offset `s * 2^m`.
    pub(crate) fn from_packed(k: usize, arity: usize, packed: u64) -> Self {
        let len = 1u32 << arity;
        let mask = table_mask(arity);
        let tables = (0..k).map(|s| (packed >> (s as u32 * len)) & mask).collect();
        KOperation { k: k as u8, arity: arity as u8, tables }
    }

    /// Same operation with `extra` dummy arguments appended.
    pub fn pad(&self, extra: usize) -> KOperation {
        let n = self.arity() + extra;
        assert!(n <= MAX_OP_ARITY);
        let tables = self
            .tables
            .iter()
            .map(|&t| {
                let mut out = 0u64;
                for x in 0..(1usize << n) {
                    if (t >> (x >> extra)) & 1 == 1 {
                        out |= 1 << x;
                    }
                }
                out
            })
            .collect();
        KOperation { k: self.k, arity: n as u8, tables }
    }

    /// True iff the last `arity - n` arguments are dummy.
    pub fn has_trailing_dummies(&self, n: usize) -> bool {
        let extra = self.arity() - n;
        self.tables.iter().all(|&t| {
            (0..(1usize << self.arity)).all(|x| ((t >> x) & 1) == ((t >> ((x >> extra) << extra)) & 1))
        })
    }

    /// Restriction to the first `n` arguments (the others set to 0).
    pub fn truncate(&self, n: usize) -> KOperation {
        let extra = self.arity() - n;
        let tables = self
            .tables
            .iter()
            .map(|&t| (0..(1usize << n)).fold(0u64, |acc, x| acc | (((t >> (x << extra)) & 1) << x)))
            .collect();
        KOperation { k: self.k, arity: n as u8, tables }
    }

    /// Drops coordinate `sort` (1-based), giving a (k-1)-operation.
    pub fn drop_coordinate(&self, sort: usize) -> KOperation {
        let mut tables = self.tables.clone();
        tables.remove(sort - 1);
        KOperation { k: self.k - 1, arity: self.arity, tables }
    }
}

impl fmt::Debug for KOperation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "op[{}](", self.arity)?;
        let len = 1usize << self.arity;
        for (s, &t) in self.tables.iter().enumerate() {
            if s > 0 {
                write!(f, ",")?;
            }
            for x in 0..len {
                write!(f, "{}", (t >> x) & 1)?;
            }
        }
        write!(f, ")")
    }
}

/// `h^(i)(x) = f^(i)(g_1^(i)(x), ..., g_m^(i)(x))`.
pub fn compose_ops(f: &KOperation, gs: &[KOperation]) -> Result<KOperation> {
    if gs.len() != f.arity() {
        return Err(Error::ArityMismatch(f.arity(), gs.len()));
    }
    let n = gs.first().map_or(0, |g| g.arity());
    for g in gs {
        if g.k != f.k {
            return Err(Error::KMismatch(f.k(), g.k()));
        }
        if g.arity() != n {
            return Err(Error::ArityMismatch(n, g.arity()));
        }
    }
    let m = f.arity();
    let tables = (0..f.k())
        .map(|s| {
            let mut t = 0u64;
            for x in 0..(1usize << n) {
                let mut y = 0usize;
                for g in gs {
                    y = (y << 1) | ((g.tables[s] >> x) & 1) as usize;
                }
                debug_assert!(y < (1 << m));
                t |= ((f.tables[s] >> y) & 1) << x;
            }
            t
        })
        .collect();
    Ok(KOperation { k: f.k, arity: n as u8, tables })
}

/// Calls `f` with every list of `m` tuple indices of `rel` (rows of an
/// `arity x m` matrix whose columns are tuples); the argument is the row
/// patterns, one input index per variable. Stops when `f` returns true.
fn for_each_matrix(rel: &Relation, m: usize, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    let tuples: Vec<usize> = rel.table().ones().collect();
    let n = rel.arity();
    if tuples.is_empty() {
        return false;
    }
    let mut rows: SmallVec<[usize; 16]> = smallvec::smallvec![0; n];
    fn rec(
        tuples: &[usize],
        n: usize,
        m: usize,
        depth: usize,
        rows: &mut SmallVec<[usize; 16]>,
        f: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if depth == m {
            return f(rows);
        }
        for &t in tuples {
            let saved = rows.clone();
            for (j, r) in rows.iter_mut().enumerate() {
                *r = (*r << 1) | ((t >> (n - 1 - j)) & 1);
            }
            if rec(tuples, n, m, depth + 1, rows, f) {
                return true;
            }
            *rows = saved;
        }
        false
    }
    rec(&tuples, n, m, 0, &mut rows, f)
}

/// True iff `f` preserves `rel` (vacuous for the empty relation).
pub fn preserves(f: &KOperation, rel: &Relation) -> Result<bool> {
    if f.k() != rel.k() {
        return Err(Error::KMismatch(f.k(), rel.k()));
    }
    let n = rel.arity();
    let violated = for_each_matrix(rel, f.arity(), &mut |rows| {
        let mut out = 0usize;
        for j in 0..n {
            out = (out << 1) | f.value(rel.sorts()[j] as usize, rows[j]) as usize;
        }
        !rel.contains_index(out)
    });
    Ok(!violated)
}

fn check_budget(k: usize, m: usize, budget: usize) -> Result<()> {
    let bits = k << m;
    if m > MAX_OP_ARITY || bits > budget || bits > 64 {
        return Err(Error::OverBudget { bits, budget });
    }
    Ok(())
}

type Scope = SmallVec<[u8; 8]>;

/// Constraint network over the `k * 2^m` table entries of an m-ary
/// k-operation: one scope per distinct matrix of tuples of each relation.
struct Network {
    vars: usize,
    len: usize,
    /// Prune operations with a constant coordinate.
    surjective: bool,
    constraints: Vec<(Scope, usize)>,
}

impl Network {
    fn new(k: usize, m: usize, surjective: bool) -> Self {
        let len = 1usize << m;
        Network { vars: k * len, len, surjective, constraints: Vec::new() }
    }

    fn scope(&self, rel: &Relation, rows: &[usize]) -> Scope {
        rows.iter().enumerate().map(|(j, &r)| ((rel.sorts()[j] as usize - 1) * self.len + r) as u8).collect()
    }

    /// Adds every matrix scope of `rel` (number `ri` in the relation list).
    fn add(&mut self, rel: &Relation, ri: usize, m: usize) {
        if rel.is_empty() || rel.arity() == 0 {
            return;
        }
        let mut seen: HashSet<Scope> = HashSet::new();
        let mut found = Vec::new();
        for_each_matrix(rel, m, &mut |rows| {
            let scope = self.scope(rel, rows);
            if seen.insert(scope.clone()) {
                found.push((scope, ri));
            }
            false
        });
        self.constraints.extend(found);
    }

    /// Backtracking with the variables of `first` assigned before the
    /// others; `leaf` sees each solution (packed in table order) and
    /// returns true to stop. Returns false when `steps` runs out.
    fn solve(&self, rels: &[&Relation], first: &[u8], steps: &mut usize, leaf: &mut dyn FnMut(u64) -> bool) -> bool {
        let mut order: Vec<usize> = Vec::with_capacity(self.vars);
        for &v in first {
            if !order.contains(&(v as usize)) {
                order.push(v as usize);
            }
        }
        // then whole tables of coordinates `first` does not touch, which
        // the constraints through `first` tend to pin down early
        let touched = |v: usize| first.iter().any(|&f| f as usize / self.len == v / self.len);
        order.extend((0..self.vars).filter(|&v| !touched(v)));
        order.extend((0..self.vars).filter(|&v| touched(v) && !first.contains(&(v as u8))));
        let mut pos = alloc::vec![0usize; self.vars];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let mut attached: Vec<Vec<(Scope, usize)>> = (0..self.vars).map(|_| Vec::new()).collect();
        for (scope, ri) in &self.constraints {
            let mapped: Scope = scope.iter().map(|&v| pos[v as usize] as u8).collect();
            let last = *mapped.iter().max().expect("arity >= 1") as usize;
            attached[last].push((mapped, *ri));
        }
        // per position: mask of a coordinate table completed there
        let mut done: Vec<u64> = alloc::vec![0; self.vars];
        if self.surjective {
            for block in 0..self.vars / self.len {
                let mask = (0..self.len).fold(0u64, |acc, x| acc | 1 << pos[block * self.len + x]);
                done[63 - mask.leading_zeros() as usize] = mask;
            }
        }
        struct Ctx<'a> {
            vars: usize,
            attached: &'a [Vec<(Scope, usize)>],
            done: &'a [u64],
            rels: &'a [&'a Relation],
        }
        fn rec(
            cx: &Ctx<'_>,
            v: usize,
            assign: &mut u64,
            steps: &mut usize,
            leaf: &mut dyn FnMut(u64) -> bool,
        ) -> Option<bool> {
            if v == cx.vars {
                return Some(leaf(*assign));
            }
            for bit in [0u64, 1] {
                if *steps == 0 {
                    return None;
                }
                *steps -= 1;
                *assign = (*assign & !(1 << v)) | (bit << v);
                let ok = cx.attached[v].iter().all(|(scope, ri)| {
                    let idx = scope.iter().fold(0usize, |acc, &s| (acc << 1) | ((*assign >> s) & 1) as usize);
                    cx.rels[*ri].contains_index(idx)
                });
                // a finished coordinate table must be non-constant
                let mask = cx.done[v];
                let ok = ok && (mask == 0 || (*assign & mask != 0 && *assign & mask != mask));
                if ok && rec(cx, v + 1, assign, steps, leaf)? {
                    return Some(true);
                }
            }
            *assign &= !(1 << v);
            Some(false)
        }
        let cx = Ctx { vars: self.vars, attached: &attached, done: &done, rels };
        let unmap = |a: u64| order.iter().enumerate().fold(0u64, |acc, (i, &v)| acc | ((a >> i) & 1) << v);
        let mut assign = 0u64;
        rec(&cx, 0, &mut assign, steps, &mut |a| leaf(unmap(a))).is_some()
    }
}

fn check_langs(langs: &[Relation], k: usize) -> Result<()> {
    match langs.iter().find(|r| r.k() != k) {
        Some(r) => Err(Error::KMismatch(k, r.k())),
        None => Ok(()),
    }
}

/// Polymorphisms of a fixed arity, found by backtracking over table bits.
/// Each variable of the search is one (coordinate, input) table entry.
pub fn pol_arity(langs: &[Relation], k: usize, m: usize, surjective_only: bool, budget: usize) -> Result<Vec<KOperation>> {
    check_budget(k, m, budget)?;
    if m == 0 {
        return Err(Error::ArityTooSmall(1));
    }
    check_langs(langs, k)?;
    let mut net = Network::new(k, m, surjective_only);
    for (ri, rel) in langs.iter().enumerate() {
        net.add(rel, ri, m);
    }
    let rels: Vec<&Relation> = langs.iter().collect();
    let mut out = Vec::new();
    let mut steps = usize::MAX;
    net.solve(&rels, &[], &mut steps, &mut |p| {
        out.push(KOperation::from_packed(k, m, p));
        false
    });
    Ok(out)
}

/// Calls `f` with the row patterns of every matrix whose `m` columns are
/// tuples of `rel` in nondecreasing order. Stops when `f` returns true.
fn for_each_sorted_matrix(rel: &Relation, m: usize, f: &mut dyn FnMut(&[usize]) -> bool) {
    let tuples: Vec<usize> = rel.table().ones().collect();
    let n = rel.arity();
    if tuples.is_empty() {
        return;
    }
    let mut pick = alloc::vec![0usize; m];
    loop {
        let rows: SmallVec<[usize; 16]> = (0..n)
            .map(|j| pick.iter().fold(0usize, |acc, &c| (acc << 1) | ((tuples[c] >> (n - 1 - j)) & 1)))
            .collect();
        if f(&rows) {
            return;
        }
        // next nondecreasing pick
        let mut i = m;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if pick[i] + 1 < tuples.len() {
                pick[i] += 1;
                let v = pick[i];
                for p in pick.iter_mut().skip(i + 1) {
                    *p = v;
                }
                break;
            }
        }
    }
}

/// A surjective m-ary polymorphism of `langs` that does not preserve
/// `target`, or `Ok(None)` when none exists or `steps` search nodes run
/// out first. Searches one matrix of target tuples at a time, columns in
/// nondecreasing order (permuting the arguments of a witness gives a
/// witness for the permuted matrix), with the matrix's output entries
/// assigned first. No table-bit budget applies: no solution set is kept.
pub fn breaking_polymorphism(
    langs: &[Relation],
    target: &Relation,
    k: usize,
    m: usize,
    mut steps: usize,
) -> Result<Option<KOperation>> {
    if m == 0 || m > MAX_OP_ARITY || (k << m) > 64 {
        return Err(Error::OverBudget { bits: k << m, budget: 64 });
    }
    check_langs(langs, k)?;
    if target.k() != k {
        return Err(Error::KMismatch(k, target.k()));
    }
    if target.arity() == 0 {
        return Ok(None);
    }
    let mut net = Network::new(k, m, true);
    for (ri, rel) in langs.iter().enumerate() {
        net.add(rel, ri, m);
    }
    let outside = target.complement();
    let mut rels: Vec<&Relation> = langs.iter().collect();
    rels.push(&outside);
    let mut tried: HashSet<Scope> = HashSet::new();
    let mut found = None;
    for_each_sorted_matrix(target, m, &mut |rows| {
        let scope = net.scope(target, rows);
        if !tried.insert(scope.clone()) {
            return false;
        }
        net.constraints.push((scope.clone(), langs.len()));
        let complete = net.solve(&rels, &scope, &mut steps, &mut |p| {
            found = Some(KOperation::from_packed(k, m, p));
            true
        });
        net.constraints.pop();
        found.is_some() || !complete
    });
    Ok(found)
}

/// Polymorphisms of every arity `1..=max_arity`.
pub fn pol_bounded(
    langs: &[Relation],
    k: usize,
    max_arity: usize,
    surjective_only: bool,
    budget: usize,
) -> Result<Vec<KOperation>> {
    let mut out = Vec::new();
    for m in 1..=max_arity {
        out.extend(pol_arity(langs, k, m, surjective_only, budget)?);
    }
    Ok(out)
}

/// Answers "does every operation of this set preserve the relation" for
/// one operation arity, using per-entry bitsets over the set.
#[derive(Debug, Clone)]
pub struct PreservationOracle {
    k: usize,
    m: usize,
    words: usize,
    /// `ones[v]`: bitset of operations whose table entry `v` is 1.
    ones: Vec<Vec<u64>>,
    valid: Vec<u64>,
    cache: HashMap<SmallVec<[u8; 8]>, u64>,
}

impl PreservationOracle {
    /// All operations must share `k` and `m`.
    pub fn new(k: usize, m: usize, ops: &[KOperation]) -> Self {
        let len = 1usize << m;
        let vars = k * len;
        let words = ops.len().div_ceil(64);
        let mut ones = alloc::vec![alloc::vec![0u64; words]; vars];
        for (i, op) in ops.iter().enumerate() {
            debug_assert_eq!((op.k(), op.arity()), (k, m));
            for s in 0..k {
                for x in 0..len {
                    if (op.tables[s] >> x) & 1 == 1 {
                        ones[s * len + x][i / 64] |= 1 << (i % 64);
                    }
                }
            }
        }
        let mut valid = alloc::vec![u64::MAX; words];
        if ops.len() % 64 != 0 {
            valid[words - 1] = (1u64 << (ops.len() % 64)) - 1;
        }
        if words == 0 {
            valid.clear();
        }
        PreservationOracle { k, m, words, ones, valid, cache: HashMap::new() }
    }

    pub fn arity(&self) -> usize {
        self.m
    }

    /// Output patterns reachable on a scope of table entries, as a bitmask
    /// over output indices (scope length at most 6).
    fn reachable(&mut self, scope: &[u8]) -> u64 {
        if let Some(&m) = self.cache.get(scope) {
            return m;
        }
        let n = scope.len();
        let mut mask = 0u64;
        let mut acc = alloc::vec![0u64; self.words];
        for out in 0..(1usize << n) {
            // skip outputs that give one entry two values
            let consistent = (0..n).all(|a| {
                (0..a).all(|b| scope[a] != scope[b] || ((out >> (n - 1 - a)) & 1) == ((out >> (n - 1 - b)) & 1))
            });
            if !consistent {
                continue;
            }
            acc.copy_from_slice(&self.valid);
            for (j, &v) in scope.iter().enumerate() {
                let want = (out >> (n - 1 - j)) & 1 == 1;
                for (a, &o) in acc.iter_mut().zip(&self.ones[v as usize]) {
                    *a &= if want { o } else { !o };
                }
            }
            if acc.iter().any(|&w| w != 0) {
                mask |= 1 << out;
            }
        }
        self.cache.insert(scope.into(), mask);
        mask
    }

    /// True iff every operation of the set preserves `rel`.
    pub fn preserves_all(&mut self, rel: &Relation) -> bool {
        if self.words == 0 || rel.arity() == 0 {
            return true;
        }
        let len = 1usize << self.m;
        let n = rel.arity();
        if n > 6 {
            return self.preserves_all_slow(rel);
        }
        let mut seen: HashSet<SmallVec<[u8; 8]>> = HashSet::new();
        let k = self.k;
        let violated = for_each_matrix(rel, self.m, &mut |rows| {
            let scope: SmallVec<[u8; 8]> =
                rows.iter().enumerate().map(|(j, &r)| ((rel.sorts()[j] as usize - 1) * len + r) as u8).collect();
            debug_assert!(rel.sorts().iter().all(|&s| (s as usize) <= k));
            if !seen.insert(scope.clone()) {
                return false;
            }
            let reach = self.reachable(&scope);
            reach & !rel.table().words()[0] != 0
        });
        !violated
    }

    fn preserves_all_slow(&mut self, rel: &Relation) -> bool {
        let len = 1usize << self.m;
        let n = rel.arity();
        let count = self.words * 64;
        let violated = for_each_matrix(rel, self.m, &mut |rows| {
            (0..count).any(|i| {
                if (self.valid[i / 64] >> (i % 64)) & 1 == 0 {
                    return false;
                }
                let mut out = 0usize;
                for j in 0..n {
                    let v = (rel.sorts()[j] as usize - 1) * len + rows[j];
                    out = (out << 1) | ((self.ones[v][i / 64] >> (i % 64)) & 1) as usize;
                }
                !rel.contains_index(out)
            })
        });
        !violated
    }
}

/// Groups operations by arity into oracles.
pub fn oracles_for(k: usize, ops: &[KOperation]) -> Vec<PreservationOracle> {
    let mut by_arity: Vec<Vec<KOperation>> = alloc::vec![Vec::new(); MAX_OP_ARITY + 1];
    for op in ops {
        by_arity[op.arity()].push(op.clone());
    }
    by_arity
        .iter()
        .enumerate()
        .filter(|(_, v)| !v.is_empty())
        .map(|(m, v)| PreservationOracle::new(k, m, v))
        .collect()
}

/// Calls `f` on every sort vector of length `n` over `1..=k`.
pub fn for_each_sort_vector(k: usize, n: usize, f: &mut dyn FnMut(&[u8])) {
    let mut v = alloc::vec![1u8; n];
    loop {
        f(&v);
        let mut i = n;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if (v[i] as usize) < k {
                v[i] += 1;
                for w in v.iter_mut().skip(i + 1) {
                    *w = 1;
                }
                break;
            }
        }
    }
}

/// All k-sorted relations of arity `0..=max_arity` preserved by every
/// operation in `ops`, ordered by arity, sort vector, then table.
pub fn inv_bounded(ops: &[KOperation], k: usize, max_arity: usize, budget: usize) -> Result<Vec<Relation>> {
    if (1usize << max_arity) > budget || max_arity > 5 {
        return Err(Error::OverBudget { bits: 1 << max_arity, budget });
    }
    for op in ops {
        if op.k() != k {
            return Err(Error::KMismatch(k, op.k()));
        }
    }
    let mut oracles = oracles_for(k, ops);
    let mut out = Vec::new();
    for n in 0..=max_arity {
        let count = 1u64 << (1u32 << n);
        for_each_sort_vector(k, n, &mut |sorts| {
            for bits in 0..count {
                let t = Table::from_fn(n, |i| (bits >> i) & 1 == 1);
                let rel = Relation::from_table(k, sorts, t).expect("valid sorts");
                if oracles.iter_mut().all(|o| o.preserves_all(&rel)) {
                    out.push(rel);
                }
            }
        });
    }
    Ok(out)
}

/// The relation whose tuples are the encodings of the n-ary members of
/// `ops`; variables come in k blocks of `2^n`, block `i` of sort `i`.
pub fn indicator(ops: &[KOperation], k: usize, n: usize, budget: usize) -> Result<Relation> {
    let arity = k << n;
    if arity > budget.max(crate::relation::MAX_ARITY).min(crate::relation::MAX_ARITY) {
        return Err(Error::OverBudget { bits: arity, budget });
    }
    let sorts: Vec<u8> = (0..arity).map(|v| (v >> n) as u8 + 1).collect();
    let tuples: Vec<Vec<bool>> = ops.iter().filter(|o| o.arity() == n && o.k() == k).map(|o| o.encode()).collect();
    Relation::new(k, &sorts, tuples)
}

/// Closure of the tuple set of `rel` under coordinatewise application of
/// the operations.
pub fn least_invariant_superset(rel: &Relation, ops: &[KOperation]) -> Result<Relation> {
    for op in ops {
        if op.k() != rel.k() {
            return Err(Error::KMismatch(rel.k(), op.k()));
        }
    }
    let n = rel.arity();
    let mut cur = rel.clone();
    loop {
        let mut next = cur.table().clone();
        for op in ops {
            for_each_matrix(&cur, op.arity(), &mut |rows| {
                let mut out = 0usize;
                for j in 0..n {
                    out = (out << 1) | op.value(cur.sorts()[j] as usize, rows[j]) as usize;
                }
                next.set(out, true);
                false
            });
        }
        if &next == cur.table() {
            return Ok(cur);
        }
        cur = cur.with_table(next);
    }
}

/// Which uniform constant operations to adjoin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Constants {
    pub zero: bool,
    pub one: bool,
}

impl Constants {
    pub const NONE: Constants = Constants { zero: false, one: false };
    pub const ZERO: Constants = Constants { zero: true, one: false };
    pub const ONE: Constants = Constants { zero: false, one: true };
    pub const BOTH: Constants = Constants { zero: true, one: true };
    pub const ALL: [Constants; 4] = [Constants::NONE, Constants::ZERO, Constants::ONE, Constants::BOTH];
}

/// True iff `rel` is preserved by the chosen constant operations: the
/// all-zero (all-one) tuple must be present unless `rel` is empty.
pub fn preserved_by_constants(rel: &Relation, which: Constants) -> bool {
    if rel.is_empty() {
        return true;
    }
    let n = rel.arity();
    (!which.zero || rel.contains_index(0)) && (!which.one || rel.contains_index((1usize << n) - 1))
}

/// Keeps the relations preserved by the chosen constants.
pub fn adjoin_constants(langs: &[Relation], which: Constants) -> Vec<Relation> {
    langs.iter().filter(|r| preserved_by_constants(r, which)).cloned().collect()
}

/// The n-ary part of a bounded clone: projections and generators closed
/// under composition, all of arity exactly `n`.
fn clone_part(gens: &[KOperation], k: usize, n: usize, limit: usize) -> Result<Vec<KOperation>> {
    let mut set: HashSet<KOperation> = HashSet::new();
    let mut list: Vec<KOperation> = Vec::new();
    for i in 0..n {
        let p = KOperation::projection(k, n, i);
        if set.insert(p.clone()) {
            list.push(p);
        }
    }
    // apply every generator to every tuple of members, until no change
    let mut frontier_start = 0;
    loop {
        let before = list.len();
        for g in gens {
            let a = g.arity();
            if a == 0 || a > n.max(1) && a > MAX_OP_ARITY {
                continue;
            }
            // index tuples with at least one entry from the new part
            let total = list.len();
            let mut idx = alloc::vec![0usize; a];
            loop {
                if idx.iter().any(|&i| i >= frontier_start) {
                    let args: Vec<KOperation> = idx.iter().map(|&i| list[i].clone()).collect();
                    let h = compose_ops(g, &args)?;
                    if set.insert(h.clone()) {
                        list.push(h);
                        if list.len() > limit {
                            return Err(Error::OverBudget { bits: list.len(), budget: limit });
                        }
                    }
                }
                let mut pos = a;
                loop {
                    if pos == 0 {
                        break;
                    }
                    pos -= 1;
                    idx[pos] += 1;
                    if idx[pos] < total {
                        break;
                    }
                    idx[pos] = 0;
                    if pos == 0 {
                        pos = usize::MAX;
                        break;
                    }
                }
                if pos == usize::MAX || (a == 0) {
                    break;
                }
            }
        }
        frontier_start = before;
        if list.len() == before {
            break;
        }
    }
    Ok(list)
}

/// Members of arity `1..=max_arity` of the clone generated by `gens`
/// (generators of larger arity are ignored), sorted.
pub fn clo_generate(gens: &[KOperation], k: usize, max_arity: usize, budget: usize) -> Result<Vec<KOperation>> {
    check_budget(k, max_arity, budget)?;
    for g in gens {
        if g.k() != k {
            return Err(Error::KMismatch(k, g.k()));
        }
    }
    let usable: Vec<KOperation> = gens.iter().filter(|g| g.arity() >= 1 && g.arity() <= max_arity).cloned().collect();
    let limit = 1usize << budget.min(24);
    let top = clone_part(&usable, k, max_arity, limit)?;
    let mut out = Vec::new();
    for n in 1..=max_arity {
        for op in &top {
            if op.has_trailing_dummies(n) {
                out.push(op.truncate(n));
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Surjective members only.
pub fn sclo_generate(gens: &[KOperation], k: usize, max_arity: usize, budget: usize) -> Result<Vec<KOperation>> {
    Ok(clo_generate(gens, k, max_arity, budget)?.into_iter().filter(|o| o.is_surjective()).collect())
}

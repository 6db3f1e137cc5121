//! Arity-capped closures under the elementary operations.
//!
//! The eo1-eo5 closure is stored as a set of canonical representatives
//! (dummy-free, sorted by sort, lexicographically least table). Dummies and
//! permutations are implicit. Conjunctions are never materialized: a
//! relation lies in the conjunction layer iff it equals the conjunction of
//! all embedded representatives that contain it.

use alloc::vec::Vec;
use hashbrown::HashSet;

use crate::canonical::{enumerate_cr, CanonicalDescriptor};
use crate::eo::{compose_unchecked, pair_to_front, to_front};
use crate::error::{Error, Result};
use crate::galois::{breaking_polymorphism, pol_arity, PreservationOracle, DEFAULT_BUDGET, MAX_OP_ARITY};
use crate::relation::Relation;
use crate::table::Table;

/// Largest working arity the engine accepts.
pub const MAX_WORKING_ARITY: usize = 10;

/// Search-node limit of one targeted polymorphism search.
pub const WITNESS_STEPS: usize = 1 << 24;

/// Default bound on the number of closure representatives.
pub const DEFAULT_MEMBER_BUDGET: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClosureConfig {
    /// Number of sorts.
    pub k: usize,
    /// Working arity cap W for every intermediate relation.
    pub arity_cap: usize,
    /// Arity cap M for the polymorphism side of membership.
    pub pol_cap: usize,
    /// Largest number of representatives a closure may hold.
    pub member_budget: usize,
    /// Table-bit budget for enumerating polymorphisms.
    pub op_budget: usize,
}

impl ClosureConfig {
    pub fn new(k: usize, arity_cap: usize, pol_cap: usize) -> Self {
        ClosureConfig { k, arity_cap, pol_cap, member_budget: DEFAULT_MEMBER_BUDGET, op_budget: DEFAULT_BUDGET }
    }

    pub fn with_op_budget(mut self, budget: usize) -> Self {
        self.op_budget = budget;
        self
    }

    pub fn with_member_budget(mut self, budget: usize) -> Self {
        self.member_budget = budget;
        self
    }

    /// Default cap: largest arity involved plus three.
    pub fn for_arity(k: usize, max_arity: usize) -> Self {
        ClosureConfig::new(k, max_arity + 3, 4)
    }

    fn check(&self, rels: &[Relation]) -> Result<()> {
        if self.k == 0 {
            return Err(Error::ZeroSorts);
        }
        if self.pol_cap == 0 {
            return Err(Error::Invalid("pol_cap must be at least 1".into()));
        }
        if self.arity_cap > MAX_WORKING_ARITY {
            return Err(Error::ArityTooLarge(self.arity_cap));
        }
        for r in rels {
            if r.k() != self.k {
                return Err(Error::KMismatch(self.k, r.k()));
            }
            if r.arity() > self.arity_cap {
                return Err(Error::CapTooSmall { cap: self.arity_cap, needed: r.arity() });
            }
        }
        Ok(())
    }
}

/// Which elementary operations a closure may use besides eo1-eo3.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ops {
    /// eo1-eo4 (primitive positive, no universal quantifier).
    UpToCompose,
    /// eo1-eo5.
    UpToForall,
}

/// Positions that are interchangeable by a transposition automorphism get
/// the same label; only one position per label needs to be tried.
fn position_classes(r: &Relation) -> Vec<usize> {
    let n = r.arity();
    let mut label: Vec<usize> = (0..n).collect();
    for p in 0..n {
        if label[p] != p {
            continue;
        }
        for q in p + 1..n {
            if label[q] == q && r.sorts()[p] == r.sorts()[q] {
                let mut t = r.table().clone();
                t.swap_vars(p, q);
                if &t == r.table() {
                    label[q] = p;
                }
            }
        }
    }
    label
}

fn representative_positions(r: &Relation) -> Vec<usize> {
    position_classes(r).iter().enumerate().filter(|(p, l)| p == *l).map(|(p, _)| p).collect()
}

/// The eo1-eo5 (or eo1-eo4) closure as canonical representatives.
#[derive(Debug, Clone)]
pub struct RelSet {
    k: usize,
    cap: usize,
    members: Vec<Relation>,
    index: HashSet<Relation>,
}

impl RelSet {
    fn new(k: usize, cap: usize) -> Self {
        RelSet { k, cap, members: Vec::new(), index: HashSet::new() }
    }

    fn insert(&mut self, r: &Relation) -> bool {
        let c = r.canonical();
        if self.index.contains(&c) {
            return false;
        }
        self.index.insert(c.clone());
        self.members.push(c);
        true
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn arity_cap(&self) -> usize {
        self.cap
    }

    /// Representatives in discovery order.
    pub fn members(&self) -> &[Relation] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// True iff `r` equals a member up to dummies and variable order.
    pub fn contains(&self, r: &Relation) -> bool {
        self.index.contains(&r.canonical())
    }

    /// Members sorted by (arity, sorts, table) for stable output.
    pub fn sorted(&self) -> Vec<Relation> {
        let mut v = self.members.clone();
        v.sort_by(|a, b| {
            a.arity()
                .cmp(&b.arity())
                .then_with(|| a.sorts().cmp(b.sorts()))
                .then_with(|| a.table().lex_cmp(b.table()))
        });
        v
    }

    /// Members satisfying `keep` (the seeds are kept regardless, as they
    /// belong to every closure).
    pub fn filtered(&self, mut keep: impl FnMut(&Relation) -> bool) -> RelSet {
        let mut out = RelSet::new(self.k, self.cap);
        for s in seeds(self.k) {
            out.insert(&s);
        }
        for m in &self.members {
            if keep(m) {
                out.insert(m);
            }
        }
        out
    }

    /// Least relation over `sorts` that is a conjunction of embedded members
    /// and contains `target` (the full relation when nothing qualifies).
    pub fn least_superset(&self, target: &Relation) -> Relation {
        let n = target.arity();
        let mut acc = Table::full(n);
        for s in &self.members {
            if s.arity() > n {
                continue;
            }
            for_each_embedding(s, target.sorts(), &mut |e| {
                if target.table().is_subset(e) {
                    acc = acc.and(e);
                }
            });
        }
        target.with_table(acc)
    }

    /// Membership in the conjunction closure of the set.
    pub fn conj_contains(&self, target: &Relation) -> bool {
        if target.arity() > self.cap {
            return false;
        }
        if self.contains(target) {
            return true;
        }
        self.least_superset(target) == *target
    }
}

/// Calls `f` with the table of `s` embedded into variables with `sorts` by
/// every injective sort-preserving placement.
pub(crate) fn for_each_embedding(s: &Relation, sorts: &[u8], f: &mut dyn FnMut(&Table)) {
    let m = s.arity();
    let n = sorts.len();
    let mut slots: Vec<usize> = Vec::with_capacity(m);
    let mut used = alloc::vec![false; n];
    fn rec(
        s: &Relation,
        sorts: &[u8],
        slots: &mut Vec<usize>,
        used: &mut [bool],
        f: &mut dyn FnMut(&Table),
    ) {
        let m = s.arity();
        let n = sorts.len();
        if slots.len() == m {
            let t = Table::from_fn(n, |x| {
                let mut y = 0usize;
                for (i, &pos) in slots.iter().enumerate() {
                    let bit = (x >> (n - 1 - pos)) & 1;
                    y |= bit << (m - 1 - i);
                }
                s.table().get(y)
            });
            f(&t);
            return;
        }
        let want = s.sorts()[slots.len()];
        for pos in 0..n {
            if !used[pos] && sorts[pos] == want {
                used[pos] = true;
                slots.push(pos);
                rec(s, sorts, slots, used, f);
                slots.pop();
                used[pos] = false;
            }
        }
    }
    rec(s, sorts, &mut slots, &mut used, f);
}

/// Seeds shared by every closure: the empty arity-0 relation and equality
/// on each sort.
pub fn seeds(k: usize) -> Vec<Relation> {
    let mut v = alloc::vec![Relation::bottom(k)];
    for s in 1..=k {
        v.push(Relation::equality(k, s as u8));
    }
    v
}

/// Least set containing `langs` and the seeds closed under the chosen
/// elementary operations with every intermediate arity at most the cap.
pub fn closure_with(langs: &[Relation], cfg: &ClosureConfig, ops: Ops) -> Result<RelSet> {
    cfg.check(langs)?;
    let cap = cfg.arity_cap;
    let mut set = RelSet::new(cfg.k, cap);
    for r in seeds(cfg.k).iter().chain(langs) {
        set.insert(r);
    }
    let mut positions: Vec<Vec<usize>> = Vec::new();
    let mut next = 0;
    while next < set.members.len() {
        let r = set.members[next].clone();
        let reps = representative_positions(&r);
        positions.push(reps.clone());
        let n = r.arity();
        // eo3: every pair of same-sort variables
        for p in 0..n {
            for q in p + 1..n {
                if r.sorts()[p] != r.sorts()[q] {
                    continue;
                }
                let t = pair_to_front(&r, p, q);
                let merged = Relation::from_parts(
                    r.k() as u8,
                    t.sorts()[1..].iter().copied().collect(),
                    t.table().identify_first_two(),
                );
                set.insert(&merged);
            }
        }
        // eo5
        if ops == Ops::UpToForall {
            for &p in &reps {
                let t = to_front(&r, p);
                let (lo, hi) = t.table().split_first();
                let q = Relation::from_parts(r.k() as u8, t.sorts()[1..].iter().copied().collect(), lo.and(&hi));
                set.insert(&q);
            }
        }
        // eo4 against every member discovered so far, itself included
        if n >= 1 {
            for j in 0..=next {
                let s = set.members[j].clone();
                let m = s.arity();
                if m == 0 || n + m - 2 > cap {
                    continue;
                }
                let s_pos = positions[j].clone();
                for &p in &reps {
                    let a = to_front(&r, p);
                    for &q in &s_pos {
                        if r.sorts()[p] != s.sorts()[q] {
                            continue;
                        }
                        let b = to_front(&s, q);
                        set.insert(&compose_unchecked(&a, &b));
                    }
                }
            }
        }
        if set.members.len() > cfg.member_budget {
            return Err(Error::ClosureTooLarge { budget: cfg.member_budget });
        }
        next += 1;
    }
    Ok(set)
}

/// Closure under eo1-eo5 within the working arity cap.
pub fn eo5_closure(langs: &[Relation], cfg: &ClosureConfig) -> Result<RelSet> {
    closure_with(langs, cfg, Ops::UpToForall)
}

/// Closure under eo1-eo4 within the working arity cap.
pub fn eo4_closure(langs: &[Relation], cfg: &ClosureConfig) -> Result<RelSet> {
    closure_with(langs, cfg, Ops::UpToCompose)
}

/// The conjunction layer over an eo closure.
#[derive(Debug, Clone)]
pub struct ConjClosure {
    base: RelSet,
}

impl ConjClosure {
    pub fn new(base: RelSet) -> Self {
        ConjClosure { base }
    }

    /// The underlying eo1-eo5 (or eo1-eo4) representatives.
    pub fn base(&self) -> &RelSet {
        &self.base
    }

    pub fn arity_cap(&self) -> usize {
        self.base.cap
    }

    /// True iff `r` is a conjunction of embedded representatives.
    pub fn contains(&self, r: &Relation) -> bool {
        r.k() == self.base.k && self.base.conj_contains(r)
    }

    /// Every member over the variable sorts `sorts`, as tables sorted by
    /// lexicographic order; fails past `limit` members.
    pub fn members_over(&self, sorts: &[u8], limit: usize) -> Result<Vec<Relation>> {
        let n = sorts.len();
        let mut gens: Vec<Table> = Vec::new();
        for s in &self.base.members {
            if s.arity() <= n {
                for_each_embedding(s, sorts, &mut |t| {
                    if !gens.contains(t) {
                        gens.push(t.clone());
                    }
                });
            }
        }
        let mut seen: HashSet<Table> = HashSet::new();
        let mut all: Vec<Table> = Vec::new();
        let full = Table::full(n);
        seen.insert(full.clone());
        all.push(full);
        let mut next = 0;
        while next < all.len() {
            let cur = all[next].clone();
            for g in &gens {
                let t = cur.and(g);
                if seen.insert(t.clone()) {
                    all.push(t);
                    if all.len() > limit {
                        return Err(Error::ClosureTooLarge { budget: limit });
                    }
                }
            }
            next += 1;
        }
        all.sort_by(|a, b| a.lex_cmp(b));
        Ok(all.into_iter().map(|t| Relation::from_table(self.base.k, sorts, t).expect("valid sorts")).collect())
    }

    /// Members of arity at most `max_arity` up to dummies and variable
    /// order (one representative each, dummy-free).
    pub fn representatives(&self, max_arity: usize, limit: usize) -> Result<Vec<Relation>> {
        let k = self.base.k;
        let mut out: Vec<Relation> = Vec::new();
        let mut seen: HashSet<Relation> = HashSet::new();
        for n in 0..=max_arity.min(self.base.cap) {
            let mut vectors: Vec<Vec<u8>> = Vec::new();
            crate::galois::for_each_sort_vector(k, n, &mut |s| {
                if s.windows(2).all(|w| w[0] <= w[1]) {
                    vectors.push(s.to_vec());
                }
            });
            for sorts in vectors {
                for r in self.members_over(&sorts, limit)? {
                    if r.has_dummies() {
                        continue;
                    }
                    let c = r.canonical();
                    if seen.insert(c.clone()) {
                        out.push(c);
                        if out.len() > limit {
                            return Err(Error::ClosureTooLarge { budget: limit });
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Quantified closure: conjunctions of the eo1-eo5 closure.
pub fn qpp_closure(langs: &[Relation], cfg: &ClosureConfig) -> Result<ConjClosure> {
    Ok(ConjClosure { base: eo5_closure(langs, cfg)? })
}

/// Primitive positive closure: conjunctions of the eo1-eo4 closure.
pub fn pp_closure(langs: &[Relation], cfg: &ClosureConfig) -> Result<ConjClosure> {
    Ok(ConjClosure { base: eo4_closure(langs, cfg)? })
}

/// Outcome of a bounded membership query.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    In,
    Out,
    Undecided,
}

/// Membership queries against one language, reusing closures and the
/// polymorphism oracle across targets.
///
/// `In` comes from the eo closure at the smallest working arity that
/// contains the target (closures only grow with the cap). `Out` comes from
/// a surjective polymorphism of arity at most the polymorphism cap that
/// breaks the target: enumerated up to the arity the table-bit budget
/// allows, then searched for one witness per arity above it.
pub struct Membership {
    langs: Vec<Relation>,
    cfg: ClosureConfig,
    oracle: Option<Option<PreservationOracle>>,
    closures: Vec<(usize, RelSet)>,
    exhausted: bool,
}

impl Membership {
    pub fn new(langs: &[Relation], cfg: &ClosureConfig) -> Result<Self> {
        cfg.check(langs)?;
        Ok(Membership { langs: langs.to_vec(), cfg: *cfg, oracle: None, closures: Vec::new(), exhausted: false })
    }

    /// Polymorphism arity actually used: the cap, lowered to fit the budget.
    pub fn effective_pol_arity(&self) -> usize {
        let mut m = self.cfg.pol_cap.min(MAX_OP_ARITY);
        while m > 0 && (self.cfg.k << m) > self.cfg.op_budget.min(64) {
            m -= 1;
        }
        m
    }

    fn oracle(&mut self) -> Result<Option<&mut PreservationOracle>> {
        if self.oracle.is_none() {
            let m = self.effective_pol_arity();
            let o = if m == 0 {
                None
            } else {
                let ops = pol_arity(&self.langs, self.cfg.k, m, true, self.cfg.op_budget)?;
                Some(PreservationOracle::new(self.cfg.k, m, &ops))
            };
            self.oracle = Some(o);
        }
        Ok(self.oracle.as_mut().expect("set above").as_mut())
    }

    /// True iff a bounded surjective polymorphism breaks `target`.
    pub fn refuted(&mut self, target: &Relation) -> Result<bool> {
        if target.k() != self.cfg.k {
            return Err(Error::KMismatch(self.cfg.k, target.k()));
        }
        Ok(match self.oracle()? {
            Some(o) => !o.preserves_all(target),
            None => false,
        })
    }

    /// True iff `target` is a conjunction of eo-reachable relations within
    /// the working cap.
    pub fn derived(&mut self, target: &Relation) -> Result<bool> {
        if target.arity() > self.cfg.arity_cap {
            return Err(Error::CapTooSmall { cap: self.cfg.arity_cap, needed: target.arity() });
        }
        let lang_max = self.langs.iter().map(|r| r.arity()).max().unwrap_or(0);
        let start = lang_max.max(target.arity()).max(1);
        for (w, set) in &self.closures {
            if *w >= start && set.conj_contains(target) {
                return Ok(true);
            }
        }
        let mut w = self.closures.last().map_or(start, |(w, _)| (*w + 1).max(start));
        while w <= self.cfg.arity_cap && !self.exhausted {
            let cfg = ClosureConfig { arity_cap: w, ..self.cfg };
            match eo5_closure(&self.langs, &cfg) {
                Ok(set) => {
                    let hit = set.conj_contains(target);
                    self.closures.push((w, set));
                    if hit {
                        return Ok(true);
                    }
                }
                Err(Error::ClosureTooLarge { .. }) => self.exhausted = true,
                Err(e) => return Err(e),
            }
            w += 1;
        }
        Ok(false)
    }

    /// True iff a surjective polymorphism of arity between the effective
    /// arity and the cap breaks `target`, found by a targeted search.
    pub fn refuted_above_budget(&mut self, target: &Relation) -> Result<bool> {
        let k = self.cfg.k;
        for m in self.effective_pol_arity() + 1..=self.cfg.pol_cap.min(MAX_OP_ARITY) {
            if (k << m) > 64 {
                break;
            }
            if breaking_polymorphism(&self.langs, target, k, m, WITNESS_STEPS)?.is_some() {
                return Ok(true);
            }
        }
        Ok(false)
    }

    pub fn decide(&mut self, target: &Relation) -> Result<Verdict> {
        if self.refuted(target)? {
            return Ok(Verdict::Out);
        }
        if self.derived(target)? {
            return Ok(Verdict::In);
        }
        if self.refuted_above_budget(target)? {
            return Ok(Verdict::Out);
        }
        Ok(Verdict::Undecided)
    }
}

/// Bounded membership of `target` in the quantified clone of `langs`.
pub fn member(target: &Relation, langs: &[Relation], cfg: &ClosureConfig) -> Result<Verdict> {
    if target.arity() > cfg.arity_cap {
        return Err(Error::CapTooSmall { cap: cfg.arity_cap, needed: target.arity() });
    }
    Membership::new(langs, cfg)?.decide(target)
}

/// Decides whether a set of canonical relations is exactly the canonical
/// part of the quantified clone it generates, within the working cap.
pub fn is_closed_canonical(set: &[CanonicalDescriptor], cfg: &ClosureConfig) -> Result<bool> {
    let k = cfg.k;
    let needed = set.iter().map(|d| d.arity()).max().unwrap_or(0).max(4).max(k);
    if cfg.arity_cap < needed {
        return Err(Error::CapTooSmall { cap: cfg.arity_cap, needed });
    }
    for d in set {
        if d.k() != k {
            return Err(Error::KMismatch(k, d.k()));
        }
    }
    let langs: Vec<Relation> = set.iter().map(|d| d.materialize()).collect();
    let closure = eo5_closure(&langs, cfg)?;
    for d in enumerate_cr(k, cfg.arity_cap) {
        let r = d.materialize();
        let listed = set.contains(&d);
        // reachable canonical relations must be exactly the listed ones
        if closure.contains(&r) != listed {
            return Ok(false);
        }
        // no unlisted finite-type relation may be a conjunction of supersets
        if !listed && !d.is_c7() && closure.conj_contains(&r) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::{CanonicalDescriptor, Shape};
    use alloc::vec;

    fn rel(tuples: &[&str]) -> Relation {
        let n = tuples.first().map_or(0, |t| t.len());
        let ts: Vec<Vec<bool>> = tuples.iter().map(|s| s.bytes().map(|b| b == b'1').collect()).collect();
        Relation::new(1, &vec![1; n], ts).unwrap()
    }

    fn cfg(w: usize) -> ClosureConfig {
        ClosureConfig::new(1, w, 4)
    }

    #[test]
    fn eo5_examples() {
        let x0 = rel(&["0"]);
        let set = eo5_closure(&[x0.clone()], &cfg(2)).unwrap();
        let mut expect = vec![Relation::bottom(1), Relation::top(1), Relation::equality(1, 1), x0];
        expect.sort_by(|a, b| a.arity().cmp(&b.arity()).then_with(|| a.table().lex_cmp(b.table())));
        assert_eq!(set.sorted(), expect);
        let empty = eo5_closure(&[], &cfg(2)).unwrap();
        assert_eq!(empty.len(), 3);
        let or00 = rel(&["00", "01", "10"]);
        assert!(eo5_closure(&[or00.clone()], &cfg(2)).unwrap().contains(&rel(&["0"])));
        // identification alone already turns x1=0 or x2=0 into x=0
        assert!(pp_closure(&[or00], &cfg(2)).unwrap().contains(&rel(&["0"])));
        let c1 = rel(&["00", "01", "11"]);
        assert!(eo5_closure(&[c1.clone()], &cfg(2)).unwrap().contains(&rel(&["0"])));
        assert!(!pp_closure(&[c1], &cfg(2)).unwrap().contains(&rel(&["0"])));
    }

    #[test]
    fn conjunction_layer() {
        let c1 = rel(&["00", "01", "11"]);
        let q = qpp_closure(&[c1], &cfg(2)).unwrap();
        assert!(q.contains(&rel(&["00", "11"])));
        let p = pp_closure(&[rel(&["0"])], &cfg(1)).unwrap();
        let unary = p.members_over(&[1], 100).unwrap();
        assert_eq!(unary, vec![Relation::empty(1, &[1]), rel(&["0"]), Relation::full(1, &[1])]);
        let xor = rel(&["01", "10"]);
        let q = qpp_closure(&[xor.clone()], &cfg(2)).unwrap();
        let reps = q.representatives(2, 100).unwrap();
        assert!(reps.contains(&xor));
        assert!(!reps.contains(&rel(&["0"])));
    }

    #[test]
    fn cap_errors() {
        let r = rel(&["000"]);
        assert!(matches!(eo5_closure(&[r], &cfg(2)), Err(Error::CapTooSmall { .. })));
        assert!(member(&rel(&["000"]), &[], &cfg(2)).is_err());
    }

    #[test]
    fn member_examples() {
        let even4 = Relation::from_table(1, &[1; 4], Table::from_fn(4, |i| i.count_ones() % 2 == 0)).unwrap();
        let eq = rel(&["00", "11"]);
        assert_eq!(member(&eq, &[even4], &cfg(5)).unwrap(), Verdict::In);
        let xor = rel(&["01", "10"]);
        assert_eq!(member(&rel(&["0"]), &[xor.clone()], &cfg(5)).unwrap(), Verdict::Out);
        assert_eq!(member(&xor, &[xor.clone()], &cfg(5)).unwrap(), Verdict::In);
    }

    #[test]
    fn member_budget_gives_undecided() {
        // 1-in-3 generates everything, but not within a tiny member budget
        let one_in_three = rel(&["001", "010", "100"]);
        let target = rel(&["011", "101", "110"]);
        let c = cfg(6).with_member_budget(5);
        assert_eq!(member(&target, &[one_in_three.clone()], &c).unwrap(), Verdict::Undecided);
        assert_eq!(member(&target, &[one_in_three], &cfg(6)).unwrap(), Verdict::In);
    }

    #[test]
    fn closedness_examples() {
        let x0 = CanonicalDescriptor::c7(&[1, 0]).unwrap();
        assert!(is_closed_canonical(&[x0], &cfg(4)).unwrap());
        let or00 = CanonicalDescriptor::c7(&[2, 0]).unwrap();
        assert!(!is_closed_canonical(&[or00], &cfg(4)).unwrap());
        assert!(is_closed_canonical(&[], &cfg(4)).unwrap());
        let c4 = CanonicalDescriptor::new(1, Shape::C4 { i: 1 }).unwrap();
        assert!(is_closed_canonical(&[c4], &cfg(4)).unwrap());
        assert!(is_closed_canonical(&[], &cfg(3)).is_err());
    }
}

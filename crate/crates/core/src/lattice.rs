//! Lattices of closed sets: fingerprints, the truncated lattice of 1-sorted
//! quantified relational clones, its refinement by constants, the ν map on
//! bounded operation clones, and Hasse diagrams.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write;

use crate::canonical::{enumerate_cr, mu, CanonicalDescriptor, Downset};
use crate::closure::{eo5_closure, is_closed_canonical, ClosureConfig, ConjClosure, Membership, RelSet, Verdict};
use crate::error::{Error, Result};
use crate::galois::{compose_ops, preserved_by_constants, Constants, KOperation};
use crate::relation::Relation;
use crate::table::Table;

/// Canonical content of a closed set: its finite-type part and the downset
/// spanned by the (c7) part.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Fingerprint {
    cr16: Vec<CanonicalDescriptor>,
    downset: Downset,
}

impl Fingerprint {
    /// Sorts and deduplicates `cr16`. `(c7)` entries are rejected.
    pub fn new(cr16: impl IntoIterator<Item = CanonicalDescriptor>, downset: Downset) -> Result<Self> {
        let set: BTreeSet<CanonicalDescriptor> = cr16.into_iter().collect();
        if set.iter().any(|d| d.is_c7()) {
            return Err(Error::Invalid("(c7) relations belong to the downset".into()));
        }
        Ok(Fingerprint { cr16: set.into_iter().collect(), downset })
    }

    /// The fingerprint of a set of canonical relations, (c7) points clamped
    /// to `trunc`.
    pub fn of(k: usize, set: &[CanonicalDescriptor], trunc: u32) -> Self {
        let mut downset = Downset::new(2 * k);
        let mut cr16 = BTreeSet::new();
        for d in set {
            match mu(d) {
                Ok(p) => {
                    let p: Vec<u32> = p.into_iter().map(|x| x.min(trunc)).collect();
                    downset.insert(&p).expect("dimension 2k");
                }
                Err(_) => {
                    cr16.insert(d.clone());
                }
            }
        }
        Fingerprint { cr16: cr16.into_iter().collect(), downset }
    }

    pub fn cr16(&self) -> &[CanonicalDescriptor] {
        &self.cr16
    }

    pub fn downset(&self) -> &Downset {
        &self.downset
    }

    pub fn leq(&self, other: &Fingerprint) -> bool {
        self.cr16.iter().all(|d| other.cr16.binary_search(d).is_ok()) && self.downset.leq(&other.downset)
    }
}

/// Fingerprint of a closed set of canonical relations.
pub fn fingerprint(set: &[CanonicalDescriptor], trunc: u32, cfg: &ClosureConfig) -> Result<Fingerprint> {
    if !is_closed_canonical(set, cfg)? {
        return Err(Error::NotClosed);
    }
    Ok(Fingerprint::of(cfg.k, set, trunc))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeNode {
    pub fingerprint: Fingerprint,
    /// Constants whose invariants were intersected in; `NONE` for the
    /// quantified clones themselves.
    pub constants: Constants,
    pub label: String,
    pub generators: Vec<CanonicalDescriptor>,
    /// The (c7) part reaches the truncation bound, so larger chains may be
    /// merged into this node.
    pub truncated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    k: usize,
    trunc: usize,
    nodes: Vec<LatticeNode>,
    edges: Vec<(usize, usize)>,
}

impl Lattice {
    /// Edges are `(lower, upper)` covers.
    pub fn new(k: usize, trunc: usize, nodes: Vec<LatticeNode>, edges: Vec<(usize, usize)>) -> Self {
        Lattice { k, trunc, nodes, edges }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn nodes(&self) -> &[LatticeNode] {
        &self.nodes
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes without a lower cover.
    pub fn minimal(&self) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&v| !self.edges.iter().any(|&(_, hi)| hi == v)).collect()
    }

    /// Nodes without an upper cover.
    pub fn maximal(&self) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&v| !self.edges.iter().any(|&(lo, _)| lo == v)).collect()
    }

    pub fn covers_of(&self, v: usize) -> Vec<usize> {
        self.edges.iter().filter(|e| e.0 == v).map(|e| e.1).collect()
    }

    /// Upper covers of the unique minimal node.
    pub fn atoms(&self) -> Vec<usize> {
        match self.minimal().as_slice() {
            [b] => self.covers_of(*b),
            _ => Vec::new(),
        }
    }

    pub fn find_label(&self, label: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.label == label)
    }

    /// Reflexive-transitive reachability along cover edges.
    pub fn below(&self, lo: usize, hi: usize) -> bool {
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![lo];
        while let Some(v) = stack.pop() {
            if v == hi {
                return true;
            }
            if core::mem::replace(&mut seen[v], true) {
                continue;
            }
            stack.extend(self.covers_of(v));
        }
        false
    }
}

/// Exact transitive reduction of a partial order given by `leq`.
pub fn hasse_by(n: usize, mut leq: impl FnMut(usize, usize) -> bool) -> Vec<(usize, usize)> {
    let mut lt = vec![vec![false; n]; n];
    for a in 0..n {
        for b in 0..n {
            lt[a][b] = a != b && leq(a, b);
        }
    }
    let mut edges = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if lt[a][b] && !(0..n).any(|c| lt[a][c] && lt[c][b]) {
                edges.push((a, b));
            }
        }
    }
    edges
}

/// Cover edges of the fingerprint order.
pub fn hasse(fps: &[Fingerprint]) -> Result<Vec<(usize, usize)>> {
    let distinct: BTreeSet<&Fingerprint> = fps.iter().collect();
    if distinct.len() != fps.len() {
        return Err(Error::DuplicateFingerprint);
    }
    Ok(hasse_by(fps.len(), |a, b| fps[a].leq(&fps[b])))
}

/// Canonical relations for `k = 1` with (c7) chains cut at `trunc`.
pub fn fig1_pool(trunc: usize) -> Vec<CanonicalDescriptor> {
    enumerate_cr(1, trunc.max(4)).into_iter().filter(|d| !d.is_c7() || d.arity() <= trunc).collect()
}

/// Which pool members lie in the quantified clone generated by `gens`.
pub fn pool_content(pool: &[CanonicalDescriptor], gens: &[usize], cfg: &ClosureConfig) -> Result<Vec<bool>> {
    let langs: Vec<Relation> = gens.iter().map(|&g| pool[g].materialize()).collect();
    let mut m = Membership::new(&langs, cfg)?;
    let mut out = Vec::with_capacity(pool.len());
    for (i, d) in pool.iter().enumerate() {
        let hit = gens.contains(&i)
            || match m.decide(&d.materialize())? {
                Verdict::In => true,
                Verdict::Out => false,
                Verdict::Undecided => {
                    return Err(Error::Undecided { arity_cap: cfg.arity_cap, pol_cap: cfg.pol_cap });
                }
            };
        out.push(hit);
    }
    Ok(out)
}

fn check_fig1(trunc: usize, cfg: &ClosureConfig) -> Result<()> {
    if trunc == 0 {
        return Err(Error::Invalid("truncation must be at least 1".into()));
    }
    if cfg.k != 1 {
        return Err(Error::KMismatch(1, cfg.k));
    }
    let needed = trunc.max(4);
    if cfg.arity_cap < needed {
        return Err(Error::CapTooSmall { cap: cfg.arity_cap, needed });
    }
    Ok(())
}

/// Generator sets evaluated in batches; `eval` maps each generator set to
/// its pool content and may run them in parallel.
pub type BatchEval<'a> = dyn FnMut(&[Vec<usize>]) -> Result<Vec<Vec<bool>>> + 'a;

/// [`build_fig1`] with a caller-supplied batch evaluator.
pub fn build_fig1_with(trunc: usize, cfg: &ClosureConfig, eval: &mut BatchEval<'_>) -> Result<Lattice> {
    check_fig1(trunc, cfg)?;
    let pool = fig1_pool(trunc);
    let mut evaluated: BTreeMap<Vec<usize>, Vec<bool>> = BTreeMap::new();
    let mut found: Vec<(Vec<usize>, Vec<bool>)> = Vec::new();
    let mut index: BTreeMap<Vec<bool>, usize> = BTreeMap::new();
    let mut frontier: Vec<Vec<usize>> = vec![Vec::new()];
    while !frontier.is_empty() {
        let batch: Vec<Vec<usize>> =
            frontier.into_iter().filter(|g| !evaluated.contains_key(g)).collect::<BTreeSet<_>>().into_iter().collect();
        let results = eval(&batch)?;
        let mut fresh = Vec::new();
        for (gens, content) in batch.into_iter().zip(results) {
            evaluated.insert(gens.clone(), content.clone());
            if !index.contains_key(&content) {
                index.insert(content.clone(), found.len());
                found.push((gens, content));
                fresh.push(found.len() - 1);
            }
        }
        let mut next = Vec::new();
        for v in fresh {
            let (gens, content) = &found[v];
            for p in 0..pool.len() {
                if !content[p] {
                    let mut g = gens.clone();
                    g.push(p);
                    g.sort_unstable();
                    next.push(g);
                }
            }
        }
        frontier = next;
    }

    let singles: Vec<Vec<bool>> = (0..pool.len()).map(|p| evaluated[&vec![p]].clone()).collect();
    let trunc32 = trunc as u32;
    let mut order: Vec<usize> = (0..found.len()).collect();
    let fp_of = |content: &[bool]| {
        let set: Vec<CanonicalDescriptor> =
            pool.iter().zip(content).filter(|(_, &c)| c).map(|(d, _)| d.clone()).collect();
        Fingerprint::of(1, &set, trunc32)
    };
    let fps: Vec<Fingerprint> = found.iter().map(|(_, c)| fp_of(c)).collect();
    let weight = |v: usize| found[v].1.iter().filter(|&&c| c).count();
    order.sort_by(|&a, &b| weight(a).cmp(&weight(b)).then_with(|| fps[a].cmp(&fps[b])));

    let contents: Vec<&Vec<bool>> = order.iter().map(|&v| &found[v].1).collect();
    let join = |gens: &[usize]| -> Option<usize> {
        let mut want = vec![false; pool.len()];
        for &g in gens {
            for (w, &s) in want.iter_mut().zip(&singles[g]) {
                *w |= s;
            }
        }
        (0..contents.len())
            .filter(|&v| contents[v].iter().zip(&want).all(|(&c, &w)| c || !w))
            .min_by_key(|&v| contents[v].iter().filter(|&&c| c).count())
    };

    let mut nodes = Vec::with_capacity(order.len());
    for (id, &v) in order.iter().enumerate() {
        let content = &found[v].1;
        let members: Vec<usize> = (0..pool.len()).filter(|&p| content[p]).collect();
        // keep one representative of each maximal class of the generation preorder
        let mut gens: Vec<usize> = members
            .iter()
            .copied()
            .filter(|&p| {
                !members.iter().any(|&q| q != p && singles[q][p] && (!singles[p][q] || q < p))
            })
            .collect();
        for i in (0..gens.len()).rev() {
            let mut rest = gens.clone();
            rest.remove(i);
            if join(&rest) == Some(id) {
                gens = rest;
            }
        }
        let generators: Vec<CanonicalDescriptor> = gens.iter().map(|&g| pool[g].clone()).collect();
        let fingerprint = fps[v].clone();
        let truncated = fingerprint.downset().maximal().iter().any(|p| p.iter().any(|&x| x == trunc32));
        nodes.push(LatticeNode { label: label_of(&generators), fingerprint, constants: Constants::NONE, generators, truncated });
    }
    let fps: Vec<Fingerprint> = nodes.iter().map(|n| n.fingerprint.clone()).collect();
    let edges = hasse(&fps)?;
    Ok(Lattice::new(1, trunc, nodes, edges))
}

fn label_of(generators: &[CanonicalDescriptor]) -> String {
    if generators.is_empty() {
        return String::from("x+y=0");
    }
    let parts: Vec<String> = generators.iter().map(|d| d.notation()).collect();
    parts.join(", ")
}

/// The lattice of 1-sorted quantified relational clones with (c7) chains
/// truncated at `trunc`.
pub fn build_fig1(trunc: usize, cfg: &ClosureConfig) -> Result<Lattice> {
    let pool = fig1_pool(trunc);
    build_fig1_with(trunc, cfg, &mut |batch| batch.iter().map(|g| pool_content(&pool, g, cfg)).collect())
}

/// Checks every cover edge by membership: the lower node's generators lie
/// in the clone of the upper node's, and not conversely.
pub fn verify_edges(lattice: &Lattice, cfg: &ClosureConfig) -> Result<bool> {
    let mut verdicts: BTreeMap<usize, Membership> = BTreeMap::new();
    let mut inside = |gens_of: usize, target: &CanonicalDescriptor| -> Result<bool> {
        if !verdicts.contains_key(&gens_of) {
            let langs: Vec<Relation> = lattice.nodes[gens_of].generators.iter().map(|d| d.materialize()).collect();
            verdicts.insert(gens_of, Membership::new(&langs, cfg)?);
        }
        let m = verdicts.get_mut(&gens_of).expect("inserted");
        match m.decide(&target.materialize())? {
            Verdict::In => Ok(true),
            Verdict::Out => Ok(false),
            Verdict::Undecided => Err(Error::Undecided { arity_cap: cfg.arity_cap, pol_cap: cfg.pol_cap }),
        }
    };
    for &(lo, hi) in lattice.edges() {
        for d in &lattice.nodes[lo].generators {
            if !inside(hi, d)? {
                return Ok(false);
            }
        }
        let mut strict = false;
        for d in &lattice.nodes[hi].generators {
            if !inside(lo, d)? {
                strict = true;
                break;
            }
        }
        if !strict {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Relational clones obtained from a quantified lattice by intersecting
/// with the invariants of none, one or both constants.
#[derive(Clone, Debug)]
pub struct PostLattice {
    lattice: Lattice,
    /// eo5 closure of each source node's generators.
    bases: Vec<RelSet>,
    /// Per node: source index and the filtered eo5 part.
    parts: Vec<(usize, RelSet)>,
}

fn constants_label(c: Constants) -> &'static str {
    match (c.zero, c.one) {
        (false, false) => "",
        (true, false) => " ∩ Inv{𝔬}",
        (false, true) => " ∩ Inv{𝔩}",
        (true, true) => " ∩ Inv{𝔬,𝔩}",
    }
}

fn union(a: Constants, b: Constants) -> Constants {
    Constants { zero: a.zero || b.zero, one: a.one || b.one }
}

fn conj_included(a: &RelSet, b: &RelSet) -> bool {
    a.members().iter().all(|r| b.conj_contains(r))
}

/// Splits the nodes of `fig1` by the constants they are invariant under.
pub fn derive_post(fig1: &Lattice, cfg: &ClosureConfig) -> Result<PostLattice> {
    if fig1.k() != 1 || cfg.k != 1 {
        return Err(Error::KMismatch(1, if fig1.k() != 1 { fig1.k() } else { cfg.k }));
    }
    let mut bases = Vec::with_capacity(fig1.len());
    for node in fig1.nodes() {
        let langs: Vec<Relation> = node.generators.iter().map(|d| d.materialize()).collect();
        bases.push(eo5_closure(&langs, cfg)?);
    }
    let mut nodes: Vec<LatticeNode> = Vec::new();
    let mut parts: Vec<(usize, RelSet)> = Vec::new();
    for (src, node) in fig1.nodes().iter().enumerate() {
        for c in Constants::ALL {
            let part = bases[src].filtered(|r| preserved_by_constants(r, c));
            if parts.iter().any(|(_, p)| conj_included(p, &part) && conj_included(&part, p)) {
                continue;
            }
            nodes.push(LatticeNode {
                fingerprint: node.fingerprint.clone(),
                constants: c,
                label: format!("{}{}", node.label, constants_label(c)),
                generators: node.generators.clone(),
                truncated: node.truncated,
            });
            parts.push((src, part));
        }
    }
    let edges = hasse_by(parts.len(), |a, b| conj_included(&parts[a].1, &parts[b].1));
    Ok(PostLattice { lattice: Lattice::new(1, fig1.trunc(), nodes, edges), bases, parts })
}

impl PostLattice {
    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn part(&self, v: usize) -> &RelSet {
        &self.parts[v].1
    }

    /// No two nodes describe the same relational clone.
    pub fn pairwise_distinct(&self) -> bool {
        let n = self.parts.len();
        (0..n).all(|a| {
            (a + 1..n).all(|b| !(conj_included(&self.parts[a].1, &self.parts[b].1) && conj_included(&self.parts[b].1, &self.parts[a].1)))
        })
    }

    /// Checks, for node `v` and every 1-sorted relation of arity at most
    /// `max_arity`, that intersecting the conjunction closure with the
    /// constant invariants agrees with the conjunction closure of the
    /// filtered eo5 part.
    pub fn claim_holds(&self, v: usize, max_arity: usize) -> bool {
        let (src, part) = &self.parts[v];
        let c = self.lattice.nodes()[v].constants;
        let full = ConjClosure::new(self.bases[*src].clone());
        let filtered = ConjClosure::new(part.clone());
        if !part.members().iter().all(|r| preserved_by_constants(r, c)) {
            return false;
        }
        for n in 0..=max_arity.min(4) {
            let sorts = vec![1u8; n];
            for bits in 0u64..(1u64 << (1usize << n)) {
                let r = Relation::from_table(1, &sorts, Table::from_fn(n, |i| (bits >> i) & 1 == 1)).expect("valid");
                let lhs = full.contains(&r) && preserved_by_constants(&r, c);
                if lhs != filtered.contains(&r) {
                    return false;
                }
            }
        }
        true
    }

    /// Intersecting any node again with constant invariants lands on the
    /// node for the combined constants, and on itself for constants it
    /// already has.
    pub fn rederive_is_idempotent(&self) -> bool {
        for (v, (src, part)) in self.parts.iter().enumerate() {
            let have = self.lattice.nodes()[v].constants;
            for c in Constants::ALL {
                let again = part.filtered(|r| preserved_by_constants(r, c));
                let hit = self
                    .parts
                    .iter()
                    .position(|(_, p)| conj_included(p, &again) && conj_included(&again, p));
                let Some(w) = hit else { return false };
                let want = union(have, c);
                let direct = self.bases[*src].filtered(|r| preserved_by_constants(r, want));
                if !(conj_included(&self.parts[w].1, &direct) && conj_included(&direct, &self.parts[w].1)) {
                    return false;
                }
                if union(have, c) == have && w != v {
                    return false;
                }
            }
        }
        true
    }
}

/// Shape of one coordinate slot of the ν map.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SlotKind {
    Empty,
    /// The projected set had no projections; they were added.
    ProjectionsAdded,
    /// The projected set already contained the projections.
    HasProjections,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NuSlot {
    pub kind: SlotKind,
    /// `(k-1)`-operations, sorted.
    pub ops: Vec<KOperation>,
}

/// ν-image of a bounded k-clone: its surjective part and `2k` slots,
/// slot `2i + b` collecting members constant `b` at coordinate `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NuImage {
    pub surjective: Vec<KOperation>,
    pub slots: Vec<NuSlot>,
}

fn projections(k: usize, max_arity: usize) -> Vec<KOperation> {
    (1..=max_arity).flat_map(|n| (0..n).map(move |i| KOperation::projection(k, n, i))).collect()
}

/// Splits a bounded k-clone (all members of arity at most its largest
/// arity) into its surjective part and the projected constant slots.
pub fn nu_decompose(clone: &[KOperation], k: usize) -> Result<NuImage> {
    if k < 2 {
        return Err(Error::Invalid("the decomposition needs k >= 2".into()));
    }
    if let Some(f) = clone.iter().find(|f| f.k() != k) {
        return Err(Error::KMismatch(k, f.k()));
    }
    let max_arity = clone.iter().map(|f| f.arity()).max().unwrap_or(0);
    let mut surjective: Vec<KOperation> = clone.iter().filter(|f| f.is_surjective()).cloned().collect();
    surjective.sort();
    surjective.dedup();
    let mut proj = projections(k - 1, max_arity);
    proj.sort();
    let mut slots = Vec::with_capacity(2 * k);
    for i in 0..k {
        for b in [false, true] {
            let mut ops: Vec<KOperation> =
                clone.iter().filter(|f| f.is_constant_at(i + 1, b)).map(|f| f.drop_coordinate(i + 1)).collect();
            ops.sort();
            ops.dedup();
            let kind = if ops.is_empty() {
                SlotKind::Empty
            } else if ops.iter().any(|f| proj.binary_search(f).is_ok()) {
                SlotKind::HasProjections
            } else {
                ops.extend(proj.iter().cloned());
                ops.sort();
                SlotKind::ProjectionsAdded
            };
            slots.push(NuSlot { kind, ops });
        }
    }
    Ok(NuImage { surjective, slots })
}

impl NuSlot {
    /// Closed under composition among members of arity at most
    /// `max_arity`.
    pub fn is_closed(&self) -> bool {
        let set: BTreeSet<&KOperation> = self.ops.iter().collect();
        let by_arity = |n: usize| self.ops.iter().filter(move |f| f.arity() == n);
        let max = self.ops.iter().map(|f| f.arity()).max().unwrap_or(0);
        for f in &self.ops {
            let n = f.arity();
            for m in 1..=max {
                let inner: Vec<&KOperation> = by_arity(m).collect();
                if inner.is_empty() {
                    continue;
                }
                let mut idx = vec![0usize; n];
                loop {
                    let gs: Vec<KOperation> = idx.iter().map(|&i| inner[i].clone()).collect();
                    match compose_ops(f, &gs) {
                        Ok(h) if set.contains(&h) => {}
                        _ => return false,
                    }
                    let mut p = 0;
                    while p < n {
                        idx[p] += 1;
                        if idx[p] < inner.len() {
                            break;
                        }
                        idx[p] = 0;
                        p += 1;
                    }
                    if p == n {
                        break;
                    }
                }
            }
        }
        true
    }

    /// Either no projection or every projection up to the slot's largest
    /// arity.
    pub fn projections_all_or_none(&self, k: usize) -> bool {
        let max = self.ops.iter().map(|f| f.arity()).max().unwrap_or(0);
        let proj = projections(k, max);
        let present = proj.iter().filter(|p| self.ops.binary_search(p).is_ok()).count();
        present == 0 || present == proj.len()
    }
}

fn escape(label: &str) -> String {
    label.replace('\\', "\\\\").replace('"', "\\\"")
}

/// DOT digraph drawn bottom-up, one statement per node and per cover.
pub fn to_dot(lattice: &Lattice) -> String {
    let mut s = String::from("digraph lattice {\n  rankdir=BT;\n");
    for (v, n) in lattice.nodes().iter().enumerate() {
        let style = if n.truncated { ", style=dashed" } else { "" };
        let _ = writeln!(s, "  n{v} [label=\"{}\"{style}];", escape(&n.label));
    }
    for &(lo, hi) in lattice.edges() {
        let _ = writeln!(s, "  n{lo} -> n{hi};");
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::Shape;
    use crate::galois::clo_generate;

    fn ds(points: &[&[u32]]) -> Downset {
        Downset::from_points(2, points.iter().copied()).unwrap()
    }

    fn fp(points: &[&[u32]]) -> Fingerprint {
        Fingerprint::new([], ds(points)).unwrap()
    }

    #[test]
    fn fingerprint_examples() {
        let cfg = ClosureConfig::new(1, 4, 4);
        let x0 = CanonicalDescriptor::c7(&[1, 0]).unwrap();
        let f = fingerprint(&[x0], 4, &cfg).unwrap();
        assert!(f.cr16().is_empty());
        assert_eq!(f.downset().maximal(), &[vec![1, 0]]);
        let triv = fingerprint(&[], 4, &cfg).unwrap();
        assert!(triv.cr16().is_empty() && triv.downset().is_empty());
        let c4 = CanonicalDescriptor::new(1, Shape::C4 { i: 1 }).unwrap();
        let f = fingerprint(&[c4.clone()], 4, &cfg).unwrap();
        assert_eq!(f.cr16(), &[c4]);
        assert!(f.downset().is_empty());
        let or2 = CanonicalDescriptor::c7(&[2, 0]).unwrap();
        assert_eq!(fingerprint(&[or2], 4, &cfg), Err(Error::NotClosed));
    }

    #[test]
    fn hasse_examples() {
        let chain = [fp(&[]), fp(&[&[1, 0]]), fp(&[&[2, 0]])];
        assert_eq!(hasse(&chain).unwrap(), vec![(0, 1), (1, 2)]);
        let anti = [fp(&[&[1, 0]]), fp(&[&[0, 1]])];
        assert!(hasse(&anti).unwrap().is_empty());
        let diamond = [fp(&[]), fp(&[&[1, 0]]), fp(&[&[0, 1]]), fp(&[&[1, 0], &[0, 1]])];
        assert_eq!(hasse(&diamond).unwrap().len(), 4);
        assert_eq!(hasse(&[fp(&[]), fp(&[])]), Err(Error::DuplicateFingerprint));
    }

    #[test]
    fn dot_examples() {
        let empty = Lattice::new(1, 1, Vec::new(), Vec::new());
        assert_eq!(to_dot(&empty), "digraph lattice {\n  rankdir=BT;\n}\n");
        let node = LatticeNode {
            fingerprint: fp(&[]),
            constants: Constants::NONE,
            label: "x+y=0".into(),
            generators: Vec::new(),
            truncated: false,
        };
        let one = Lattice::new(1, 1, vec![node], Vec::new());
        assert_eq!(to_dot(&one), "digraph lattice {\n  rankdir=BT;\n  n0 [label=\"x+y=0\"];\n}\n");
    }

    #[test]
    fn fig1_at_one() {
        let cfg = ClosureConfig::new(1, 6, 4);
        let lat = build_fig1(1, &cfg).unwrap();
        assert_eq!(lat.minimal().len(), 1);
        assert_eq!(lat.maximal().len(), 1);
        assert_eq!(lat.nodes()[lat.minimal()[0]].label, "x+y=0");
        let mut atoms: Vec<&str> = lat.atoms().iter().map(|&a| lat.nodes()[a].label.as_str()).collect();
        atoms.sort();
        assert_eq!(atoms, ["x+y=1", "x+y=u+v", "x=0", "x=1"]);
        assert!(verify_edges(&lat, &cfg).unwrap());
    }

    #[test]
    fn post_of_small_lattice() {
        let cfg = ClosureConfig::new(1, 6, 4);
        let lat = build_fig1(1, &cfg).unwrap();
        let post = derive_post(&lat, &cfg).unwrap();
        let bottom = lat.minimal()[0];
        let top = lat.maximal()[0];
        let count = |src: usize| post.parts.iter().filter(|(s, _)| *s == src).count();
        // every part of the trivial clone is preserved by both constants
        assert_eq!(count(bottom), 1);
        assert_eq!(count(top), 4);
        assert!(post.pairwise_distinct());
        assert!(post.rederive_is_idempotent());
        for v in 0..post.lattice().len() {
            assert!(post.claim_holds(v, 2));
        }
    }

    #[test]
    fn nu_examples() {
        let proj = clo_generate(&[], 2, 2, 20).unwrap();
        let img = nu_decompose(&proj, 2).unwrap();
        assert_eq!(img.surjective.len(), proj.len());
        assert!(img.slots.iter().all(|s| s.kind == SlotKind::Empty));
        // sorts are 0-based here: coordinate 0 is the constant
        let zero_id = KOperation::from_fns(2, 1, |s, a| s == 1 && a[0]);
        let c = clo_generate(&[zero_id], 2, 2, 20).unwrap();
        let img = nu_decompose(&c, 2).unwrap();
        assert_eq!(img.slots[0].kind, SlotKind::HasProjections);
        for s in &img.slots {
            assert!(s.is_closed());
            assert!(s.projections_all_or_none(1));
        }
        assert!(nu_decompose(&proj[..1], 1).is_err());
    }
}

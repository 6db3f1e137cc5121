//! Canonical relations (c1)-(c7), their single-generator closures restricted
//! to key relations, the map into `N_0^(2k)` and downsets there.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::gf2::{affine_system_of, is_key, DisjunctiveForm, LinearEquation};
use crate::relation::{Relation, MAX_ARITY};

/// Parameters of one canonical shape. Sorts are 1-based.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Shape {
    /// `x^i = 0 or y^i = 1`
    C1 { i: u8 },
    /// `x^i = y^i or u^j = b`
    C2 { i: u8, j: u8, b: bool },
    /// `x^i = y^i or u^j = v^j`, `i < j`
    C3Cross { i: u8, j: u8 },
    /// `x^i = y^i or y^i = z^i`
    C3Chain { i: u8 },
    /// `x^i + y^i = 1`
    C4 { i: u8 },
    /// `x^i + y^i = u^j + v^j`, `i <= j`
    C5 { i: u8, j: u8 },
    /// `x^(s_1) + ... + x^(s_n) = b`, sorts strictly increasing, `n >= 2`
    C6 { sorts: SmallVec<[u8; 4]>, b: bool },
    /// Per sort `(m_i, n_i)`: `m_i` literals `x = 0` or `n_i` literals
    /// `x = 1` of sort `i`, all joined by disjunction.
    C7 { counts: SmallVec<[(u16, u16); 4]> },
}

/// A canonical relation for a fixed number of sorts.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalDescriptor {
    k: u8,
    shape: Shape,
}

impl CanonicalDescriptor {
    pub fn new(k: usize, shape: Shape) -> Result<Self> {
        if k == 0 {
            return Err(Error::ZeroSorts);
        }
        let sort_ok = |s: u8| s >= 1 && (s as usize) <= k;
        let bad = |s: u8| Error::SortOutOfRange { sort: s as usize, k };
        match &shape {
            Shape::C1 { i } | Shape::C3Chain { i } | Shape::C4 { i } => {
                if !sort_ok(*i) {
                    return Err(bad(*i));
                }
            }
            Shape::C2 { i, j, .. } | Shape::C5 { i, j } => {
                for s in [*i, *j] {
                    if !sort_ok(s) {
                        return Err(bad(s));
                    }
                }
                if matches!(shape, Shape::C5 { .. }) && i > j {
                    return Err(Error::Invalid("c5 sorts must satisfy i <= j".into()));
                }
            }
            Shape::C3Cross { i, j } => {
                for s in [*i, *j] {
                    if !sort_ok(s) {
                        return Err(bad(s));
                    }
                }
                if i >= j {
                    return Err(Error::Invalid("c3 cross-sort variant needs i < j".into()));
                }
            }
            Shape::C6 { sorts, .. } => {
                if sorts.len() < 2 {
                    return Err(Error::Invalid("c6 needs at least two sorts".into()));
                }
                for &s in sorts {
                    if !sort_ok(s) {
                        return Err(bad(s));
                    }
                }
                if sorts.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::Invalid("c6 sorts must be strictly increasing".into()));
                }
            }
            Shape::C7 { counts } => {
                if counts.len() != k {
                    return Err(Error::KMismatch(k, counts.len()));
                }
                if counts.iter().any(|&(m, n)| m > 0 && n > 0) {
                    return Err(Error::Invalid("c7 needs m_i * n_i = 0".into()));
                }
                let total: usize = counts.iter().map(|&(m, n)| (m + n) as usize).sum();
                if total == 0 {
                    return Err(Error::Invalid("c7 needs at least one literal".into()));
                }
                if total > MAX_ARITY {
                    return Err(Error::ArityTooLarge(total));
                }
            }
        }
        Ok(CanonicalDescriptor { k: k as u8, shape })
    }

    /// The (c7) descriptor with the given `(m_1, n_1, ..., m_k, n_k)`.
    pub fn c7(point: &[u32]) -> Result<Self> {
        if point.is_empty() || point.len() % 2 != 0 {
            return Err(Error::Invalid("point length must be 2k".into()));
        }
        let counts = point.chunks(2).map(|c| (c[0] as u16, c[1] as u16)).collect();
        CanonicalDescriptor::new(point.len() / 2, Shape::C7 { counts })
    }

    pub fn k(&self) -> usize {
        self.k as usize
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    /// Type number 1..=7.
    pub fn type_number(&self) -> u8 {
        match self.shape {
            Shape::C1 { .. } => 1,
            Shape::C2 { .. } => 2,
            Shape::C3Cross { .. } | Shape::C3Chain { .. } => 3,
            Shape::C4 { .. } => 4,
            Shape::C5 { .. } => 5,
            Shape::C6 { .. } => 6,
            Shape::C7 { .. } => 7,
        }
    }

    /// Variable sorts of the materialization, in variable order.
    pub fn sorts(&self) -> SmallVec<[u8; 8]> {
        match &self.shape {
            Shape::C1 { i } | Shape::C4 { i } => smallvec::smallvec![*i, *i],
            Shape::C2 { i, j, .. } => smallvec::smallvec![*i, *i, *j],
            Shape::C3Cross { i, j } | Shape::C5 { i, j } => smallvec::smallvec![*i, *i, *j, *j],
            Shape::C3Chain { i } => smallvec::smallvec![*i, *i, *i],
            Shape::C6 { sorts, .. } => sorts.iter().copied().collect(),
            Shape::C7 { counts } => {
                let mut v = SmallVec::new();
                for (s, &(m, n)) in counts.iter().enumerate() {
                    for _ in 0..(m + n) {
                        v.push(s as u8 + 1);
                    }
                }
                v
            }
        }
    }

    pub fn arity(&self) -> usize {
        self.sorts().len()
    }

    /// Clauses over the variables of [`CanonicalDescriptor::sorts`].
    pub fn clauses(&self) -> Vec<LinearEquation> {
        let n = self.arity();
        let eq = |vars: &[usize], rhs: bool| LinearEquation::new(n, vars, rhs);
        match &self.shape {
            Shape::C1 { .. } => alloc::vec![eq(&[0], false), eq(&[1], true)],
            Shape::C2 { b, .. } => alloc::vec![eq(&[0, 1], false), eq(&[2], *b)],
            Shape::C3Cross { .. } => alloc::vec![eq(&[0, 1], false), eq(&[2, 3], false)],
            Shape::C3Chain { .. } => alloc::vec![eq(&[0, 1], false), eq(&[1, 2], false)],
            Shape::C4 { .. } => alloc::vec![eq(&[0, 1], true)],
            Shape::C5 { .. } => alloc::vec![eq(&[0, 1, 2, 3], false)],
            Shape::C6 { b, .. } => {
                let all: Vec<usize> = (0..n).collect();
                alloc::vec![eq(&all, *b)]
            }
            Shape::C7 { counts } => {
                let mut v = Vec::new();
                let mut pos = 0;
                for &(m, c) in counts {
                    let bit = c > 0;
                    for _ in 0..(m + c) {
                        v.push(eq(&[pos], bit));
                        pos += 1;
                    }
                }
                v
            }
        }
    }

    pub fn form(&self) -> DisjunctiveForm {
        DisjunctiveForm::new(self.k(), &self.sorts(), self.clauses()).expect("descriptor is valid")
    }

    pub fn materialize(&self) -> Relation {
        self.form().materialize()
    }

    pub fn is_c7(&self) -> bool {
        matches!(self.shape, Shape::C7 { .. })
    }

    /// Formula notation, e.g. `x=0 ∨ y=1`. Sort superscripts are written
    /// as `^s` and omitted when `k = 1`.
    pub fn notation(&self) -> String {
        let var = |name: &str, s: u8| if self.k == 1 { name.to_string() } else { format!("{name}^{s}") };
        match &self.shape {
            Shape::C1 { i } => format!("{}=0 ∨ {}=1", var("x", *i), var("y", *i)),
            Shape::C2 { i, j, b } => format!("{}={} ∨ {}={}", var("x", *i), var("y", *i), var("u", *j), *b as u8),
            Shape::C3Cross { i, j } => format!("{}={} ∨ {}={}", var("x", *i), var("y", *i), var("u", *j), var("v", *j)),
            Shape::C3Chain { i } => format!("{}={} ∨ {}={}", var("x", *i), var("y", *i), var("y", *i), var("z", *i)),
            Shape::C4 { i } => format!("{}+{}=1", var("x", *i), var("y", *i)),
            Shape::C5 { i, j } => format!("{}+{}={}+{}", var("x", *i), var("y", *i), var("u", *j), var("v", *j)),
            Shape::C6 { sorts, b } => {
                let terms: Vec<String> = sorts.iter().enumerate().map(|(n, &s)| var(&format!("x{}", n + 1), s)).collect();
                format!("{}={}", terms.join("+"), *b as u8)
            }
            Shape::C7 { .. } => {
                let sorts = self.sorts();
                let clauses = self.clauses();
                if clauses.len() == 1 {
                    return format!("{}={}", var("x", sorts[0]), clauses[0].rhs as u8);
                }
                let lits: Vec<String> = clauses
                    .iter()
                    .enumerate()
                    .map(|(n, c)| format!("{}={}", var(&format!("x{}", n + 1), sorts[n]), c.rhs as u8))
                    .collect();
                lits.join(" ∨ ")
            }
        }
    }
}

impl fmt::Debug for CanonicalDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for CanonicalDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.shape {
            Shape::C1 { i } => write!(f, "c1(i={i})"),
            Shape::C2 { i, j, b } => write!(f, "c2(i={i},j={j},b={})", *b as u8),
            Shape::C3Cross { i, j } => write!(f, "c3(i={i},j={j})"),
            Shape::C3Chain { i } => write!(f, "c3chain(i={i})"),
            Shape::C4 { i } => write!(f, "c4(i={i})"),
            Shape::C5 { i, j } => write!(f, "c5(i={i},j={j})"),
            Shape::C6 { sorts, b } => {
                write!(f, "c6(s=")?;
                for (n, s) in sorts.iter().enumerate() {
                    write!(f, "{}{}", if n > 0 { "," } else { "" }, s)?;
                }
                write!(f, ";b={})", *b as u8)
            }
            Shape::C7 { counts } => {
                write!(f, "c7(")?;
                for (n, (m, c)) in counts.iter().enumerate() {
                    write!(f, "{}{},{}", if n > 0 { "," } else { "" }, m, c)?;
                }
                write!(f, ")")
            }
        }
    }
}

fn push_c7(k: usize, max: usize, out: &mut Vec<CanonicalDescriptor>) {
    fn rec(k: usize, left: usize, cur: &mut SmallVec<[(u16, u16); 4]>, out: &mut Vec<CanonicalDescriptor>) {
        if cur.len() == k {
            if cur.iter().any(|&(m, n)| m + n > 0) {
                out.push(CanonicalDescriptor { k: k as u8, shape: Shape::C7 { counts: cur.clone() } });
            }
            return;
        }
        cur.push((0, 0));
        rec(k, left, cur, out);
        cur.pop();
        for c in 1..=left {
            for bit in [false, true] {
                cur.push(if bit { (0, c as u16) } else { (c as u16, 0) });
                rec(k, left - c, cur, out);
                cur.pop();
            }
        }
    }
    let mut v = Vec::new();
    rec(k, max, &mut SmallVec::new(), &mut v);
    v.sort_by(|a, b| a.arity().cmp(&b.arity()).then_with(|| a.cmp(b)));
    out.extend(v);
}

/// Every canonical relation of arity at most `max_arity` exactly once,
/// ordered by type and then parameters.
pub fn enumerate_cr(k: usize, max_arity: usize) -> Vec<CanonicalDescriptor> {
    let mut out = Vec::new();
    let d = |shape| CanonicalDescriptor { k: k as u8, shape };
    let sorts = 1..=k as u8;
    if max_arity >= 2 {
        out.extend(sorts.clone().map(|i| d(Shape::C1 { i })));
    }
    if max_arity >= 3 {
        for i in sorts.clone() {
            for j in sorts.clone() {
                for b in [false, true] {
                    out.push(d(Shape::C2 { i, j, b }));
                }
            }
        }
    }
    if max_arity >= 4 {
        for i in sorts.clone() {
            for j in i + 1..=k as u8 {
                out.push(d(Shape::C3Cross { i, j }));
            }
        }
    }
    if max_arity >= 3 {
        out.extend(sorts.clone().map(|i| d(Shape::C3Chain { i })));
    }
    if max_arity >= 2 {
        out.extend(sorts.clone().map(|i| d(Shape::C4 { i })));
    }
    if max_arity >= 4 {
        for i in sorts.clone() {
            for j in i..=k as u8 {
                out.push(d(Shape::C5 { i, j }));
            }
        }
    }
    // c6: subsets of size >= 2, by size then lexicographically
    for size in 2..=max_arity.min(k) {
        let mut subsets: Vec<SmallVec<[u8; 4]>> = Vec::new();
        for mask in 0u32..(1 << k) {
            if mask.count_ones() as usize == size {
                subsets.push((0..k).filter(|s| (mask >> s) & 1 == 1).map(|s| s as u8 + 1).collect());
            }
        }
        subsets.sort();
        for s in subsets {
            for b in [false, true] {
                out.push(d(Shape::C6 { sorts: s.clone(), b }));
            }
        }
    }
    if max_arity >= 1 {
        push_c7(k, max_arity.min(MAX_ARITY), &mut out);
    }
    out
}

fn same_up_to_order(a: &Relation, b: &Relation) -> bool {
    a.arity() == b.arity() && a.canonical() == b.canonical()
}

fn sort_counts(k: usize, sorts: &[u8]) -> SmallVec<[usize; 4]> {
    let mut c: SmallVec<[usize; 4]> = smallvec::smallvec![0; k];
    for &s in sorts {
        c[s as usize - 1] += 1;
    }
    c
}

/// Canonical descriptors with the same arity and sort multiset as `rel`.
fn candidates(rel: &Relation) -> Vec<CanonicalDescriptor> {
    let k = rel.k();
    let n = rel.arity();
    let counts = sort_counts(k, rel.sorts());
    let present: SmallVec<[u8; 4]> = (0..k).filter(|&s| counts[s] > 0).map(|s| s as u8 + 1).collect();
    let d = |shape| CanonicalDescriptor { k: k as u8, shape };
    let mut out = Vec::new();
    match n {
        2 if present.len() == 1 => {
            out.push(d(Shape::C1 { i: present[0] }));
            out.push(d(Shape::C4 { i: present[0] }));
        }
        3 => {
            for &i in &present {
                for &j in &present {
                    let ok = if i == j { counts[i as usize - 1] == 3 } else { counts[i as usize - 1] == 2 };
                    if ok {
                        for b in [false, true] {
                            out.push(d(Shape::C2 { i, j, b }));
                        }
                    }
                }
            }
            if present.len() == 1 {
                out.push(d(Shape::C3Chain { i: present[0] }));
            }
        }
        4 => {
            if present.len() == 2 && counts[present[0] as usize - 1] == 2 {
                out.push(d(Shape::C3Cross { i: present[0], j: present[1] }));
                out.push(d(Shape::C5 { i: present[0], j: present[1] }));
            }
            if present.len() == 1 {
                out.push(d(Shape::C5 { i: present[0], j: present[0] }));
            }
        }
        _ => {}
    }
    if n >= 2 && present.len() == n {
        for b in [false, true] {
            out.push(d(Shape::C6 { sorts: present.clone(), b }));
        }
    }
    // c7: one bit per present sort
    let p = present.len();
    for bits in 0u32..(1 << p) {
        let mut c: SmallVec<[(u16, u16); 4]> = smallvec::smallvec![(0, 0); k];
        for (idx, &s) in present.iter().enumerate() {
            let cnt = counts[s as usize - 1] as u16;
            c[s as usize - 1] = if (bits >> idx) & 1 == 1 { (0, cnt) } else { (cnt, 0) };
        }
        if n >= 1 {
            out.push(d(Shape::C7 { counts: c }));
        }
    }
    out
}

/// The descriptor whose materialization is similar to `rel`, if any.
pub fn classify(rel: &Relation) -> Option<CanonicalDescriptor> {
    if rel.arity() == 0 || rel.has_dummies() || !is_key(rel) {
        return None;
    }
    let c = rel.canonical();
    candidates(rel).into_iter().find(|d| d.materialize().canonical() == c)
}

/// `(m_1, n_1, ..., m_k, n_k)` of a (c7) descriptor.
pub fn mu(d: &CanonicalDescriptor) -> Result<Vec<u32>> {
    match &d.shape {
        Shape::C7 { counts } => Ok(counts.iter().flat_map(|&(m, n)| [m as u32, n as u32]).collect()),
        _ => Err(Error::Invalid("mu is defined on (c7) relations only".into())),
    }
}

/// Product order on points.
pub fn point_leq(a: &[u32], b: &[u32]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x <= y)
}

/// A downset of `N_0^d` kept as its antichain of maximal points.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Downset {
    dim: usize,
    maximal: Vec<Vec<u32>>,
}

impl Downset {
    pub fn new(dim: usize) -> Self {
        Downset { dim, maximal: Vec::new() }
    }

    pub fn from_points<'a>(dim: usize, points: impl IntoIterator<Item = &'a [u32]>) -> Result<Self> {
        let mut d = Downset::new(dim);
        for p in points {
            d.insert(p)?;
        }
        Ok(d)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Maximal points, sorted.
    pub fn maximal(&self) -> &[Vec<u32>] {
        &self.maximal
    }

    pub fn is_empty(&self) -> bool {
        self.maximal.is_empty()
    }

    pub fn contains(&self, p: &[u32]) -> bool {
        self.maximal.iter().any(|m| point_leq(p, m))
    }

    /// Adds `p` and everything below it; returns whether the set grew.
    pub fn insert(&mut self, p: &[u32]) -> Result<bool> {
        if p.len() != self.dim {
            return Err(Error::ArityMismatch(self.dim, p.len()));
        }
        if self.contains(p) {
            return Ok(false);
        }
        self.maximal.retain(|m| !point_leq(m, p));
        let at = self.maximal.binary_search_by(|m| m.as_slice().cmp(p)).unwrap_or_else(|e| e);
        self.maximal.insert(at, p.to_vec());
        Ok(true)
    }

    pub fn leq(&self, other: &Downset) -> bool {
        self.maximal.iter().all(|m| other.contains(m))
    }

    /// Points whose coordinates are all at most `bound`.
    pub fn truncate(&self, bound: u32) -> Downset {
        let mut d = Downset::new(self.dim);
        for m in &self.maximal {
            let p: Vec<u32> = m.iter().map(|&x| x.min(bound)).collect();
            d.insert(&p).expect("same dimension");
        }
        d
    }
}

pub fn downset_insert(ds: &Downset, p: &[u32]) -> Result<Downset> {
    let mut d = ds.clone();
    d.insert(p)?;
    Ok(d)
}

pub fn downset_leq(a: &Downset, b: &Downset) -> bool {
    a.leq(b)
}

/// Membership in the key relations of the quantified clone generated by one
/// canonical relation, decided from its listed generating patterns.
#[derive(Clone, Debug)]
pub struct GeneratorClosure {
    d: CanonicalDescriptor,
}

pub fn single_generator_closure(d: &CanonicalDescriptor) -> GeneratorClosure {
    GeneratorClosure { d: d.clone() }
}

/// Rank over GF(2) of a list of vectors.
fn rank(vs: impl IntoIterator<Item = u64>) -> usize {
    let mut basis: [u64; 64] = [0; 64];
    let mut r = 0;
    for mut v in vs {
        while v != 0 {
            let lead = 63 - v.leading_zeros() as usize;
            if basis[lead] == 0 {
                basis[lead] = v;
                r += 1;
                break;
            }
            v ^= basis[lead];
        }
    }
    r
}

fn sort_mask(sorts: &[u8], s: u8) -> u64 {
    sorts.iter().enumerate().filter(|(_, &t)| t == s).fold(0, |acc, (p, _)| acc | (1 << p))
}

fn disj(k: usize, sorts: &[u8], clauses: &[(&[usize], bool)]) -> Relation {
    let n = sorts.len();
    let cl = clauses.iter().map(|(v, b)| LinearEquation::new(n, v, *b)).collect();
    DisjunctiveForm::new(k, sorts, cl).expect("valid pattern").materialize()
}

impl GeneratorClosure {
    pub fn descriptor(&self) -> &CanonicalDescriptor {
        &self.d
    }

    pub fn contains_form(&self, f: &DisjunctiveForm) -> bool {
        self.contains(&f.materialize())
    }

    /// True iff `q` is a key relation of the clone generated by the
    /// descriptor (trivial relations included).
    pub fn contains(&self, q: &Relation) -> bool {
        let k = self.d.k();
        if q.k() != k || !is_key(q) {
            return false;
        }
        let (q, _) = q.drop_dummies();
        let n = q.arity();
        if n == 0 {
            return true;
        }
        let sorts: SmallVec<[u8; 8]> = q.sorts().iter().copied().collect();
        if n == 2 && sorts[0] == sorts[1] && q.table().count_ones() == 2 && q.contains_index(0) && q.contains_index(3) {
            return true;
        }
        let counts = sort_counts(k, &sorts);
        let only = |allowed: &[u8]| (1..=k as u8).all(|s| allowed.contains(&s) || counts[s as usize - 1] == 0);
        // the complement's affine system: its row space and right-hand sides
        let sys = affine_system_of(&q.table().not()).expect("key relation");
        let rows: Vec<u64> = sys.rows.iter().map(|r| r.coeffs).collect();
        let single_sum = || -> Option<bool> {
            // q is one equation over all of its variables; returns the rhs
            let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
            if sys.rows.len() == 1 && sys.rows[0].coeffs == all {
                Some(!sys.rows[0].rhs)
            } else {
                None
            }
        };
        let same = |r: &Relation| same_up_to_order(&q, r);
        match self.d.shape.clone() {
            Shape::C1 { .. } | Shape::C4 { .. } => same(&self.d.materialize()),
            Shape::C6 { ref sorts, .. } if sorts.len() == 2 => same(&self.d.materialize()),
            Shape::C2 { i, j, b } if i != j => {
                if !only(&[i, j]) {
                    return false;
                }
                let (ci, cj) = (counts[i as usize - 1], counts[j as usize - 1]);
                if cj == 0 {
                    return false;
                }
                let zs: Vec<(Vec<usize>, bool)> = (0..cj).map(|p| (alloc::vec![p], b)).collect();
                let clauses: Vec<(&[usize], bool)> = zs.iter().map(|(v, c)| (v.as_slice(), *c)).collect();
                if ci == 0 {
                    same(&disj(k, &alloc::vec![j; cj], &clauses))
                } else if ci == 2 {
                    let mut s = alloc::vec![i, i];
                    s.extend(core::iter::repeat(j).take(cj));
                    let zs: Vec<(Vec<usize>, bool)> = (2..2 + cj).map(|p| (alloc::vec![p], b)).collect();
                    let mut cl: Vec<(&[usize], bool)> = alloc::vec![(&[0usize, 1][..], false)];
                    cl.extend(zs.iter().map(|(v, c)| (v.as_slice(), *c)));
                    same(&disj(k, &s, &cl))
                } else {
                    false
                }
            }
            Shape::C2 { i, b, .. } => {
                if !only(&[i]) {
                    return false;
                }
                let s = alloc::vec![i; n];
                let lits = |from: usize| -> Vec<(Vec<usize>, bool)> { (from..n).map(|p| (alloc::vec![p], b)).collect() };
                let mut patterns: Vec<Vec<(Vec<usize>, bool)>> = Vec::new();
                if n >= 3 {
                    let mut p = alloc::vec![(alloc::vec![0, 1], false)];
                    p.extend(lits(2));
                    patterns.push(p);
                }
                patterns.push(lits(0));
                let mut p = alloc::vec![(alloc::vec![0], !b)];
                p.extend(lits(1));
                patterns.push(p);
                patterns.iter().any(|p| {
                    let cl: Vec<(&[usize], bool)> = p.iter().map(|(v, c)| (v.as_slice(), *c)).collect();
                    same(&disj(k, &s, &cl))
                })
            }
            Shape::C3Cross { i, j } => {
                if !only(&[i, j]) {
                    return false;
                }
                let (mi, mj) = (sort_mask(&sorts, i), sort_mask(&sorts, j));
                let inside = rows.iter().all(|&r| {
                    (r & mi).count_ones() % 2 == 0 && (r & mj).count_ones() % 2 == 0 && r & !(mi | mj) == 0
                });
                inside && rank(rows.iter().map(|r| r & mi)) + rank(rows.iter().map(|r| r & mj)) == rows.len()
            }
            Shape::C3Chain { i } => only(&[i]) && rows.iter().all(|r| r.count_ones() % 2 == 0),
            Shape::C5 { i, j } => {
                let Some(rhs) = single_sum() else { return false };
                if rhs || !only(&[i, j]) {
                    return false;
                }
                let (ci, cj) = (counts[i as usize - 1], counts[j as usize - 1]);
                if i == j {
                    ci % 2 == 0 && ci >= 4
                } else {
                    ci % 2 == 0 && cj % 2 == 0 && ci >= 2 && cj >= 2
                }
            }
            Shape::C6 { sorts: ss, b } => {
                let Some(rhs) = single_sum() else { return false };
                if !only(&ss) {
                    return false;
                }
                let all_odd = ss.iter().all(|&s| counts[s as usize - 1] % 2 == 1);
                let all_even = ss.iter().all(|&s| counts[s as usize - 1] % 2 == 0);
                (all_odd && rhs == b) || (all_even && !rhs)
            }
            Shape::C7 { counts: dc } => {
                let mut c: SmallVec<[(u16, u16); 4]> = smallvec::smallvec![(0, 0); k];
                for s in 0..k {
                    let have = counts[s] as u16;
                    if have == 0 {
                        continue;
                    }
                    let (m, o) = dc[s];
                    if m + o < have {
                        return false;
                    }
                    c[s] = if o > 0 { (0, have) } else { (have, 0) };
                }
                let cand = CanonicalDescriptor { k: k as u8, shape: Shape::C7 { counts: c } };
                same(&cand.materialize())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relation::Relation;
    use crate::table::Table;
    use alloc::vec;

    fn rel1(tuples: &[&str]) -> Relation {
        let n = tuples.first().map_or(0, |t| t.len());
        let ts: Vec<Vec<bool>> = tuples.iter().map(|s| s.bytes().map(|b| b == b'1').collect()).collect();
        Relation::new(1, &vec![1; n], ts).unwrap()
    }

    fn all_relations(k: usize, n: usize) -> Vec<Relation> {
        let mut out = Vec::new();
        crate::galois::for_each_sort_vector(k, n, &mut |s| {
            if s.windows(2).any(|w| w[0] > w[1]) {
                return;
            }
            for bits in 0u64..(1 << (1 << n)) {
                out.push(Relation::from_table(k, s, Table::from_fn(n, |i| (bits >> i) & 1 == 1)).unwrap());
            }
        });
        out
    }

    #[test]
    fn classify_examples() {
        let d = classify(&rel1(&["00", "01", "11"])).unwrap();
        assert_eq!(d.shape(), &Shape::C1 { i: 1 });
        assert_eq!(classify(&rel1(&["01", "10"])).unwrap().shape(), &Shape::C4 { i: 1 });
        assert_eq!(classify(&rel1(&["00", "11"])), None);
        assert_eq!(mu(&classify(&rel1(&["0"])).unwrap()).unwrap(), vec![1, 0]);
    }

    #[test]
    fn mu_examples() {
        let d = CanonicalDescriptor::new(1, Shape::C7 { counts: smallvec::smallvec![(3, 0)] }).unwrap();
        assert_eq!(mu(&d).unwrap(), vec![3, 0]);
        let d = CanonicalDescriptor::c7(&[0, 1]).unwrap();
        assert_eq!(d.materialize(), rel1(&["1"]));
        let d = CanonicalDescriptor::c7(&[2, 0, 0, 1]).unwrap();
        assert_eq!(mu(&d).unwrap(), vec![2, 0, 0, 1]);
        assert!(mu(&CanonicalDescriptor::new(1, Shape::C4 { i: 1 }).unwrap()).is_err());
    }

    #[test]
    fn enumerate_small() {
        let e = enumerate_cr(1, 2);
        let types: Vec<u8> = e.iter().map(|d| d.type_number()).collect();
        assert!(types.contains(&1) && types.contains(&4) && !types.contains(&6));
        let pts: Vec<Vec<u32>> = e.iter().filter(|d| d.is_c7()).map(|d| mu(d).unwrap()).collect();
        assert_eq!(pts, vec![vec![0, 1], vec![1, 0], vec![0, 2], vec![2, 0]]);
        assert!(enumerate_cr(1, 6).iter().all(|d| !matches!(d.shape(), Shape::C3Cross { .. })));
        let e2 = enumerate_cr(2, 2);
        for b in [false, true] {
            assert!(e2.contains(&CanonicalDescriptor::new(2, Shape::C6 { sorts: smallvec::smallvec![1, 2], b }).unwrap()));
        }
    }

    #[test]
    fn enumeration_matches_brute_force_classification() {
        for (k, n) in [(1, 3), (2, 3)] {
            let mut from_classify: Vec<CanonicalDescriptor> = Vec::new();
            for r in (1..=n).flat_map(|a| all_relations(k, a)) {
                if let Some(d) = classify(&r) {
                    assert_eq!(d.materialize().canonical(), r.canonical());
                    if !from_classify.contains(&d) {
                        from_classify.push(d);
                    }
                }
            }
            let mut listed = enumerate_cr(k, n);
            listed.sort();
            from_classify.sort();
            assert_eq!(listed, from_classify, "k={k} n={n}");
        }
    }

    #[test]
    fn materializations_are_dummy_free_and_distinct() {
        let e = enumerate_cr(2, 4);
        let mut seen = Vec::new();
        for d in &e {
            let r = d.materialize();
            assert!(!r.has_dummies(), "{d}");
            assert!(is_key(&r));
            assert_eq!(classify(&r).as_ref(), Some(d));
            let c = r.canonical();
            assert!(!seen.contains(&c));
            seen.push(c);
        }
    }

    #[test]
    fn downset_examples() {
        let mut d = Downset::from_points(2, [&[2u32, 2][..]]).unwrap();
        assert!(!d.insert(&[1, 2]).unwrap());
        assert!(d.insert(&[3, 0]).unwrap());
        assert_eq!(d.maximal(), &[vec![2, 2], vec![3, 0]]);
        let d = Downset::from_points(2, [&[1u32, 2][..], &[2, 1]]).unwrap();
        let d = downset_insert(&d, &[2, 2]).unwrap();
        assert_eq!(d.maximal(), &[vec![2, 2]]);
        let a = Downset::from_points(2, [&[1u32, 0][..]]).unwrap();
        let b = Downset::from_points(2, [&[3u32, 0][..]]).unwrap();
        assert!(downset_leq(&a, &b));
        let a = Downset::from_points(2, [&[1u32, 2][..]]).unwrap();
        let b = Downset::from_points(2, [&[2u32, 1][..]]).unwrap();
        assert!(!downset_leq(&a, &b));
        assert!(downset_leq(&Downset::new(2), &b));
        assert!(Downset::new(2).insert(&[1]).is_err());
    }

    #[test]
    fn generator_closure_examples() {
        let c4 = single_generator_closure(&CanonicalDescriptor::new(1, Shape::C4 { i: 1 }).unwrap());
        assert!(c4.contains(&rel1(&["01", "10"])));
        assert!(!c4.contains(&rel1(&["0"])));
        assert!(c4.contains(&rel1(&["00", "11"])));
        let c5 = single_generator_closure(&CanonicalDescriptor::new(1, Shape::C5 { i: 1, j: 1 }).unwrap());
        let even4 = Relation::from_table(1, &[1; 4], Table::from_fn(4, |i| i.count_ones() % 2 == 0)).unwrap();
        assert!(c5.contains(&even4));
        let even2 = Relation::from_table(1, &[1; 2], Table::from_fn(2, |i| i.count_ones() % 2 == 0)).unwrap();
        assert!(c5.contains(&even2));
        let odd4 = Relation::from_table(1, &[1; 4], Table::from_fn(4, |i| i.count_ones() % 2 == 1)).unwrap();
        assert!(!c5.contains(&odd4));
        let c7 = single_generator_closure(&CanonicalDescriptor::c7(&[2, 0]).unwrap());
        assert!(c7.contains(&rel1(&["0"])));
        assert!(c7.contains(&rel1(&["00", "01", "10"])));
        assert!(!c7.contains(&rel1(&["1"])));
        let chain = single_generator_closure(&CanonicalDescriptor::new(1, Shape::C3Chain { i: 1 }).unwrap());
        assert!(chain.contains(&even4));
        assert!(chain.contains(&rel1(&["01", "10"])));
        assert!(!chain.contains(&rel1(&["0"])));
    }
}

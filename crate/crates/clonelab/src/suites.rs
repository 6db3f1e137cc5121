//! Verification suites behind `clonelab verify`. Each suite returns one
//! [`Check`] per property; a suite passes when all of its checks do.

use clonelab_core::canonical::{
    classify, enumerate_cr, mu, point_leq, single_generator_closure, CanonicalDescriptor, Downset,
};
use clonelab_core::closure::{qpp_closure, ClosureConfig, Membership, Verdict};
use clonelab_core::galois::{
    clo_generate, for_each_sort_vector, inv_bounded, pol_bounded, preserves, KOperation,
};
use clonelab_core::lattice::{derive_post, nu_decompose, verify_edges, Lattice, NuImage};
use clonelab_core::reduction::{all_instances, check_instance, rearrange};
use clonelab_core::{is_key, Relation, Result, Table};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use std::collections::{BTreeMap, HashSet};
use std::fmt;

/// Golden node count of the 1-sorted lattice truncated at 4.
pub const FIG1_NODES_AT_4: usize = 35;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), pass, detail: detail.into() }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}: {}", if self.pass { "PASS" } else { "FAIL" }, self.name, self.detail)
    }
}

pub fn all_pass(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.pass)
}

fn relation(k: usize, sorts: &[u8], n: usize, bits: u64) -> Relation {
    Relation::from_table(k, sorts, Table::from_fn(n, |i| (bits >> i) & 1 == 1)).expect("valid sorts")
}

fn sort_vectors(k: usize, n: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    for_each_sort_vector(k, n, &mut |s| out.push(s.to_vec()));
    out
}

fn nondecreasing(k: usize, n: usize) -> Vec<Vec<u8>> {
    sort_vectors(k, n).into_iter().filter(|s| s.windows(2).all(|w| w[0] <= w[1])).collect()
}

fn sample<T: fmt::Display>(items: &[T]) -> String {
    let shown: Vec<String> = items.iter().take(5).map(|x| x.to_string()).collect();
    let more = if items.len() > 5 { format!(" (+{} more)", items.len() - 5) } else { String::new() };
    format!("{}{more}", shown.join("; "))
}

// ---------------------------------------------------------------- lemmas

/// Pivot rearrangement round trip over every key relation of arity at
/// most `max_arity` and every sort vector.
pub fn round_trip(k: usize, max_arity: usize) -> Check {
    let mut total = 0usize;
    let mut bad = Vec::new();
    for n in 0..=max_arity {
        let ones = vec![1u8; n];
        let keys: Vec<u64> =
            (0..1u64 << (1u32 << n)).filter(|&b| is_key(&relation(1, &ones, n, b))).collect();
        for sorts in sort_vectors(k, n) {
            for &b in &keys {
                let rel = relation(k, &sorts, n, b);
                total += 1;
                let ok = match rearrange(&rel) {
                    Ok(r) => rel.is_similar(&r.materialize()).is_some(),
                    Err(_) => false,
                };
                if !ok {
                    bad.push(format!("sorts={sorts:?} table={b:#x}"));
                }
            }
        }
    }
    let detail = if bad.is_empty() {
        format!("{total} key relations")
    } else {
        format!("{} of {total} differ: {}", bad.len(), sample(&bad))
    };
    Check::new(format!("rearrangement round trip k={k}"), bad.is_empty(), detail)
}

/// Generator-set identities for every family, instantiated up to
/// `max_arity`, each checked with working arity up to its size plus 2.
pub fn generation_instances(k: usize, max_arity: usize) -> Result<Vec<Check>> {
    let insts = all_instances(k, max_arity)?;
    let results: Vec<Result<bool>> =
        insts.par_iter().map(|i| check_instance(i, k, (i.max_arity() + 2).min(10))).collect();
    let mut families: BTreeMap<&str, (usize, Vec<String>)> = BTreeMap::new();
    for (inst, res) in insts.iter().zip(results) {
        let entry = families.entry(inst.family).or_default();
        entry.0 += 1;
        match res {
            Ok(true) => {}
            Ok(false) => entry.1.push(inst.params.clone()),
            Err(e) => entry.1.push(format!("{} ({e})", inst.params)),
        }
    }
    Ok(families
        .into_iter()
        .map(|(family, (count, bad))| {
            let detail = if bad.is_empty() {
                format!("{count} instances")
            } else {
                format!("{} of {count} fail: {}", bad.len(), sample(&bad))
            };
            Check::new(format!("{family} k={k}"), bad.is_empty(), detail)
        })
        .collect())
}

pub fn lemmas(k: usize) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for kk in 1..=k {
        out.push(round_trip(kk, 4));
        out.extend(generation_instances(kk, 4)?);
    }
    Ok(out)
}

// ---------------------------------------------------------------- galois

fn random_relation(rng: &mut StdRng, k: usize) -> Relation {
    let n = rng.gen_range(1..=3);
    let sorts: Vec<u8> = (0..n).map(|_| rng.gen_range(1..=k as u8)).collect();
    if rng.gen_bool(0.4) {
        // structured relations have richer polymorphism clones
        let pool: Vec<CanonicalDescriptor> = enumerate_cr(k, 3);
        return pool[rng.gen_range(0..pool.len())].materialize();
    }
    let density = rng.gen_range(0.2..0.9);
    let t = Table::from_fn(n, |_| rng.gen_bool(density));
    Relation::from_table(k, &sorts, t).expect("valid sorts")
}

/// Seeded random languages: `(k, S, extra)`, `extra` one more relation.
pub fn random_languages(count: usize, max_k: usize, seed: u64) -> Vec<(usize, Vec<Relation>, Relation)> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let k = rng.gen_range(1..=max_k.clamp(1, 2));
            let len = rng.gen_range(1..=2);
            let s = (0..len).map(|_| random_relation(&mut rng, k)).collect();
            let extra = random_relation(&mut rng, k);
            (k, s, extra)
        })
        .collect()
}

fn subset(a: &[KOperation], b: &[KOperation]) -> bool {
    let b: HashSet<&KOperation> = b.iter().collect();
    a.iter().all(|f| b.contains(f))
}

fn rel_subset(a: &[Relation], b: &[Relation]) -> bool {
    let b: HashSet<&Relation> = b.iter().collect();
    a.iter().all(|r| b.contains(r))
}

/// Bounded Galois laws at arity 3 for one language.
pub fn galois_laws(k: usize, s: &[Relation], extra: &Relation, budget: usize) -> Result<[bool; 4]> {
    let pol = pol_bounded(s, k, 3, true, budget)?;
    let mut inv_of_pol = true;
    for r in s {
        for f in &pol {
            inv_of_pol &= preserves(f, r)?;
        }
    }
    let mut bigger = s.to_vec();
    bigger.push(extra.clone());
    let pol_bigger = pol_bounded(&bigger, k, 3, true, budget)?;
    let antitone_pol = subset(&pol_bigger, &pol);
    let inv = inv_bounded(&pol, k, 3, budget)?;
    let fewer: Vec<KOperation> = pol.iter().filter(|f| f.arity() <= 2).cloned().collect();
    let inv_fewer = inv_bounded(&fewer, k, 3, budget)?;
    let antitone_inv = rel_subset(&inv, &inv_fewer);
    let mut again = pol_bounded(&inv, k, 3, true, budget)?;
    let mut pol_sorted = pol.clone();
    again.sort();
    pol_sorted.sort();
    Ok([inv_of_pol, antitone_pol, antitone_inv, again == pol_sorted])
}

pub fn galois(k: usize, seed: u64, budget: usize) -> Result<Vec<Check>> {
    let langs = random_languages(20, k, seed);
    let results: Vec<Result<[bool; 4]>> =
        langs.par_iter().map(|(kk, s, extra)| galois_laws(*kk, s, extra, budget)).collect();
    let names = [
        "S within Inv(sPol S)",
        "sPol antitone",
        "Inv antitone",
        "sPol Inv sPol = sPol",
    ];
    let mut bad: [Vec<usize>; 4] = Default::default();
    for (i, r) in results.into_iter().enumerate() {
        let r = r?;
        for (law, ok) in r.iter().enumerate() {
            if !ok {
                bad[law].push(i);
            }
        }
    }
    Ok(names
        .iter()
        .zip(bad)
        .map(|(name, b)| {
            let detail = if b.is_empty() {
                format!("{} languages, arity <= 3", langs.len())
            } else {
                format!("fails on languages {b:?}")
            };
            Check::new(*name, b.is_empty(), detail)
        })
        .collect())
}

// ------------------------------------------------------------- canonical

/// classify on every relation of arity at most `max_arity` (sorted sort
/// vectors) finds exactly the enumerated descriptors, each similar to its
/// input.
pub fn classification(k: usize, max_arity: usize) -> Check {
    let mut found: HashSet<CanonicalDescriptor> = HashSet::new();
    let mut wrong = 0usize;
    for n in 1..=max_arity {
        for sorts in nondecreasing(k, n) {
            for bits in 0..1u64 << (1u32 << n) {
                let rel = relation(k, &sorts, n, bits);
                if let Some(d) = classify(&rel) {
                    if rel.is_similar(&d.materialize()).is_none() {
                        wrong += 1;
                    }
                    found.insert(d);
                }
            }
        }
    }
    let listed: HashSet<CanonicalDescriptor> = enumerate_cr(k, max_arity).into_iter().collect();
    let pass = wrong == 0 && found == listed;
    let detail = format!(
        "{} enumerated, {} found by classify, {} missing, {} extra, {wrong} not similar",
        listed.len(),
        found.len(),
        listed.difference(&found).count(),
        found.difference(&listed).count()
    );
    Check::new(format!("classify agrees with enumerate k={k}"), pass, detail)
}

/// mu(a) <= mu(b) iff a lies in the quantified clone of b, decided by
/// bounded membership, over the given (c7) descriptors.
pub fn mu_reflection(ds: &[CanonicalDescriptor], budget: usize) -> Result<Check> {
    let k = ds.first().map_or(1, |d| d.k());
    let max = ds.iter().map(|d| d.arity()).max().unwrap_or(1);
    let cfg = ClosureConfig::new(k, max, 4).with_op_budget(budget);
    let rows: Vec<Result<(usize, Vec<String>)>> = ds
        .par_iter()
        .map(|b| {
            let mut m = Membership::new(&[b.materialize()], &cfg)?;
            let mb = mu(b)?;
            let mut undecided = 0;
            let mut bad = Vec::new();
            for a in ds {
                let want = point_leq(&mu(a)?, &mb);
                match m.decide(&a.materialize())? {
                    Verdict::Undecided => {
                        undecided += 1;
                        bad.push(format!("{a} in {b} undecided"));
                    }
                    v if (v == Verdict::In) != want => bad.push(format!("{a} vs {b}")),
                    _ => {}
                }
            }
            Ok((undecided, bad))
        })
        .collect();
    let mut undecided = 0;
    let mut bad = Vec::new();
    for r in rows {
        let (u, b) = r?;
        undecided += u;
        bad.extend(b);
    }
    let pairs = ds.len() * ds.len();
    let pass = undecided == 0 && bad.is_empty();
    let detail = if pass {
        format!("{pairs} pairs")
    } else {
        format!("{pairs} pairs, {undecided} undecided, {} disagree: {}", bad.len() - undecided, sample(&bad))
    };
    Ok(Check::new(format!("mu order reflection k={k}"), pass, detail))
}

/// (c7) descriptors for `k` sorts with every count at most `bound` and
/// arity at most `max_arity`.
pub fn c7_descriptors(k: usize, bound: u32, max_arity: usize) -> Result<Vec<CanonicalDescriptor>> {
    let dim = 2 * k;
    let mut out = Vec::new();
    let mut p = vec![0u32; dim];
    loop {
        let arity: u32 = p.iter().sum();
        let valid = p.chunks(2).all(|c| c[0] == 0 || c[1] == 0);
        if valid && arity > 0 && arity as usize <= max_arity {
            out.push(CanonicalDescriptor::c7(&p)?);
        }
        let mut i = 0;
        loop {
            if i == dim {
                return Ok(out);
            }
            if p[i] < bound {
                p[i] += 1;
                break;
            }
            p[i] = 0;
            i += 1;
        }
    }
}

/// Random ascending chains of downsets in `N_0^dim` fed from a finite
/// pool. Returns the number of chains that did not stabilize.
pub fn acc_chains(chains: usize, dim: usize, seed: u64) -> Result<usize> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut unstable = 0;
    for _ in 0..chains {
        let pool_size = rng.gen_range(1..=12);
        let pool: Vec<Vec<u32>> =
            (0..pool_size).map(|_| (0..dim).map(|_| rng.gen_range(0..=6)).collect()).collect();
        let mut ds = Downset::new(dim);
        let mut growth = 0;
        let mut stable = false;
        for _ in 0..=pool.len() + 1 {
            let mut grew = false;
            for _ in 0..pool.len() {
                if ds.insert(&pool[rng.gen_range(0..pool.len())])? {
                    growth += 1;
                    grew = true;
                }
            }
            for p in &pool {
                if ds.insert(p)? {
                    growth += 1;
                    grew = true;
                }
            }
            if !grew {
                stable = true;
                break;
            }
        }
        if !stable || growth > pool.len() || !pool.iter().all(|p| ds.contains(p)) {
            unstable += 1;
        }
    }
    Ok(unstable)
}

/// Key relations of arity at most `max_arity` over every sort vector.
pub fn key_relations(k: usize, max_arity: usize) -> Vec<Relation> {
    let mut out = Vec::new();
    for n in 0..=max_arity {
        for sorts in sort_vectors(k, n) {
            for bits in 0..1u64 << (1u32 << n) {
                let r = relation(k, &sorts, n, bits);
                if is_key(&r) {
                    out.push(r);
                }
            }
        }
    }
    out
}

/// Per descriptor: number of key relations of arity at most 3 on which the
/// W=6 closure and the table row disagree.
pub fn table_mismatches(k: usize) -> Result<Vec<(CanonicalDescriptor, usize)>> {
    let targets = key_relations(k, 3);
    let cfg = ClosureConfig::new(k, 6, 1);
    enumerate_cr(k, 3)
        .par_iter()
        .map(|d| {
            let cl = qpp_closure(&[d.materialize()], &cfg)?;
            let row = single_generator_closure(d);
            let bad = targets.iter().filter(|q| cl.contains(q) != row.contains(q)).count();
            Ok((d.clone(), bad))
        })
        .collect()
}

pub fn table_conformance(k: usize) -> Result<Check> {
    let rows = table_mismatches(k)?;
    let bad: Vec<String> = rows.iter().filter(|(_, n)| *n > 0).map(|(d, n)| format!("{d} ({n} targets)")).collect();
    let detail = if bad.is_empty() {
        format!("{} descriptors", rows.len())
    } else {
        format!("{} of {} descriptors differ: {}", bad.len(), rows.len(), bad.join("; "))
    };
    Ok(Check::new(format!("table conformance k={k}"), bad.is_empty(), detail))
}

/// No canonical relation of lower arity inside the clone of a canonical
/// relation generates it back.
pub fn no_lower_generator(k: usize, max_arity: usize) -> Check {
    let all = enumerate_cr(k, max_arity);
    let mut pairs = 0;
    let mut bad = Vec::new();
    for rho in &all {
        let inside = single_generator_closure(rho);
        for sigma in all.iter().filter(|s| s.arity() < rho.arity()) {
            if inside.contains(&sigma.materialize()) {
                pairs += 1;
                if single_generator_closure(sigma).contains(&rho.materialize()) {
                    bad.push(format!("{sigma} generates {rho}"));
                }
            }
        }
    }
    let detail = if bad.is_empty() { format!("{pairs} pairs") } else { sample(&bad) };
    Check::new(format!("no lower-arity generator k={k}"), bad.is_empty(), detail)
}

pub fn canonical(k: usize, budget: usize) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let small = k.min(2);
    for kk in 1..=small {
        out.push(classification(kk, 3));
    }
    out.push(mu_reflection(&c7_descriptors(1, 4, 8)?, budget)?);
    if k >= 2 {
        out.push(mu_reflection(&c7_descriptors(2, 4, 4)?, budget)?);
    }
    let unstable = acc_chains(1000, 4, 7)?;
    out.push(Check::new("downset chains stabilize", unstable == 0, format!("1000 chains in N_0^4, {unstable} unstable")));
    for kk in 1..=small {
        out.push(table_conformance(kk)?);
    }
    for kk in 1..=small {
        out.push(no_lower_generator(kk, 4));
    }
    Ok(out)
}

// ------------------------------------------------------------------ fig1

fn c7_node(lat: &Lattice, point: [u32; 2]) -> Option<usize> {
    lat.nodes().iter().position(|n| n.fingerprint.cr16().is_empty() && n.fingerprint.downset().maximal() == [point.to_vec()])
}

/// Structural checks on a built 1-sorted lattice.
pub fn fig1_structure(lat: &Lattice) -> Vec<Check> {
    let mut out = Vec::new();
    let mut atoms: Vec<&str> = lat.atoms().iter().map(|&a| lat.nodes()[a].label.as_str()).collect();
    atoms.sort();
    let want = ["x+y=1", "x+y=u+v", "x=0", "x=1"];
    out.push(Check::new("four atoms", atoms == want, format!("{atoms:?}")));
    let (lo, hi) = (lat.minimal(), lat.maximal());
    out.push(Check::new(
        "unique bottom and top",
        lo.len() == 1 && hi.len() == 1,
        format!("{} minimal, {} maximal", lo.len(), hi.len()),
    ));
    let trunc = lat.trunc() as u32;
    for (name, axis) in [("zero chain", 0), ("one chain", 1)] {
        let point = |n: u32| if axis == 0 { [n, 0] } else { [0, n] };
        let ids: Vec<Option<usize>> = (1..=trunc).map(|n| c7_node(lat, point(n))).collect();
        let present = ids.iter().all(|i| i.is_some());
        let covers = present
            && ids.windows(2).all(|w| lat.edges().contains(&(w[0].unwrap(), w[1].unwrap())));
        let flagged = present && lat.nodes()[ids[ids.len() - 1].unwrap()].truncated;
        out.push(Check::new(
            name,
            present && covers && flagged,
            format!("{} of {trunc} links present, covers {covers}, last flagged {flagged}", ids.iter().flatten().count()),
        ));
    }
    out
}

/// Injectivity of the ν map on random bounded 2-clones from unary and
/// binary seeds, plus slot consistency.
pub fn nu_injectivity(count: usize, seed: u64, budget: usize) -> Result<Check> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut images: BTreeMap<Vec<KOperation>, NuImage> = BTreeMap::new();
    let mut inconsistent = 0;
    for _ in 0..count {
        let seeds: Vec<KOperation> = (0..rng.gen_range(1..=2))
            .map(|_| {
                let arity = rng.gen_range(1..=2);
                let tables: Vec<u64> = (0..2).map(|_| rng.gen_range(0..1u64 << (1 << arity))).collect();
                KOperation::new(2, arity, &tables).expect("valid tables")
            })
            .collect();
        let clone = clo_generate(&seeds, 2, 2, budget)?;
        let img = nu_decompose(&clone, 2)?;
        if !img.slots.iter().all(|s| s.is_closed() && s.projections_all_or_none(1)) {
            inconsistent += 1;
        }
        images.insert(clone, img);
    }
    let distinct: HashSet<&NuImage> = images.values().collect();
    let pass = distinct.len() == images.len() && inconsistent == 0;
    Ok(Check::new(
        "nu injective",
        pass,
        format!("{count} samples, {} distinct clones, {} distinct images, {inconsistent} inconsistent", images.len(), distinct.len()),
    ))
}

pub fn fig1(trunc: usize, cfg: &ClosureConfig, budget: usize) -> Result<Vec<Check>> {
    let lat = crate::build_fig1_parallel(trunc, cfg)?;
    let mut out = fig1_structure(&lat);
    if trunc == 4 {
        out.push(Check::new("golden node count", lat.len() == FIG1_NODES_AT_4, format!("{} nodes", lat.len())));
    }
    out.push(Check::new("edges verified by membership", verify_edges(&lat, cfg)?, format!("{} edges", lat.edges().len())));
    let post = derive_post(&lat, cfg)?;
    let pl = post.lattice();
    out.push(Check::new("post nodes distinct", post.pairwise_distinct(), format!("{} nodes", pl.len())));
    let claim = (0..pl.len()).into_par_iter().all(|v| post.claim_holds(v, 3));
    out.push(Check::new("post conjunction claim", claim, "relations of arity <= 3"));
    out.push(Check::new("post re-derivation idempotent", post.rederive_is_idempotent(), ""));
    out.push(nu_injectivity(50, 11, budget)?);
    Ok(out)
}

//! Acceptance criteria 1-10, one PASS/FAIL line each.
//!
//! Runs without the test harness so the lines always reach stdout. The
//! process fails when a criterion fails, except for criteria listed in
//! `KNOWN` whose failure matches the recorded analysis exactly; those print
//! FAIL and are checked to fail in exactly the analysed way.

use clonelab::suites::{self, Check};
use clonelab::{build_fig1_parallel, config};
use clonelab_core::canonical::{classify, single_generator_closure, CanonicalDescriptor, Shape};
use clonelab_core::closure::{ClosureConfig, Membership, Verdict};
use clonelab_core::eo::{compose_forms, eo_compose, eo_forall, forall_form};
use clonelab_core::galois::DEFAULT_BUDGET;
use clonelab_core::lattice::derive_post;
use clonelab_core::{is_key, to_disjunctive_form, Relation, Table};
use rayon::prelude::*;
use std::collections::HashSet;
use std::time::{Duration, Instant};

const LIMIT_1: Duration = Duration::from_secs(60);
const LIMIT_2: Duration = Duration::from_secs(60);
const LIMIT_3: Duration = Duration::from_secs(600);
const LIMIT_7: Duration = Duration::from_secs(300);

struct Outcome {
    id: u8,
    pass: bool,
    detail: String,
    /// For a known failure: whether it failed exactly as analysed.
    as_analysed: Option<bool>,
}

fn rel1(n: usize, bits: u64) -> Relation {
    Relation::from_table(1, &vec![1; n], Table::from_fn(n, |i| (bits >> i) & 1 == 1)).unwrap()
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed())
}

fn failing(checks: &[Check]) -> Vec<String> {
    checks.iter().filter(|c| !c.pass).map(|c| format!("{c}")).collect()
}

/// Solutions of `a . x = b` over 4 variables as a 16-bit set, variable 1
/// the most significant index bit.
fn equation_set(a: u32, b: u32) -> u32 {
    (0..16u32).filter(|&x| ((a & x).count_ones() & 1) == b).fold(0, |s, x| s | 1 << x)
}

fn c1() -> Outcome {
    let eqs: Vec<u32> = (0..16).flat_map(|a| (0..2).map(move |b| equation_set(a, b))).collect();
    let (bad, took) = timed(|| {
        (0..1u64 << 16)
            .filter(|&r| {
                let r32 = r as u32;
                let union = eqs.iter().filter(|&&e| e & !r32 == 0).fold(0, |u, &e| u | e);
                is_key(&rel1(4, r)) != (union == r32)
            })
            .count()
    });
    Outcome {
        id: 1,
        pass: bad == 0 && took < LIMIT_1,
        detail: format!("65536 arity-4 relations, {bad} mismatches, {took:.2?} (limit {LIMIT_1:?})"),
        as_analysed: None,
    }
}

fn brute_compose(a: &Relation, b: &Relation) -> Relation {
    let (na, nb) = (a.arity() - 1, b.arity() - 1);
    Relation::from_table(
        1,
        &vec![1; na + nb],
        Table::from_fn(na + nb, |i| {
            let (x, y) = (i >> nb, i & ((1 << nb) - 1));
            (0..2).any(|z| a.contains_index(z << na | x) && b.contains_index(z << nb | y))
        }),
    )
    .unwrap()
}

fn brute_forall(a: &Relation) -> Relation {
    let n = a.arity() - 1;
    Relation::from_table(1, &vec![1; n], Table::from_fn(n, |x| (0..2).all(|z| a.contains_index(z << n | x)))).unwrap()
}

fn c2() -> Outcome {
    let ((pairs, singles, bad), took) = timed(|| {
        let keys: Vec<Relation> = (1..=3)
            .flat_map(|n| (0..1u64 << (1 << n)).map(move |b| rel1(n, b)))
            .filter(|r| is_key(r) && !r.is_dummy(0))
            .collect();
        let mut bad = 0usize;
        for a in &keys {
            let fa = to_disjunctive_form(a).unwrap();
            let sym = forall_form(&fa).unwrap().materialize();
            bad += usize::from(sym != brute_forall(a) || sym != eo_forall(a).unwrap());
        }
        let pairs: usize = keys
            .par_iter()
            .map(|a| {
                let fa = to_disjunctive_form(a).unwrap();
                keys.iter()
                    .filter(|b| {
                        let fb = to_disjunctive_form(b).unwrap();
                        let sym = compose_forms(&fa, &fb).unwrap().materialize();
                        sym != brute_compose(a, b) || sym != eo_compose(a, b).unwrap()
                    })
                    .count()
            })
            .sum();
        (keys.len() * keys.len(), keys.len(), bad + pairs)
    });
    Outcome {
        id: 2,
        pass: bad == 0 && took < LIMIT_2,
        detail: format!("{pairs} compositions, {singles} quantifications, {bad} mismatches, {took:.2?} (limit {LIMIT_2:?})"),
        as_analysed: None,
    }
}

fn c3() -> Outcome {
    let (checks, took) = timed(|| suites::lemmas(2).unwrap());
    let bad = failing(&checks);
    Outcome {
        id: 3,
        pass: bad.is_empty() && took < LIMIT_3,
        detail: format!("{} checks, {} failing {bad:?}, {took:.2?} (limit {LIMIT_3:?})", checks.len(), bad.len()),
        as_analysed: None,
    }
}

fn is_c1(d: &CanonicalDescriptor) -> bool {
    matches!(d.shape(), Shape::C1 { .. })
}

fn c4() -> Outcome {
    let mut rows = suites::table_mismatches(1).unwrap();
    rows.extend(suites::table_mismatches(2).unwrap());
    let bad: Vec<(String, usize)> = rows.iter().filter(|(_, n)| *n > 0).map(|(d, n)| (d.to_string(), *n)).collect();
    // recorded analysis: exactly the three (c1) rows, 12 and 34 targets
    let expected = [("c1(i=1)".to_string(), 12), ("c1(i=1)".to_string(), 34), ("c1(i=2)".to_string(), 34)];
    let as_analysed = bad.len() == 3
        && bad.iter().zip(&expected).all(|(a, b)| a == b)
        && rows.iter().filter(|(_, n)| *n > 0).all(|(d, _)| is_c1(d));
    Outcome {
        id: 4,
        pass: bad.is_empty(),
        detail: format!("{} descriptors (k <= 2, arity <= 3), {} differ: {bad:?}", rows.len(), bad.len()),
        as_analysed: Some(as_analysed),
    }
}

/// x = b padded with dummies: a key relation with one non-dummy variable
/// and a single tuple on it.
fn is_padded_constant(q: &Relation) -> bool {
    let (core, _) = q.drop_dummies();
    core.arity() == 1 && core.size() == 1
}

fn c5() -> Outcome {
    let cfg = ClosureConfig::new(1, 6, 4);
    let all: Vec<Relation> = (0..=3).flat_map(|n| (0..1u64 << (1 << n)).map(move |b| rel1(n, b))).collect();
    let mut seen = HashSet::new();
    let langs: Vec<&Relation> = all.iter().filter(|r| seen.insert(r.canonical())).collect();
    let results: Vec<(usize, Vec<String>, Vec<String>)> = langs
        .par_iter()
        .map(|rho| {
            let mut m = Membership::new(&[(*rho).clone()], &cfg).unwrap();
            let row = classify(rho).filter(|d| rho.is_similar(&d.materialize()).is_some()).map(|d| single_generator_closure(&d));
            let mut undecided = 0;
            let mut known = Vec::new();
            let mut other = Vec::new();
            for t in &all {
                let v = m.decide(t).unwrap();
                if v == Verdict::Undecided {
                    undecided += 1;
                    continue;
                }
                if let Some(row) = &row {
                    if is_key(t) && row.contains(t) != (v == Verdict::In) {
                        let note = format!("{} vs {t:?}", row.descriptor());
                        if is_c1(row.descriptor()) && v == Verdict::In && is_padded_constant(t) {
                            known.push(note);
                        } else {
                            other.push(note);
                        }
                    }
                }
            }
            (undecided, known, other)
        })
        .collect();
    let undecided: usize = results.iter().map(|r| r.0).sum();
    let known: usize = results.iter().map(|r| r.1.len()).sum();
    let other: Vec<&String> = results.iter().flat_map(|r| &r.2).collect();
    let pass = undecided == 0 && known == 0 && other.is_empty();
    Outcome {
        id: 5,
        pass,
        detail: format!(
            "{} languages x {} targets, {undecided} undecided, {} table disagreements ({known} are (c1) vs x=b){}",
            langs.len(),
            all.len(),
            known + other.len(),
            if other.is_empty() { String::new() } else { format!(": {other:?}") }
        ),
        as_analysed: Some(undecided == 0 && other.is_empty() && known > 0),
    }
}

fn c6() -> Outcome {
    let checks = suites::galois(2, 1, DEFAULT_BUDGET).unwrap();
    let bad = failing(&checks);
    Outcome { id: 6, pass: bad.is_empty(), detail: format!("20 seeded languages, 4 laws, failing {bad:?}"), as_analysed: None }
}

fn c7_and_8() -> (Outcome, Outcome) {
    let cfg = config(1, 6, 4);
    let (lat, took) = timed(|| build_fig1_parallel(4, &cfg).unwrap());
    let mut checks = suites::fig1_structure(&lat);
    checks.push(Check {
        name: "golden node count".into(),
        pass: lat.len() == suites::FIG1_NODES_AT_4,
        detail: format!("{} nodes", lat.len()),
    });
    let bad = failing(&checks);
    let o7 = Outcome {
        id: 7,
        pass: bad.is_empty() && took < LIMIT_7,
        detail: format!("{} nodes (golden {}), {} edges, failing {bad:?}, {took:.2?} (limit {LIMIT_7:?})", lat.len(), suites::FIG1_NODES_AT_4, lat.edges().len()),
        as_analysed: None,
    };
    let post = derive_post(&lat, &cfg).unwrap();
    let n = post.lattice().len();
    let distinct = post.pairwise_distinct();
    let claim = (0..n).into_par_iter().filter(|&v| !post.claim_holds(v, 3)).count();
    let idem = post.rederive_is_idempotent();
    let o8 = Outcome {
        id: 8,
        pass: distinct && claim == 0 && idem,
        detail: format!("{n} nodes, distinct {distinct}, claim fails on {claim} nodes (arity <= 3), idempotent {idem}"),
        as_analysed: None,
    };
    (o7, o8)
}

fn c9() -> Outcome {
    let k1 = suites::mu_reflection(&suites::c7_descriptors(1, 4, 8).unwrap(), DEFAULT_BUDGET).unwrap();
    let k2 = suites::mu_reflection(&suites::c7_descriptors(2, 4, 4).unwrap(), DEFAULT_BUDGET).unwrap();
    let unstable = suites::acc_chains(1000, 4, 7).unwrap();
    Outcome {
        id: 9,
        pass: k1.pass && k2.pass && unstable == 0,
        detail: format!("{k1}; {k2}; 1000 chains in N_0^4, {unstable} unstable"),
        as_analysed: None,
    }
}

fn c10() -> Outcome {
    let c = suites::nu_injectivity(50, 11, DEFAULT_BUDGET).unwrap();
    Outcome { id: 10, pass: c.pass, detail: c.detail, as_analysed: None }
}

fn main() {
    let (o7, o8) = c7_and_8();
    let outcomes = [c1(), c2(), c3(), c4(), c5(), c6(), o7, o8, c9(), c10()];
    let mut unexpected = Vec::new();
    for o in &outcomes {
        let tag = if o.pass { "PASS" } else { "FAIL" };
        let note = match (o.pass, o.as_analysed) {
            (false, Some(true)) => " [known: the (c1) row omits x=b, see README]",
            (false, _) => {
                unexpected.push(o.id);
                ""
            }
            (true, Some(_)) => {
                // a known failure that no longer fails needs a fresh look
                unexpected.push(o.id);
                " [expected to fail]"
            }
            (true, None) => "",
        };
        println!("{tag} {}: {}{note}", o.id, o.detail);
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected outcome for criteria {unexpected:?}");
        std::process::exit(1);
    }
}

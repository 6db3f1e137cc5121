use clonelab_core::canonical::{classify, enumerate_cr, point_leq, Downset};
use clonelab_core::closure::{eo5_closure, ClosureConfig, ConjClosure};
use clonelab_core::eo::{compose_forms, eo_compose, eo_forall, eo_permute, forall_form};
use clonelab_core::galois::{breaking_polymorphism, compose_ops, pol_arity, preserves, KOperation, DEFAULT_BUDGET};
use clonelab_core::{is_key, to_disjunctive_form, Relation, Table};
use proptest::prelude::*;

fn relation(k: usize, max_arity: usize) -> impl Strategy<Value = Relation> {
    (0..=max_arity).prop_flat_map(move |n| {
        (proptest::collection::vec(1..=k as u8, n), proptest::collection::vec(any::<bool>(), 1 << n))
            .prop_map(move |(sorts, bits)| Relation::from_table(k, &sorts, Table::from_fn(n, |i| bits[i])).unwrap())
    })
}

/// Key relation: complement of the solution set of a random linear system.
fn key_relation(k: usize, max_arity: usize) -> impl Strategy<Value = Relation> {
    (1..=max_arity).prop_flat_map(move |n| {
        let row = (0u64..1 << n, any::<bool>());
        (proptest::collection::vec(1..=k as u8, n), proptest::collection::vec(row, 0..=n)).prop_map(move |(sorts, rows)| {
            let t = Table::from_fn(n, |i| {
                // index bit n-1-j is variable j
                !rows.iter().all(|&(c, b)| {
                    let x: u64 = (0..n).filter(|&j| (i >> (n - 1 - j)) & 1 == 1).fold(0, |a, j| a | 1 << j);
                    ((c & x).count_ones() % 2 == 1) == b
                })
            });
            Relation::from_table(k, &sorts, t).unwrap()
        })
    })
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

fn operation(k: usize, arity: usize) -> impl Strategy<Value = KOperation> {
    let mask = if arity >= 6 { u64::MAX } else { (1u64 << (1 << arity)) - 1 };
    proptest::collection::vec(any::<u64>(), k).prop_map(move |t| {
        let t: Vec<u64> = t.into_iter().map(|x| x & mask).collect();
        KOperation::new(k, arity, &t).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn disjunctive_form_round_trip(r in relation(2, 4)) {
        match to_disjunctive_form(&r) {
            Some(f) => {
                prop_assert!(is_key(&r));
                prop_assert_eq!(f.materialize(), r.clone());
                prop_assert_eq!(f.canonical(), f.canonical().canonical());
            }
            None => prop_assert!(!is_key(&r)),
        }
    }

    #[test]
    fn generated_key_relations_are_key(r in key_relation(2, 5)) {
        prop_assert!(is_key(&r));
    }

    #[test]
    fn keyness_is_invariant_under_permutation((r, p) in relation(2, 4).prop_flat_map(|r| { let n = r.arity(); (Just(r), permutation(n)) })) {
        let q = eo_permute(&r, &p).unwrap();
        prop_assert_eq!(is_key(&q), is_key(&r));
        prop_assert_eq!(q.canonical(), r.canonical());
        prop_assert!(r.is_similar(&q).is_some());
    }

    #[test]
    fn dummies_round_trip(r in relation(2, 4)) {
        let (core, positions) = r.drop_dummies();
        prop_assert!(!core.has_dummies());
        let sorts: Vec<u8> = positions.iter().map(|&p| r.sorts()[p]).collect();
        prop_assert_eq!(core.insert_dummies(&positions, &sorts), r);
    }

    #[test]
    fn symbolic_operations_match_tables(a in key_relation(2, 4), b in key_relation(2, 4)) {
        let fa = to_disjunctive_form(&a).unwrap();
        if !a.is_dummy(0) {
            prop_assert_eq!(forall_form(&fa).unwrap().materialize(), eo_forall(&a).unwrap());
        }
        if !a.is_dummy(0) && !b.is_dummy(0) && a.sorts()[0] == b.sorts()[0] {
            let fb = to_disjunctive_form(&b).unwrap();
            prop_assert_eq!(compose_forms(&fa, &fb).unwrap().materialize(), eo_compose(&a, &b).unwrap());
        }
    }

    #[test]
    fn classify_finds_every_canonical_relation(i in 0usize..1000, p in permutation(4)) {
        let all = enumerate_cr(2, 4);
        let d = &all[i % all.len()];
        let r = d.materialize();
        prop_assert_eq!(classify(&r), Some(d.clone()));
        let n = r.arity();
        let perm: Vec<usize> = p.into_iter().filter(|&x| x < n).collect();
        prop_assert_eq!(classify(&eo_permute(&r, &perm).unwrap()), Some(d.clone()));
    }

    #[test]
    fn downset_insert_is_monotone(points in proptest::collection::vec(proptest::collection::vec(0u32..6, 4), 0..20)) {
        let mut d = Downset::new(4);
        for p in &points {
            let before = d.clone();
            d.insert(p).unwrap();
            prop_assert!(before.leq(&d));
            prop_assert!(d.contains(p));
            let m = d.maximal();
            for (i, a) in m.iter().enumerate() {
                for b in &m[i + 1..] {
                    prop_assert!(!point_leq(a, b) && !point_leq(b, a));
                }
            }
        }
        for p in &points {
            prop_assert!(!d.clone().insert(p).unwrap());
        }
    }

    #[test]
    fn composition_preserves_invariants(
        r in relation(1, 3),
        f in operation(1, 2),
        g in operation(1, 2),
        h in operation(1, 2),
    ) {
        if preserves(&f, &r).unwrap() && preserves(&g, &r).unwrap() && preserves(&h, &r).unwrap() {
            prop_assert!(preserves(&compose_ops(&f, &[g, h]).unwrap(), &r).unwrap());
        }
    }

    #[test]
    fn breaking_search_matches_enumeration(a in relation(2, 2), t in relation(2, 2)) {
        let all = pol_arity(std::slice::from_ref(&a), 2, 2, true, DEFAULT_BUDGET).unwrap();
        let breaks = all.iter().any(|f| !preserves(f, &t).unwrap());
        let found = breaking_polymorphism(std::slice::from_ref(&a), &t, 2, 2, usize::MAX).unwrap();
        prop_assert_eq!(found.is_some(), breaks);
        if let Some(f) = found {
            prop_assert!(f.is_surjective() && preserves(&f, &a).unwrap() && !preserves(&f, &t).unwrap());
        }
    }

    #[test]
    fn polymorphisms_preserve_and_shrink(a in relation(2, 2), b in relation(2, 2)) {
        let pa = pol_arity(std::slice::from_ref(&a), 2, 2, false, DEFAULT_BUDGET).unwrap();
        let pab = pol_arity(&[a.clone(), b.clone()], 2, 2, false, DEFAULT_BUDGET).unwrap();
        for f in &pa {
            prop_assert!(preserves(f, &a).unwrap());
        }
        for f in &pab {
            prop_assert!(pa.contains(f));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn closure_is_deterministic_and_monotone(a in relation(1, 2), b in relation(1, 2)) {
        let cfg = ClosureConfig::new(1, 3, 1);
        let one = eo5_closure(std::slice::from_ref(&a), &cfg).unwrap();
        let again = eo5_closure(std::slice::from_ref(&a), &cfg).unwrap();
        prop_assert_eq!(one.sorted(), again.sorted());
        let both = ConjClosure::new(eo5_closure(&[a.clone(), b], &cfg).unwrap());
        for r in one.members() {
            prop_assert!(both.contains(r));
        }
        prop_assert!(both.contains(&a));
    }
}

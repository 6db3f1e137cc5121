use clonelab::format::{parse_literals, parse_relation, print_form, print_literal, print_relation, Literal};
use clonelab_core::{is_key, to_disjunctive_form, Relation, Table};
use proptest::prelude::*;

fn relation() -> impl Strategy<Value = Relation> {
    (1usize..=3, 0usize..=4).prop_flat_map(|(k, n)| {
        (proptest::collection::vec(1..=k as u8, n), proptest::collection::vec(any::<bool>(), 1 << n))
            .prop_map(move |(sorts, bits)| Relation::from_table(k, &sorts, Table::from_fn(n, |i| bits[i])).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn rel_literals_round_trip(r in relation()) {
        let text = print_relation(&r);
        let lit = parse_relation(&text).unwrap();
        prop_assert_eq!(lit.relation(), r);
        prop_assert_eq!(print_literal(&lit), text);
    }

    #[test]
    fn disj_literals_keep_their_form(r in relation()) {
        prop_assume!(is_key(&r));
        let f = to_disjunctive_form(&r).unwrap();
        let text = print_form(&f);
        match parse_relation(&text).unwrap() {
            Literal::Disj(g) => {
                prop_assert_eq!(g.materialize(), r);
                prop_assert_eq!(print_form(&g), text);
            }
            Literal::Rel(_) => prop_assert!(false, "disj literal parsed as rel"),
        }
    }

    #[test]
    fn whitespace_is_insignificant(r in relation(), pad in "[ \t\n]{0,3}") {
        let text = print_relation(&r);
        let spaced: String = text
            .split(' ')
            .collect::<Vec<_>>()
            .join(&format!(" {pad}"))
            .replace(',', &format!("{pad},{pad}"));
        prop_assert_eq!(parse_relation(&spaced).unwrap().relation(), r);
    }

    #[test]
    fn files_hold_several_literals(a in relation(), b in relation()) {
        let text = format!("{}\n{}\n", print_relation(&a), print_relation(&b));
        let lits = parse_literals(&text).unwrap();
        prop_assert_eq!(lits.len(), 2);
        prop_assert_eq!(lits[0].relation(), a);
        prop_assert_eq!(lits[1].relation(), b);
    }

    #[test]
    fn garbage_never_panics(s in "\\PC{0,40}") {
        let _ = parse_literals(&s);
    }
}

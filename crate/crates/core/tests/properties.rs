mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use setdiag::catalog;
use setdiag::diagram::check_section;
use setdiag::dsl::{parse_decls, parse_spec, print_spec};
use setdiag::forcing::{build_constraints, closure_through_level};
use setdiag::map::structure::{nat_const, succ, StructureMapSet};
use setdiag::map::{map_size, MapExpr};
use setdiag::solver::{solve, solve_least, Mode};
use setdiag::{PartialSection, SolverBounds, Subset, Universe, Value};

use common::props::*;

fn fixture(name: &str) -> String {
    std::fs::read_to_string(format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn image_and_preimage_are_adjoint((f, a, b) in map_and_sets()) {
        prop_assert!(adjunction(&f, &a, &b).is_ok(), "{}", adjunction(&f, &a, &b).unwrap_err());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn boolean_laws((a, b) in finite_universe().prop_flat_map(|u| (subset_of(u.clone()), subset_of(u)))) {
        prop_assert!(de_morgan(&a, &b).is_ok(), "{}", de_morgan(&a, &b).unwrap_err());
    }

    #[test]
    fn image_distributes_over_union(
        (f, a1, a2) in (finite_universe(), finite_universe())
            .prop_flat_map(|(d, c)| (table_map(d.clone(), c), subset_of(d.clone()), subset_of(d)))
    ) {
        let lhs = forward(&f, &a1.union(&a2).unwrap());
        let rhs = forward(&f, &a1).union(&forward(&f, &a2)).unwrap();
        prop_assert_eq!(lhs.values(), rhs.values());
    }

    #[test]
    fn preimage_commutes_with_boolean_operations(
        (f, b1, b2) in (finite_universe(), finite_universe())
            .prop_flat_map(|(d, c)| (table_map(d, c.clone()), subset_of(c.clone()), subset_of(c)))
    ) {
        let b = SolverBounds::default();
        let n = |s: Subset| s.normalize(&b).unwrap().values().cloned();
        let (i1, i2) = (inverse(&f, &b1), inverse(&f, &b2));
        prop_assert_eq!(n(inverse(&f, &b1.union(&b2).unwrap())), n(i1.union(&i2).unwrap()));
        prop_assert_eq!(n(inverse(&f, &b1.intersect(&b2).unwrap())), n(i1.intersect(&i2).unwrap()));
        prop_assert_eq!(n(inverse(&f, &b1.complement().unwrap())), n(i1.complement().unwrap()));
    }

    #[test]
    fn minimization_orders_compose(g in family()) {
        prop_assert!(min_composition(&g).is_ok(), "{}", min_composition(&g).unwrap_err());
    }

    #[test]
    fn strings_survive_encoding(s in binary_string(12)) {
        prop_assert!(round_trip(&s).is_ok(), "{}", round_trip(&s).unwrap_err());
    }

    #[test]
    fn compose_size_adds_one(j in 0u64..6, k in 0u64..6) {
        let m = StructureMapSet::m_nat();
        let f = nat_const(&Universe::Nat, j);
        let g = MapExpr::chain((0..=k).map(|_| MapExpr::Gen(succ())));
        let sf = map_size(&f, &m).unwrap();
        let sg = map_size(&g, &m).unwrap();
        prop_assert!(sf >= 1 && sg >= 1);
        prop_assert_eq!(map_size(&MapExpr::compose(g, f), &m).unwrap(), 1 + sf + sg);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sums_are_checked_sections(w in proptest::collection::vec(-2i64..=2, 3), mask in 0u64..8) {
        let x = Universe::Fin(3);
        let (d, mut t, n) = catalog::sum(&x, mask).unwrap();
        let xq = Universe::prod([x.clone(), Universe::Rat]);
        t.insert(n.input, Subset::ext(&xq, (0..3).map(|i| Value::pair(Value::Nat(i), Value::rat(w[i as usize], 1)))).unwrap());
        let b = SolverBounds::default();
        let s = solve_least(&d, &t, &b).unwrap();
        prop_assert!(check_section(&d, &s, &b).unwrap().is_valid());
        let want: i64 = (0..3).filter(|i| mask >> i & 1 == 1).map(|i| w[i]).sum();
        prop_assert_eq!(s.values(n.output), BTreeSet::from([Value::rat(want, 1)]));
    }

    #[test]
    fn recursions_are_checked_sections(k in 0u64..12, seed in 0u64..4) {
        // factorial is graded by its first component, so its seed sits in row 0
        for (d, v) in [(catalog::factorial().unwrap(), Value::nat_pair(0, 1)), (catalog::fibonacci().unwrap(), Value::nat_pair(seed, 1))] {
            let s1 = d.node_id("S1").unwrap();
            let t = PartialSection::from([(s1, Subset::ext(&Universe::nat2(), [v]).unwrap())]);
            let b = SolverBounds::default().with_nat_max(k + seed);
            let s = solve(&d, &t, &b, Mode::Auto).unwrap();
            prop_assert!(check_section(&d, &s, &b).unwrap().is_valid());
        }
    }

    #[test]
    fn forcing_closures_grow_with_the_level(l in 0u64..12) {
        let d = catalog::fibonacci().unwrap();
        let t = PartialSection::from([(0, Subset::ext(&Universe::nat2(), [Value::nat_pair(1, 1)]).unwrap())]);
        let c = build_constraints(&d, &t).unwrap();
        let lo = closure_through_level(&c, l).unwrap();
        let hi = closure_through_level(&c, l + 1).unwrap();
        prop_assert!(lo.is_subset(&hi));
    }

    #[test]
    fn declaration_order_is_irrelevant(
        file in prop::sample::select(vec!["factorial.dgm", "fibonacci.dgm", "circle.dgm", "line.dgm", "dots.dgm", "patch.dgm"]),
        seed in any::<u64>(),
    ) {
        use rand::seq::SliceRandom;
        let mut decls = parse_decls(&fixture(file)).unwrap();
        let printed = print_spec(&decls);
        decls.shuffle(&mut common::rng(seed));
        let shuffled = print_spec(&decls);
        let (a, b) = (parse_spec(&printed).unwrap().model, parse_spec(&shuffled).unwrap().model);
        let target = |m: &setdiag::dsl::Model| {
            let s = solve(&m.diagram, &m.anchors, &m.bounds, Mode::Auto).unwrap();
            let t = m.target.unwrap();
            (m.diagram.nodes[t].name.clone(), s.values(t))
        };
        prop_assert_eq!(target(&a), target(&b));
        prop_assert_eq!(a.diagram.len(), b.diagram.len());
        prop_assert_eq!(a.diagram.arrows.len(), b.diagram.arrows.len());
    }
}

//! Generators and checks shared by the property suites.

use std::collections::BTreeSet;
use std::sync::Arc;

use proptest::collection::vec;
use proptest::prelude::*;
use setdiag::diagram::CrossSection;
use setdiag::machines::{encode_string, parse_string_subset};
use setdiag::map::structure::table;
use setdiag::map::{apply_arrow, Arrow, MapExpr};
use setdiag::solver::minimize;
use setdiag::{SolverBounds, Subset, Universe, Value};

/// Finite universes of at most 64 elements.
pub fn finite_universe() -> impl Strategy<Value = Universe> {
    prop_oneof![
        Just(Universe::Unit),
        Just(Universe::Bool),
        (1u64..=12).prop_map(Universe::Fin),
        (1u64..=8, 1u64..=8).prop_map(|(a, b)| Universe::prod([Universe::Fin(a), Universe::Fin(b)])),
        (1u64..=4, 1u64..=4, 1u64..=4).prop_map(|(a, b, c)| Universe::prod([Universe::Fin(a), Universe::Bool, Universe::Fin(b * c)])),
        Just(Universe::alphabet("abc", &["a", "b", "c"])),
    ]
}

pub fn subset_of(u: Universe) -> impl Strategy<Value = Subset> {
    let els = u.elements().expect("finite");
    vec(any::<bool>(), els.len()).prop_map(move |keep| {
        Subset::ext(&u, els.iter().zip(keep).filter(|p| p.1).map(|p| p.0.clone())).unwrap()
    })
}

/// A random total map between two finite universes, given by its table.
pub fn table_map(dom: Universe, cod: Universe) -> impl Strategy<Value = MapExpr> {
    let (xs, ys) = (dom.elements().unwrap(), cod.elements().unwrap());
    vec(0..ys.len(), xs.len()).prop_map(move |img| {
        let rows = xs.iter().zip(&img).map(|(x, &j)| (x.clone(), ys[j].clone())).collect();
        MapExpr::Gen(Arc::new(table("f", dom.clone(), cod.clone(), rows).unwrap()))
    })
}

/// `(f, A, B)` with `A` over the domain and `B` over the codomain.
pub fn map_and_sets() -> impl Strategy<Value = (MapExpr, Subset, Subset)> {
    (finite_universe(), finite_universe())
        .prop_flat_map(|(d, c)| (table_map(d.clone(), c.clone()), subset_of(d), subset_of(c)))
}

pub fn forward(f: &MapExpr, a: &Subset) -> Subset {
    apply_arrow(&Arrow::forward(f.clone(), 0, 1), a, &SolverBounds::default()).unwrap()
}

pub fn inverse(f: &MapExpr, b: &Subset) -> Subset {
    let bounds = SolverBounds::default();
    apply_arrow(&Arrow::inverse(f.clone(), 0, 1), b, &bounds).unwrap().normalize(&bounds).unwrap()
}

pub fn adjunction(f: &MapExpr, a: &Subset, b: &Subset) -> Result<(), String> {
    let lhs = forward(f, a).is_subset_of(b).unwrap();
    let rhs = a.is_subset_of(&inverse(f, b)).unwrap();
    if lhs == rhs {
        Ok(())
    } else {
        Err(format!("f = {f}, A = {a}, B = {b}: f(A) <= B is {lhs}, A <= f^-1(B) is {rhs}"))
    }
}

fn same(x: &Subset, y: &Subset) -> bool {
    let b = SolverBounds::default();
    x.normalize(&b).unwrap().values() == y.normalize(&b).unwrap().values()
}

pub fn de_morgan(a: &Subset, b: &Subset) -> Result<(), String> {
    let c = |s: &Subset| s.complement().unwrap();
    let checks = [
        ("not(a or b)", same(&c(&a.union(b).unwrap()), &c(a).intersect(&c(b)).unwrap())),
        ("not(a and b)", same(&c(&a.intersect(b).unwrap()), &c(a).union(&c(b)).unwrap())),
        ("not not a", same(&c(&c(a)), a)),
        ("a and not a", c(a).intersect(a).unwrap().normalize(&SolverBounds::default()).unwrap().is_empty() == Some(true)),
        ("a or not a", same(&c(a).union(a).unwrap(), &Subset::full(a.universe()))),
    ];
    match checks.iter().find(|c| !c.1) {
        None => Ok(()),
        Some((law, _)) => Err(format!("{law} fails for a = {a}, b = {b}")),
    }
}

/// Families of two-node sections over `P(fin(3))`, without repeats.
pub fn family() -> impl Strategy<Value = Vec<CrossSection>> {
    let u = Universe::Fin(3);
    vec((subset_of(u.clone()), subset_of(u)), 1..10).prop_map(|pairs| {
        let mut seen = BTreeSet::new();
        pairs
            .into_iter()
            .filter(|(x, y)| seen.insert((x.values().cloned(), y.values().cloned())))
            .map(|(x, y)| CrossSection::supplied(vec![x, y]))
            .collect()
    })
}

type Key = (BTreeSet<Value>, BTreeSet<Value>);

fn keys(g: &[CrossSection]) -> BTreeSet<Key> {
    g.iter().map(|s| (s.values(0), s.values(1))).collect()
}

/// `min_Y min_X G ∩ min_X min_Y G = min_X G ∩ min_Y G`, and the inclusion
/// `min_Y min_X G ⊇ min_X G ∩ min_Y G`.
pub fn min_composition(g: &[CrossSection]) -> Result<(), String> {
    let (x, y) = (0, 1);
    let yx = keys(&minimize(g, &[x, y]).unwrap());
    let xy = keys(&minimize(g, &[y, x]).unwrap());
    let mx = keys(&minimize(g, &[x]).unwrap());
    let my = keys(&minimize(g, &[y]).unwrap());
    let both: BTreeSet<Key> = mx.intersection(&my).cloned().collect();
    let lhs: BTreeSet<Key> = yx.intersection(&xy).cloned().collect();
    if lhs != both {
        return Err(format!("identity fails on a family of {}", g.len()));
    }
    if !both.is_subset(&yx) {
        return Err(format!("inclusion fails on a family of {}", g.len()));
    }
    Ok(())
}

pub fn round_trip(sigma: &str) -> Result<(), String> {
    let got = parse_string_subset(&encode_string(sigma));
    if got.string() == Some(sigma) {
        Ok(())
    } else {
        Err(format!("{sigma:?} read back as {got:?}"))
    }
}

pub fn binary_string(max: usize) -> impl Strategy<Value = String> {
    proptest::string::string_regex(&format!("[01]{{0,{max}}}")).unwrap()
}

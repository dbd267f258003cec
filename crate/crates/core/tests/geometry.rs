mod common;

use std::collections::BTreeSet;

use rand::Rng;
use setdiag::geometry::{
    build_pattern, derived_map_diagram, inf_by_key, ltsup_in_window, max_by_key, rasterize, solve_pattern, DerivedMap,
    PatternSpec, PlaneModel, Style, Viewport,
};
use setdiag::{Subset, Universe, Value};

use common::geom::{circle_scan, dots_oracle, golden, ifs, points, window};

#[test]
fn circles_match_a_window_scan() {
    let m = PlaneModel::integer(-5, 5);
    let spec = PatternSpec::Circle { centers: vec![m.pt(0, 0)], radii2: vec![Value::Int(25)] };
    let (pts, _) = solve_pattern(&spec, &m).unwrap();
    assert_eq!(pts.len(), 12);
    assert_eq!(points(&pts), circle_scan(-5, 5, (0, 0), 25));
    for (c, r2) in [((1, -1), 2), ((0, 2), 5), ((-2, 0), 9), ((3, 3), 1), ((0, 0), 0), ((1, 1), 3)] {
        let spec = PatternSpec::Circle { centers: vec![m.pt(c.0, c.1)], radii2: vec![Value::Int(r2)] };
        assert_eq!(points(&solve_pattern(&spec, &m).unwrap().0), circle_scan(-5, 5, c, r2), "{c:?} {r2}");
    }
    let two = PatternSpec::Circle { centers: vec![m.pt(-1, 0), m.pt(2, 1)], radii2: vec![Value::Int(4)] };
    let want: BTreeSet<_> = circle_scan(-5, 5, (-1, 0), 4).union(&circle_scan(-5, 5, (2, 1), 4)).copied().collect();
    assert_eq!(points(&solve_pattern(&two, &m).unwrap().0), want);
}

#[test]
fn lines_match_a_window_scan() {
    let m = PlaneModel::integer(-4, 4);
    for (p, v) in [((0, 0), (1, 1)), ((1, -2), (1, 0)), ((0, 1), (2, -1)), ((-3, 2), (0, 3))] {
        let spec = PatternSpec::Line { points: vec![m.pt(p.0, p.1)], directions: vec![m.pt(v.0, v.1)] };
        let want: BTreeSet<_> =
            window(-4, 4).filter(|&(x, y)| (-4..=4).any(|c| x - p.0 == c * v.0 && y - p.1 == c * v.1)).collect();
        assert_eq!(points(&solve_pattern(&spec, &m).unwrap().0), want, "{p:?} {v:?}");
    }
}

#[test]
fn dots_and_grids_match_recurrences() {
    let m = PlaneModel::integer(-8, 8);
    let spec = PatternSpec::Dots { seed: m.pt(0, 0), steps: vec![m.pt(1, 0)], cap: 3 };
    assert_eq!(points(&solve_pattern(&spec, &m).unwrap().0), BTreeSet::from([(0, 0), (1, 0), (2, 0), (3, 0)]));
    let grid = [(2, 0), (-2, 0), (0, 3), (0, -3)];
    for cap in 0..=2 {
        let spec = PatternSpec::Dots { seed: m.pt(1, 1), steps: grid.iter().map(|&(a, b)| m.pt(a, b)).collect(), cap };
        assert_eq!(points(&solve_pattern(&spec, &m).unwrap().0), dots_oracle((1, 1), &grid, cap), "cap {cap}");
    }
}

#[test]
fn grid_of_circles_is_the_union_of_circles() {
    let m = PlaneModel::integer(-7, 7);
    let steps = [(4, 0), (-4, 0), (0, 4), (0, -4)];
    let spec = PatternSpec::GridOfCircles { seed: m.pt(0, 0), steps: steps.iter().map(|&(a, b)| m.pt(a, b)).collect(), cap: 1, radii2: vec![Value::Int(1)] };
    let centers = dots_oracle((0, 0), &steps, 1);
    let mut want = BTreeSet::new();
    for c in &centers {
        let circle = PatternSpec::Circle { centers: vec![m.pt(c.0, c.1)], radii2: vec![Value::Int(1)] };
        want.extend(points(&solve_pattern(&circle, &m).unwrap().0));
    }
    let direct: BTreeSet<_> = centers.iter().flat_map(|&c| circle_scan(-7, 7, c, 1)).collect();
    assert_eq!(want, direct);
    assert_eq!(points(&solve_pattern(&spec, &m).unwrap().0), want);
}

#[test]
fn grid_of_lines() {
    let m = PlaneModel::integer(-4, 4);
    let spec = PatternSpec::GridOfLines { seed: m.pt(0, 0), steps: vec![m.pt(3, 0), m.pt(-3, 0)], cap: 1, directions: vec![m.pt(0, 1)] };
    let want: BTreeSet<_> = window(-4, 4).filter(|&(x, _)| x % 3 == 0).collect();
    assert_eq!(points(&solve_pattern(&spec, &m).unwrap().0), want);
}

#[test]
fn sierpinski_matches_the_ifs() {
    for depth in 0..=3u64 {
        let s = 1i64 << depth;
        let tri = [(0, 0), (4, 0), (0, 4)];
        let m = PlaneModel::rational(0, 4 * s);
        let p = |(x, y): (i64, i64)| m.pt(x * s, y * s);
        let spec = PatternSpec::Sierpinski { a: p(tri[0]), b: p(tri[1]), c: p(tri[2]), depth };
        let got = points(&solve_pattern(&spec, &m).unwrap().0);
        let want = ifs(&tri, depth);
        assert_eq!(got.len(), want.len(), "depth {depth}");
        assert_eq!(got, want, "depth {depth}");
    }
}

#[test]
fn patches_repeat_by_translation() {
    let m = PlaneModel::integer(-10, 10);
    let patch = [(0, 0), (1, 0), (0, 1), (1, 2)];
    let regular: Vec<(i64, i64)> = window(-1, 1).map(|(a, b)| (a * 4, b * 4)).collect();
    let mut r = common::rng(4);
    let arbitrary: Vec<(i64, i64)> = (0..6).map(|_| (r.gen_range(-8..=8), r.gen_range(-8..=8))).collect();
    for vectors in [regular, arbitrary] {
        let spec = PatternSpec::PatchRepeat {
            vectors: vectors.iter().map(|&(a, b)| m.pt(a, b)).collect(),
            patch: patch.iter().map(|&(a, b)| m.pt(a, b)).collect(),
        };
        let want: BTreeSet<_> = vectors.iter().flat_map(|&(a, b)| patch.iter().map(move |&(x, y)| (x + a, y + b))).collect();
        assert_eq!(points(&solve_pattern(&spec, &m).unwrap().0), want);
    }
}

#[test]
fn derived_maps_match_built_ins() {
    let mut r = common::rng(12);
    let (lo, hi) = (0, 15);
    for keys in 1..=5u64 {
        let x = Universe::Fin(keys);
        let rx = Universe::prod([Universe::Rat, x.clone()]);
        let inf = derived_map_diagram(DerivedMap::Inf, &x, lo, hi).unwrap();
        let max = derived_map_diagram(DerivedMap::Max, &x, lo, hi).unwrap();
        for _ in 0..6 {
            let n = r.gen_range(0..=8);
            let b: BTreeSet<Value> = (0..n).map(|_| Value::pair(Value::rat(r.gen_range(lo..=hi), 1), Value::Nat(r.gen_range(0..keys)))).collect();
            let s = Subset::ext(&rx, b.clone()).unwrap();
            assert_eq!(max.apply(&s).unwrap(), max_by_key(&b).unwrap(), "max {b:?}");
            assert_eq!(inf.apply(&s).unwrap(), inf_by_key(&b).unwrap(), "inf {b:?}");
        }
    }
    let l = derived_map_diagram(DerivedMap::Ltsup, &Universe::Unit, lo, hi).unwrap();
    for _ in 0..20 {
        let n = r.gen_range(0..=4);
        let a: BTreeSet<Value> = (0..n).map(|_| Value::rat(r.gen_range(lo..=hi), 1)).collect();
        assert_eq!(l.apply(&Subset::ext(&Universe::Rat, a.clone()).unwrap()).unwrap(), ltsup_in_window(&a, lo, hi));
    }
}

#[test]
fn circle_raster_is_byte_identical() {
    let m = PlaneModel::integer(-5, 5);
    let spec = PatternSpec::Circle { centers: vec![m.pt(0, 0)], radii2: vec![Value::Int(25)] };
    let r = build_pattern(&spec, &m).unwrap();
    let (pts, _) = solve_pattern(&spec, &m).unwrap();
    let s = Subset::ext(r.diagram.universe(r.target), pts).unwrap();
    let img = rasterize(&s, 11, 11, &Viewport::of_window(&m.bounds), &m.bounds).unwrap();
    assert_eq!(img.count(), 12);
    assert_eq!(img.to_ppm(&Style::default()), golden("circle_11x11.ppm"));
}

#[test]
fn sierpinski_raster_is_byte_identical() {
    let m = PlaneModel::rational(0, 32);
    let p = |x: i64, y: i64| m.pt(x, y);
    let spec = PatternSpec::Sierpinski { a: p(0, 0), b: p(32, 0), c: p(0, 32), depth: 3 };
    let (pts, _) = solve_pattern(&spec, &m).unwrap();
    let s = Subset::ext(&m.plane(), pts).unwrap();
    let img = rasterize(&s, 33, 33, &Viewport::of_window(&m.bounds), &m.bounds).unwrap();
    assert_eq!(img.to_ppm(&Style::default()), golden("sierpinski_33x33.ppm"));
}

fn measured(spec: &PatternSpec, m: &PlaneModel, names: &[&str], consts: Vec<Value>) -> u64 {
    use setdiag::measure::{constants_from_one, info_upper_bound};
    use setdiag::diagram::RepresentationData;
    let r = build_pattern(spec, m).unwrap();
    let (pts, _) = solve_pattern(spec, m).unwrap();
    let a = Subset::ext(r.diagram.universe(r.target), pts).unwrap();
    let (d, t, _) = constants_from_one(&r.diagram, &r.anchors).unwrap();
    let r1 = RepresentationData::new(d, t, r.target).with_bounds(r.bounds.clone());
    info_upper_bound(&r1, &a, &m.structure(names, consts).unwrap(), false).unwrap().total
}

#[test]
fn circle_and_line_totals() {
    let m = PlaneModel::integer(-5, 5);
    let p = m.pt(0, 0);
    let circle = PatternSpec::Circle { centers: vec![p.clone()], radii2: vec![Value::Int(25)] };
    assert_eq!(measured(&circle, &m, &["len2", "sub"], vec![p.clone(), Value::Int(25)]), 6);
    let v = m.pt(1, 2);
    let line = PatternSpec::Line { points: vec![p.clone()], directions: vec![v.clone()] };
    assert_eq!(measured(&line, &m, &["sub", "mult"], vec![p, v]), 7);
}

//! One line per acceptance criterion. Runs without the libtest harness so
//! the lines always print; exits non-zero if any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};
use setdiag::catalog::{self, Field};
use setdiag::diagram::{check_section, RepresentationData};
use setdiag::dsl::parse_spec;
use setdiag::forcing::{build_constraints, closure_through_level, is_one, read_string, BoolVar, IsOne, ReadOutcome};
use setdiag::geometry::{
    build_pattern, derived_map_diagram, inf_by_key, ltsup_in_window, max_by_key, rasterize, solve_pattern, DerivedMap,
    PatternSpec, PlaneModel, Style, Viewport,
};
use setdiag::machines::compile::ATTACH_BASE;
use setdiag::machines::dfa::word_value;
use setdiag::machines::{attach_program, compile_dfa, compile_tm, Dfa, TMSpec};
use setdiag::map::structure::{nat_const, StructureMapSet};
use setdiag::map::{map_size, MapExpr};
use setdiag::measure::info_upper_bound;
use setdiag::solver::{enumerate_sections, minimize, solve, solve_graded, solve_least, FreeSpec, Mode};
use setdiag::{Diagram, PartialSection, SolverBounds, Subset, Universe, Value};

use common::geom::{circle_scan, dots_oracle, golden, ifs, points, window};

const FACTORIAL_LIMIT: Duration = Duration::from_secs(1);
const FIBONACCI_LIMIT: Duration = Duration::from_secs(1);
const TM_LIMIT: Duration = Duration::from_secs(60);
const DECODE_BUDGET: u64 = 10_000_000;
/// Steps allowed for a member of the least solution to be forced.
const FORCING_BUDGET: u64 = 100_000;
const ADJUNCTION_CASES: u32 = 1000;
const PROPERTY_CASES: u32 = 256;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn anchored(d: &Diagram, node: &str, vals: impl IntoIterator<Item = Value>) -> PartialSection {
    let n = d.node_id(node).unwrap();
    PartialSection::from([(n, Subset::ext(d.universe(n), vals).unwrap())])
}

fn factorial_rows(max: u64) -> BTreeSet<Value> {
    let (mut n, mut f) = (0u64, 1u64);
    let mut out = BTreeSet::new();
    while n <= max {
        out.insert(Value::nat_pair(n, f));
        n += 1;
        f *= n;
    }
    out
}

fn c1_factorial() -> Outcome {
    let d = catalog::factorial().unwrap();
    let t = anchored(&d, "S1", [Value::nat_pair(0, 1)]);
    let start = Instant::now();
    let s = solve(&d, &t, &SolverBounds::default().with_nat_max(8), Mode::Auto).unwrap();
    let took = start.elapsed();
    let got = s.values(d.node_id("S2").unwrap());
    ensure!(got == factorial_rows(8), "S2 = {got:?}");
    ensure!(took < FACTORIAL_LIMIT, "took {took:?}");
    Ok(format!("9 rows up to (8,40320) in {took:.2?}"))
}

fn c2_fibonacci() -> Outcome {
    let d = catalog::fibonacci().unwrap();
    let t = anchored(&d, "S1", [Value::nat_pair(1, 1)]);
    let start = Instant::now();
    let s = solve(&d, &t, &SolverBounds::default().with_nat_max(13), Mode::Auto).unwrap();
    let took = start.elapsed();
    let want: BTreeSet<Value> = [(1, 1), (1, 2), (2, 3), (3, 5), (5, 8), (8, 13)].iter().map(|&(a, b)| Value::nat_pair(a, b)).collect();
    ensure!(s.values(d.node_id("S2").unwrap()) == want, "S2 = {:?}", s.values(1));
    // Fibonacci numbers whose successor is still inside the window
    let (mut a, mut b) = (1u64, 1u64);
    let mut fib = BTreeSet::new();
    while b <= 13 {
        fib.insert(Value::Nat(a));
        (a, b) = (b, a + b);
    }
    let s3 = s.values(d.node_id("S3").unwrap());
    ensure!(s3 == fib, "S3 = {s3:?}");
    ensure!(took < FIBONACCI_LIMIT, "took {took:?}");
    Ok(format!("S3 = {{1,2,3,5,8}} in {took:.2?}"))
}

fn measure_total(file: &str) -> Result<u64, String> {
    let argv = ["setdiag", "measure", "--json", fixture(file).to_str().unwrap()].map(String::from);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = setdiag::cli::main_with(argv, &mut out, &mut err);
    ensure!(code == 0, "exit {code}: {}", String::from_utf8_lossy(&err));
    let j: serde_json::Value = serde_json::from_slice(&out).map_err(|e| e.to_string())?;
    j["total"].as_u64().ok_or_else(|| format!("no total in {j}"))
}

fn c3_measure() -> Outcome {
    let circle = measure_total("circle.dgm")?;
    let line = measure_total("line.dgm")?;
    ensure!(circle == 6, "circle total {circle}");
    ensure!(line == 7, "line total {line}");
    let x = Universe::int2();
    let p = Value::int_pair(2, -1);
    let mut d = Diagram::new();
    let one = d.add_node("1", Universe::Unit, false);
    let s = d.add_node("X", x.clone(), false);
    d.forward(MapExpr::constant(&Universe::Unit, p.clone(), &x), one, s).unwrap();
    let t = PartialSection::from([(one, Subset::ext(&Universe::Unit, [Value::Unit]).unwrap())]);
    let r = RepresentationData::new(d, t, s);
    let m = StructureMapSet::new().with_const(p.clone());
    let point = info_upper_bound(&r, &Subset::ext(&x, [p]).unwrap(), &m, false).map_err(|e| e.to_string())?.total;
    ensure!(point == 1, "point total {point}");
    Ok("circle 6, line 7, point 1".into())
}

fn c4_size_atom() -> Outcome {
    let f = MapExpr::prod([MapExpr::Id(Universe::Nat), nat_const(&Universe::Nat, 1)]);
    let n = map_size(&f, &StructureMapSet::m_nat()).map_err(|e| e.to_string())?;
    ensure!(n == 5, "size {n}");
    Ok(format!("|{f}| = 5"))
}

fn c5_attach_bound() -> Outcome {
    let tm = TMSpec::parse(&std::fs::read_to_string(fixture("accept.tm")).unwrap()).unwrap();
    let c = compile_tm(&tm).unwrap();
    let c0 = attach_program(&c, "").unwrap().1.added;
    ensure!(c0 <= ATTACH_BASE, "c0 = {c0} > {ATTACH_BASE}");
    let mut checked = 0;
    let mut slack = u64::MAX;
    for len in 0..=12u32 {
        for bits in 0..(1u32 << len) {
            let p: String = (0..len).map(|i| if bits >> (len - 1 - i) & 1 == 1 { '1' } else { '0' }).collect();
            let added = attach_program(&c, &p).unwrap().1.added;
            let bound = 6 * len as u64 + c0;
            ensure!(added <= bound, "p = {p:?}: added {added} > {bound}");
            slack = slack.min(bound - added);
            checked += 1;
        }
    }
    Ok(format!("{checked} programs, c0 = {c0}, least slack {slack}"))
}

fn c6_tm_oracle() -> Outcome {
    let start = Instant::now();
    let mut r = common::rng(6);
    for case in 0..100 {
        let t = common::random_tm(&mut r);
        let sigma = common::random_input(&mut r, 4);
        common::tm::check(&t, &sigma).map_err(|e| format!("case {case} sigma={sigma:?}: {e}"))?;
    }
    let took = start.elapsed();
    ensure!(took < TM_LIMIT, "took {took:?}");
    Ok(format!("100/100 in {took:.2?}"))
}

fn c7_decoder() -> Outcome {
    let mut worst = 0;
    for (t, sigma, want) in common::accepting_pairs(7, 25) {
        let c = compile_tm(&t).unwrap();
        let (a, _) = attach_program(&c, &sigma).unwrap();
        let cs = build_constraints(&a.diagram, &a.anchors(None)).unwrap();
        match read_string(&cs, a.output, DECODE_BUDGET).map_err(|e| e.to_string())? {
            ReadOutcome::String { text, steps } => {
                ensure!(text == want, "sigma={sigma:?}: read {text:?}, want {want:?}");
                worst = worst.max(steps);
            }
            ReadOutcome::Exhausted { steps } => return Err(format!("sigma={sigma:?}: exhausted after {steps}")),
        }
    }
    Ok(format!("25/25, at most {worst} steps"))
}

/// Within the probe window of every node: each value of the least solution
/// is forced by `is_one`, and no other value is in the forcing closure
/// through `level`. `probe` must sit inside the solver window.
fn forcing_agrees(name: &str, d: &Diagram, t: &PartialSection, solve_b: &SolverBounds, probe: &SolverBounds, level: u64) -> Result<usize, String> {
    let s = solve_least(d, t, solve_b).map_err(|e| format!("{name}: {e}"))?;
    let c = build_constraints(d, t).map_err(|e| format!("{name}: {e}"))?;
    let closure = closure_through_level(&c, level).map_err(|e| format!("{name}: {e}"))?;
    let mut probed = 0;
    for n in 0..d.len() {
        let w = d.universe(n).window(probe).unwrap();
        ensure!(!w.truncated, "{name}: probe window of {} truncated", d.nodes[n].name);
        for v in w.values {
            let x = BoolVar::X(n, v.clone());
            let node = &d.nodes[n].name;
            if s.get(n).member(&v).unwrap() {
                let r = is_one(&c, &x, FORCING_BUDGET).unwrap();
                ensure!(matches!(r, IsOne::Forced { .. }), "{name}: {node} {v} is in the least solution but {r:?}");
            } else {
                ensure!(!closure.contains(&x), "{name}: {node} {v} is forced but not in the least solution");
            }
            probed += 1;
        }
    }
    Ok(probed)
}

fn c8_forcing() -> Outcome {
    let mut total = 0;
    let nat = |k| SolverBounds::default().with_nat_max(k);
    let f = catalog::factorial().unwrap();
    let t = anchored(&f, "S1", [Value::nat_pair(0, 1)]);
    total += forcing_agrees("factorial", &f, &t, &nat(24), &nat(7), 14)?;
    let f = catalog::fibonacci().unwrap();
    let t = anchored(&f, "S1", [Value::nat_pair(1, 1)]);
    total += forcing_agrees("fibonacci", &f, &t, &nat(40), &nat(9), 18)?;
    let dd = compile_dfa(&Dfa::even_ones()).unwrap();
    total += forcing_agrees("automaton", &dd.diagram, &dd.anchors(&[1, 0, 1]).unwrap(), &nat(6).with_grade_cap(6), &nat(3), 6)?;
    for (file, level) in [("factorial.dgm", 16), ("fibonacci.dgm", 26), ("circle.dgm", 10), ("line.dgm", 10), ("patch.dgm", 10)] {
        let doc = parse_spec(&std::fs::read_to_string(fixture(file)).unwrap()).map_err(|e| format!("{file}: {e:?}"))?;
        let m = doc.model;
        ensure!(!m.diagram.has_cmpl(), "{file} has a complement");
        // the probe is the fixture's window; the solver gets headroom past it
        let probe = SolverBounds { card_cap: 1 << 18, ..m.bounds.clone() };
        let wide = SolverBounds { nat_max: 3 * m.bounds.nat_max, ..m.bounds.clone() };
        total += forcing_agrees(file, &m.diagram, &m.anchors, &wide, &probe, level)?;
    }
    Ok(format!("{total} (node, value) probes on 8 fixtures"))
}

fn c9_graded() -> Outcome {
    // factorial: rows are phi^n(0,1)
    let f = catalog::factorial().unwrap();
    let t = anchored(&f, "S1", [Value::nat_pair(0, 1)]);
    for k in [0u64, 3, 8] {
        let s = solve_graded(&f, &t, &SolverBounds::default().with_grade_cap(k).with_nat_max(k)).unwrap();
        ensure!(s.values(1) == factorial_rows(k), "factorial K={k}");
    }
    // dots: the recurrence of translations
    let m = PlaneModel::integer(-8, 8);
    let steps = [(3, 0), (0, 3), (-2, 1)];
    for cap in 0..=3u64 {
        let spec = PatternSpec::Dots { seed: m.pt(0, 0), steps: steps.iter().map(|&(a, b)| m.pt(a, b)).collect(), cap };
        let r = build_pattern(&spec, &m).unwrap();
        let s = solve_graded(&r.diagram, &r.anchors, &r.bounds).unwrap();
        ensure!(points(&s.values(r.target)) == dots_oracle((0, 0), &steps, cap), "dots cap {cap}");
    }
    // automaton: (suffix, state, k) after k letters, then idling
    let dfa = Dfa::even_ones();
    let dd = compile_dfa(&dfa).unwrap();
    for w in [vec![], vec![1], vec![1, 1, 0], vec![0, 1, 0, 1, 1]] {
        let k = w.len() as u64 + 2;
        let b = SolverBounds::default().with_nat_max(k).with_grade_cap(k);
        let s = solve_graded(&dd.diagram, &dd.anchors(&w).unwrap(), &b).unwrap();
        let rows: BTreeSet<Value> = (0..=k as usize)
            .map(|i| {
                let j = i.min(w.len());
                Value::Tuple(vec![word_value(&w[j..]), Value::Nat(dfa.run(&w[..j]) as u64), Value::Nat(i as u64)])
            })
            .collect();
        ensure!(s.values(dd.history) == rows, "automaton {w:?}");
    }
    // machines: history rows of the step-by-step simulator
    let mut r = common::rng(9);
    for case in 0..20 {
        let t = common::random_tm(&mut r);
        let sigma = common::random_input(&mut r, 4);
        let c = compile_tm(&t).unwrap();
        let got = c.run(&sigma, common::tm::K).unwrap().history;
        ensure!(got == t.history_rows(&sigma, common::tm::K).unwrap(), "machine case {case}");
    }
    Ok("factorial, dots, automaton and 20 machines".into())
}

fn c10_geometry() -> Outcome {
    let m = PlaneModel::integer(-5, 5);
    let circle = PatternSpec::Circle { centers: vec![m.pt(0, 0)], radii2: vec![Value::Int(25)] };
    let (pts, _) = solve_pattern(&circle, &m).unwrap();
    ensure!(pts.len() == 12 && points(&pts) == circle_scan(-5, 5, (0, 0), 25), "circle");
    let line = PatternSpec::Line { points: vec![m.pt(1, -1)], directions: vec![m.pt(1, 2)] };
    let want: BTreeSet<_> = window(-5, 5).filter(|&(x, y)| 2 * (x - 1) == y + 1).collect();
    ensure!(points(&solve_pattern(&line, &m).unwrap().0) == want, "line");
    let g = PlaneModel::integer(-8, 8);
    let grid = [(2, 0), (-2, 0), (0, 3), (0, -3)];
    let dots = PatternSpec::Dots { seed: g.pt(1, 1), steps: grid.iter().map(|&(a, b)| g.pt(a, b)).collect(), cap: 2 };
    ensure!(points(&solve_pattern(&dots, &g).unwrap().0) == dots_oracle((1, 1), &grid, 2), "dot grid");
    for depth in 0..=3u64 {
        let s = 1i64 << depth;
        let q = PlaneModel::rational(0, 4 * s);
        let spec = PatternSpec::Sierpinski { a: q.pt(0, 0), b: q.pt(4 * s, 0), c: q.pt(0, 4 * s), depth };
        let got = points(&solve_pattern(&spec, &q).unwrap().0);
        let want = ifs(&[(0, 0), (4, 0), (0, 4)], depth);
        ensure!(got.len() == want.len() && got == want, "sierpinski depth {depth}: {} vs {}", got.len(), want.len());
    }
    let p = PlaneModel::integer(-10, 10);
    let vectors = [(0, 0), (4, 0), (0, 4), (-4, 4), (7, -3)];
    let patch = [(0, 0), (1, 0), (0, 1), (1, 2)];
    let spec = PatternSpec::PatchRepeat {
        vectors: vectors.iter().map(|&(a, b)| p.pt(a, b)).collect(),
        patch: patch.iter().map(|&(a, b)| p.pt(a, b)).collect(),
    };
    let want: BTreeSet<_> = vectors.iter().flat_map(|&(a, b)| patch.iter().map(move |&(x, y)| (x + a, y + b))).collect();
    ensure!(points(&solve_pattern(&spec, &p).unwrap().0) == want, "patch");
    let img = rasterize(&Subset::ext(&m.plane(), pts).unwrap(), 11, 11, &Viewport::of_window(&m.bounds), &m.bounds).unwrap();
    ensure!(img.to_ppm(&Style::default()) == golden("circle_11x11.ppm"), "circle golden");
    let q = PlaneModel::rational(0, 32);
    let spec = PatternSpec::Sierpinski { a: q.pt(0, 0), b: q.pt(32, 0), c: q.pt(0, 32), depth: 3 };
    let s = Subset::ext(&q.plane(), solve_pattern(&spec, &q).unwrap().0).unwrap();
    let img = rasterize(&s, 33, 33, &Viewport::of_window(&q.bounds), &q.bounds).unwrap();
    ensure!(img.to_ppm(&Style::default()) == golden("sierpinski_33x33.ppm"), "sierpinski golden");
    Ok("circle, line, dot grid, sierpinski 0..=3, patch, 2 goldens".into())
}

fn c11_sum_and_field() -> Outcome {
    let x = Universe::Fin(4);
    let a = [3i64, -2, 4, 1];
    let xq = Universe::prod([x.clone(), Universe::Rat]);
    let input = Subset::ext(&xq, (0..4).map(|i| Value::pair(Value::Nat(i), Value::rat(a[i as usize], 1)))).unwrap();
    for mask in 0..16u64 {
        let (d, mut t, n) = catalog::sum(&x, mask).unwrap();
        t.insert(n.input, input.clone());
        let s = solve_least(&d, &t, &SolverBounds::default()).unwrap();
        let want: i64 = (0..4).filter(|i| mask >> i & 1 == 1).map(|i| a[i]).sum();
        ensure!(s.values(n.output) == BTreeSet::from([Value::rat(want, 1)]), "mask {mask:04b}: {:?}", s.values(n.output));
    }
    let f = Field {
        nv: 2,
        nl: 2,
        unary: vec![vec![1, 2], vec![2, 0]],
        pair: vec![
            vec![vec![vec![0, 0], vec![0, 3]], vec![vec![0, 0], vec![1, 0]]],
            vec![vec![vec![0, 0], vec![0, 0]], vec![vec![0, 0], vec![0, 0]]],
        ],
    };
    let (d, t, n) = catalog::markov_field(&f).unwrap();
    let vl = Universe::prod([Universe::Fin(2), Universe::Fin(2)]);
    let pts: Vec<Value> = (0..2).flat_map(|v| (0..2).map(move |l| Value::nat_pair(v, l))).collect();
    let free = FreeSpec::new().with(n.config, FreeSpec::all_subsets(&vl, &pts).unwrap());
    let b = SolverBounds::default();
    let all = enumerate_sections(&d, &t, &free, &b).unwrap();
    ensure!(all.len() == 4, "{} labellings", all.len());
    for s in &all {
        ensure!(check_section(&d, s, &b).unwrap().is_valid(), "invalid section");
    }
    let best: BTreeSet<BTreeSet<Value>> = minimize(&all, &[n.bound]).unwrap().iter().map(|s| s.values(n.config)).collect();
    let energy = |la: u64, lb: u64| f.energy(&[la, lb]);
    let min = (0..4).map(|k| energy(k / 2, k % 2)).min().unwrap();
    let argmin: BTreeSet<BTreeSet<Value>> = (0..4u64)
        .filter(|&k| energy(k / 2, k % 2) == min)
        .map(|k| BTreeSet::from([Value::nat_pair(0, k / 2), Value::nat_pair(1, k % 2)]))
        .collect();
    ensure!(best == argmin, "minimized {best:?}, argmin {argmin:?}");
    Ok(format!("16 subset sums; argmin energy {min}"))
}

fn c12_derived() -> Outcome {
    use rand::Rng;
    let mut r = common::rng(12);
    let (lo, hi) = (0, 15);
    let mut cases = 0;
    for keys in 1..=5u64 {
        let x = Universe::Fin(keys);
        let rx = Universe::prod([Universe::Rat, x.clone()]);
        let inf = derived_map_diagram(DerivedMap::Inf, &x, lo, hi).unwrap();
        let max = derived_map_diagram(DerivedMap::Max, &x, lo, hi).unwrap();
        for _ in 0..8 {
            let n = r.gen_range(0..=8);
            let b: BTreeSet<Value> = (0..n).map(|_| Value::pair(Value::rat(r.gen_range(lo..=hi), 1), Value::Nat(r.gen_range(0..keys)))).collect();
            let s = Subset::ext(&rx, b.clone()).unwrap();
            ensure!(max.apply(&s).unwrap() == max_by_key(&b).unwrap(), "Max on {b:?}");
            ensure!(inf.apply(&s).unwrap() == inf_by_key(&b).unwrap(), "Inf on {b:?}");
            cases += 2;
        }
    }
    let l = derived_map_diagram(DerivedMap::Ltsup, &Universe::Unit, lo, hi).unwrap();
    for _ in 0..20 {
        let n = r.gen_range(0..=4);
        let a: BTreeSet<Value> = (0..n).map(|_| Value::rat(r.gen_range(lo..=hi), 1)).collect();
        ensure!(l.apply(&Subset::ext(&Universe::Rat, a.clone()).unwrap()).unwrap() == ltsup_in_window(&a, lo, hi), "ltsup on {a:?}");
        cases += 1;
    }
    Ok(format!("{cases} inputs, keys 1..=5, 16 scalars"))
}

fn runner(cases: u32, seed: u8) -> TestRunner {
    let cfg = Config { cases, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(cfg, TestRng::from_seed(RngAlgorithm::ChaCha, &[seed; 32]))
}

fn run_prop<S: proptest::strategy::Strategy>(
    cases: u32,
    seed: u8,
    strat: S,
    check: impl Fn(S::Value) -> Result<(), String>,
) -> Result<(), String> {
    runner(cases, seed)
        .run(&strat, |v| check(v).map_err(TestCaseError::fail))
        .map_err(|e| e.to_string())
}

fn c13_properties() -> Outcome {
    use common::props::*;
    run_prop(ADJUNCTION_CASES, 1, map_and_sets(), |(f, a, b)| adjunction(&f, &a, &b))?;
    let sets = finite_universe().prop_flat_map(|u| (subset_of(u.clone()), subset_of(u)));
    run_prop(PROPERTY_CASES, 2, sets, |(a, b)| de_morgan(&a, &b))?;
    run_prop(PROPERTY_CASES, 3, family(), |g| min_composition(&g))?;
    for len in 0..=12u32 {
        for bits in 0..(1u32 << len) {
            let s: String = (0..len).map(|i| if bits >> i & 1 == 1 { '1' } else { '0' }).collect();
            round_trip(&s)?;
        }
    }
    Ok(format!("adjunction x{ADJUNCTION_CASES}, De Morgan x{PROPERTY_CASES}, min-composition x{PROPERTY_CASES}, all 8191 strings"))
}

use proptest::strategy::Strategy;

fn main() {
    let criteria: [(&str, fn() -> Outcome); 13] = [
        ("factorial", c1_factorial),
        ("fibonacci", c2_fibonacci),
        ("measure totals", c3_measure),
        ("size atom", c4_size_atom),
        ("attach bound", c5_attach_bound),
        ("machine oracle", c6_tm_oracle),
        ("string decoder", c7_decoder),
        ("forcing = least solution", c8_forcing),
        ("graded = row iteration", c9_graded),
        ("geometry", c10_geometry),
        ("sum and field", c11_sum_and_field),
        ("derived maps", c12_derived),
        ("properties", c13_properties),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let out = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panic".into()))
        });
        let took = start.elapsed();
        match out {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{took:.2?}]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} [{took:.2?}]", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}

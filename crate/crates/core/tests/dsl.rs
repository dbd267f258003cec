use std::path::PathBuf;

use setdiag::dsl::{parse_decls, parse_spec, print_spec, DiagKind};
use setdiag::solver::{solve, Mode};
use setdiag::Value;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "fixtures", name].iter().collect();
    std::fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

const DGM: &[&str] = &["factorial.dgm", "fibonacci.dgm", "circle.dgm", "line.dgm", "dots.dgm", "patch.dgm", "sierpinski.dgm"];

#[test]
fn factorial_fixture_shape() {
    let doc = parse_spec(&fixture("factorial.dgm")).unwrap();
    assert_eq!((doc.node_count(), doc.arrow_count(), doc.anchor_count()), (2, 2, 1));
}

#[test]
fn every_fixture_round_trips() {
    for name in DGM {
        let text = fixture(name);
        let doc = parse_spec(&text).unwrap_or_else(|e| panic!("{name}: {}", e[0]));
        let printed = print_spec(&doc.decls);
        let again = parse_spec(&printed).unwrap_or_else(|e| panic!("{name} reprint: {}\n{printed}", e[0]));
        assert_eq!(again, doc, "{name}");
        assert_eq!(print_spec(&again.decls), printed, "{name}");
    }
}

#[test]
fn fixtures_solve_to_their_targets() {
    for name in DGM {
        let doc = parse_spec(&fixture(name)).unwrap();
        let m = &doc.model;
        let s = solve(&m.diagram, &m.anchors, &m.bounds, Mode::Auto).unwrap();
        if let (Some(t), Some(want)) = (m.target, &m.expected) {
            assert_eq!(&s.values(t), want.values().unwrap(), "{name}");
        }
    }
}

#[test]
fn unknown_map_names_the_identifier() {
    let e = parse_spec("node A : N;\nnode B : N;\nfwd frob : A -> B;\n").unwrap_err();
    assert_eq!(e.len(), 1);
    assert_eq!((e[0].kind, e[0].line, e[0].col), (DiagKind::Resolution, 3, 5));
    assert!(e[0].message.contains("`frob`"), "{}", e[0]);
    assert!(e[0].expected.is_some());
}

#[test]
fn syntax_errors_carry_location_and_hint() {
    let e = parse_decls("node A : N\nnode B : N;").unwrap_err();
    assert_eq!((e.kind, e.line, e.col), (DiagKind::Syntax, 2, 1));
    assert_eq!(e.expected.as_deref(), Some("`;`"));
    let e = parse_decls("nodes A : N;").unwrap_err();
    assert!(e.expected.unwrap().contains("`node`"));
    let e = parse_decls("fwd p1 : A = B;").unwrap_err();
    assert_eq!((e.kind, e.line, e.col, e.expected.as_deref()), (DiagKind::Syntax, 1, 12, Some("`->`")));
    let e = parse_decls("fwd p1 : A => B;").unwrap_err();
    assert_eq!((e.kind, e.line, e.col), (DiagKind::Lexical, 1, 13));
}

#[test]
fn resolution_reports_every_error() {
    let text = "node A : N;\nnode A : Y;\nfwd p3 : A -> C;\nbounds speed = 3;\n";
    let e = parse_spec(text).unwrap_err();
    let lines: Vec<u32> = e.iter().map(|d| d.line).collect();
    assert_eq!(lines, vec![2, 2, 3, 4], "{e:?}");
}

#[test]
fn domains_are_checked() {
    let e = parse_spec("gen succ = builtin succ;\nnode A : N * N;\nnode B : N;\nfwd succ : A -> B;\n").unwrap_err();
    assert!(e[0].message.contains("domain"), "{}", e[0]);
    let e = parse_spec("node A : N;\nnode B : N;\nfwd p2 : A -> B;\n").unwrap_err();
    assert!(e[0].message.contains("out of range"), "{}", e[0]);
}

#[test]
fn values_read_as_they_print() {
    let doc = parse_spec("node A : Q * Z;\nanchor A = {(4/2, -3), (1/2, 0)};\n").unwrap();
    let vals: Vec<String> = doc.model.anchors[&0].values().unwrap().iter().map(Value::to_string).collect();
    assert_eq!(vals, ["(1/2,0)", "(2,-3)"]);
}

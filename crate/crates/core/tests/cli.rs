use std::path::PathBuf;
use std::process::{Command, Output};

fn fixtures() -> PathBuf {
    [env!("CARGO_MANIFEST_DIR"), "fixtures"].iter().collect()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_setdiag")).args(args).current_dir(fixtures()).output().expect("spawn")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn reason(o: &Output) -> String {
    let e = String::from_utf8_lossy(&o.stderr).into_owned();
    assert_eq!(e.lines().count(), 1, "{e}");
    e
}

#[test]
fn solve_factorial_lists_six_pairs() {
    let o = run(&["solve", "factorial.dgm", "--nat-max", "5"]);
    assert!(o.status.success());
    let j: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let s2: Vec<&str> = j["sections"]["S2"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    assert_eq!(s2, ["(0,1)", "(1,1)", "(2,2)", "(3,6)", "(4,24)", "(5,120)"]);
}

fn table_total(o: &Output) -> u64 {
    let t = stdout(o);
    let line = t.lines().find(|l| l.starts_with("total")).unwrap();
    line.split_whitespace().last().unwrap().parse().unwrap()
}

#[test]
fn measure_tables() {
    let c = run(&["measure", "circle.dgm"]);
    assert!(c.status.success());
    assert_eq!(table_total(&c), 6);
    assert_eq!(table_total(&run(&["measure", "line.dgm"])), 7);
    let j: serde_json::Value = serde_json::from_slice(&run(&["measure", "circle.dgm", "--json"]).stdout).unwrap();
    assert_eq!(j["total"], 6);
    assert_eq!(j["bound"], "upper");
}

#[test]
fn run_then_decode() {
    let o = run(&["run-tm", "accept.tm", "--input", "0", "--steps", "4"]);
    assert!(o.status.success());
    let dir = std::env::temp_dir().join(format!("setdiag-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let f = dir.join("run.json");
    std::fs::write(&f, &o.stdout).unwrap();
    let d = run(&["decode", f.to_str().unwrap()]);
    assert_eq!(stdout(&d), "0\n");
    let forced = run(&["decode", "--tm", "accept.tm", "--program", "0"]);
    assert_eq!(stdout(&forced), "0\n");
    let starved = run(&["decode", "--tm", "accept.tm", "--program", "0", "--budget", "3"]);
    assert_eq!(starved.status.code(), Some(2));
    assert!(reason(&starved).starts_with("setdiag: exit=2 kind=budget-exhausted"));
}

#[test]
fn every_fixture_checks() {
    for f in ["factorial.dgm", "fibonacci.dgm", "circle.dgm", "line.dgm", "dots.dgm", "patch.dgm", "sierpinski.dgm", "mrf.dgm"] {
        let o = run(&["check", f]);
        assert!(o.status.success(), "{f}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(stdout(&o).ends_with("ok\n"));
    }
}

#[test]
fn outputs_are_byte_stable() {
    let cmds: &[&[&str]] = &[
        &["solve", "fibonacci.dgm"],
        &["solve", "dots.dgm", "--mode", "graded"],
        &["trace", "factorial.dgm", "--nat-max", "4"],
        &["measure", "line.dgm", "--json"],
        &["compile-tm", "accept.tm"],
        &["attach", "accept.tm", "--program", "0110"],
        &["enumerate", "mrf.dgm"],
    ];
    for c in cmds {
        let (a, b) = (run(c), run(c));
        assert!(a.status.success(), "{c:?}: {}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.stdout, b.stdout, "{c:?}");
    }
}

#[test]
fn render_writes_images() {
    let dir = std::env::temp_dir().join(format!("setdiag-render-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let ppm = dir.join("circle.ppm");
    let o = run(&["render", "--spec", "circle.dgm", "--out", ppm.to_str().unwrap(), "--canvas", "11x11", "--window", "-5,-5,5,5"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let golden = std::fs::read(fixtures().join("golden/circle_11x11.ppm")).unwrap();
    assert_eq!(std::fs::read(&ppm).unwrap(), golden);
    let svg = dir.join("circle.svg");
    assert!(run(&["render", "--spec", "circle.dgm", "--out", svg.to_str().unwrap(), "--canvas", "11x11"]).status.success());
    assert!(std::fs::read_to_string(&svg).unwrap().starts_with("<svg"));
}

#[test]
fn exit_codes() {
    let usage = run(&["solve"]);
    assert_eq!(usage.status.code(), Some(1));
    assert!(reason(&usage).starts_with("setdiag: exit=1 kind=usage"));
    let dir = std::env::temp_dir().join(format!("setdiag-exit-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.dgm");
    std::fs::write(&bad, "node A : N;\nnode B : N;\nfwd frob : A -> B;\n").unwrap();
    let o = run(&["check", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let r = reason(&o);
    assert!(r.contains("kind=resolution-error") && r.contains("3:5") && r.contains("frob"), "{r}");
    let wrong = dir.join("wrong.dgm");
    let text = std::fs::read_to_string(fixtures().join("circle.dgm")).unwrap().replace("(5, 0)};", "(5, 1)};");
    std::fs::write(&wrong, text).unwrap();
    let o = run(&["check", wrong.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(reason(&o).starts_with("setdiag: exit=3 kind="));
    let o = run(&["solve", "dots.dgm", "--iter-cap", "2", "--mode", "least"]);
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(reason(&o).starts_with("setdiag: exit=2 kind=iteration-cap"));
}

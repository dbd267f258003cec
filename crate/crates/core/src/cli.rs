//! The `setdiag` command line. Every failure ends in one stderr line
//! `setdiag: exit=<code> kind=<kind> reason=<text>` and exit code 1 (usage),
//! 2 (budget or window exhausted) or 3 (constraint violation).

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value as Json};

use crate::bounds::SolverBounds;
use crate::diagram::{check_represents, check_section, CrossSection, Representation, RepresentationData};
use crate::dsl::{parse_spec, SpecDocument};
use crate::error::Error;
use crate::forcing::{build_constraints, read_string, ReadOutcome};
use crate::geometry::{rasterize, Style, Viewport};
use crate::machines::compile::{attach_program, compile_tm, size_ledger, ATTACH_BASE};
use crate::machines::tm::TMSpec;
use crate::machines::{parse_string_subset, StringParse};
use crate::measure::{constants_from_one, info_upper_bound, unit_anchored};
use crate::solver::{enumerate_sections, minimize, solve, solve_traced, Mode};
use crate::subset::Subset;
use crate::universe::Universe;
use crate::value::Value;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub kind: String,
    pub reason: String,
}

impl CliError {
    pub fn new(code: i32, kind: &str, reason: impl Into<String>) -> CliError {
        CliError { code, kind: kind.into(), reason: reason.into() }
    }

    fn usage(reason: impl Into<String>) -> CliError {
        CliError::new(1, "usage", reason)
    }

    /// The single machine-readable line.
    pub fn line(&self) -> String {
        let reason = self.reason.replace('\n', " ");
        format!("setdiag: exit={} kind={} reason={}", self.code, self.kind, reason.trim())
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        let (code, kind) = match &e {
            Error::IterationCap(_) => (2, "iteration-cap"),
            Error::NotEnumerable(_) => (2, "not-enumerable"),
            Error::Overflow(_) => (2, "overflow"),
            Error::OutsideWindow(_) => (2, "outside-window"),
            Error::NonMaterializableUnion(_) | Error::NonMaterializableComparison(_) => (2, "not-materializable"),
            Error::InfiniteConjunction(_) => (2, "infinite-conjunction"),
            Error::Parse(_) => (1, "parse"),
            Error::Io(_) => (1, "io"),
            Error::UnknownGenerator(_) | Error::UnknownNode(_) | Error::UnknownDerived(_) => (1, "unknown-name"),
            Error::DegenerateCanvas(_) => (1, "degenerate-canvas"),
            Error::NotRepresenting(_) => (3, "not-representing"),
            Error::NotGenerated(_) => (3, "not-generated"),
            Error::GradingViolated { .. } => (3, "grading-violated"),
            Error::Underdetermined(_) => (3, "underdetermined"),
            Error::NotStringEncoding(_) => (3, "not-string-encoding"),
            _ => (3, "constraint"),
        };
        CliError::new(code, kind, e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "setdiag", version, about = "Solve, check and measure powerset diagrams")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Default)]
pub struct BoundArgs {
    /// Largest natural number enumerated.
    #[arg(long)]
    pub nat_max: Option<u64>,
    /// Integer window, as `lo,hi`.
    #[arg(long, allow_hyphen_values = true)]
    pub int_window: Option<String>,
    /// Rational window denominator.
    #[arg(long)]
    pub rat_den: Option<i64>,
    /// Highest row evaluated for graded nodes.
    #[arg(long)]
    pub grade_cap: Option<u64>,
    /// Worklist step limit.
    #[arg(long)]
    pub iter_cap: Option<u64>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeArg {
    Auto,
    Least,
    Graded,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Auto => Mode::Auto,
            ModeArg::Least => Mode::Least,
            ModeArg::Graded => Mode::Graded,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse, resolve, solve and verify a spec (section constraints, and the
    /// target's expected set when given).
    Check {
        file: PathBuf,
        #[command(flatten)]
        bounds: BoundArgs,
    },
    /// Solve and print the cross section as JSON.
    Solve {
        file: PathBuf,
        #[command(flatten)]
        bounds: BoundArgs,
        #[arg(long, value_enum, default_value = "auto")]
        mode: ModeArg,
        /// Print only these nodes.
        #[arg(long = "node")]
        nodes: Vec<String>,
    },
    /// Enumerate sections over the free nodes, minimized when the spec says so.
    Enumerate {
        file: PathBuf,
        #[command(flatten)]
        bounds: BoundArgs,
    },
    /// Size ledger of the spec as a candidate upper bound.
    Measure {
        file: PathBuf,
        #[arg(long)]
        json: bool,
        /// Count complement arrows as generated.
        #[arg(long)]
        allow_cmpl: bool,
        #[command(flatten)]
        bounds: BoundArgs,
    },
    /// Compile a machine description and print the diagram and its size.
    CompileTm { file: PathBuf },
    /// Run the compiled machine on an input.
    RunTm {
        file: PathBuf,
        #[arg(long, default_value = "")]
        input: String,
        #[arg(long, default_value_t = 16)]
        steps: u64,
    },
    /// Attach a program to the compiled machine and report the added size.
    Attach {
        file: PathBuf,
        #[arg(long)]
        program: String,
    },
    /// Print the string encoded by a run's output (a `run-tm` JSON file, or
    /// `-` for stdin), or read it by forcing with `--tm`.
    Decode {
        file: Option<PathBuf>,
        #[arg(long)]
        tm: Option<PathBuf>,
        #[arg(long)]
        program: Option<String>,
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
    },
    /// Rasterize the target node of a plane spec.
    Render {
        #[arg(long)]
        spec: PathBuf,
        /// Output path; `.ppm` or `.svg`.
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "64x64")]
        canvas: String,
        /// Plane rectangle `x0,y0,x1,y1`; defaults to the integer window.
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
        /// Node to draw instead of the target.
        #[arg(long)]
        node: Option<String>,
        #[command(flatten)]
        bounds: BoundArgs,
    },
    /// Solve and print each element as it enters a node.
    Trace {
        file: PathBuf,
        #[command(flatten)]
        bounds: BoundArgs,
        #[arg(long, value_enum, default_value = "auto")]
        mode: ModeArg,
    },
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::new(1, "io", format!("{}: {e}", path.display())))
}

fn load_spec(path: &Path) -> CliResult<SpecDocument> {
    let text = read(path)?;
    parse_spec(&text).map_err(|ds| {
        let first = &ds[0];
        let kind = format!("{}-error", first.kind);
        let more = if ds.len() > 1 { format!(" (+{} more)", ds.len() - 1) } else { String::new() };
        CliError::new(1, &kind, format!("{}:{first}{more}", path.display()))
    })
}

fn load_tm(path: &Path) -> CliResult<TMSpec> {
    Ok(TMSpec::parse(&read(path)?)?)
}

fn pair_arg(s: &str, sep: char, what: &str) -> CliResult<(i64, i64)> {
    let bad = || CliError::usage(format!("{what} {s:?} is not a{sep}b"));
    let (a, b) = s.split_once(sep).ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

impl BoundArgs {
    fn apply(&self, mut b: SolverBounds) -> CliResult<SolverBounds> {
        if let Some(n) = self.nat_max {
            b.nat_max = n;
        }
        if let Some(w) = &self.int_window {
            let (lo, hi) = pair_arg(w, ',', "--int-window")?;
            if lo > hi {
                return Err(CliError::usage(format!("--int-window {w} is empty")));
            }
            b = b.with_int_window(lo, hi);
        }
        if let Some(d) = self.rat_den {
            b = b.with_rat_den(d);
        }
        if let Some(k) = self.grade_cap {
            b.grade_cap = k;
        }
        if let Some(k) = self.iter_cap {
            b = b.with_iter_cap(k);
        }
        Ok(b)
    }
}

fn pretty(j: &Json) -> String {
    let mut s = serde_json::to_string_pretty(j).unwrap_or_default();
    s.push('\n');
    s
}

fn strings(vs: impl IntoIterator<Item = Value>) -> Json {
    Json::Array(vs.into_iter().map(|v| Json::String(v.to_string())).collect())
}

fn section_json(doc: &SpecDocument, s: &CrossSection, only: &[String]) -> CliResult<Json> {
    let mut j = s.to_json(&doc.model.diagram);
    if !only.is_empty() {
        let all = j["sections"].as_object().cloned().unwrap_or_default();
        let mut keep = serde_json::Map::new();
        for n in only {
            let v = all.get(n).ok_or_else(|| CliError::usage(format!("no node named {n}")))?;
            keep.insert(n.clone(), v.clone());
        }
        j["sections"] = Json::Object(keep);
    }
    Ok(j)
}

fn solve_doc(doc: &SpecDocument, b: &SolverBounds, mode: Mode) -> CliResult<CrossSection> {
    let m = &doc.model;
    if !m.free.is_empty() {
        return Err(CliError::usage("the spec has free nodes; use `enumerate`"));
    }
    Ok(solve(&m.diagram, &m.anchors, b, mode)?)
}

/// Run one command, writing its payload to `out`.
pub fn run(cli: Cli, out: &mut dyn Write) -> CliResult<()> {
    let mut emit = |s: &str| out.write_all(s.as_bytes()).map_err(|e| CliError::new(1, "io", e.to_string()));
    match cli.command {
        Command::Check { file, bounds } => {
            let doc = load_spec(&file)?;
            let m = &doc.model;
            let b = bounds.apply(m.bounds.clone())?;
            emit(&format!(
                "parsed: {} nodes, {} arrows, {} anchors\n",
                doc.node_count(),
                doc.arrow_count(),
                doc.anchor_count()
            ))?;
            let sections = if m.free.is_empty() {
                vec![solve(&m.diagram, &m.anchors, &b, Mode::Auto)?]
            } else {
                enumerate_sections(&m.diagram, &m.anchors, &m.free, &b)?
            };
            for s in &sections {
                let v = check_section(&m.diagram, s, &b)?;
                if let Some(bad) = v.violation {
                    let w = bad.witness.map(|w| format!(" at {w}")).unwrap_or_default();
                    return Err(CliError::new(3, "section-violated", format!("{}: {}{w}", bad.node, bad.reason)));
                }
            }
            emit(&format!("sections: {} valid\n", sections.len()))?;
            if let (Some(r), Some(a)) = (m.representation(), &m.expected) {
                let name = &m.diagram.nodes[r.target].name;
                match check_represents(&r.with_bounds(b), a)? {
                    Representation::Holds { within_window } => {
                        let how = if within_window { " (checked inside the window)" } else { "" };
                        emit(&format!("target {name}: represents the expected set{how}\n"))?;
                    }
                    Representation::Fails { witness } => {
                        return Err(CliError::new(3, "not-representing", format!("target {name} differs at {witness}")));
                    }
                    Representation::Vacuous => {
                        return Err(CliError::new(3, "not-representing", "no section extends the anchors"));
                    }
                }
            }
            emit("ok\n")
        }
        Command::Solve { file, bounds, mode, nodes } => {
            let doc = load_spec(&file)?;
            let b = bounds.apply(doc.model.bounds.clone())?;
            let s = solve_doc(&doc, &b, mode.into())?;
            emit(&pretty(&section_json(&doc, &s, &nodes)?))
        }
        Command::Trace { file, bounds, mode } => {
            let doc = load_spec(&file)?;
            let m = &doc.model;
            let b = bounds.apply(m.bounds.clone())?;
            let (_, steps) = solve_traced(&m.diagram, &m.anchors, &b, mode.into())?;
            let mut text = String::new();
            for st in steps {
                let via = match st.arrow {
                    Some(a) => format!("arrow {a}"),
                    None => "all inputs".into(),
                };
                let row = st.row.map(|r| format!(" row {r}")).unwrap_or_default();
                text.push_str(&format!("{} += {} via {via}{row}\n", m.diagram.nodes[st.node].name, st.value));
            }
            emit(&text)
        }
        Command::Enumerate { file, bounds } => {
            let doc = load_spec(&file)?;
            let m = &doc.model;
            let b = bounds.apply(m.bounds.clone())?;
            let all = enumerate_sections(&m.diagram, &m.anchors, &m.free, &b)?;
            let kept = if m.minimize.is_empty() { all.clone() } else { minimize(&all, &m.minimize)? };
            let secs = kept.iter().map(|s| section_json(&doc, s, &[])).collect::<CliResult<Vec<_>>>()?;
            let minimized: Vec<&str> = m.minimize.iter().map(|&n| m.diagram.nodes[n].name.as_str()).collect();
            emit(&pretty(&json!({"enumerated": all.len(), "minimize": minimized, "sections": secs})))
        }
        Command::Measure { file, json: as_json, allow_cmpl, bounds } => {
            let doc = load_spec(&file)?;
            let m = &doc.model;
            let b = bounds.apply(m.bounds.clone())?;
            let target = m.target.ok_or_else(|| CliError::usage("measure needs a `target` declaration"))?;
            let a = match &m.expected {
                Some(a) => a.clone(),
                None => solve_doc(&doc, &b, Mode::Auto)?.get(target).clone(),
            };
            let (d, t) = if unit_anchored(&m.diagram, &m.anchors) {
                (m.diagram.clone(), m.anchors.clone())
            } else {
                let (d, t, _) = constants_from_one(&m.diagram, &m.anchors)?;
                (d, t)
            };
            let r = RepresentationData::new(d, t, target).with_bounds(b).with_minimize(m.minimize.clone());
            let rep = info_upper_bound(&r, &a, &m.structure(), allow_cmpl)?;
            if as_json {
                emit(&pretty(&rep.to_json(&r.diagram)))
            } else {
                emit(&rep.table(&r.diagram))
            }
        }
        Command::CompileTm { file } => {
            let c = compile_tm(&load_tm(&file)?)?;
            let ledger = size_ledger(&c.diagram)?;
            let total: u64 = ledger.iter().map(|x| x.1).sum();
            let j = json!({
                "size": total,
                "ledger": ledger.iter().map(|&(a, s)| json!({"arrow": a, "size": s})).collect::<Vec<_>>(),
                "diagram": c.diagram.to_json(),
            });
            emit(&pretty(&j))
        }
        Command::RunTm { file, input, steps } => {
            let spec = load_tm(&file)?;
            if !input.chars().all(|c| c == '0' || c == '1') {
                return Err(CliError::usage(format!("--input {input:?} is not binary")));
            }
            let c = compile_tm(&spec)?;
            let o = c.run(&input, steps)?;
            let halted = if o.state.contains(&Value::Nat(spec.qa as u64)) {
                "accept"
            } else if o.state.contains(&Value::Nat(spec.qr as u64)) {
                "reject"
            } else {
                "running"
            };
            let output = o.output.values().cloned().unwrap_or_default();
            let j = json!({
                "input": input,
                "steps": steps,
                "halted": halted,
                "state": strings(o.state),
                "output": strings(output),
                "truncated": o.truncated,
            });
            emit(&pretty(&j))
        }
        Command::Attach { file, program } => {
            let c = compile_tm(&load_tm(&file)?)?;
            let (_, rep) = attach_program(&c, &program)?;
            let j = json!({
                "program": program,
                "added": rep.added,
                "bound": rep.bound,
                "base": ATTACH_BASE,
                "arrows": rep.arrows.iter().map(|&(a, s)| json!({"arrow": a, "size": s})).collect::<Vec<_>>(),
            });
            emit(&pretty(&j))
        }
        Command::Decode { file, tm, program, budget } => {
            let text = match (file, tm) {
                (Some(f), None) => decode_file(&f)?,
                (None, Some(t)) => {
                    let p = program.ok_or_else(|| CliError::usage("--tm needs --program"))?;
                    let (c, _) = attach_program(&compile_tm(&load_tm(&t)?)?, &p)?;
                    let sys = build_constraints(&c.diagram, &c.anchors(None))?;
                    match read_string(&sys, c.output, budget)? {
                        ReadOutcome::String { text, .. } => text,
                        ReadOutcome::Exhausted { steps } => {
                            return Err(CliError::new(2, "budget-exhausted", format!("no string forced within {steps} steps")));
                        }
                    }
                }
                _ => return Err(CliError::usage("decode takes a run file or --tm, not both")),
            };
            emit(&format!("{text}\n"))
        }
        Command::Render { spec, out: path, canvas, window, node, bounds } => {
            let doc = load_spec(&spec)?;
            let m = &doc.model;
            let b = bounds.apply(m.bounds.clone())?;
            let (w, h) = pair_arg(&canvas, 'x', "--canvas")?;
            if w <= 0 || h <= 0 {
                return Err(CliError::usage(format!("--canvas {canvas} is empty")));
            }
            let vp = match &window {
                Some(s) => Viewport::parse(s)?,
                None => Viewport::of_window(&b),
            };
            let n = match &node {
                Some(name) => m.diagram.node_id(name).map_err(|_| CliError::usage(format!("no node named {name}")))?,
                None => m.target.ok_or_else(|| CliError::usage("render needs a target or --node"))?,
            };
            let s = solve_doc(&doc, &b, Mode::Auto)?;
            let img = rasterize(s.get(n), w as usize, h as usize, &vp, &b)?;
            let style = Style::default();
            let bytes = match path.extension().and_then(|e| e.to_str()) {
                Some("ppm") => img.to_ppm(&style),
                Some("svg") => img.to_svg(&style).into_bytes(),
                _ => return Err(CliError::usage(format!("{}: output must end in .ppm or .svg", path.display()))),
            };
            std::fs::write(&path, bytes).map_err(|e| CliError::new(1, "io", format!("{}: {e}", path.display())))?;
            emit(&format!("{}: {w}x{h}, {} marked pixels\n", path.display(), img.count()))
        }
    }
}

/// A run file's `output` list (or a bare list) of `(i,x)` pairs.
fn decode_file(path: &Path) -> CliResult<String> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s).map_err(|e| CliError::new(1, "io", e.to_string()))?;
        s
    } else {
        read(path)?
    };
    let j: Json = serde_json::from_str(&text).map_err(|e| CliError::new(1, "parse", format!("{}: {e}", path.display())))?;
    let list = match &j {
        Json::Array(a) => a.clone(),
        Json::Object(o) => o.get("output").and_then(Json::as_array).cloned().ok_or_else(|| CliError::new(1, "parse", "no `output` list"))?,
        _ => return Err(CliError::new(1, "parse", "expected a list or a run object")),
    };
    let vals = list
        .iter()
        .map(|v| v.as_str().ok_or_else(|| Error::Parse(format!("{v} is not a value string"))).and_then(Value::parse_text))
        .collect::<crate::error::Result<Vec<_>>>()?;
    let a = Subset::ext_coerced(&Universe::nat2(), vals)?;
    match parse_string_subset(&a) {
        p @ StringParse::String(_) => Ok(p.string().unwrap_or_default().to_string()),
        other => Err(CliError::new(3, "not-string-encoding", format!("{other:?}"))),
    }
}

/// Parse `argv` and run; returns the exit code.
pub fn main_with(argv: impl IntoIterator<Item = String>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let first = e.to_string().lines().next().unwrap_or("").trim_start_matches("error: ").to_string();
            let _ = writeln!(err, "{}", CliError::usage(first).line());
            return 1;
        }
    };
    match run(cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "{}", e.line());
            e.code
        }
    }
}

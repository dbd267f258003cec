//! Deterministic Turing machines as diagrams generated by `{0, succ}`.
//!
//! The history node `H ⊆ ℕ⁴` holds rows `(position, symbol, state, step)`.
//! Row 0 comes from the input through `init`, each later row from the
//! previous one through `δ*`, and the output node reads the accepting cells
//! through `θ`. Every arrow is a direct image or preimage of a map built from
//! `succ`, the constant 0, identities and projections.

use std::collections::BTreeSet;

use crate::bounds::SolverBounds;
use crate::diagram::{CrossSection, Diagram, PartialSection};
use crate::error::{Error, Result};
use crate::machines::tm::TMSpec;
use crate::map::expr::MapExpr;
use crate::map::structure::{nat_const, succ, StructureMapSet};
use crate::solver::solve_graded;
use crate::subset::Subset;
use crate::universe::Universe;
use crate::value::Value;

/// Diagram-building shorthand over `ℕᵏ` carriers.
pub(crate) struct Kit {
    pub d: Diagram,
    pub one: usize,
    names: BTreeSet<String>,
}

pub(crate) fn nat_pow(k: usize) -> Universe {
    if k == 1 {
        Universe::Nat
    } else {
        Universe::prod(vec![Universe::Nat; k])
    }
}

/// `π_idx : ℕᵏ → ℕ^|idx|`, zero-based.
pub(crate) fn pi(k: usize, idx: &[usize]) -> MapExpr {
    let u = nat_pow(k);
    match idx {
        [i] if k == 1 && *i == 0 => MapExpr::Id(u),
        [i] => MapExpr::proj(&u, *i),
        _ => MapExpr::proj_multi(&u, idx),
    }
}

pub(crate) fn c(k: usize, v: usize) -> MapExpr {
    nat_const(&nat_pow(k), v as u64)
}

pub(crate) fn sp1(k: usize) -> MapExpr {
    MapExpr::compose(MapExpr::Gen(succ()), pi(k, &[0]))
}

/// `(succ∘π1) × π2 × … × πk` on `ℕᵏ`.
pub(crate) fn shift(k: usize) -> MapExpr {
    let mut parts = vec![sp1(k)];
    parts.extend((1..k).map(|i| pi(k, &[i])));
    MapExpr::prod(parts)
}

pub(crate) fn prod(parts: Vec<MapExpr>) -> MapExpr {
    MapExpr::prod(parts)
}

impl Kit {
    pub fn new() -> Kit {
        let mut d = Diagram::new();
        let one = d.add_node("1", Universe::Unit, false);
        Kit { d, one, names: BTreeSet::from(["1".to_string()]) }
    }

    pub fn from(d: Diagram, one: usize) -> Kit {
        let names = d.nodes.iter().map(|n| n.name.clone()).collect();
        Kit { d, one, names }
    }

    pub fn node(&mut self, name: &str, k: usize, union: bool) -> usize {
        assert!(self.names.insert(name.to_string()), "duplicate node name {name}");
        self.d.add_node(name, nat_pow(k), union)
    }

    /// A union node holding the listed tuples, fed by constants from `1`.
    pub fn konst(&mut self, name: &str, k: usize, tuples: &[Vec<usize>]) -> Result<usize> {
        let n = self.node(name, k, true);
        for t in tuples {
            let f = if k == 1 {
                nat_const(&Universe::Unit, t[0] as u64)
            } else {
                prod(t.iter().map(|&v| nat_const(&Universe::Unit, v as u64)).collect())
            };
            self.d.forward(f, self.one, n)?;
        }
        Ok(n)
    }

    pub fn fwd(&mut self, src: usize, f: MapExpr, tgt: usize) -> Result<usize> {
        self.d.forward(f, src, tgt)
    }

    pub fn inv(&mut self, src: usize, f: MapExpr, tgt: usize) -> Result<usize> {
        self.d.inverse(f, src, tgt)
    }

    pub fn id(&mut self, src: usize, tgt: usize) -> Result<usize> {
        let u = self.d.universe(src).clone();
        self.d.forward(MapExpr::Id(u), src, tgt)
    }

    /// `χ` on `ℕ²`: `{(i,k)} ↦ {(j,k) | j ≠ i}`. Returns the union node.
    pub fn chi(&mut self, prefix: &str, src: usize) -> Result<usize> {
        let up = self.node(&format!("{prefix}.S2"), 2, true);
        let down = self.node(&format!("{prefix}.S3"), 2, true);
        let out = self.node(&format!("{prefix}.S4"), 2, true);
        self.fwd(src, shift(2), up)?;
        self.fwd(up, shift(2), up)?;
        self.inv(src, shift(2), down)?;
        self.inv(down, shift(2), down)?;
        self.id(up, out)?;
        self.id(down, out)?;
        Ok(out)
    }
}

/// Constant nodes shared by the fragments.
struct Consts {
    qa: usize,
    qe: usize,
    zero: usize,
    ea: usize,
    run: usize,
    halt: usize,
    box_run: usize,
    box_halt: usize,
    non_box: usize,
}

#[derive(Debug, Clone)]
pub struct CompiledMachine {
    pub diagram: Diagram,
    pub one: usize,
    pub input: usize,
    pub output: usize,
    /// `π3(H) ∩ {q_A, q_R}`.
    pub state: usize,
    pub history: usize,
    pub spec: TMSpec,
    /// Program pinned to the input node by [`attach_program`].
    pub program: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MachineOutcome {
    pub state: BTreeSet<Value>,
    pub output: Subset,
    pub history: BTreeSet<Value>,
    pub truncated: bool,
    pub section: CrossSection,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttachReport {
    pub arrows: Vec<(usize, u64)>,
    pub added: u64,
    pub bound: u64,
}

pub fn compile_tm(spec: &TMSpec) -> Result<CompiledMachine> {
    spec.validate()?;
    if !spec.is_deterministic() {
        return Err(Error::MalformedMachine(
            "row diagrams hold one configuration per step; use the configuration diagram for nondeterministic machines".into(),
        ));
    }
    let t = spec.normalized();
    let (n, m) = (t.states, t.symbols);
    let (qe, bx) = (t.q_e(), t.end_mark());
    let running: Vec<usize> = (0..n).filter(|&q| q != t.qa).collect();
    let mut k = Kit::new();
    let cs = Consts {
        qa: k.konst("qA", 1, &[vec![t.qa]])?,
        qe: k.konst("qe", 1, &[vec![qe]])?,
        zero: k.konst("zero", 1, &[vec![0]])?,
        ea: k.konst("qe+qA", 1, &[vec![qe], vec![t.qa]])?,
        run: k.konst("Qrun", 1, &running.iter().map(|&q| vec![q]).collect::<Vec<_>>())?,
        halt: k.konst("Halt", 1, &[vec![t.qa], vec![t.qr]])?,
        box_run: k.konst("box*Qrun", 2, &running.iter().map(|&q| vec![bx, q]).collect::<Vec<_>>())?,
        box_halt: k.konst("box*(qe+qA)", 2, &[vec![bx, qe], vec![bx, t.qa]])?,
        non_box: k.konst("Theta", 1, &(0..m).map(|x| vec![x]).collect::<Vec<_>>())?,
    };

    // init
    let s1 = k.node("S", 2, true);
    let i2 = k.node("init.S2", 2, false);
    let i2a = k.node("init.S2a", 1, false);
    let i2b = k.node("init.S2b", 1, false);
    k.id(s1, i2)?;
    k.fwd(s1, pi(2, &[0]), i2a)?;
    k.inv(i2a, MapExpr::Gen(succ()), i2b)?;
    k.inv(i2b, pi(2, &[0]), i2)?;
    let i3 = k.node("init.S3", 2, true);
    k.fwd(s1, prod(vec![pi(2, &[0]), c(2, qe)]), i3)?;
    let q0 = prod(vec![nat_const(&Universe::Unit, 0), nat_const(&Universe::Unit, t.q0 as u64)]);
    k.fwd(k.one, q0, i3)?;
    let i4 = k.node("init.S4", 1, false);
    k.inv(s1, prod(vec![pi(1, &[0]), c(1, 0)]), i4)?;
    k.inv(s1, prod(vec![pi(1, &[0]), c(1, 1)]), i4)?;
    let i5 = k.node("init.S5", 2, true);
    k.id(i2, i5)?;
    k.fwd(i4, prod(vec![pi(1, &[0]), c(1, bx)]), i5)?;
    let i6 = k.node("init.S6", 4, false);
    k.inv(i5, pi(4, &[0, 1]), i6)?;
    k.inv(i3, pi(4, &[0, 2]), i6)?;
    k.inv(cs.zero, pi(4, &[3]), i6)?;
    let h = k.node("H", 4, true);
    eta(&mut k, &cs, &t, "init.eta", i6, h)?;
    k.d.grade(h, pi(4, &[3]), None)?;

    // δ*
    let step = prod(vec![pi(4, &[0]), pi(4, &[1]), pi(4, &[2]), MapExpr::compose(MapExpr::Gen(succ()), pi(4, &[3]))]);
    let d2 = k.node("delta.S2", 4, false);
    k.fwd(h, step.clone(), d2)?;
    k.inv(cs.run, pi(4, &[2]), d2)?;
    let d4 = k.node("delta.S4", 4, false);
    k.fwd(h, step, d4)?;
    k.inv(cs.ea, pi(4, &[2]), d4)?;
    let d3 = k.node("delta.S3", 5, true);
    for x in 0..m {
        for &q in &running {
            let b = k.node(&format!("delta.B.{x}.{q}"), 2, false);
            k.inv(d2, prod(vec![pi(2, &[0]), c(2, x), c(2, q), pi(2, &[1])]), b)?;
            for mv in t.moves(x, q) {
                let f = prod(vec![pi(2, &[0]), c(2, mv.write), c(2, mv.next), c(2, usize::from(mv.right)), pi(2, &[1])]);
                k.fwd(b, f, d3)?;
            }
        }
    }
    let c1 = k.node("delta.chi.S1", 2, false);
    k.fwd(d2, pi(4, &[0, 3]), c1)?;
    let d5 = k.chi("delta.chi", c1)?;
    let d7 = k.node("delta.S7", 3, false);
    k.fwd(d4, pi(4, &[0, 2, 3]), d7)?;
    k.inv(cs.qa, pi(3, &[1]), d7)?;
    let ka = k.node("delta.acceptsteps", 1, false);
    k.fwd(d7, pi(3, &[2]), ka)?;
    k.inv(ka, pi(2, &[1]), d5)?;
    let d8 = k.node("delta.S8", 3, false);
    k.inv(d5, pi(3, &[0, 2]), d8)?;
    k.fwd(d4, pi(4, &[0, 1, 3]), d8)?;
    let d6 = k.node("delta.S6", 3, true);
    k.fwd(d3, pi(5, &[0, 1, 4]), d6)?;
    k.id(d8, d6)?;
    // ψ
    let p2 = k.node("psi.S2", 4, false);
    k.fwd(d3, pi(5, &[0, 2, 3, 4]), p2)?;
    let p3 = k.node("psi.S3", 3, false);
    k.inv(p2, prod(vec![pi(3, &[0]), pi(3, &[1]), c(3, 1), pi(3, &[2])]), p3)?;
    let p5 = k.node("psi.S5", 2, false);
    k.inv(p2, prod(vec![c(2, 0), pi(2, &[0]), c(2, 0), pi(2, &[1])]), p5)?;
    let d11 = k.node("delta.S11", 3, true);
    k.inv(p2, prod(vec![sp1(3), pi(3, &[1]), c(3, 0), pi(3, &[2])]), d11)?;
    k.fwd(p3, shift(3), d11)?;
    k.fwd(p5, prod(vec![c(2, 0), pi(2, &[0]), pi(2, &[1])]), d11)?;
    // φ
    k.id(d7, d11)?;
    k.inv(d7, shift(3), d11)?;
    k.fwd(d7, shift(3), d11)?;
    k.inv(cs.qe, pi(3, &[1]), d11)?;
    let d9 = k.node("delta.S9", 4, false);
    k.inv(d6, pi(4, &[0, 1, 3]), d9)?;
    k.inv(d11, pi(4, &[0, 2, 3]), d9)?;
    eta(&mut k, &cs, &t, "delta.eta", d9, h)?;

    // accepted cells, termination, halting state
    let s3 = k.node("S3", 4, false);
    k.id(h, s3)?;
    k.inv(cs.qa, pi(4, &[2]), s3)?;
    let a = k.node("theta.S1", 2, false);
    k.fwd(s3, pi(4, &[0, 1]), a)?;
    let out = theta(&mut k, &t, a)?;
    let state = k.node("state", 1, false);
    k.fwd(h, pi(4, &[2]), state)?;
    k.id(cs.halt, state)?;

    Ok(CompiledMachine { diagram: k.d, one: k.one, input: s1, output: out, state, history: h, spec: spec.clone(), program: None })
}

/// `η`: a running head on the end mark becomes a blank followed by a new
/// end mark. The stale end-mark entry under such a head is dropped, so each
/// cell keeps one plain entry.
fn eta(k: &mut Kit, cs: &Consts, t: &TMSpec, p: &str, src: usize, dst: usize) -> Result<()> {
    let (qe, bx) = (t.q_e(), t.end_mark());
    let e1 = k.node(&format!("{p}.S1"), 4, false);
    k.id(src, e1)?;
    k.inv(cs.box_run, pi(4, &[1, 2]), e1)?;
    k.fwd(e1, prod(vec![pi(4, &[0]), c(4, t.blank), pi(4, &[2]), pi(4, &[3])]), dst)?;
    k.fwd(e1, prod(vec![sp1(4), c(4, bx), c(4, qe), pi(4, &[3])]), dst)?;
    k.fwd(e1, prod(vec![pi(4, &[0]), c(4, t.blank), c(4, qe), pi(4, &[3])]), dst)?;
    let e2 = k.node(&format!("{p}.S2"), 4, false);
    k.id(src, e2)?;
    k.inv(cs.non_box, pi(4, &[1]), e2)?;
    k.id(e2, dst)?;
    let r = k.node(&format!("{p}.run"), 4, false);
    k.id(src, r)?;
    k.inv(cs.run, pi(4, &[2]), r)?;
    let hd = k.node(&format!("{p}.head"), 2, false);
    k.fwd(r, pi(4, &[0, 3]), hd)?;
    let free = k.chi(&format!("{p}.chi"), hd)?;
    let acc = k.node(&format!("{p}.acc"), 4, false);
    k.id(src, acc)?;
    k.inv(cs.qa, pi(4, &[2]), acc)?;
    let ka = k.node(&format!("{p}.acceptsteps"), 1, false);
    k.fwd(acc, pi(4, &[3]), ka)?;
    k.inv(ka, pi(2, &[1]), free)?;
    let e3 = k.node(&format!("{p}.S3"), 4, false);
    k.id(src, e3)?;
    k.inv(cs.box_halt, pi(4, &[1, 2]), e3)?;
    k.inv(free, pi(4, &[0, 3]), e3)?;
    k.id(e3, dst)?;
    Ok(())
}

/// `θ`: binary cells up to the first blank, terminated by a double entry.
fn theta(k: &mut Kit, t: &TMSpec, a: usize) -> Result<usize> {
    let bx = t.end_mark();
    let t5 = k.node("theta.S5", 2, true);
    k.fwd(a, shift(2), t5)?;
    k.fwd(k.one, prod(vec![nat_const(&Universe::Unit, 0), nat_const(&Universe::Unit, 0)]), t5)?;
    let t2 = k.node("theta.S2", 3, false);
    k.inv(t5, pi(3, &[0, 1]), t2)?;
    k.inv(a, pi(3, &[0, 2]), t2)?;
    let t4 = k.konst("theta.S4", 2, &[vec![0, t.blank], vec![1, t.blank], vec![0, bx], vec![1, bx]])?;
    let t6 = k.konst("theta.S6", 2, &[vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]])?;
    let t3 = k.node("theta.S3", 3, false);
    k.id(t2, t3)?;
    k.inv(t4, pi(3, &[1, 2]), t3)?;
    let t7 = k.node("theta.S7", 3, false);
    k.id(t2, t7)?;
    k.inv(t6, pi(3, &[1, 2]), t7)?;
    let out = k.node("T", 2, true);
    for (src, name) in [(t3, "theta.alpha3"), (t7, "theta.alpha7")] {
        let mid = k.node(name, 2, false);
        k.fwd(src, pi(3, &[0, 1]), mid)?;
        k.inv(mid, shift(2), out)?;
    }
    k.fwd(t3, prod(vec![pi(3, &[0]), c(3, 0)]), out)?;
    k.fwd(t3, prod(vec![pi(3, &[0]), c(3, 1)]), out)?;
    Ok(out)
}

/// Per-arrow size against `{0, succ}`.
pub fn size_ledger(d: &Diagram) -> Result<Vec<(usize, u64)>> {
    crate::measure::ledger(d, &StructureMapSet::m_nat())
}

/// Size added by attaching the empty program.
pub const ATTACH_BASE: u64 = 9;

/// Pins the input node to `p̄` with a `succ` chain `A_0 → A_1 → …` and the
/// arrows `id × p[i]` from `A_i`, closed by `id × 0` and `id × 1` from
/// `A_|p|`.
pub fn attach_program(c: &CompiledMachine, p: &str) -> Result<(CompiledMachine, AttachReport)> {
    if c.program.is_some() {
        return Err(Error::Malformed("a program is already attached".into()));
    }
    if !p.chars().all(|ch| ch == '0' || ch == '1') {
        return Err(Error::Malformed(format!("program {p:?} is not binary")));
    }
    let first = c.diagram.arrows.len();
    let mut k = Kit::from(c.diagram.clone(), c.one);
    let mark = |b: usize| prod(vec![MapExpr::Id(Universe::Nat), c_nat(b)]);
    let mut a = k.node("prog.A0", 1, false);
    k.fwd(k.one, MapExpr::constant(&Universe::Unit, Value::Nat(0), &Universe::Nat), a)?;
    for (i, ch) in p.chars().enumerate() {
        k.fwd(a, mark(usize::from(ch == '1')), c.input)?;
        let next = k.node(&format!("prog.A{}", i + 1), 1, false);
        k.fwd(a, MapExpr::Gen(succ()), next)?;
        a = next;
    }
    k.fwd(a, mark(0), c.input)?;
    k.fwd(a, mark(1), c.input)?;
    let ledger = size_ledger(&k.d)?;
    let arrows: Vec<(usize, u64)> = ledger[first..].to_vec();
    let added = arrows.iter().map(|x| x.1).sum();
    let bound = 6 * p.len() as u64 + ATTACH_BASE;
    if added > bound {
        return Err(Error::Malformed(format!("attached size {added} exceeds {bound}")));
    }
    let mut out = c.clone();
    out.diagram = k.d;
    out.program = Some(p.to_string());
    Ok((out, AttachReport { arrows, added, bound }))
}

fn c_nat(b: usize) -> MapExpr {
    nat_const(&Universe::Nat, b as u64)
}

impl CompiledMachine {
    /// `1 ↦ {()}`, plus `S ↦ σ̄` when no program is attached.
    pub fn anchors(&self, sigma: Option<&str>) -> PartialSection {
        let mut t = PartialSection::new();
        t.insert(self.one, Subset::ext(&Universe::Unit, [Value::Unit]).expect("unit"));
        if self.program.is_none() {
            t.insert(self.input, crate::machines::encode_string(sigma.unwrap_or("")));
        }
        t
    }

    /// Window wide enough for `k_max` rows over an input of length `len`.
    pub fn bounds(&self, len: usize, k_max: u64) -> SolverBounds {
        let span = (len as u64 + k_max + 3).max(self.spec.states as u64 + 2).max(self.spec.symbols as u64 + 2);
        SolverBounds::default().with_nat_max(span).with_grade_cap(k_max)
    }

    pub fn size(&self) -> Result<u64> {
        Ok(size_ledger(&self.diagram)?.iter().map(|x| x.1).sum())
    }

    /// Solve with history rows `0..=k_max`.
    pub fn run(&self, sigma: &str, k_max: u64) -> Result<MachineOutcome> {
        let len = self.program.as_deref().unwrap_or(sigma).len();
        let t = self.anchors(Some(sigma));
        let s = solve_graded(&self.diagram, &t, &self.bounds(len, k_max))?;
        let vals = |n: usize| s.values(n);
        Ok(MachineOutcome {
            state: vals(self.state),
            output: s.get(self.output).clone(),
            history: vals(self.history),
            truncated: s.truncated,
            section: s,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machines::parse_string_subset;
    use crate::machines::tm::Halt;

    fn immediate(accept: bool) -> TMSpec {
        let mut t = TMSpec::new(3, 3, 2, 0, 1, 2);
        let q = if accept { 1 } else { 2 };
        for x in 0..3 {
            t.set(x, 0, x, q, true);
        }
        t
    }

    fn left_loop() -> TMSpec {
        let mut t = TMSpec::new(3, 3, 2, 0, 1, 2);
        for x in 0..3 {
            t.set(x, 0, x, 0, false);
        }
        t
    }

    #[test]
    fn immediate_accept() {
        let c = compile_tm(&immediate(true)).unwrap();
        let r = c.run("0", 4).unwrap();
        assert_eq!(r.state, BTreeSet::from([Value::Nat(1)]));
        assert_eq!(parse_string_subset(&r.output).string(), Some("0"));
        assert_eq!(r.history, c.spec.history_rows("0", 4).unwrap());
    }

    #[test]
    fn immediate_reject() {
        let c = compile_tm(&immediate(false)).unwrap();
        let r = c.run("0", 4).unwrap();
        assert_eq!(r.state, BTreeSet::from([Value::Nat(2)]));
        assert_eq!(r.output.len(), Some(0));
        assert_eq!(r.history, c.spec.history_rows("0", 4).unwrap());
    }

    #[test]
    fn non_halting() {
        let c = compile_tm(&left_loop()).unwrap();
        let r = c.run("01", 6).unwrap();
        assert!(r.state.is_empty());
        assert_eq!(r.output.len(), Some(0));
        assert!(r.truncated);
        assert_eq!(c.spec.simulate("01", 6).unwrap().halt, Halt::Running);
    }

    #[test]
    fn attach_sizes() {
        let c = compile_tm(&immediate(true)).unwrap();
        for (p, size) in [("", 9), ("1", 15), ("0", 13)] {
            let (_, rep) = attach_program(&c, p).unwrap();
            assert_eq!(rep.added, size, "{p:?}");
        }
        let base = c.size().unwrap();
        let (a, _) = attach_program(&c, "10").unwrap();
        assert_eq!(a.size().unwrap(), base + 9 + 6 + 4);
        let r = a.run("", 6).unwrap();
        assert_eq!(parse_string_subset(&r.output).string(), Some("10"));
    }

    #[test]
    fn nondeterministic_specs_are_refused() {
        let mut t = immediate(true);
        t.add(0, 0, 1, 0, true);
        assert!(matches!(compile_tm(&t), Err(Error::MalformedMachine(_))));
    }
}

//! Configuration-level machine diagrams: the history node holds whole
//! configurations `(tape, state, head, step)` and the step map is a single
//! generator. Nondeterministic machines get one step generator per choice.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::bounds::SolverBounds;
use crate::diagram::{Diagram, PartialSection};
use crate::error::{Error, Result};
use crate::machines::tm::TMSpec;
use crate::map::expr::{GenDef, MapExpr};
use crate::solver::solve_graded;
use crate::subset::Subset;
use crate::universe::Universe;
use crate::value::Value;

#[derive(Debug, Clone)]
pub struct ConfigMachine {
    pub diagram: Diagram,
    pub input: usize,
    pub history: usize,
    pub state: usize,
    pub spec: TMSpec,
    start: usize,
    halting: usize,
}

/// The `j`-th choice of `δ*`, repeating the last choice when a cell has
/// fewer. Halting configurations only advance the step.
fn step_gen(t: &TMSpec, j: usize, u: &Universe) -> GenDef {
    let t = t.clone();
    GenDef::new(format!("delta*{j}"), u.clone(), u.clone(), move |v| {
        let bad = || Error::Domain(format!("delta* at {v}"));
        let c = v.as_tuple().ok_or_else(bad)?;
        let (Value::Seq(tape), Some(q), Some(n), Some(k)) = (&c[0], c[1].as_nat(), c[2].as_nat(), c[3].as_nat()) else {
            return Err(bad());
        };
        let k1 = Value::Nat(k + 1);
        let (q, n) = (q as usize, n as usize);
        if q == t.qa || q == t.qr {
            return Ok(Value::Tuple(vec![c[0].clone(), c[1].clone(), c[2].clone(), k1]));
        }
        let x = tape.get(n).map_or(Some(t.blank), |s| s.as_nat().map(|x| x as usize)).ok_or_else(bad)?;
        let ms = t.moves(x, q);
        let mv = ms[j.min(ms.len() - 1)];
        let mut tape = tape.clone();
        if n < tape.len() {
            tape[n] = Value::Nat(mv.write as u64);
        } else {
            tape.push(Value::Nat(mv.write as u64));
        }
        let n2 = if mv.right { n + 1 } else { n.saturating_sub(1) };
        Ok(Value::Tuple(vec![Value::Seq(tape), Value::Nat(mv.next as u64), Value::Nat(n2 as u64), k1]))
    })
}

pub fn compile_config(spec: &TMSpec) -> Result<ConfigMachine> {
    spec.validate()?;
    let tapes = Universe::Seq(Box::new(Universe::Fin(spec.symbols as u64)));
    let q = Universe::Fin(spec.states as u64);
    let hist = Universe::prod([tapes.clone(), q.clone(), Universe::Nat, Universe::Nat]);
    let qnn = Universe::prod([q.clone(), Universe::Nat, Universe::Nat]);
    let mut d = Diagram::new();
    let s1 = d.add_node("S1", tapes, false);
    let s2 = d.add_node("S2", hist.clone(), true);
    let s3 = d.add_node("S3", q.clone(), false);
    let s4 = d.add_node("S4", qnn, false);
    let s5 = d.add_node("S5", hist.clone(), false);
    let s6 = d.add_node("S6", q, false);
    d.inverse(MapExpr::proj(&hist, 0), s1, s5)?;
    d.inverse(MapExpr::proj_multi(&hist, &[1, 2, 3]), s4, s5)?;
    d.forward(MapExpr::Id(hist.clone()), s5, s2)?;
    let branches = spec.delta.iter().flatten().map(Vec::len).max().unwrap_or(1).max(1);
    for j in 0..branches {
        d.forward(MapExpr::Gen(Arc::new(step_gen(spec, j, &hist))), s2, s2)?;
    }
    d.forward(MapExpr::proj(&hist, 1), s2, s3)?;
    d.forward(MapExpr::Id(Universe::Fin(spec.states as u64)), s6, s3)?;
    d.grade(s2, MapExpr::proj(&hist, 3), None)?;
    Ok(ConfigMachine { diagram: d, input: s1, history: s2, state: s3, spec: spec.clone(), start: s4, halting: s6 })
}

impl ConfigMachine {
    pub fn anchors(&self, sigma: &str) -> Result<PartialSection> {
        let u = |n: usize| self.diagram.universe(n).clone();
        let word = Value::Seq(TMSpec::input_tape(sigma).into_iter().map(|x| Value::Nat(x as u64)).collect());
        let mut t = PartialSection::new();
        t.insert(self.input, Subset::ext(&u(self.input), [word])?);
        let start = Value::Tuple(vec![Value::Nat(self.spec.q0 as u64), Value::Nat(0), Value::Nat(0)]);
        t.insert(self.start, Subset::ext(&u(self.start), [start])?);
        let halt = [self.spec.qa, self.spec.qr].map(|q| Value::Nat(q as u64));
        t.insert(self.halting, Subset::ext(&u(self.halting), halt)?);
        Ok(t)
    }

    /// Halting states reached within `k_max` steps.
    pub fn run(&self, sigma: &str, k_max: u64) -> Result<BTreeSet<Value>> {
        let b = SolverBounds::default().with_nat_max(sigma.len() as u64 + k_max + 2).with_grade_cap(k_max);
        let s = solve_graded(&self.diagram, &self.anchors(sigma)?, &b)?;
        Ok(s.values(self.state))
    }
}

//! Finite automata as a graded history diagram.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::diagram::{Diagram, PartialSection};
use crate::error::{Error, Result};
use crate::map::expr::{GenDef, MapExpr};
use crate::map::pattern::PatSet;
use crate::subset::Subset;
use crate::universe::Universe;
use crate::value::Value;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa {
    pub states: usize,
    pub symbols: usize,
    /// `delta[a][q]`.
    pub delta: Vec<Vec<usize>>,
    pub q0: usize,
    pub accept: BTreeSet<usize>,
}

impl Dfa {
    pub fn validate(&self) -> Result<()> {
        let ok = self.states > 0
            && self.q0 < self.states
            && self.delta.len() == self.symbols
            && self.delta.iter().all(|r| r.len() == self.states && r.iter().all(|&q| q < self.states))
            && self.accept.iter().all(|&q| q < self.states);
        if ok {
            Ok(())
        } else {
            Err(Error::MalformedMachine("automaton table is not total or out of range".into()))
        }
    }

    pub fn run(&self, word: &[usize]) -> usize {
        word.iter().fold(self.q0, |q, &a| self.delta[a][q])
    }

    pub fn accepts(&self, word: &[usize]) -> bool {
        self.accept.contains(&self.run(word))
    }

    /// Two states, accepting an even number of 1s.
    pub fn even_ones() -> Dfa {
        Dfa { states: 2, symbols: 2, delta: vec![vec![0, 1], vec![1, 0]], q0: 0, accept: BTreeSet::from([0]) }
    }
}

#[derive(Debug, Clone)]
pub struct DfaDiagram {
    pub diagram: Diagram,
    pub input: usize,
    pub history: usize,
    pub result: usize,
    pub dfa: Dfa,
    accept: usize,
    start: usize,
    empty: usize,
}

pub fn word_value(word: &[usize]) -> Value {
    Value::Seq(word.iter().map(|&a| Value::Nat(a as u64)).collect())
}

/// `(τ, q, k) ↦ (τ, q, k+1)` for the empty word, else
/// `(cdr τ, δ(car τ, q), k+1)`.
fn step_gen(dfa: &Dfa, u: &Universe) -> GenDef {
    let fwd = dfa.clone();
    let back = dfa.clone();
    GenDef::new("delta*", u.clone(), u.clone(), move |v| {
        let bad = || Error::Domain(format!("delta* at {v}"));
        let t = v.as_tuple().ok_or_else(bad)?;
        let (Value::Seq(w), Value::Nat(q), Value::Nat(k)) = (&t[0], &t[1], &t[2]) else { return Err(bad()) };
        let k1 = Value::Nat(k.checked_add(1).ok_or_else(|| Error::Overflow("step".into()))?);
        Ok(match w.split_first() {
            None => Value::Tuple(vec![t[0].clone(), t[1].clone(), k1]),
            Some((a, rest)) => {
                let a = a.as_nat().ok_or_else(bad)? as usize;
                let q2 = fwd.delta[a][*q as usize] as u64;
                Value::Tuple(vec![Value::Seq(rest.to_vec()), Value::Nat(q2), k1])
            }
        })
    })
    .with_preimage(move |v, _| {
        let Some([Value::Seq(w), Value::Nat(q), Value::Nat(k)]) = v.as_tuple().and_then(|t| <&[Value; 3]>::try_from(t).ok()) else {
            return Ok(PatSet::empty());
        };
        if *k == 0 {
            return Ok(PatSet::empty());
        }
        let mut out = Vec::new();
        if w.is_empty() {
            out.push(Value::Tuple(vec![Value::Seq(Vec::new()), Value::Nat(*q), Value::Nat(k - 1)]));
        }
        for a in 0..back.symbols {
            for p in 0..back.states {
                if back.delta[a][p] as u64 == *q {
                    let mut w2 = vec![Value::Nat(a as u64)];
                    w2.extend(w.iter().cloned());
                    out.push(Value::Tuple(vec![Value::Seq(w2), Value::Nat(p as u64), Value::Nat(k - 1)]));
                }
            }
        }
        Ok(PatSet::exact(out))
    })
}

pub fn compile_dfa(dfa: &Dfa) -> Result<DfaDiagram> {
    dfa.validate()?;
    let words = Universe::Seq(Box::new(Universe::Fin(dfa.symbols as u64)));
    let q = Universe::Fin(dfa.states as u64);
    let hist = Universe::prod([words.clone(), q.clone(), Universe::Nat]);
    let mut d = Diagram::new();
    let s1 = d.add_node("S1", words.clone(), false);
    let s2 = d.add_node("S2", hist.clone(), true);
    let s3 = d.add_node("S3", Universe::prod([words.clone(), q.clone()]), false);
    let s4 = d.add_node("S4", q.clone(), false);
    let s5 = d.add_node("S5", Universe::prod([q.clone(), Universe::Nat]), false);
    let s6 = d.add_node("S6", hist.clone(), false);
    let s7 = d.add_node("S7", words.clone(), false);
    let s8 = d.add_node("S8", q.clone(), false);
    d.inverse(MapExpr::proj(&hist, 0), s1, s6)?;
    d.inverse(MapExpr::proj_multi(&hist, &[1, 2]), s5, s6)?;
    d.forward(MapExpr::Id(hist.clone()), s6, s2)?;
    d.forward(MapExpr::Gen(Arc::new(step_gen(dfa, &hist))), s2, s2)?;
    d.forward(MapExpr::proj_multi(&hist, &[0, 1]), s2, s3)?;
    let wq = Universe::prod([words, q]);
    d.inverse(MapExpr::proj(&wq, 0), s7, s3)?;
    d.inverse(MapExpr::proj(&wq, 1), s4, s3)?;
    d.forward(MapExpr::proj(&wq, 1), s3, s8)?;
    d.grade(s2, MapExpr::proj(&hist, 2), None)?;
    Ok(DfaDiagram { diagram: d, input: s1, history: s2, result: s8, dfa: dfa.clone(), accept: s4, start: s5, empty: s7 })
}

impl DfaDiagram {
    pub fn anchors(&self, word: &[usize]) -> Result<PartialSection> {
        let u = |n: usize| self.diagram.universe(n).clone();
        let mut t = PartialSection::new();
        t.insert(self.input, Subset::ext(&u(self.input), [word_value(word)])?);
        t.insert(self.accept, Subset::ext(&u(self.accept), self.dfa.accept.iter().map(|&q| Value::Nat(q as u64)))?);
        t.insert(self.start, Subset::ext(&u(self.start), [Value::nat_pair(self.dfa.q0 as u64, 0)])?);
        t.insert(self.empty, Subset::ext(&u(self.empty), [Value::Seq(Vec::new())])?);
        Ok(t)
    }
}

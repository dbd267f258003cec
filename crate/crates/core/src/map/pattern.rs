//! Partial element patterns: the symbolic form of point preimages.
//!
//! A projection preimage is a cylinder such as `(_, 3)`; composing and
//! multiplying maps intersects cylinders by unification, so most preimages
//! stay finite without scanning a window.

use std::collections::{BTreeSet, HashMap};

use crate::bounds::SolverBounds;
use crate::error::Result;
use crate::universe::Universe;
use crate::value::Value;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pattern {
    Any,
    Exact(Value),
    Tuple(Vec<Pattern>),
    Inj(usize, Box<Pattern>),
}

/// A union of patterns. `inexact` records that the set was produced by a
/// window scan, so preimages outside the window may be missing.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PatSet {
    pub pats: Vec<Pattern>,
    pub inexact: bool,
}

/// Values of a pattern set inside a universe window.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Expansion {
    pub values: BTreeSet<Value>,
    /// A free component ranged over an infinite carrier.
    pub unbounded: bool,
    pub truncated: bool,
}

impl Pattern {
    pub fn tuple(ps: Vec<Pattern>) -> Pattern {
        if ps.iter().all(|p| matches!(p, Pattern::Exact(_))) {
            Pattern::Exact(Value::Tuple(
                ps.into_iter()
                    .map(|p| match p {
                        Pattern::Exact(v) => v,
                        _ => Value::Unit,
                    })
                    .collect(),
            ))
        } else {
            Pattern::Tuple(ps)
        }
    }

    pub fn inj(i: usize, p: Pattern) -> Pattern {
        match p {
            Pattern::Exact(v) => Pattern::Exact(Value::Inj(i, Box::new(v))),
            p => Pattern::Inj(i, Box::new(p)),
        }
    }

    /// View as `n` component patterns.
    pub fn components(&self, n: usize) -> Option<Vec<Pattern>> {
        match self {
            Pattern::Any => Some(vec![Pattern::Any; n]),
            Pattern::Exact(Value::Tuple(vs)) if vs.len() == n => {
                Some(vs.iter().cloned().map(Pattern::Exact).collect())
            }
            Pattern::Tuple(ps) if ps.len() == n => Some(ps.clone()),
            _ => None,
        }
    }

    pub fn matches(&self, v: &Value) -> bool {
        match (self, v) {
            (Pattern::Any, _) => true,
            (Pattern::Exact(x), v) => x == v,
            (Pattern::Tuple(ps), Value::Tuple(vs)) => {
                ps.len() == vs.len() && ps.iter().zip(vs).all(|(p, v)| p.matches(v))
            }
            (Pattern::Inj(i, p), Value::Inj(j, v)) => i == j && p.matches(v),
            _ => false,
        }
    }

    pub fn unify(&self, other: &Pattern) -> Option<Pattern> {
        match (self, other) {
            (Pattern::Any, p) | (p, Pattern::Any) => Some(p.clone()),
            (Pattern::Exact(v), p) | (p, Pattern::Exact(v)) => p.matches(v).then(|| Pattern::Exact(v.clone())),
            (Pattern::Tuple(a), Pattern::Tuple(b)) => {
                if a.len() != b.len() {
                    return None;
                }
                let parts = a.iter().zip(b).map(|(x, y)| x.unify(y)).collect::<Option<Vec<_>>>()?;
                Some(Pattern::tuple(parts))
            }
            (Pattern::Inj(i, a), Pattern::Inj(j, b)) => {
                if i != j {
                    return None;
                }
                Some(Pattern::inj(*i, a.unify(b)?))
            }
            _ => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Pattern::Exact(_))
    }

    /// Number of window elements matching, saturating.
    pub fn window_estimate(&self, u: &Universe, b: &SolverBounds) -> u128 {
        match (self, u) {
            (Pattern::Any, u) => u.window_size(b),
            (Pattern::Exact(_), _) => 1,
            (Pattern::Tuple(ps), Universe::Prod(us)) if ps.len() == us.len() => ps
                .iter()
                .zip(us)
                .fold(1u128, |acc, (p, u)| acc.saturating_mul(p.window_estimate(u, b))),
            (Pattern::Inj(i, p), Universe::Sum(us)) => us.get(*i).map_or(0, |u| p.window_estimate(u, b)),
            _ => 0,
        }
    }

    /// Enumerate matching elements of `u`: free parts range over the window,
    /// fixed parts are kept even when outside it.
    pub fn expand(&self, u: &Universe, b: &SolverBounds, out: &mut Expansion) -> Result<()> {
        match self {
            Pattern::Exact(v) => {
                if u.contains(v) {
                    out.values.insert(v.clone());
                }
            }
            Pattern::Any => {
                let w = u.window(b)?;
                out.unbounded |= !u.is_finite();
                out.truncated |= w.truncated;
                out.values.extend(w.values);
            }
            Pattern::Inj(i, p) => {
                if let Universe::Sum(us) = u {
                    if let Some(ui) = us.get(*i) {
                        let mut inner = Expansion::default();
                        p.expand(ui, b, &mut inner)?;
                        out.unbounded |= inner.unbounded;
                        out.truncated |= inner.truncated;
                        out.values.extend(inner.values.into_iter().map(|v| Value::Inj(*i, Box::new(v))));
                    }
                }
            }
            Pattern::Tuple(ps) => {
                let Universe::Prod(us) = u else { return Ok(()) };
                if us.len() != ps.len() {
                    return Ok(());
                }
                let mut parts = Vec::with_capacity(ps.len());
                for (p, ui) in ps.iter().zip(us) {
                    let mut e = Expansion::default();
                    p.expand(ui, b, &mut e)?;
                    out.unbounded |= e.unbounded;
                    out.truncated |= e.truncated;
                    if e.values.is_empty() {
                        return Ok(());
                    }
                    parts.push(e.values.into_iter().collect::<Vec<_>>());
                }
                let mut idx = vec![0usize; parts.len()];
                loop {
                    if out.values.len() >= b.card_cap {
                        out.truncated = true;
                        return Ok(());
                    }
                    out.values.insert(Value::Tuple(idx.iter().zip(&parts).map(|(&i, p)| p[i].clone()).collect()));
                    let mut k = parts.len();
                    loop {
                        if k == 0 {
                            return Ok(());
                        }
                        k -= 1;
                        idx[k] += 1;
                        if idx[k] < parts[k].len() {
                            break;
                        }
                        idx[k] = 0;
                    }
                }
            }
        }
        Ok(())
    }
}

impl PatSet {
    pub fn empty() -> PatSet {
        PatSet::default()
    }

    pub fn all() -> PatSet {
        PatSet { pats: vec![Pattern::Any], inexact: false }
    }

    pub fn exact(values: impl IntoIterator<Item = Value>) -> PatSet {
        PatSet { pats: values.into_iter().map(Pattern::Exact).collect(), inexact: false }
    }

    pub fn single(p: Pattern) -> PatSet {
        PatSet { pats: vec![p], inexact: false }
    }

    pub fn union_with(&mut self, other: PatSet) {
        self.pats.extend(other.pats);
        self.inexact |= other.inexact;
    }

    pub fn normalize(mut self) -> PatSet {
        if self.pats.iter().any(|p| *p == Pattern::Any) {
            self.pats = vec![Pattern::Any];
        } else {
            self.pats.sort();
            self.pats.dedup();
        }
        self
    }

    pub fn matches(&self, v: &Value) -> bool {
        self.pats.iter().any(|p| p.matches(v))
    }

    /// Pairwise unification; `None` when the product would exceed `limit`.
    /// Tuple components that are fixed in every pattern on both sides are
    /// used as a join key, so only matching pairs are unified.
    pub fn intersect(&self, other: &PatSet, limit: usize) -> Option<PatSet> {
        let keys = shared_exact_positions(&self.pats, &other.pats);
        let mut out = Vec::new();
        if keys.is_empty() {
            if self.pats.len().saturating_mul(other.pats.len()) > limit {
                return None;
            }
            for a in &self.pats {
                for b in &other.pats {
                    if let Some(c) = a.unify(b) {
                        out.push(c);
                    }
                }
            }
        } else {
            let mut index: HashMap<Vec<&Value>, Vec<&Pattern>> = HashMap::new();
            for b in &other.pats {
                index.entry(join_key(b, &keys)).or_default().push(b);
            }
            for a in &self.pats {
                if let Some(bs) = index.get(&join_key(a, &keys)) {
                    for b in bs {
                        if let Some(c) = a.unify(b) {
                            out.push(c);
                        }
                    }
                }
            }
        }
        Some(PatSet { pats: out, inexact: self.inexact || other.inexact }.normalize())
    }

    pub fn window_estimate(&self, u: &Universe, b: &SolverBounds) -> u128 {
        self.pats.iter().fold(0u128, |acc, p| acc.saturating_add(p.window_estimate(u, b)))
    }

    pub fn expand(&self, u: &Universe, b: &SolverBounds) -> Result<Expansion> {
        let mut out = Expansion::default();
        for p in &self.pats {
            p.expand(u, b, &mut out)?;
        }
        Ok(out)
    }

    pub fn is_finite_exact(&self) -> bool {
        !self.inexact && self.pats.iter().all(Pattern::is_exact)
    }
}

fn exact_component(p: &Pattern, j: usize) -> Option<&Value> {
    match p {
        Pattern::Exact(Value::Tuple(vs)) => vs.get(j),
        Pattern::Tuple(ps) => match ps.get(j) {
            Some(Pattern::Exact(v)) => Some(v),
            _ => None,
        },
        _ => None,
    }
}

fn tuple_arity(p: &Pattern) -> Option<usize> {
    match p {
        Pattern::Exact(Value::Tuple(vs)) => Some(vs.len()),
        Pattern::Tuple(ps) => Some(ps.len()),
        _ => None,
    }
}

fn shared_exact_positions(a: &[Pattern], b: &[Pattern]) -> Vec<usize> {
    let Some(n) = a.first().and_then(tuple_arity) else { return Vec::new() };
    if a.iter().chain(b).any(|p| tuple_arity(p) != Some(n)) {
        return Vec::new();
    }
    (0..n).filter(|&j| a.iter().chain(b).all(|p| exact_component(p, j).is_some())).collect()
}

fn join_key<'a>(p: &'a Pattern, keys: &[usize]) -> Vec<&'a Value> {
    keys.iter().map(|&j| exact_component(p, j).expect("key component is exact")).collect()
}

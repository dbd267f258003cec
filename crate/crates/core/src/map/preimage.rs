//! Symbolic point preimages of map expressions.

use std::collections::BTreeSet;

use crate::bounds::SolverBounds;
use crate::error::Result;
use crate::map::expr::MapExpr;
use crate::map::pattern::{Expansion, PatSet, Pattern};
use crate::value::Value;

/// Cartesian-product limit when intersecting pattern sets.
const UNIFY_LIMIT: usize = 1 << 16;

/// Preimage of the elements matching `target`, as patterns over `f.dom()`.
pub fn preimage_pattern(f: &MapExpr, target: &Pattern, b: &SolverBounds) -> Result<PatSet> {
    if *target == Pattern::Any {
        return Ok(PatSet::all());
    }
    let out = match f {
        MapExpr::Id(_) => PatSet::single(target.clone()),
        MapExpr::Omega(_) => {
            if target.matches(&Value::Unit) {
                PatSet::all()
            } else {
                PatSet::empty()
            }
        }
        MapExpr::Const { value, .. } => {
            if target.matches(value) {
                PatSet::all()
            } else {
                PatSet::empty()
            }
        }
        MapExpr::Proj { dom, index } => {
            let n = dom.arity();
            let mut comps = vec![Pattern::Any; n];
            comps[*index] = target.clone();
            PatSet::single(Pattern::tuple(comps))
        }
        MapExpr::ProjMulti { dom, indices } => {
            let Some(parts) = target.components(indices.len()) else {
                return Ok(PatSet::empty());
            };
            let mut comps = vec![Pattern::Any; dom.arity()];
            for (i, p) in indices.iter().zip(parts) {
                match comps[*i].unify(&p) {
                    Some(u) => comps[*i] = u,
                    None => return Ok(PatSet::empty()),
                }
            }
            PatSet::single(Pattern::tuple(comps))
        }
        MapExpr::Inj { index, .. } => match target {
            Pattern::Exact(Value::Inj(j, v)) if j == index => PatSet::single(Pattern::Exact((**v).clone())),
            Pattern::Inj(j, p) if j == index => PatSet::single((**p).clone()),
            _ => PatSet::empty(),
        },
        MapExpr::MapUnion(f1, f2) => {
            let mut out = PatSet::empty();
            for (i, fi) in [f1, f2].into_iter().enumerate() {
                let p = preimage_pattern(fi, target, b)?;
                out.inexact |= p.inexact;
                out.pats.extend(p.pats.into_iter().map(|q| Pattern::inj(i, q)));
            }
            out
        }
        MapExpr::Compose(g, inner) => {
            let mid = preimage_pattern(g, target, b)?;
            let mut out = PatSet { pats: Vec::new(), inexact: mid.inexact };
            for p in &mid.pats {
                out.union_with(preimage_pattern(inner, p, b)?);
            }
            out
        }
        MapExpr::Prod(fs) => {
            let Some(parts) = target.components(fs.len()) else {
                return Ok(PatSet::empty());
            };
            let mut acc = PatSet::all();
            let mut order: Vec<usize> = (0..fs.len()).collect();
            // exact parts first, so the accumulator stays small
            order.sort_by_key(|&i| !parts[i].is_exact());
            for i in order {
                if parts[i] == Pattern::Any {
                    continue;
                }
                let pi = preimage_pattern(&fs[i], &parts[i], b)?;
                match acc.intersect(&pi, UNIFY_LIMIT) {
                    Some(next) => acc = next,
                    None => return scan(f, target, b).map(PatSet::normalize),
                }
                if acc.pats.is_empty() {
                    break;
                }
            }
            acc
        }
        MapExpr::Gen(g) => match (&g.preimage, target) {
            (Some(pre), Pattern::Exact(t)) => pre(t, b)?,
            (Some(pre), _) => {
                let e = PatSet::single(target.clone()).expand(&g.cod, b)?;
                let mut out = PatSet { pats: Vec::new(), inexact: e.unbounded || e.truncated };
                for t in &e.values {
                    out.union_with(pre(t, b)?);
                }
                out
            }
            (None, _) => scan(f, target, b)?,
        },
    };
    Ok(out.normalize())
}

/// Fallback: filter the domain window.
fn scan(f: &MapExpr, target: &Pattern, b: &SolverBounds) -> Result<PatSet> {
    let dom = f.dom();
    let w = dom.window(b)?;
    let mut pats = Vec::new();
    for v in w.values {
        if target.matches(&f.apply(&v)?) {
            pats.push(Pattern::Exact(v));
        }
    }
    Ok(PatSet { pats, inexact: !dom.is_finite() || w.truncated })
}

/// Concrete preimage of a set of points, with flags describing what the
/// window may have hidden.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Preimage {
    pub values: BTreeSet<Value>,
    /// Some preimages may lie outside the window.
    pub escapes: bool,
    pub truncated: bool,
}

pub fn preimage_of_points<'a>(
    f: &MapExpr,
    targets: impl IntoIterator<Item = &'a Value>,
    b: &SolverBounds,
) -> Result<Preimage> {
    let dom = f.dom();
    let mut set = PatSet::empty();
    for t in targets {
        set.union_with(preimage_pattern(f, &Pattern::Exact(t.clone()), b)?);
    }
    let set = set.normalize();
    let Expansion { values, unbounded, truncated } = set.expand(&dom, b)?;
    Ok(Preimage { values, escapes: unbounded || set.inexact, truncated })
}

/// Pattern view of an arbitrary point set's preimage, used by the solver's
/// candidate generation.
pub fn preimage_patterns<'a>(
    f: &MapExpr,
    targets: impl IntoIterator<Item = &'a Value>,
    b: &SolverBounds,
) -> Result<PatSet> {
    let mut set = PatSet::empty();
    for t in targets {
        set.union_with(preimage_pattern(f, &Pattern::Exact(t.clone()), b)?);
    }
    Ok(set.normalize())
}

//! Extensional and intensional subsets of a universe.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::bounds::SolverBounds;
use crate::error::{Error, Result};
use crate::map::expr::MapExpr;
use crate::map::pattern::PatSet;
use crate::map::preimage::{preimage_of_points, preimage_patterns};
use crate::universe::Universe;
use crate::value::Value;

pub type TestFn = Arc<dyn Fn(&Value) -> bool + Send + Sync>;

/// Membership predicates of intensional subsets.
#[derive(Clone)]
pub enum Pred {
    All,
    Not(Box<Pred>),
    And(Vec<Pred>),
    Or(Vec<Pred>),
    /// `f(x)` lies in `target`.
    Preimage { f: MapExpr, target: Box<Subset> },
    /// `x = f(y)` for some `y` in `source`.
    Image { f: MapExpr, source: Box<Subset> },
    Custom { name: String, test: TestFn },
    /// Down-set `x <= c` of an ordered scalar carrier.
    AtMost(Value),
}

impl PartialEq for Pred {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Pred::All, Pred::All) => true,
            (Pred::Not(a), Pred::Not(b)) => a == b,
            (Pred::And(a), Pred::And(b)) | (Pred::Or(a), Pred::Or(b)) => a == b,
            (Pred::Preimage { f, target }, Pred::Preimage { f: g, target: t }) => f == g && target == t,
            (Pred::Image { f, source }, Pred::Image { f: g, source: s }) => f == g && source == s,
            (Pred::Custom { name, .. }, Pred::Custom { name: n, .. }) => name == n,
            (Pred::AtMost(a), Pred::AtMost(b)) => a == b,
            _ => false,
        }
    }
}

impl fmt::Debug for Pred {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Pred {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pred::All => write!(f, "true"),
            Pred::Not(p) => write!(f, "not ({p})"),
            Pred::And(ps) | Pred::Or(ps) => {
                let sep = if matches!(self, Pred::And(_)) { " and " } else { " or " };
                let parts: Vec<String> = ps.iter().map(|p| format!("({p})")).collect();
                write!(f, "{}", parts.join(sep))
            }
            Pred::Preimage { f: m, target } => write!(f, "{m}(x) in {target}"),
            Pred::Image { f: m, source } => write!(f, "x in {m}({source})"),
            Pred::Custom { name, .. } => write!(f, "{name}(x)"),
            Pred::AtMost(c) => write!(f, "x <= {c}"),
        }
    }
}

impl Pred {
    pub fn custom(name: &str, test: impl Fn(&Value) -> bool + Send + Sync + 'static) -> Pred {
        Pred::Custom { name: name.to_string(), test: Arc::new(test) }
    }

    pub fn eval(&self, v: &Value) -> Result<bool> {
        match self {
            Pred::All => Ok(true),
            Pred::Not(p) => Ok(!p.eval(v)?),
            Pred::And(ps) => {
                for p in ps {
                    if !p.eval(v)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Pred::Or(ps) => {
                for p in ps {
                    if p.eval(v)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            Pred::Preimage { f, target } => target.member(&f.apply(v)?),
            Pred::Image { f, source } => {
                let pre = preimage_of_points(f, [v], &SolverBounds::default())?;
                if pre.escapes {
                    return Err(Error::NeedsNormalization(format!("image of {source} under {f}")));
                }
                for x in &pre.values {
                    if source.member(x)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            Pred::Custom { test, .. } => Ok(test(v)),
            Pred::AtMost(c) => match (v.as_rat(), c.as_rat()) {
                (Some(x), Some(c)) => Ok(x <= c),
                _ => Err(Error::Domain(format!("{v} <= {c} needs ordered scalars"))),
            },
        }
    }

    /// Symbolic candidates covering every satisfying element, when known.
    fn candidates(&self, b: &SolverBounds) -> Result<Option<PatSet>> {
        Ok(match self {
            Pred::Preimage { f, target } => match &**target {
                Subset::Ext { values, .. } => Some(preimage_patterns(f, values, b)?),
                Subset::Int { .. } => None,
            },
            Pred::Image { f, source } => match &**source {
                Subset::Ext { values, .. } => {
                    let mut out = BTreeSet::new();
                    for v in values {
                        out.insert(f.apply(v)?);
                    }
                    Some(PatSet::exact(out))
                }
                Subset::Int { .. } => None,
            },
            Pred::And(ps) => {
                let mut acc: Option<PatSet> = None;
                for p in ps {
                    if let Some(c) = p.candidates(b)? {
                        acc = Some(match acc {
                            None => c,
                            Some(a) => match a.intersect(&c, 1 << 16) {
                                Some(x) => x,
                                None => {
                                    if c.pats.len() < a.pats.len() {
                                        c
                                    } else {
                                        a
                                    }
                                }
                            },
                        });
                    }
                }
                acc
            }
            Pred::Or(ps) => {
                let mut acc = PatSet::empty();
                for p in ps {
                    match p.candidates(b)? {
                        Some(c) => acc.union_with(c),
                        None => return Ok(None),
                    }
                }
                Some(acc.normalize())
            }
            Pred::All | Pred::Not(_) | Pred::Custom { .. } | Pred::AtMost(_) => None,
        })
    }
}

/// A subset of a universe, either enumerated or given by a predicate.
#[derive(Clone, PartialEq)]
pub enum Subset {
    Ext { universe: Universe, values: BTreeSet<Value>, truncated: bool },
    Int { universe: Universe, pred: Pred, truncated: bool },
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Subset::Ext { values, .. } => {
                write!(f, "{{")?;
                for (i, v) in values.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{v}")?;
                }
                write!(f, "}}")
            }
            Subset::Int { universe, pred, .. } => write!(f, "{{x in {universe} : {pred}}}"),
        }
    }
}

/// How a materialization was obtained.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Materialized {
    pub values: BTreeSet<Value>,
    /// Candidates ranged over an infinite carrier's window.
    pub unbounded: bool,
    pub truncated: bool,
}

impl Subset {
    pub fn empty(u: &Universe) -> Subset {
        Subset::Ext { universe: u.clone(), values: BTreeSet::new(), truncated: false }
    }

    pub fn full(u: &Universe) -> Subset {
        Subset::Int { universe: u.clone(), pred: Pred::All, truncated: false }
    }

    pub fn ext(u: &Universe, values: impl IntoIterator<Item = Value>) -> Result<Subset> {
        let values: BTreeSet<Value> = values.into_iter().collect();
        for v in &values {
            u.check(v)?;
        }
        Ok(Subset::Ext { universe: u.clone(), values, truncated: false })
    }

    /// Build from untyped literals, coercing each to the universe.
    pub fn ext_coerced(u: &Universe, values: impl IntoIterator<Item = Value>) -> Result<Subset> {
        let vals = values.into_iter().map(|v| u.coerce(&v)).collect::<Result<Vec<_>>>()?;
        Subset::ext(u, vals)
    }

    pub fn int(u: &Universe, pred: Pred) -> Subset {
        Subset::Int { universe: u.clone(), pred, truncated: false }
    }

    pub fn universe(&self) -> &Universe {
        match self {
            Subset::Ext { universe, .. } | Subset::Int { universe, .. } => universe,
        }
    }

    pub fn truncated(&self) -> bool {
        match self {
            Subset::Ext { truncated, .. } | Subset::Int { truncated, .. } => *truncated,
        }
    }

    pub fn with_truncated(mut self, t: bool) -> Subset {
        match &mut self {
            Subset::Ext { truncated, .. } | Subset::Int { truncated, .. } => *truncated |= t,
        }
        self
    }

    pub fn is_ext(&self) -> bool {
        matches!(self, Subset::Ext { .. })
    }

    /// Enumerated values; `None` for intensional subsets.
    pub fn values(&self) -> Option<&BTreeSet<Value>> {
        match self {
            Subset::Ext { values, .. } => Some(values),
            Subset::Int { .. } => None,
        }
    }

    pub fn len(&self) -> Option<usize> {
        self.values().map(BTreeSet::len)
    }

    pub fn is_empty(&self) -> Option<bool> {
        self.values().map(BTreeSet::is_empty)
    }

    pub fn member(&self, v: &Value) -> Result<bool> {
        if !self.universe().contains(v) {
            return Err(Error::UniverseMismatch(format!("{v} is not in {}", self.universe())));
        }
        match self {
            Subset::Ext { values, .. } => Ok(values.contains(v)),
            Subset::Int { pred, .. } => pred.eval(v),
        }
    }

    fn same_universe(&self, other: &Subset) -> Result<()> {
        if self.universe() != other.universe() {
            return Err(Error::UniverseMismatch(format!(
                "operands over {} and {}",
                self.universe(),
                other.universe()
            )));
        }
        Ok(())
    }

    pub fn intersect(&self, other: &Subset) -> Result<Subset> {
        self.same_universe(other)?;
        let t = self.truncated() || other.truncated();
        let u = self.universe().clone();
        Ok(match (self, other) {
            (Subset::Ext { values: a, .. }, Subset::Ext { values: b, .. }) => {
                Subset::Ext { universe: u, values: a.intersection(b).cloned().collect(), truncated: t }
            }
            (Subset::Ext { values, .. }, int @ Subset::Int { .. })
            | (int @ Subset::Int { .. }, Subset::Ext { values, .. }) => {
                let mut keep = BTreeSet::new();
                for v in values {
                    if int.member(v)? {
                        keep.insert(v.clone());
                    }
                }
                Subset::Ext { universe: u, values: keep, truncated: t }
            }
            (Subset::Int { pred: p, .. }, Subset::Int { pred: q, .. }) => {
                Subset::Int { universe: u, pred: Pred::And(vec![p.clone(), q.clone()]), truncated: t }
            }
        })
    }

    pub fn union(&self, other: &Subset) -> Result<Subset> {
        self.same_universe(other)?;
        let t = self.truncated() || other.truncated();
        let u = self.universe().clone();
        Ok(match (self, other) {
            (Subset::Ext { values: a, .. }, Subset::Ext { values: b, .. }) => {
                Subset::Ext { universe: u, values: a.union(b).cloned().collect(), truncated: t }
            }
            (Subset::Int { pred: p, .. }, Subset::Int { pred: q, .. }) => {
                Subset::Int { universe: u, pred: Pred::Or(vec![p.clone(), q.clone()]), truncated: t }
            }
            (Subset::Ext { values, .. }, int @ Subset::Int { .. })
            | (int @ Subset::Int { .. }, Subset::Ext { values, .. }) => {
                let Some(all) = u.elements() else {
                    return Err(Error::NonMaterializableUnion(u.to_string()));
                };
                let mut out = values.clone();
                for v in all {
                    if int.member(&v)? {
                        out.insert(v);
                    }
                }
                Subset::Ext { universe: u, values: out, truncated: t }
            }
        })
    }

    pub fn complement(&self) -> Result<Subset> {
        let u = self.universe().clone();
        let t = self.truncated();
        Ok(match self {
            Subset::Ext { values, .. } => match u.elements() {
                Some(all) => Subset::Ext {
                    universe: u,
                    values: all.into_iter().filter(|v| !values.contains(v)).collect(),
                    truncated: t,
                },
                None => Subset::Int {
                    pred: Pred::Not(Box::new(Pred::Preimage {
                        f: MapExpr::Id(u.clone()),
                        target: Box::new(self.clone()),
                    })),
                    universe: u,
                    truncated: t,
                },
            },
            Subset::Int { pred, .. } => {
                Subset::Int { universe: u, pred: Pred::Not(Box::new(pred.clone())), truncated: t }
            }
        })
    }

    /// All members found by symbolic candidates or a window scan. Exact
    /// candidates outside the window are kept.
    pub fn materialize(&self, b: &SolverBounds) -> Result<Materialized> {
        match self {
            Subset::Ext { values, truncated, .. } => {
                Ok(Materialized { values: values.clone(), unbounded: false, truncated: *truncated })
            }
            Subset::Int { universe, pred, truncated } => {
                let (cands, unbounded, trunc) = match pred.candidates(b)? {
                    Some(ps) => {
                        let e = ps.expand(universe, b)?;
                        (e.values, e.unbounded || ps.inexact, e.truncated)
                    }
                    None => {
                        let w = universe.window(b)?;
                        (w.values.into_iter().collect(), !universe.is_finite(), w.truncated)
                    }
                };
                let mut values = BTreeSet::new();
                for v in cands {
                    if pred.eval(&v)? {
                        values.insert(v);
                    }
                }
                Ok(Materialized { values, unbounded, truncated: *truncated || trunc })
            }
        }
    }

    /// Extensional equivalent restricted to the enumeration window.
    pub fn normalize(&self, b: &SolverBounds) -> Result<Subset> {
        match self {
            Subset::Ext { .. } => Ok(self.clone()),
            Subset::Int { universe, .. } => {
                let m = self.materialize(b)?;
                let values = m.values.into_iter().filter(|v| universe.in_window(v, b)).collect();
                Ok(Subset::Ext { universe: universe.clone(), values, truncated: m.truncated })
            }
        }
    }

    /// Extensional inclusion; intensional operands are rejected.
    pub fn is_subset_of(&self, other: &Subset) -> Result<bool> {
        match (self, other) {
            (Subset::Ext { values: a, .. }, Subset::Ext { values: b, .. }) => Ok(a.is_subset(b)),
            _ => Err(Error::Incomparable(format!("{self} vs {other}"))),
        }
    }

    /// Equality of contents (ignores the truncation flag).
    pub fn same_values(&self, other: &Subset) -> bool {
        match (self.values(), other.values()) {
            (Some(a), Some(b)) => a == b,
            _ => false,
        }
    }
}

//! Map-expression trees over named generators.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::bounds::SolverBounds;
use crate::error::{Error, Result};
use crate::map::pattern::PatSet;
use crate::universe::Universe;
use crate::value::Value;

pub type EvalFn = Arc<dyn Fn(&Value) -> Result<Value> + Send + Sync>;
pub type PreimageFn = Arc<dyn Fn(&Value, &SolverBounds) -> Result<PatSet> + Send + Sync>;

/// A named generator map with an element evaluator and, optionally, an
/// enumerator of point preimages.
#[derive(Clone)]
pub struct GenDef {
    pub name: String,
    pub dom: Universe,
    pub cod: Universe,
    pub eval: EvalFn,
    pub preimage: Option<PreimageFn>,
}

impl GenDef {
    pub fn new(
        name: impl Into<String>,
        dom: Universe,
        cod: Universe,
        eval: impl Fn(&Value) -> Result<Value> + Send + Sync + 'static,
    ) -> GenDef {
        GenDef { name: name.into(), dom, cod, eval: Arc::new(eval), preimage: None }
    }

    pub fn with_preimage(
        mut self,
        pre: impl Fn(&Value, &SolverBounds) -> Result<PatSet> + Send + Sync + 'static,
    ) -> GenDef {
        self.preimage = Some(Arc::new(pre));
        self
    }
}

impl fmt::Debug for GenDef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GenDef({}: {} -> {})", self.name, self.dom, self.cod)
    }
}

impl PartialEq for GenDef {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.dom == other.dom && self.cod == other.cod
    }
}

impl Eq for GenDef {}

impl Hash for GenDef {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.name.hash(state);
    }
}

/// Map expressions. Equality is syntactic.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MapExpr {
    Gen(Arc<GenDef>),
    Id(Universe),
    Omega(Universe),
    /// 0-based component projection.
    Proj { dom: Universe, index: usize },
    ProjMulti { dom: Universe, indices: Vec<usize> },
    /// Constant map; the implicit map to the one-point set is not counted.
    Const { dom: Universe, value: Value, cod: Universe },
    /// `Compose(g, f)` is g after f.
    Compose(Box<MapExpr>, Box<MapExpr>),
    Prod(Vec<MapExpr>),
    MapUnion(Box<MapExpr>, Box<MapExpr>),
    /// Injection into component `index` of the sum universe `cod`.
    Inj { index: usize, cod: Universe },
}

impl MapExpr {
    pub fn gen(g: &Arc<GenDef>) -> MapExpr {
        MapExpr::Gen(g.clone())
    }

    pub fn compose(g: MapExpr, f: MapExpr) -> MapExpr {
        MapExpr::Compose(Box::new(g), Box::new(f))
    }

    /// Compose a chain written outermost first: `chain([h, g, f])` is h∘g∘f.
    pub fn chain(parts: impl IntoIterator<Item = MapExpr>) -> MapExpr {
        let mut parts: Vec<MapExpr> = parts.into_iter().collect();
        let mut acc = parts.pop().expect("non-empty chain");
        while let Some(g) = parts.pop() {
            acc = MapExpr::compose(g, acc);
        }
        acc
    }

    pub fn prod(parts: impl IntoIterator<Item = MapExpr>) -> MapExpr {
        MapExpr::Prod(parts.into_iter().collect())
    }

    pub fn proj(dom: &Universe, index: usize) -> MapExpr {
        MapExpr::Proj { dom: dom.clone(), index }
    }

    pub fn proj_multi(dom: &Universe, indices: &[usize]) -> MapExpr {
        MapExpr::ProjMulti { dom: dom.clone(), indices: indices.to_vec() }
    }

    pub fn constant(dom: &Universe, value: Value, cod: &Universe) -> MapExpr {
        MapExpr::Const { dom: dom.clone(), value, cod: cod.clone() }
    }

    pub fn dom(&self) -> Universe {
        match self {
            MapExpr::Gen(g) => g.dom.clone(),
            MapExpr::Id(u) | MapExpr::Omega(u) => u.clone(),
            MapExpr::Proj { dom, .. } | MapExpr::ProjMulti { dom, .. } | MapExpr::Const { dom, .. } => {
                dom.clone()
            }
            MapExpr::Compose(_, f) => f.dom(),
            MapExpr::Prod(fs) => fs.first().map_or(Universe::Unit, MapExpr::dom),
            MapExpr::MapUnion(f, g) => Universe::Sum(vec![f.dom(), g.dom()]),
            MapExpr::Inj { index, cod } => match cod {
                Universe::Sum(us) => us.get(*index).cloned().unwrap_or(Universe::Unit),
                _ => Universe::Unit,
            },
        }
    }

    pub fn cod(&self) -> Universe {
        match self {
            MapExpr::Gen(g) => g.cod.clone(),
            MapExpr::Id(u) => u.clone(),
            MapExpr::Omega(_) => Universe::Unit,
            MapExpr::Proj { dom, index } => dom.component(*index).cloned().unwrap_or(Universe::Unit),
            MapExpr::ProjMulti { dom, indices } => Universe::Prod(
                indices.iter().map(|i| dom.component(*i).cloned().unwrap_or(Universe::Unit)).collect(),
            ),
            MapExpr::Const { cod, .. } | MapExpr::Inj { cod, .. } => cod.clone(),
            MapExpr::Compose(g, _) => g.cod(),
            MapExpr::Prod(fs) => Universe::Prod(fs.iter().map(MapExpr::cod).collect()),
            MapExpr::MapUnion(f, _) => f.cod(),
        }
    }

    /// Check domain/codomain consistency of every node.
    pub fn validate(&self) -> Result<()> {
        match self {
            MapExpr::Proj { dom, index } => {
                if dom.component(*index).is_none() {
                    return Err(Error::Domain(format!("projection {} out of range for {dom}", index + 1)));
                }
            }
            MapExpr::ProjMulti { dom, indices } => {
                if indices.iter().any(|i| dom.component(*i).is_none()) {
                    return Err(Error::Domain(format!("projection out of range for {dom}")));
                }
            }
            MapExpr::Const { value, cod, .. } => cod.check(value)?,
            MapExpr::Compose(g, f) => {
                f.validate()?;
                g.validate()?;
                if f.cod() != g.dom() {
                    return Err(Error::Domain(format!(
                        "cannot compose {g} : {} after {f} : {}",
                        g.dom(),
                        f.cod()
                    )));
                }
            }
            MapExpr::Prod(fs) => {
                if fs.is_empty() {
                    return Err(Error::Domain("empty product".into()));
                }
                let d = fs[0].dom();
                for f in fs {
                    f.validate()?;
                    if f.dom() != d {
                        return Err(Error::Domain(format!("product factor {f} has domain {} not {d}", f.dom())));
                    }
                }
            }
            MapExpr::MapUnion(f, g) => {
                f.validate()?;
                g.validate()?;
                if f.cod() != g.cod() {
                    return Err(Error::Domain(format!("map union of different codomains {} and {}", f.cod(), g.cod())));
                }
            }
            MapExpr::Inj { index, cod } => match cod {
                Universe::Sum(us) if *index < us.len() => {}
                _ => return Err(Error::Domain(format!("injection {} into {cod}", index + 1))),
            },
            MapExpr::Gen(_) | MapExpr::Id(_) | MapExpr::Omega(_) => {}
        }
        Ok(())
    }

    /// Element-level evaluation.
    pub fn apply(&self, v: &Value) -> Result<Value> {
        match self {
            MapExpr::Gen(g) => {
                if !g.dom.contains(v) {
                    return Err(Error::Domain(format!("{v} is not in the domain {} of {}", g.dom, g.name)));
                }
                (g.eval)(v)
            }
            MapExpr::Id(_) => Ok(v.clone()),
            MapExpr::Omega(_) => Ok(Value::Unit),
            MapExpr::Proj { index, .. } => match v {
                Value::Tuple(vs) if *index < vs.len() => Ok(vs[*index].clone()),
                _ => Err(Error::Domain(format!("cannot project {v} onto component {}", index + 1))),
            },
            MapExpr::ProjMulti { indices, .. } => match v {
                Value::Tuple(vs) => indices
                    .iter()
                    .map(|i| {
                        vs.get(*i)
                            .cloned()
                            .ok_or_else(|| Error::Domain(format!("cannot project {v} onto component {}", i + 1)))
                    })
                    .collect::<Result<Vec<_>>>()
                    .map(Value::Tuple),
                _ => Err(Error::Domain(format!("cannot project non-tuple {v}"))),
            },
            MapExpr::Const { value, .. } => Ok(value.clone()),
            MapExpr::Compose(g, f) => g.apply(&f.apply(v)?),
            MapExpr::Prod(fs) => fs.iter().map(|f| f.apply(v)).collect::<Result<Vec<_>>>().map(Value::Tuple),
            MapExpr::MapUnion(f, g) => match v {
                Value::Inj(0, x) => f.apply(x),
                Value::Inj(1, x) => g.apply(x),
                _ => Err(Error::Domain(format!("map union applied to {v}"))),
            },
            MapExpr::Inj { index, .. } => Ok(Value::Inj(*index, Box::new(v.clone()))),
        }
    }

    pub fn leaves(&self) -> Vec<&MapExpr> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a MapExpr>) {
        match self {
            MapExpr::Compose(g, f) => {
                g.collect_leaves(out);
                f.collect_leaves(out);
            }
            MapExpr::Prod(fs) => fs.iter().for_each(|f| f.collect_leaves(out)),
            MapExpr::MapUnion(f, g) => {
                f.collect_leaves(out);
                g.collect_leaves(out);
            }
            leaf => out.push(leaf),
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
        // precedence: 0 = union, 1 = product, 2 = composition, 3 = atom
        let (own, body): (u8, String) = match self {
            MapExpr::Gen(g) => (3, g.name.clone()),
            MapExpr::Id(_) => (3, "id".into()),
            MapExpr::Omega(_) => (3, "omega".into()),
            MapExpr::Proj { index, .. } => (3, format!("p{}", index + 1)),
            MapExpr::ProjMulti { indices, .. } => {
                let digits: String = indices.iter().map(|i| (i + 1).to_string()).collect();
                if indices.iter().all(|i| *i < 9) {
                    (3, format!("p{digits}"))
                } else {
                    let list: Vec<String> = indices.iter().map(|i| (i + 1).to_string()).collect();
                    (3, format!("p[{}]", list.join(",")))
                }
            }
            MapExpr::Const { value, cod, .. } => (3, format!("(const {value} : {cod})")),
            MapExpr::Inj { index, .. } => (3, format!("inj{}", index + 1)),
            MapExpr::Compose(g, h) => {
                let s = format!("{} . {}", Prec(g, 2), Prec(h, 3));
                (2, s)
            }
            MapExpr::Prod(fs) => {
                let parts: Vec<String> = fs.iter().map(|x| Prec(x, 2).to_string()).collect();
                (1, parts.join(" * "))
            }
            MapExpr::MapUnion(a, b) => (0, format!("{} + {}", Prec(a, 1), Prec(b, 1))),
        };
        if own < prec {
            write!(f, "({body})")
        } else {
            write!(f, "{body}")
        }
    }
}

struct Prec<'a>(&'a MapExpr, u8);

impl fmt::Display for Prec<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt_prec(f, self.1)
    }
}

impl fmt::Display for MapExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

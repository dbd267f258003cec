//! Powerset-level arrows: direct image, preimage and complement.

use std::collections::BTreeSet;
use std::fmt;

use crate::bounds::SolverBounds;
use crate::error::{Error, Result};
use crate::map::expr::MapExpr;
use crate::subset::{Pred, Subset};
use crate::universe::Universe;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ArrowMap {
    /// `f: X -> Y` lifted to `2^X -> 2^Y` by direct image.
    Forward(MapExpr),
    /// `f: Y -> X` lifted to `2^X -> 2^Y` by preimage.
    Inverse(MapExpr),
    Cmpl,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub map: ArrowMap,
    pub source: usize,
    pub target: usize,
}

impl Arrow {
    pub fn forward(f: MapExpr, source: usize, target: usize) -> Arrow {
        Arrow { map: ArrowMap::Forward(f), source, target }
    }

    pub fn inverse(f: MapExpr, source: usize, target: usize) -> Arrow {
        Arrow { map: ArrowMap::Inverse(f), source, target }
    }

    pub fn cmpl(source: usize, target: usize) -> Arrow {
        Arrow { map: ArrowMap::Cmpl, source, target }
    }

    pub fn expr(&self) -> Option<&MapExpr> {
        match &self.map {
            ArrowMap::Forward(f) | ArrowMap::Inverse(f) => Some(f),
            ArrowMap::Cmpl => None,
        }
    }

    pub fn is_cmpl(&self) -> bool {
        matches!(self.map, ArrowMap::Cmpl)
    }

    /// Universes this arrow expects at its source and target, if fixed.
    pub fn endpoint_universes(&self) -> Option<(Universe, Universe)> {
        match &self.map {
            ArrowMap::Forward(f) => Some((f.dom(), f.cod())),
            ArrowMap::Inverse(f) => Some((f.cod(), f.dom())),
            ArrowMap::Cmpl => None,
        }
    }
}

impl fmt::Display for ArrowMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArrowMap::Forward(m) => write!(f, "fwd {m}"),
            ArrowMap::Inverse(m) => write!(f, "inv {m}"),
            ArrowMap::Cmpl => write!(f, "cmpl"),
        }
    }
}

/// Apply an arrow to a subset of its source.
pub fn apply_arrow(a: &Arrow, s: &Subset, b: &SolverBounds) -> Result<Subset> {
    match &a.map {
        ArrowMap::Forward(f) => {
            if *s.universe() != f.dom() {
                return Err(Error::UniverseMismatch(format!("{} applied to a subset of {}", a.map, s.universe())));
            }
            match s {
                Subset::Ext { values, truncated, .. } => {
                    let mut out = BTreeSet::new();
                    for v in values {
                        out.insert(f.apply(v)?);
                    }
                    Ok(Subset::Ext { universe: f.cod(), values: out, truncated: *truncated })
                }
                Subset::Int { truncated, .. } => {
                    if !has_preimages(f) {
                        return Err(Error::NeedsNormalization(format!("forward image of {s} under {f}")));
                    }
                    Ok(Subset::Int {
                        universe: f.cod(),
                        pred: Pred::Image { f: f.clone(), source: Box::new(s.clone()) },
                        truncated: *truncated,
                    })
                }
            }
        }
        ArrowMap::Inverse(f) => {
            if *s.universe() != f.cod() {
                return Err(Error::UniverseMismatch(format!("{} applied to a subset of {}", a.map, s.universe())));
            }
            let dom = f.dom();
            let int = Subset::Int {
                universe: dom.clone(),
                pred: Pred::Preimage { f: f.clone(), target: Box::new(s.clone()) },
                truncated: s.truncated(),
            };
            if dom.is_finite() {
                int.normalize(b)
            } else {
                Ok(int)
            }
        }
        ArrowMap::Cmpl => s.complement(),
    }
}

/// Every generator leaf can enumerate point preimages.
fn has_preimages(f: &MapExpr) -> bool {
    f.leaves().iter().all(|l| match l {
        MapExpr::Gen(g) => g.preimage.is_some() || g.dom.is_finite(),
        _ => true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::structure::succ;
    use crate::value::Value;

    #[test]
    fn forward_projection_and_inverse_succ() {
        let b = SolverBounds::default();
        let u = Universe::nat2();
        let s = Subset::ext(&u, [Value::nat_pair(0, 1), Value::nat_pair(1, 1), Value::nat_pair(2, 2)]).unwrap();
        let p1 = Arrow::forward(MapExpr::proj(&u, 0), 0, 1);
        let img = apply_arrow(&p1, &s, &b).unwrap();
        assert_eq!(img, Subset::ext(&Universe::Nat, [Value::Nat(0), Value::Nat(1), Value::Nat(2)]).unwrap());

        let inv = Arrow::inverse(MapExpr::Gen(succ()), 0, 1);
        let t = Subset::ext(&Universe::Nat, [Value::Nat(1), Value::Nat(2)]).unwrap();
        let pre = apply_arrow(&inv, &t, &b).unwrap().normalize(&b).unwrap();
        assert_eq!(pre, Subset::ext(&Universe::Nat, [Value::Nat(0), Value::Nat(1)]).unwrap());
    }
}

//! `Inf`, `Max` and `ltsup` as diagrams, with direct implementations to
//! compare against. Scalars are rationals windowed to an integer range;
//! keys live in a finite carrier.

use std::collections::{BTreeMap, BTreeSet};

use crate::bounds::SolverBounds;
use crate::catalog::add_ltsup;
use crate::diagram::{Diagram, PartialSection};
use crate::error::{Error, Result};
use crate::map::expr::MapExpr;
use crate::map::structure::builtin;
use crate::solver::{solve, Mode};
use crate::subset::Subset;
use crate::universe::Universe;
use crate::value::{Rat, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivedMap {
    Inf,
    Max,
    Ltsup,
}

impl std::str::FromStr for DerivedMap {
    type Err = Error;
    fn from_str(s: &str) -> Result<DerivedMap> {
        match s {
            "Inf" | "inf" => Ok(DerivedMap::Inf),
            "Max" | "max" => Ok(DerivedMap::Max),
            "ltsup" => Ok(DerivedMap::Ltsup),
            _ => Err(Error::UnknownDerived(s.to_string())),
        }
    }
}

#[derive(Debug, Clone)]
pub struct DerivedDiagram {
    pub diagram: Diagram,
    /// Anchors other than the input.
    pub anchors: PartialSection,
    pub input: usize,
    pub output: usize,
    pub bounds: SolverBounds,
}

impl DerivedDiagram {
    /// Solve with `input` pinned and read the output node.
    pub fn apply(&self, input: &Subset) -> Result<BTreeSet<Value>> {
        let mut t = self.anchors.clone();
        t.insert(self.input, input.clone());
        let s = solve(&self.diagram, &t, &self.bounds, Mode::Auto)?;
        Ok(s.values(self.output))
    }
}

fn lt() -> Result<MapExpr> {
    Ok(MapExpr::Gen(std::sync::Arc::new(builtin("lt", "lt", &[Universe::Rat], &[])?)))
}

fn one(d: &mut Diagram, t: &mut PartialSection, name: &str) -> Result<usize> {
    let n = d.add_node(name, Universe::Bool, false);
    t.insert(n, Subset::ext(&Universe::Bool, [Value::Nat(1)])?);
    Ok(n)
}

/// `S3 = π23⁻¹(S1) ∩ π13⁻¹(S1)`, `S4 = (π1 × lt∘π12 × π3)(S3) ∩ π2⁻¹(S5)`,
/// `S2 = S1 ∩ cmpl(π13(S4))`: the pairs of `S1` not below another with the
/// same key.
fn add_max(d: &mut Diagram, t: &mut PartialSection, p: &str, keys: &Universe, s1: usize) -> Result<usize> {
    let q = Universe::Rat;
    let rx = Universe::prod([q.clone(), keys.clone()]);
    let rrx = Universe::prod([q.clone(), q.clone(), keys.clone()]);
    let r2x = Universe::prod([q.clone(), Universe::Bool, keys.clone()]);
    let s2 = d.add_node(&format!("{p}S2"), rx.clone(), false);
    let s3 = d.add_node(&format!("{p}S3"), rrx.clone(), false);
    let s4 = d.add_node(&format!("{p}S4"), r2x.clone(), false);
    let s5 = one(d, t, &format!("{p}S5"))?;
    let dominated = d.add_node(&format!("{p}S4.pi13"), rx.clone(), false);
    d.forward(MapExpr::Id(rx.clone()), s1, s2)?;
    d.inverse(MapExpr::proj_multi(&rrx, &[1, 2]), s1, s3)?;
    d.inverse(MapExpr::proj_multi(&rrx, &[0, 2]), s1, s3)?;
    let tag = MapExpr::prod([MapExpr::proj(&rrx, 0), MapExpr::compose(lt()?, MapExpr::proj_multi(&rrx, &[0, 1])), MapExpr::proj(&rrx, 2)]);
    d.forward(tag, s3, s4)?;
    d.inverse(MapExpr::proj(&r2x, 1), s5, s4)?;
    d.forward(MapExpr::proj_multi(&r2x, &[0, 2]), s4, dominated)?;
    d.cmpl(dominated, s2)?;
    Ok(s2)
}

/// The diagram for `which`. Keys range over `keys`; scalars over the
/// integers of `[lo, hi]`.
pub fn derived_map_diagram(which: DerivedMap, keys: &Universe, lo: i64, hi: i64) -> Result<DerivedDiagram> {
    let bounds = SolverBounds::default().with_int_window(lo, hi).with_rat_den(1);
    let q = Universe::Rat;
    let rx = Universe::prod([q.clone(), keys.clone()]);
    let mut d = Diagram::new();
    let mut t = PartialSection::new();
    let (input, output) = match which {
        DerivedMap::Max => {
            let s1 = d.add_node("S1", rx.clone(), false);
            (s1, add_max(&mut d, &mut t, "", keys, s1)?)
        }
        DerivedMap::Inf => {
            let rrx = Universe::prod([q.clone(), q.clone(), keys.clone()]);
            let r2x = Universe::prod([q.clone(), Universe::Bool, keys.clone()]);
            let s1 = d.add_node("S1", rx.clone(), false);
            let s2 = d.add_node("S2", rrx.clone(), false);
            let s3 = d.add_node("S3", r2x.clone(), false);
            let s5 = one(&mut d, &mut t, "S5")?;
            let below = d.add_node("S3.pi13", rx.clone(), false);
            let s4 = d.add_node("S4", rx.clone(), false);
            d.inverse(MapExpr::proj_multi(&rrx, &[0, 2]), s1, s2)?;
            let tag = MapExpr::prod([MapExpr::proj(&rrx, 1), MapExpr::compose(lt()?, MapExpr::proj_multi(&rrx, &[0, 1])), MapExpr::proj(&rrx, 2)]);
            d.forward(tag, s2, s3)?;
            d.inverse(MapExpr::proj(&r2x, 1), s5, s3)?;
            d.forward(MapExpr::proj_multi(&r2x, &[0, 2]), s3, below)?;
            d.cmpl(below, s4)?;
            let s6 = add_max(&mut d, &mut t, "max.", keys, s4)?;
            // keys absent from the input have an unbounded lower set in ℝ
            // but a maximum at the window's edge; keep only present keys
            let present = d.add_node("S1.keys", keys.clone(), false);
            d.forward(MapExpr::proj(&rx, 1), s1, present)?;
            d.inverse(MapExpr::proj(&rx, 1), present, s6)?;
            (s1, s6)
        }
        DerivedMap::Ltsup => {
            let a = d.add_node("A", q.clone(), false);
            let out = d.add_node("ltsup", q.clone(), false);
            add_ltsup(&mut d, "", a, out, &mut t)?;
            (a, out)
        }
    };
    Ok(DerivedDiagram { diagram: d, anchors: t, input, output, bounds })
}

fn by_key(b: &BTreeSet<Value>, keep_max: bool) -> Result<BTreeSet<Value>> {
    let mut best: BTreeMap<Value, Rat> = BTreeMap::new();
    for v in b {
        let (a, x) = match v.as_tuple() {
            Some([a, x]) => (a.as_rat().ok_or_else(|| Error::Domain(format!("{a} is not a scalar")))?, x.clone()),
            _ => return Err(Error::Domain(format!("{v} is not a (scalar, key) pair"))),
        };
        let e = best.entry(x).or_insert(a);
        if (keep_max && a > *e) || (!keep_max && a < *e) {
            *e = a;
        }
    }
    Ok(best.into_iter().map(|(x, a)| Value::pair(Value::Rat(a), x)).collect())
}

/// `{(max π1(B ∩ π2⁻¹(x)), x)}` for each key `x` of `B`.
pub fn max_by_key(b: &BTreeSet<Value>) -> Result<BTreeSet<Value>> {
    by_key(b, true)
}

/// Per-key infimum; on finite sets the minimum.
pub fn inf_by_key(b: &BTreeSet<Value>) -> Result<BTreeSet<Value>> {
    by_key(b, false)
}

/// Window scalars below some element of `a`.
pub fn ltsup_in_window(a: &BTreeSet<Value>, lo: i64, hi: i64) -> BTreeSet<Value> {
    let top = a.iter().filter_map(Value::as_rat).max();
    match top {
        None => BTreeSet::new(),
        Some(m) => (lo..=hi).map(Rat::from_integer).filter(|x| *x <= m).map(Value::Rat).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn keyed(pairs: &[(i64, u64)]) -> BTreeSet<Value> {
        pairs.iter().map(|&(a, x)| Value::pair(Value::rat(a, 1), Value::Nat(x))).collect()
    }

    #[test]
    fn max_and_inf_on_two_keys() {
        let keys = Universe::Fin(2);
        let b = keyed(&[(1, 0), (3, 0), (2, 1)]);
        let input = Subset::ext(&Universe::prod([Universe::Rat, keys.clone()]), b.clone()).unwrap();
        let max = derived_map_diagram(DerivedMap::Max, &keys, 0, 5).unwrap();
        assert_eq!(max.apply(&input).unwrap(), keyed(&[(3, 0), (2, 1)]));
        let inf = derived_map_diagram(DerivedMap::Inf, &keys, 0, 5).unwrap();
        assert_eq!(inf.apply(&input).unwrap(), keyed(&[(1, 0), (2, 1)]));
        assert_eq!(max_by_key(&b).unwrap(), keyed(&[(3, 0), (2, 1)]));
        assert_eq!(inf_by_key(&b).unwrap(), keyed(&[(1, 0), (2, 1)]));
    }

    #[test]
    fn ltsup_down_set() {
        let l = derived_map_diagram(DerivedMap::Ltsup, &Universe::Unit, 0, 5).unwrap();
        let a = Subset::ext(&Universe::Rat, [Value::rat(2, 1)]).unwrap();
        let want: BTreeSet<Value> = (0..=2).map(|i| Value::rat(i, 1)).collect();
        assert_eq!(l.apply(&a).unwrap(), want);
        assert_eq!(ltsup_in_window(a.values().unwrap(), 0, 5), want);
    }

    #[test]
    fn unknown_name() {
        assert!(matches!("Min".parse::<DerivedMap>(), Err(Error::UnknownDerived(_))));
    }
}

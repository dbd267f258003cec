//! Generated-by checks and candidate bounds on structural information.
//!
//! Only the case where the sole anchored node is the one-point set `𝟏` with
//! `t(𝟏) = 𝟏` is measured; its probability term is then zero and the bound
//! is the total map size of the candidate diagram.

use std::collections::BTreeSet;

use serde_json::{json, Value as Json};

use crate::diagram::{check_represents, Diagram, PartialSection, Representation, RepresentationData};
use crate::error::{Error, Result};
use crate::map::arrow::ArrowMap;
use crate::map::expr::MapExpr;
use crate::map::size::{in_generated, map_size};
use crate::map::structure::StructureMapSet;
use crate::subset::Subset;
use crate::universe::Universe;
use crate::value::Value;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasureReport {
    pub total: u64,
    /// `(arrow id, size)`.
    pub ledger: Vec<(usize, u64)>,
    pub generated: bool,
    pub complement: bool,
    pub note: String,
}

impl MeasureReport {
    /// Two columns, one arrow per line, then the total.
    pub fn table(&self, d: &Diagram) -> String {
        let mut rows: Vec<(String, String)> = self.ledger.iter().map(|&(a, s)| (describe(d, a), s.to_string())).collect();
        rows.push(("total (candidate bound)".into(), self.total.to_string()));
        let w = rows.iter().map(|r| r.0.chars().count()).max().unwrap_or(0);
        let mut out = String::new();
        for (l, r) in rows {
            let pad = w - l.chars().count();
            out.push_str(&format!("{l}{}  {r}\n", " ".repeat(pad)));
        }
        if !self.note.is_empty() {
            out.push_str(&format!("note: {}\n", self.note));
        }
        out
    }

    pub fn to_json(&self, d: &Diagram) -> Json {
        json!({
            "total": self.total,
            "bound": "upper",
            "generated": self.generated,
            "complement": self.complement,
            "note": self.note,
            "ledger": self.ledger.iter().map(|&(a, s)| json!({"arrow": a, "map": describe(d, a), "size": s})).collect::<Vec<_>>(),
        })
    }
}

fn describe(d: &Diagram, a: usize) -> String {
    let ar = &d.arrows[a];
    let (s, t) = (&d.nodes[ar.source].name, &d.nodes[ar.target].name);
    match &ar.map {
        ArrowMap::Forward(f) => format!("{s} -> {t}  {f}"),
        ArrowMap::Inverse(f) => format!("{s} -> {t}  ({f})^-1"),
        ArrowMap::Cmpl => format!("{s} -> {t}  cmpl"),
    }
}

/// Every arrow is a lift of a map in `⟨M⟩`, or a complement when allowed.
pub fn generated_by(d: &Diagram, m: &StructureMapSet, allow_cmpl: bool) -> bool {
    d.arrows.iter().all(|a| match &a.map {
        ArrowMap::Forward(f) | ArrowMap::Inverse(f) => in_generated(f, m),
        ArrowMap::Cmpl => allow_cmpl,
    })
}

/// Size of each arrow: its map's tree size, 1 for a complement.
pub fn ledger(d: &Diagram, m: &StructureMapSet) -> Result<Vec<(usize, u64)>> {
    d.arrows
        .iter()
        .enumerate()
        .map(|(i, a)| match &a.map {
            ArrowMap::Forward(f) | ArrowMap::Inverse(f) => Ok((i, map_size(f, m)?)),
            ArrowMap::Cmpl => Ok((i, 1)),
        })
        .collect()
}

/// Anchors of the form `t(𝟏) = 𝟏` on unit nodes and nothing else.
pub fn unit_anchored(d: &Diagram, t: &PartialSection) -> bool {
    t.iter().all(|(&n, s)| {
        d.nodes.get(n).is_some_and(|node| node.universe == Universe::Unit)
            && s.values().is_some_and(|v| v.len() == 1 && v.contains(&Value::Unit))
    })
}

/// The candidate's total size, after checking it is generated by `m` and
/// represents `a` within the window.
pub fn info_upper_bound(r: &RepresentationData, a: &Subset, m: &StructureMapSet, allow_cmpl: bool) -> Result<MeasureReport> {
    let d = &r.diagram;
    if !unit_anchored(d, &r.anchors) {
        return Err(Error::Malformed("only t(1) = 1 anchors are measured".into()));
    }
    let complement = d.has_cmpl();
    if !generated_by(d, m, allow_cmpl) {
        let bad = d
            .arrows
            .iter()
            .find_map(|a| match &a.map {
                ArrowMap::Forward(f) | ArrowMap::Inverse(f) if !in_generated(f, m) => Some(f.to_string()),
                ArrowMap::Cmpl if !allow_cmpl => Some("cmpl".into()),
                _ => None,
            })
            .unwrap_or_default();
        return Err(Error::NotGenerated(bad));
    }
    let note = match check_represents(r, a)? {
        Representation::Holds { within_window: true } => "representation checked inside the solver window".to_string(),
        Representation::Holds { within_window: false } => String::new(),
        Representation::Fails { witness } => return Err(Error::NotRepresenting(format!("differs at {witness}"))),
        Representation::Vacuous => return Err(Error::NotRepresenting("no cross section extends the anchors".into())),
    };
    let ledger = ledger(d, m)?;
    let total = ledger.iter().map(|x| x.1).sum();
    Ok(MeasureReport { total, ledger, generated: true, complement, note })
}

/// Rewrites the anchors of source nodes as constant arrows out of a fresh
/// `𝟏` node, so that the data fits the `t(𝟏) = 𝟏` form. A node anchored to
/// several values becomes union-marked.
pub fn constants_from_one(d: &Diagram, t: &PartialSection) -> Result<(Diagram, PartialSection, usize)> {
    let mut out = d.clone();
    let one = out.add_node("1", Universe::Unit, false);
    for (&n, s) in t {
        let node = &d.nodes[n];
        if !d.ins(n).is_empty() {
            return Err(Error::Malformed(format!("anchored node {} has incoming arrows", node.name)));
        }
        let vals: &BTreeSet<Value> =
            s.values().ok_or_else(|| Error::NotEnumerable(format!("anchor of {}", node.name)))?;
        if vals.len() != 1 {
            out.nodes[n].union = true;
        }
        for v in vals {
            out.forward(MapExpr::constant(&Universe::Unit, v.clone(), &node.universe), one, n)?;
        }
    }
    let mut anchors = PartialSection::new();
    anchors.insert(one, Subset::ext(&Universe::Unit, [Value::Unit])?);
    Ok((out, anchors, one))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::map::structure::{builtin, succ};
    use std::sync::Arc;

    #[test]
    fn point_singleton_costs_one() {
        let x = Universe::int2();
        let p = Value::pair(Value::Int(2), Value::Int(-1));
        let mut d = Diagram::new();
        let one = d.add_node("1", Universe::Unit, false);
        let s = d.add_node("X", x.clone(), false);
        d.forward(MapExpr::constant(&Universe::Unit, p.clone(), &x), one, s).unwrap();
        let mut t = PartialSection::new();
        t.insert(one, Subset::ext(&Universe::Unit, [Value::Unit]).unwrap());
        let r = RepresentationData::new(d, t, s);
        let m = StructureMapSet::new().with_const(p.clone());
        let rep = info_upper_bound(&r, &Subset::ext(&x, [p]).unwrap(), &m, false).unwrap();
        assert_eq!(rep.total, 1);
        assert_eq!(rep.ledger, vec![(0, 1)]);
        let other = Subset::ext(&x, [Value::pair(Value::Int(0), Value::Int(0))]).unwrap();
        assert!(matches!(info_upper_bound(&r, &other, &m, false), Err(Error::NotRepresenting(_))));
        assert!(matches!(info_upper_bound(&r, &other, &StructureMapSet::new(), false), Err(Error::NotGenerated(_))));
    }

    #[test]
    fn complement_needs_permission() {
        let mut d = Diagram::new();
        let a = d.add_node("A", Universe::Fin(3), false);
        let b = d.add_node("B", Universe::Fin(3), false);
        d.cmpl(a, b).unwrap();
        let m = StructureMapSet::new();
        assert!(!generated_by(&d, &m, false));
        assert!(generated_by(&d, &m, true));
        assert_eq!(ledger(&d, &m).unwrap(), vec![(0, 1)]);
    }

    fn m_arith() -> StructureMapSet {
        let mult = Arc::new(builtin("mult", "mult", &[], &[]).unwrap());
        let add = Arc::new(builtin("add", "add", &[], &[]).unwrap());
        StructureMapSet::m_nat().with_gen(&mult).with_gen(&add).with_const(Value::nat_pair(0, 1)).with_const(Value::nat_pair(1, 1))
    }

    #[test]
    fn recursive_sequences_have_small_totals() {
        let m = m_arith();
        for (d, seed) in [(catalog::factorial().unwrap(), Value::nat_pair(0, 1)), (catalog::fibonacci().unwrap(), Value::nat_pair(1, 1))] {
            let s1 = d.node_id("S1").unwrap();
            let mut t = PartialSection::new();
            t.insert(s1, Subset::ext(&Universe::nat2(), [seed]).unwrap());
            let (d1, _, _) = constants_from_one(&d, &t).unwrap();
            assert!(generated_by(&d1, &m, false));
            let total: u64 = ledger(&d1, &m).unwrap().iter().map(|x| x.1).sum();
            assert!(total <= 30, "{total}");
        }
        assert!(!generated_by(&catalog::factorial().unwrap(), &StructureMapSet::new().with_gen(&succ()), false));
    }
}

//! Diagrams, cross sections, and the section and representation checks.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::{json, Value as Json};

use crate::bounds::SolverBounds;
use crate::error::{Error, Result};
use crate::map::arrow::{Arrow, ArrowMap};
use crate::map::expr::MapExpr;
use crate::map::preimage::preimage_patterns;
use crate::subset::Subset;
use crate::universe::Universe;
use crate::value::Value;

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub name: String,
    pub universe: Universe,
    pub union: bool,
}

/// A grading `g: S -> N` declared on a node, with an optional row cap.
#[derive(Debug, Clone, PartialEq)]
pub struct Grading {
    pub node: usize,
    pub map: MapExpr,
    pub cap: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Diagram {
    pub nodes: Vec<Node>,
    pub arrows: Vec<Arrow>,
    pub gradings: Vec<Grading>,
    ins: Vec<Vec<usize>>,
    outs: Vec<Vec<usize>>,
}

impl Diagram {
    pub fn new() -> Diagram {
        Diagram::default()
    }

    pub fn add_node(&mut self, name: &str, universe: Universe, union: bool) -> usize {
        self.nodes.push(Node { name: name.to_string(), universe, union });
        self.ins.push(Vec::new());
        self.outs.push(Vec::new());
        self.nodes.len() - 1
    }

    pub fn add_arrow(&mut self, a: Arrow) -> Result<usize> {
        let (Some(src), Some(tgt)) = (self.nodes.get(a.source), self.nodes.get(a.target)) else {
            return Err(Error::UnknownNode(format!("arrow {} -> {}", a.source, a.target)));
        };
        match a.endpoint_universes() {
            Some((su, tu)) => {
                if let Some(f) = a.expr() {
                    f.validate()?;
                }
                if su != src.universe || tu != tgt.universe {
                    return Err(Error::Malformed(format!(
                        "arrow `{}` from {} to {} expects {} -> {}, nodes are {} -> {}",
                        a.map, src.name, tgt.name, su, tu, src.universe, tgt.universe
                    )));
                }
            }
            None => {
                if src.universe != tgt.universe {
                    return Err(Error::Malformed(format!(
                        "cmpl from {} to {} joins different universes",
                        src.name, tgt.name
                    )));
                }
            }
        }
        self.ins[a.target].push(self.arrows.len());
        self.outs[a.source].push(self.arrows.len());
        self.arrows.push(a);
        Ok(self.arrows.len() - 1)
    }

    pub fn forward(&mut self, f: MapExpr, source: usize, target: usize) -> Result<usize> {
        self.add_arrow(Arrow::forward(f, source, target))
    }

    pub fn inverse(&mut self, f: MapExpr, source: usize, target: usize) -> Result<usize> {
        self.add_arrow(Arrow::inverse(f, source, target))
    }

    pub fn cmpl(&mut self, source: usize, target: usize) -> Result<usize> {
        self.add_arrow(Arrow::cmpl(source, target))
    }

    /// Store a composite label as a chain of arrows through fresh
    /// intermediate intersection nodes. `steps` are applied first to last.
    pub fn add_chain(&mut self, source: usize, steps: Vec<ArrowMap>, target: usize) -> Result<Vec<usize>> {
        let mut ids = Vec::new();
        let mut cur = source;
        let n = steps.len();
        for (k, m) in steps.into_iter().enumerate() {
            let next = if k + 1 == n {
                target
            } else {
                let u = match &m {
                    ArrowMap::Forward(f) => f.cod(),
                    ArrowMap::Inverse(f) => f.dom(),
                    ArrowMap::Cmpl => self.nodes[cur].universe.clone(),
                };
                let name = format!("{}~{}", self.nodes[target].name, k + 1);
                self.add_node(&name, u, false)
            };
            ids.push(self.add_arrow(Arrow { map: m, source: cur, target: next })?);
            cur = next;
        }
        Ok(ids)
    }

    pub fn grade(&mut self, node: usize, map: MapExpr, cap: Option<u64>) -> Result<()> {
        let u = &self.nodes.get(node).ok_or_else(|| Error::UnknownNode(node.to_string()))?.universe;
        if map.dom() != *u || map.cod() != Universe::Nat {
            return Err(Error::Malformed(format!("grading {map} must map {u} to N")));
        }
        self.gradings.retain(|g| g.node != node);
        self.gradings.push(Grading { node, map, cap });
        Ok(())
    }

    pub fn grading(&self, node: usize) -> Option<&Grading> {
        self.gradings.iter().find(|g| g.node == node)
    }

    pub fn ins(&self, node: usize) -> &[usize] {
        &self.ins[node]
    }

    pub fn outs(&self, node: usize) -> &[usize] {
        &self.outs[node]
    }

    pub fn node_id(&self, name: &str) -> Result<usize> {
        self.nodes
            .iter()
            .position(|n| n.name == name)
            .ok_or_else(|| Error::UnknownNode(name.to_string()))
    }

    pub fn universe(&self, node: usize) -> &Universe {
        &self.nodes[node].universe
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn has_cmpl(&self) -> bool {
        self.arrows.iter().any(Arrow::is_cmpl)
    }

    /// Nodes with a cycle through them, grouped by strongly connected
    /// component, in a topological order of the condensation.
    pub fn components(&self) -> Vec<Vec<usize>> {
        strongly_connected(self.nodes.len(), |v| self.outs[v].iter().map(|&a| self.arrows[a].target).collect())
    }

    pub fn to_json(&self) -> Json {
        let nodes: Vec<Json> = self
            .nodes
            .iter()
            .enumerate()
            .map(|(i, n)| {
                let mut o = json!({"id": i, "name": n.name, "universe": n.universe.to_string(), "union": n.union});
                if let Some(g) = self.grading(i) {
                    o["grade"] = json!({"map": g.map.to_string(), "cap": g.cap});
                }
                o
            })
            .collect();
        let arrows: Vec<Json> = self
            .arrows
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let (kind, expr) = match &a.map {
                    ArrowMap::Forward(f) => ("fwd", Some(f.to_string())),
                    ArrowMap::Inverse(f) => ("inv", Some(f.to_string())),
                    ArrowMap::Cmpl => ("cmpl", None),
                };
                json!({"id": i, "kind": kind, "expr": expr, "source": self.nodes[a.source].name, "target": self.nodes[a.target].name})
            })
            .collect();
        json!({"nodes": nodes, "arrows": arrows})
    }
}

/// Tarjan's algorithm; components come out in reverse topological order,
/// so they are reversed before returning.
pub fn strongly_connected(n: usize, succ: impl Fn(usize) -> Vec<usize>) -> Vec<Vec<usize>> {
    struct St {
        index: Vec<Option<usize>>,
        low: Vec<usize>,
        on: Vec<bool>,
        stack: Vec<usize>,
        next: usize,
        out: Vec<Vec<usize>>,
    }
    let mut st = St { index: vec![None; n], low: vec![0; n], on: vec![false; n], stack: Vec::new(), next: 0, out: Vec::new() };
    let succs: Vec<Vec<usize>> = (0..n).map(&succ).collect();
    for root in 0..n {
        if st.index[root].is_some() {
            continue;
        }
        // iterative DFS: (node, next child position)
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        st.index[root] = Some(st.next);
        st.low[root] = st.next;
        st.next += 1;
        st.stack.push(root);
        st.on[root] = true;
        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if *pos < succs[v].len() {
                let w = succs[v][*pos];
                *pos += 1;
                match st.index[w] {
                    None => {
                        st.index[w] = Some(st.next);
                        st.low[w] = st.next;
                        st.next += 1;
                        st.stack.push(w);
                        st.on[w] = true;
                        call.push((w, 0));
                    }
                    Some(iw) if st.on[w] => st.low[v] = st.low[v].min(iw),
                    _ => {}
                }
            } else {
                call.pop();
                if let Some(&(u, _)) = call.last() {
                    st.low[u] = st.low[u].min(st.low[v]);
                }
                if Some(st.low[v]) == st.index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = st.stack.pop().expect("tarjan stack");
                        st.on[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    st.out.push(comp);
                }
            }
        }
    }
    st.out.reverse();
    st.out
}


/// Where a section came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Solved,
    Enumerated,
    Supplied,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrossSection {
    pub sets: Vec<Subset>,
    pub provenance: Provenance,
    pub truncated: bool,
}

pub type PartialSection = BTreeMap<usize, Subset>;

impl CrossSection {
    pub fn supplied(sets: Vec<Subset>) -> CrossSection {
        let truncated = sets.iter().any(Subset::truncated);
        CrossSection { sets, provenance: Provenance::Supplied, truncated }
    }

    pub fn get(&self, node: usize) -> &Subset {
        &self.sets[node]
    }

    /// Enumerated values at a node (empty for intensional assignments).
    pub fn values(&self, node: usize) -> BTreeSet<Value> {
        self.sets[node].values().cloned().unwrap_or_default()
    }

    pub fn to_json(&self, d: &Diagram) -> Json {
        let mut sections = serde_json::Map::new();
        for (i, s) in self.sets.iter().enumerate() {
            let v = match s.values() {
                Some(vs) => Json::Array(vs.iter().map(|v| Json::String(v.to_string())).collect()),
                None => Json::String(s.to_string()),
            };
            sections.insert(d.nodes[i].name.clone(), v);
        }
        json!({"sections": sections, "truncated": self.truncated})
    }
}

/// Restrict a section to the given nodes.
pub fn restrict(s: &CrossSection, nodes: &[usize]) -> Result<PartialSection> {
    let mut out = PartialSection::new();
    for &n in nodes {
        let v = s.sets.get(n).ok_or_else(|| Error::UnknownNode(n.to_string()))?;
        out.insert(n, v.clone());
    }
    Ok(out)
}

/// A diagram with its anchors, distinguished node and minimization order.
#[derive(Debug, Clone)]
pub struct RepresentationData {
    pub diagram: Diagram,
    pub anchors: PartialSection,
    pub target: usize,
    pub minimize: Vec<usize>,
    pub free: crate::solver::FreeSpec,
    pub bounds: SolverBounds,
}

impl RepresentationData {
    pub fn new(diagram: Diagram, anchors: PartialSection, target: usize) -> RepresentationData {
        RepresentationData {
            diagram,
            anchors,
            target,
            minimize: Vec::new(),
            free: crate::solver::FreeSpec::default(),
            bounds: SolverBounds::default(),
        }
    }

    pub fn with_bounds(mut self, b: SolverBounds) -> Self {
        self.bounds = b;
        self
    }

    pub fn with_minimize(mut self, seq: Vec<usize>) -> Self {
        self.minimize = seq;
        self
    }

    pub fn with_free(mut self, f: crate::solver::FreeSpec) -> Self {
        self.free = f;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub node: String,
    pub witness: Option<String>,
    pub reason: String,
}

/// Outcome of a section check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectionVerdict {
    pub violation: Option<Violation>,
    /// The check could only be completed inside the enumeration window.
    pub within_window: bool,
}

impl SectionVerdict {
    pub fn is_valid(&self) -> bool {
        self.violation.is_none()
    }
}

/// Checks that every constrained node equals the intersection (or union)
/// of the images arriving at it.
pub fn check_section(d: &Diagram, s: &CrossSection, b: &SolverBounds) -> Result<SectionVerdict> {
    if s.sets.len() != d.len() {
        return Err(Error::Malformed(format!("section assigns {} of {} nodes", s.sets.len(), d.len())));
    }
    let mut within = s.truncated;
    for (i, node) in d.nodes.iter().enumerate() {
        if s.sets[i].universe() != &node.universe {
            return Err(Error::UniverseMismatch(format!("section at {} is over {}", node.name, s.sets[i].universe())));
        }
    }
    // intensional sources of direct images are compared through the window
    let mut view = s.clone();
    for a in &d.arrows {
        let src = &view.sets[a.source];
        if matches!(a.map, ArrowMap::Forward(_)) && !src.is_ext() && !src.universe().is_finite() {
            let m = src.materialize(b)?;
            view.sets[a.source] = Subset::Ext {
                universe: src.universe().clone(),
                values: m.values,
                truncated: m.truncated || m.unbounded || src.truncated(),
            };
        }
    }
    let s = &view;
    for (i, node) in d.nodes.iter().enumerate() {
        let ins = d.ins(i);
        if ins.is_empty() {
            continue;
        }
        let sources_truncated = ins.iter().any(|&a| s.sets[d.arrows[a].source].truncated());
        let lhs = &s.sets[i];
        let lhs_vals = match lhs {
            Subset::Ext { values, .. } => values.clone(),
            Subset::Int { .. } => {
                if !node.universe.is_finite() && !lhs_window_ok(&node.universe, b) {
                    return Err(Error::NonMaterializableComparison(node.name.clone()));
                }
                within |= !node.universe.is_finite();
                lhs.normalize(b)?.values().cloned().unwrap_or_default()
            }
        };
        // left side inside the combined images
        for u in &lhs_vals {
            let mut hits = 0usize;
            for &a in ins {
                if in_image(d, &d.arrows[a], s, u)? {
                    hits += 1;
                }
            }
            let ok = if node.union { hits > 0 } else { hits == ins.len() };
            if !ok {
                if sources_truncated {
                    within = true;
                    continue;
                }
                return Ok(SectionVerdict {
                    violation: Some(Violation {
                        node: node.name.clone(),
                        witness: Some(u.to_string()),
                        reason: "element not produced by incoming arrows".into(),
                    }),
                    within_window: within,
                });
            }
        }
        // combined images inside the left side
        let (rhs, unbounded) = combined_candidates(d, i, s, b)?;
        within |= unbounded;
        for u in rhs {
            if lhs_vals.contains(&u) {
                continue;
            }
            let mut hits = 0usize;
            for &a in ins {
                if in_image(d, &d.arrows[a], s, &u)? {
                    hits += 1;
                }
            }
            let member = if node.union { hits > 0 } else { hits == ins.len() };
            if !member {
                continue;
            }
            if !node.universe.in_window(&u, b) || lhs.truncated() {
                within = true;
                continue;
            }
            return Ok(SectionVerdict {
                violation: Some(Violation {
                    node: node.name.clone(),
                    witness: Some(u.to_string()),
                    reason: "element produced by incoming arrows is missing".into(),
                }),
                within_window: within,
            });
        }
    }
    Ok(SectionVerdict { violation: None, within_window: within })
}

/// Outcome of a representation check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Representation {
    Holds { within_window: bool },
    Fails { witness: String },
    /// No cross section extends the anchors, so the condition holds for
    /// every subset and says nothing.
    Vacuous,
}

impl Representation {
    pub fn holds(&self) -> bool {
        matches!(self, Representation::Holds { .. })
    }
}

/// Whether every (minimized) section extending the anchors assigns `a` to
/// the distinguished node.
pub fn check_represents(r: &RepresentationData, a: &Subset) -> Result<Representation> {
    let d = &r.diagram;
    let b = &r.bounds;
    let x = r.target;
    let node = d.nodes.get(x).ok_or_else(|| Error::UnknownNode(x.to_string()))?;
    if *a.universe() != node.universe {
        return Err(Error::UniverseMismatch(format!("{} is over {}, candidate over {}", node.name, node.universe, a.universe())));
    }
    let mut sections = if r.free.is_empty() {
        let s = crate::solver::solve(d, &r.anchors, b, crate::solver::Mode::Auto)?;
        let v = check_section(d, &s, b)?;
        if v.is_valid() {
            vec![(s, v.within_window)]
        } else {
            Vec::new()
        }
    } else {
        let all = crate::solver::enumerate_sections(d, &r.anchors, &r.free, b)?;
        all.into_iter().map(|s| (s, false)).collect()
    };
    if !r.minimize.is_empty() {
        let only: Vec<CrossSection> = sections.iter().map(|(s, _)| s.clone()).collect();
        sections = crate::solver::minimize(&only, &r.minimize)?.into_iter().map(|s| (s, false)).collect();
    }
    if sections.is_empty() {
        return Ok(Representation::Vacuous);
    }
    let mut within = false;
    for (s, w) in &sections {
        let got = &s.sets[x];
        let windowed = *w || s.truncated || got.truncated() || a.truncated() || !(got.is_ext() && a.is_ext());
        let (lhs, rhs) = if windowed {
            within |= !node.universe.is_finite();
            (window_values(got, b)?, window_values(a, b)?)
        } else {
            (got.values().cloned().unwrap_or_default(), a.values().cloned().unwrap_or_default())
        };
        if lhs != rhs {
            let w = lhs.symmetric_difference(&rhs).next().map(ToString::to_string).unwrap_or_default();
            return Ok(Representation::Fails { witness: w });
        }
    }
    Ok(Representation::Holds { within_window: within })
}

fn window_values(s: &Subset, b: &SolverBounds) -> Result<BTreeSet<Value>> {
    let u = s.universe();
    Ok(s.normalize(b)?.values().cloned().unwrap_or_default().into_iter().filter(|v| u.in_window(v, b)).collect())
}

fn lhs_window_ok(u: &Universe, b: &SolverBounds) -> bool {
    u.window_size(b) <= b.card_cap as u128
}

/// Exact membership of `u` in the image of arrow `a` under section `s`.
pub(crate) fn in_image(d: &Diagram, a: &Arrow, s: &CrossSection, u: &Value) -> Result<bool> {
    let src = &s.sets[a.source];
    match &a.map {
        ArrowMap::Inverse(f) => src.member(&f.apply(u)?),
        ArrowMap::Cmpl => Ok(!src.member(u)?),
        ArrowMap::Forward(f) => match src {
            Subset::Ext { values, .. } => {
                for x in values {
                    if f.apply(x)? == *u {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            Subset::Int { .. } => {
                let pre = crate::map::preimage::preimage_of_points(f, [u], &SolverBounds::default())?;
                if pre.escapes {
                    return Err(Error::NonMaterializableComparison(d.nodes[a.target].name.clone()));
                }
                for x in &pre.values {
                    if src.member(x)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
        },
    }
}

/// A finite candidate superset of the right-hand side at `node`, plus a flag
/// telling whether free components were cut to the window.
fn combined_candidates(d: &Diagram, node: usize, s: &CrossSection, b: &SolverBounds) -> Result<(BTreeSet<Value>, bool)> {
    let u = &d.nodes[node].universe;
    let mut per_arrow: Vec<(BTreeSet<Value>, bool)> = Vec::new();
    for &a in d.ins(node) {
        per_arrow.push(arrow_candidates(&d.arrows[a], &s.sets[d.arrows[a].source], u, b)?);
    }
    if d.nodes[node].union {
        let mut all = BTreeSet::new();
        let mut unb = false;
        for (vs, f) in per_arrow {
            all.extend(vs);
            unb |= f;
        }
        Ok((all, unb))
    } else {
        // the smallest exact candidate set suffices for an intersection
        let best = per_arrow
            .iter()
            .enumerate()
            .min_by_key(|(_, (vs, unb))| (*unb, vs.len()))
            .map(|(i, _)| i)
            .unwrap_or(0);
        Ok(per_arrow.swap_remove(best))
    }
}

fn arrow_candidates(a: &Arrow, src: &Subset, u: &Universe, b: &SolverBounds) -> Result<(BTreeSet<Value>, bool)> {
    match (&a.map, src) {
        (ArrowMap::Forward(f), Subset::Ext { values, .. }) => {
            let mut out = BTreeSet::new();
            for v in values {
                out.insert(f.apply(v)?);
            }
            Ok((out, false))
        }
        (ArrowMap::Inverse(f), Subset::Ext { values, .. }) => {
            let pats = preimage_patterns(f, values, b)?;
            let e = pats.expand(u, b)?;
            Ok((e.values, e.unbounded || pats.inexact || e.truncated))
        }
        _ => {
            let w = u.window(b)?;
            Ok((w.values.into_iter().collect(), !u.is_finite() || w.truncated))
        }
    }
}

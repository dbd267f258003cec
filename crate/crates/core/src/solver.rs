//! Least and graded cross sections, section enumeration and minimization.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::bounds::SolverBounds;
use crate::diagram::{check_section, strongly_connected, CrossSection, Diagram, PartialSection, Provenance};
use crate::error::{Error, Result};
use crate::map::arrow::{apply_arrow, ArrowMap};
use crate::map::expr::MapExpr;
use crate::map::pattern::PatSet;
use crate::map::preimage::preimage_patterns;
use crate::subset::{Pred, Subset};
use crate::universe::Universe;
use crate::value::Value;

const UNIFY_LIMIT: usize = 1 << 16;

/// Candidate assignments for nodes left free during enumeration.
#[derive(Debug, Clone, Default)]
pub struct FreeSpec {
    pub candidates: BTreeMap<usize, Vec<Subset>>,
}

impl FreeSpec {
    pub fn new() -> FreeSpec {
        FreeSpec::default()
    }

    pub fn with(mut self, node: usize, cands: Vec<Subset>) -> FreeSpec {
        self.candidates.insert(node, cands);
        self
    }

    /// Every subset of a finite list of values.
    pub fn all_subsets(u: &Universe, values: &[Value]) -> Result<Vec<Subset>> {
        if values.len() > 20 {
            return Err(Error::IterationCap(1 << 20));
        }
        (0..1u32 << values.len())
            .map(|m| Subset::ext(u, values.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, v)| v.clone())))
            .collect()
    }

    pub fn is_empty(&self) -> bool {
        self.candidates.is_empty()
    }
}

/// How cyclic components are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Worklist iteration to the least fixed point, clipped to the window.
    Least,
    /// Row-by-row evaluation driven by declared gradings.
    Graded,
    /// Graded where a grading is declared on the cycle, least otherwise.
    Auto,
}

/// One solver step: an element entering a node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub node: usize,
    pub value: Value,
    pub arrow: Option<usize>,
    pub row: Option<u64>,
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "node {} += {}", self.node, self.value)?;
        match self.arrow {
            Some(a) => write!(f, " via arrow {a}")?,
            None => write!(f, " via all inputs")?,
        }
        if let Some(r) = self.row {
            write!(f, " (row {r})")?;
        }
        Ok(())
    }
}

pub fn solve_least(d: &Diagram, t: &PartialSection, b: &SolverBounds) -> Result<CrossSection> {
    Ok(Solver::new(d, b, Mode::Least, false).run(t)?.0)
}

pub fn solve_graded(d: &Diagram, t: &PartialSection, b: &SolverBounds) -> Result<CrossSection> {
    Ok(Solver::new(d, b, Mode::Graded, false).run(t)?.0)
}

pub fn solve(d: &Diagram, t: &PartialSection, b: &SolverBounds, mode: Mode) -> Result<CrossSection> {
    Ok(Solver::new(d, b, mode, false).run(t)?.0)
}

pub fn solve_traced(d: &Diagram, t: &PartialSection, b: &SolverBounds, mode: Mode) -> Result<(CrossSection, Vec<TraceStep>)> {
    Solver::new(d, b, mode, true).run(t)
}

/// An arrow's image prepared for intersection.
enum Img {
    Ext(BTreeSet<Value>),
    Pats(PatSet),
    Int(Subset),
}

struct Solver<'a> {
    d: &'a Diagram,
    b: &'a SolverBounds,
    mode: Mode,
    vals: Vec<Option<Subset>>,
    truncated: bool,
    trace: Option<Vec<TraceStep>>,
    /// Elements already reported; graded rows rebuild their nodes.
    traced: BTreeSet<(usize, Value)>,
    row: Option<u64>,
    /// Forward images of monotonically growing sources.
    cache: Option<HashMap<usize, (BTreeSet<Value>, BTreeSet<Value>)>>,
}

impl<'a> Solver<'a> {
    fn new(d: &'a Diagram, b: &'a SolverBounds, mode: Mode, trace: bool) -> Solver<'a> {
        Solver {
            d,
            b,
            mode,
            vals: vec![None; d.len()],
            truncated: false,
            trace: trace.then(Vec::new),
            traced: BTreeSet::new(),
            row: None,
            cache: None,
        }
    }

    fn run(mut self, t: &PartialSection) -> Result<(CrossSection, Vec<TraceStep>)> {
        let d = self.d;
        for (&n, s) in t {
            let node = d.nodes.get(n).ok_or_else(|| Error::UnknownNode(n.to_string()))?;
            if *s.universe() != node.universe {
                return Err(Error::UniverseMismatch(format!("anchor {} is over {}", node.name, s.universe())));
            }
            self.truncated |= s.truncated();
            self.vals[n] = Some(s.clone());
        }
        for (i, node) in d.nodes.iter().enumerate() {
            if d.ins(i).is_empty() && !t.contains_key(&i) {
                return Err(Error::Underdetermined(node.name.clone()));
            }
        }
        for comp in d.components() {
            let free: Vec<usize> = comp.iter().copied().filter(|n| !t.contains_key(n)).collect();
            if free.is_empty() {
                continue;
            }
            let cyclic = comp.len() > 1 || d.ins(comp[0]).iter().any(|&a| d.arrows[a].source == comp[0]);
            if !cyclic {
                let s = self.compute(free[0])?;
                self.set(free[0], s)?;
                continue;
            }
            let inner = |a: usize| free.contains(&d.arrows[a].source) && free.contains(&d.arrows[a].target);
            if let Some(a) = (0..d.arrows.len()).find(|&a| inner(a) && d.arrows[a].is_cmpl()) {
                return Err(Error::NonMonotoneCycle(format!(
                    "cmpl from {} to {}",
                    d.nodes[d.arrows[a].source].name,
                    d.nodes[d.arrows[a].target].name
                )));
            }
            let graded = free.iter().any(|&n| d.grading(n).is_some());
            match self.mode {
                Mode::Least => self.kleene(&free)?,
                // union-only cycles are monotone and need no grading
                Mode::Graded if !graded && free.iter().all(|&n| d.nodes[n].union) => self.kleene(&free)?,
                Mode::Graded if !graded => return Err(Error::MissingGrading(self.names(&free))),
                Mode::Auto if !graded => self.kleene(&free)?,
                _ => self.rows(&free)?,
            }
        }
        let sets: Vec<Subset> = self.vals.into_iter().map(|s| s.expect("every node solved")).collect();
        let truncated = self.truncated || sets.iter().any(Subset::truncated);
        Ok((CrossSection { sets, provenance: Provenance::Solved, truncated }, self.trace.unwrap_or_default()))
    }

    fn names(&self, nodes: &[usize]) -> String {
        nodes.iter().map(|&n| self.d.nodes[n].name.as_str()).collect::<Vec<_>>().join(", ")
    }

    fn src(&self, a: usize) -> &Subset {
        self.vals[self.d.arrows[a].source].as_ref().expect("source solved before target")
    }

    fn set(&mut self, n: usize, s: Subset) -> Result<()> {
        if self.trace.is_some() {
            let old: BTreeSet<Value> = self.vals[n].as_ref().and_then(|o| o.values().cloned()).unwrap_or_default();
            if let Some(vals) = s.values() {
                let mut steps = Vec::new();
                for v in vals.difference(&old) {
                    if !self.traced.insert((n, v.clone())) {
                        continue;
                    }
                    let arrow = if self.d.nodes[n].union {
                        let mut found = None;
                        for &a in self.d.ins(n) {
                            if self.member_via(a, v)? {
                                found = Some(a);
                                break;
                            }
                        }
                        found
                    } else {
                        None
                    };
                    steps.push(TraceStep { node: n, value: v.clone(), arrow, row: self.row });
                }
                self.trace.as_mut().expect("tracing").extend(steps);
            }
        }
        self.vals[n] = Some(s);
        Ok(())
    }

    /// Exact membership of `v` in the image of arrow `a`.
    fn member_via(&self, a: usize, v: &Value) -> Result<bool> {
        let src = self.src(a);
        match &self.d.arrows[a].map {
            ArrowMap::Inverse(f) => src.member(&f.apply(v)?),
            ArrowMap::Cmpl => Ok(!src.member(v)?),
            ArrowMap::Forward(f) => {
                let (img, _) = self.forward_image(a, f)?;
                Ok(img.contains(v))
            }
        }
    }

    /// Forward image as a finite set; intensional sources are materialized.
    fn forward_image(&self, a: usize, f: &MapExpr) -> Result<(BTreeSet<Value>, bool)> {
        let src = self.src(a);
        let (vals, trunc) = match src {
            Subset::Ext { values, truncated, .. } => {
                if let Some((seen, img)) = self.cache.as_ref().and_then(|c| c.get(&a)) {
                    if seen == values {
                        return Ok((img.clone(), *truncated));
                    }
                }
                (values.clone(), *truncated)
            }
            Subset::Int { .. } => {
                let m = src.materialize(self.b)?;
                (m.values, m.truncated || m.unbounded)
            }
        };
        let mut out = BTreeSet::new();
        for v in &vals {
            out.insert(f.apply(v)?);
        }
        Ok((out, trunc))
    }

    fn forward_image_cached(&mut self, a: usize, f: &MapExpr) -> Result<(BTreeSet<Value>, bool)> {
        let Some(cache) = self.cache.as_mut() else {
            return self.forward_image(a, f);
        };
        let src = self.vals[self.d.arrows[a].source].as_ref().expect("source solved before target");
        let Subset::Ext { values, truncated, .. } = src else {
            return self.forward_image(a, f);
        };
        let entry = cache.entry(a).or_default();
        if !entry.0.is_subset(values) {
            *entry = Default::default();
        }
        for v in values.difference(&entry.0.clone()) {
            entry.1.insert(f.apply(v)?);
            entry.0.insert(v.clone());
        }
        Ok((entry.1.clone(), *truncated))
    }

    fn image(&mut self, a: usize) -> Result<(Img, bool)> {
        let arrow = &self.d.arrows[a];
        let u = &self.d.nodes[arrow.target].universe;
        Ok(match &arrow.map {
            ArrowMap::Forward(f) => {
                let (img, t) = self.forward_image_cached(a, f)?;
                (Img::Ext(img), t)
            }
            ArrowMap::Inverse(f) => {
                let src = self.src(a);
                match src {
                    Subset::Ext { values, truncated, .. } => (Img::Pats(preimage_patterns(f, values, self.b)?), *truncated),
                    Subset::Int { truncated, .. } => (
                        Img::Int(Subset::int(u, Pred::Preimage { f: f.clone(), target: Box::new(src.clone()) })),
                        *truncated,
                    ),
                }
            }
            ArrowMap::Cmpl => {
                let src = self.src(a);
                let c = src.complement()?;
                let t = src.truncated();
                match c {
                    Subset::Ext { values, .. } => (Img::Ext(values), t),
                    int => (Img::Int(int), t),
                }
            }
        })
    }

    fn compute(&mut self, n: usize) -> Result<Subset> {
        let d = self.d;
        let u = d.nodes[n].universe.clone();
        let ins = d.ins(n).to_vec();
        if d.nodes[n].union {
            let mut acc = BTreeSet::new();
            let mut trunc = false;
            for a in ins {
                let (vals, t) = self.materialized_image(a)?;
                acc.extend(vals);
                trunc |= t;
            }
            return Ok(Subset::Ext { universe: u, values: acc, truncated: trunc });
        }
        let mut imgs = Vec::with_capacity(ins.len());
        let mut trunc = false;
        for &a in &ins {
            let (img, t) = self.image(a)?;
            trunc |= t;
            imgs.push((a, img));
        }
        let candidates: BTreeSet<Value>;
        let smallest_ext = imgs
            .iter()
            .enumerate()
            .filter_map(|(i, (_, img))| match img {
                Img::Ext(s) => Some((i, s.len())),
                _ => None,
            })
            .min_by_key(|&(_, l)| l)
            .map(|(i, _)| i);
        if let Some(i) = smallest_ext {
            let Img::Ext(s) = &imgs[i].1 else { unreachable!() };
            candidates = s.clone();
        } else {
            let mut pats: Vec<&PatSet> = imgs
                .iter()
                .filter_map(|(_, img)| match img {
                    Img::Pats(p) => Some(p),
                    _ => None,
                })
                .collect();
            let exact_finite = if pats.is_empty() {
                if u.is_finite() {
                    let w = u.window(self.b)?;
                    trunc |= w.truncated;
                    Some(w.values.into_iter().collect())
                } else {
                    None
                }
            } else {
                pats.sort_by_key(|p| p.pats.len());
                let mut acc = pats[0].clone();
                for p in &pats[1..] {
                    if acc.is_finite_exact() {
                        break;
                    }
                    match acc.intersect(p, UNIFY_LIMIT) {
                        Some(x) => acc = x,
                        None => break,
                    }
                }
                let e = acc.expand(&u, self.b)?;
                if (acc.inexact || e.unbounded || e.truncated) && !u.is_finite() {
                    None
                } else {
                    trunc |= e.truncated;
                    Some(e.values)
                }
            };
            match exact_finite {
                Some(c) => candidates = c,
                None => {
                    let preds = imgs.iter().map(|(a, img)| self.pred_of(*a, img)).collect();
                    return Ok(Subset::Int { universe: u, pred: Pred::And(preds), truncated: trunc });
                }
            }
        }
        let mut keep = BTreeSet::new();
        'cand: for v in candidates {
            for (a, img) in &imgs {
                let ok = match img {
                    Img::Ext(s) => s.contains(&v),
                    Img::Pats(_) => self.member_via(*a, &v)?,
                    Img::Int(s) => s.member(&v)?,
                };
                if !ok {
                    continue 'cand;
                }
            }
            keep.insert(v);
        }
        Ok(Subset::Ext { universe: u, values: keep, truncated: trunc })
    }

    fn pred_of(&self, a: usize, img: &Img) -> Pred {
        match img {
            Img::Int(Subset::Int { pred, .. }) => pred.clone(),
            _ => match &self.d.arrows[a].map {
                ArrowMap::Forward(f) => Pred::Image { f: f.clone(), source: Box::new(self.src(a).clone()) },
                ArrowMap::Inverse(f) => Pred::Preimage { f: f.clone(), target: Box::new(self.src(a).clone()) },
                ArrowMap::Cmpl => {
                    let u = self.src(a).universe().clone();
                    Pred::Not(Box::new(Pred::Preimage { f: MapExpr::Id(u), target: Box::new(self.src(a).clone()) }))
                }
            },
        }
    }

    fn materialized_image(&mut self, a: usize) -> Result<(BTreeSet<Value>, bool)> {
        let arrow = &self.d.arrows[a];
        if let ArrowMap::Forward(f) = &arrow.map {
            return self.forward_image_cached(a, f);
        }
        let img = apply_arrow(arrow, self.src(a), self.b)?;
        let m = img.materialize(self.b)?;
        Ok((m.values, m.truncated || m.unbounded))
    }

    /// Cut a cyclic node's value back to the window; flags truncation when
    /// anything is removed.
    fn clip(&mut self, n: usize, s: Subset) -> Result<Subset> {
        let u = &self.d.nodes[n].universe;
        let s = match s {
            Subset::Int { .. } => {
                let m = s.materialize(self.b)?;
                Subset::Ext { universe: u.clone(), values: m.values, truncated: m.truncated || m.unbounded }
            }
            ext => ext,
        };
        let Subset::Ext { universe, values, truncated } = s else { unreachable!() };
        let grading = self.d.grading(n);
        let mut keep = BTreeSet::new();
        let mut cut = false;
        for v in values {
            let inside = match grading {
                Some(g) => {
                    let cap = g.cap.unwrap_or(self.b.grade_cap).min(self.b.nat_max);
                    grade_of(&g.map, &v)? <= cap
                }
                None => universe.in_window(&v, self.b),
            };
            if inside {
                keep.insert(v);
            } else {
                cut = true;
            }
        }
        self.truncated |= cut;
        Ok(Subset::Ext { universe, values: keep, truncated: truncated || cut })
    }

    fn kleene(&mut self, free: &[usize]) -> Result<()> {
        for &n in free {
            self.vals[n] = Some(Subset::empty(&self.d.nodes[n].universe));
        }
        self.cache = Some(HashMap::new());
        let mut passes = 0u64;
        loop {
            let mut changed = false;
            for &n in free {
                let s = self.compute(n)?;
                let s = self.clip(n, s)?;
                if Some(&s) != self.vals[n].as_ref() {
                    changed = true;
                    self.set(n, s)?;
                }
            }
            if !changed {
                break;
            }
            passes += 1;
            if passes > self.b.iter_cap {
                return Err(Error::IterationCap(passes));
            }
        }
        self.cache = None;
        Ok(())
    }

    /// Row evaluation: graded nodes receive their seed row from outside the
    /// component, then each row is pushed once around the cycle.
    fn rows(&mut self, free: &[usize]) -> Result<()> {
        let d = self.d;
        let graded: Vec<usize> = free.iter().copied().filter(|&n| d.grading(n).is_some()).collect();
        for &g in &graded {
            if !d.nodes[g].union {
                return Err(Error::Malformed(format!("graded node {} must be union-marked", d.nodes[g].name)));
            }
        }
        let interior: Vec<usize> = free.iter().copied().filter(|n| !graded.contains(n)).collect();
        let order = self.interior_order(&interior)?;
        let in_comp = |n: usize| free.contains(&n);
        let is_cut = |a: usize| in_comp(d.arrows[a].source);

        let mut row: BTreeMap<usize, BTreeSet<Value>> = BTreeMap::new();
        for &g in &graded {
            self.vals[g] = Some(Subset::empty(&d.nodes[g].universe));
        }
        for &n in &interior {
            self.vals[n] = Some(Subset::empty(&d.nodes[n].universe));
        }
        for &g in &graded {
            let mut r = BTreeSet::new();
            for &a in d.ins(g) {
                if !is_cut(a) {
                    let (vals, t) = self.materialized_image(a)?;
                    self.truncated |= t;
                    r.extend(vals);
                }
            }
            row.insert(g, r);
        }
        let mut acc: BTreeMap<usize, BTreeSet<Value>> = graded.iter().map(|&g| (g, BTreeSet::new())).collect();
        let mut k = 0u64;
        loop {
            self.row = Some(k);
            for &g in &graded {
                let gd = d.grading(g).expect("graded");
                let cap = gd.cap.unwrap_or(self.b.grade_cap).min(self.b.nat_max);
                let r = row.get_mut(&g).expect("row");
                let mut over = false;
                for v in r.iter() {
                    let grade = grade_of(&gd.map, v)?;
                    if grade != k {
                        return Err(Error::GradingViolated {
                            node: d.nodes[g].name.clone(),
                            witness: v.to_string(),
                            grade,
                            row: k,
                        });
                    }
                    over |= grade > cap;
                }
                if over {
                    r.clear();
                    self.truncated = true;
                }
                let mut all = acc[&g].clone();
                all.extend(r.iter().cloned());
                let s = Subset::Ext { universe: d.nodes[g].universe.clone(), values: all, truncated: false };
                self.set(g, s)?;
                acc.insert(g, acc[&g].union(r).cloned().collect());
            }
            if row.values().all(BTreeSet::is_empty) {
                break;
            }
            k += 1;
            if k > self.b.iter_cap {
                return Err(Error::IterationCap(k));
            }
            // push the current row around the cycle
            for &g in &graded {
                let s = Subset::Ext { universe: d.nodes[g].universe.clone(), values: row[&g].clone(), truncated: false };
                self.vals[g] = Some(s);
            }
            for group in &order {
                self.interior_step(group, None)?;
            }
            let mut next = BTreeMap::new();
            for &g in &graded {
                let mut r = BTreeSet::new();
                for &a in d.ins(g) {
                    if is_cut(a) {
                        let (vals, t) = self.materialized_image(a)?;
                        self.truncated |= t;
                        r.extend(vals);
                    }
                }
                next.insert(g, r);
            }
            row = next;
        }
        self.row = None;
        // final pass over the accumulated rows
        let trunc = self.truncated;
        for &g in &graded {
            let s = Subset::Ext { universe: d.nodes[g].universe.clone(), values: acc[&g].clone(), truncated: trunc };
            self.vals[g] = Some(s);
        }
        for group in &order {
            self.interior_step(group, Some(trunc))?;
        }
        for &g in &graded {
            let gd = d.grading(g).expect("graded");
            let cap = gd.cap.unwrap_or(self.b.grade_cap).min(self.b.nat_max);
            for &a in d.ins(g) {
                let (vals, _) = self.materialized_image(a)?;
                for v in vals {
                    let grade = grade_of(&gd.map, &v)?;
                    if grade <= cap && !acc[&g].contains(&v) {
                        return Err(Error::GradingViolated {
                            node: d.nodes[g].name.clone(),
                            witness: v.to_string(),
                            grade,
                            row: cap + 1,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Recompute one interior group; cyclic groups are iterated to their
    /// least fixed point inside the window.
    fn interior_step(&mut self, group: &Group, mark: Option<bool>) -> Result<()> {
        match group {
            Group::Single(n) => {
                let s = self.compute(*n)?;
                match mark {
                    Some(t) => self.set(*n, s.with_truncated(t))?,
                    None => self.vals[*n] = Some(s),
                }
            }
            Group::Cycle(nodes) => {
                self.kleene(nodes)?;
                if let Some(t) = mark {
                    for &n in nodes {
                        let s = self.vals[n].take().expect("solved");
                        let was = s.truncated();
                        self.vals[n] = Some(s.with_truncated(t || was));
                    }
                }
            }
        }
        Ok(())
    }

    /// Topological order of the non-graded part of a component once the
    /// arrows into graded nodes are cut. Remaining cycles must be free of
    /// complements and are solved by iteration on every row.
    fn interior_order(&self, interior: &[usize]) -> Result<Vec<Group>> {
        let d = self.d;
        let idx: HashMap<usize, usize> = interior.iter().enumerate().map(|(i, &n)| (n, i)).collect();
        let comps = strongly_connected(interior.len(), |i| {
            d.outs(interior[i]).iter().filter_map(|&a| idx.get(&d.arrows[a].target).copied()).collect()
        });
        let mut order = Vec::new();
        for c in comps {
            let n = interior[c[0]];
            if c.len() > 1 || d.outs(n).iter().any(|&a| d.arrows[a].target == n) {
                let nodes: Vec<usize> = c.iter().map(|&i| interior[i]).collect();
                order.push(Group::Cycle(nodes));
            } else {
                order.push(Group::Single(n));
            }
        }
        Ok(order)
    }
}

enum Group {
    Single(usize),
    Cycle(Vec<usize>),
}

fn grade_of(g: &MapExpr, v: &Value) -> Result<u64> {
    let x = g.apply(v)?;
    x.as_nat().ok_or_else(|| Error::Domain(format!("grade of {v} is {x}")))
}

/// All sections extending `t` with one candidate per free node, completed
/// by the solver and kept when they satisfy every constraint.
pub fn enumerate_sections(d: &Diagram, t: &PartialSection, f: &FreeSpec, b: &SolverBounds) -> Result<Vec<CrossSection>> {
    let nodes: Vec<usize> = f.candidates.keys().copied().collect();
    for &n in &nodes {
        let node = d.nodes.get(n).ok_or_else(|| Error::UnknownNode(n.to_string()))?;
        if t.contains_key(&n) {
            return Err(Error::Malformed(format!("{} is both anchored and free", node.name)));
        }
        for c in &f.candidates[&n] {
            if *c.universe() != node.universe {
                return Err(Error::UniverseMismatch(format!("candidate for {} is over {}", node.name, c.universe())));
            }
        }
    }
    let lists: Vec<&Vec<Subset>> = nodes.iter().map(|n| &f.candidates[n]).collect();
    if lists.iter().any(|l| l.is_empty()) {
        return Ok(Vec::new());
    }
    let total = lists.iter().fold(1u128, |acc, l| acc.saturating_mul(l.len() as u128));
    if total > b.iter_cap as u128 {
        return Err(Error::IterationCap(b.iter_cap));
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; lists.len()];
    loop {
        let mut anchors = t.clone();
        for (k, &n) in nodes.iter().enumerate() {
            anchors.insert(n, lists[k][idx[k]].clone());
        }
        let mut s = solve(d, &anchors, b, Mode::Auto)?;
        s.provenance = Provenance::Enumerated;
        if check_section(d, &s, b)?.is_valid() {
            out.push(s);
        }
        // odometer, last node fastest
        let mut k = lists.len();
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < lists[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// `a` is a proper subset of `b`, for the decidable shapes.
fn strictly_below(a: &Subset, b: &Subset, node: &str) -> Result<bool> {
    match (a, b) {
        (Subset::Ext { values: x, .. }, Subset::Ext { values: y, .. }) => Ok(x.len() < y.len() && x.is_subset(y)),
        (Subset::Int { pred: Pred::AtMost(c), .. }, Subset::Int { pred: Pred::AtMost(e), .. }) => {
            match (c.as_rat(), e.as_rat()) {
                (Some(c), Some(e)) => Ok(c < e),
                _ => Err(Error::Incomparable(node.to_string())),
            }
        }
        (Subset::Ext { values, .. }, Subset::Int { pred: Pred::AtMost(_), .. }) => {
            // a finite set never covers an unbounded down-set
            for v in values {
                if !b.member(v)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        (Subset::Int { pred: Pred::AtMost(_), .. }, Subset::Ext { .. }) => Ok(false),
        _ => Err(Error::Incomparable(node.to_string())),
    }
}

/// Keep, node by node, the sections whose assignment is minimal under
/// inclusion. Order is preserved and incomparable minima are all kept.
pub fn minimize(sections: &[CrossSection], seq: &[usize]) -> Result<Vec<CrossSection>> {
    let mut cur: Vec<CrossSection> = sections.to_vec();
    for &x in seq {
        let name = x.to_string();
        let mut keep = Vec::new();
        for (i, s) in cur.iter().enumerate() {
            let a = s.sets.get(x).ok_or_else(|| Error::UnknownNode(name.clone()))?;
            let mut dominated = false;
            for (j, o) in cur.iter().enumerate() {
                if i != j && strictly_below(&o.sets[x], a, &name)? {
                    dominated = true;
                    break;
                }
            }
            if !dominated {
                keep.push(s.clone());
            }
        }
        cur = keep;
    }
    Ok(cur)
}

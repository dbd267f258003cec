//! Boolean forcing over cross-section membership.
//!
//! Every pair (node, value) gets a variable `x`, every pair (arrow, target
//! value) a variable `y`, and the root `x0` is fixed to 1. A variable is
//! forced once its single defining constraint is satisfied by variables that
//! are already forced. Variables are ordered level-major: by the largest
//! natural number inside the value, then by node/arrow index, then by value.
//! Each level holds finitely many variables, so the order is an enumeration
//! of the whole variable set.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashMap, HashSet};
use std::fmt;

use num_integer::Integer;

use crate::bounds::SolverBounds;
use crate::diagram::{Diagram, PartialSection};
use crate::error::{Error, Result};
use crate::map::arrow::ArrowMap;
use crate::map::expr::MapExpr;
use crate::map::pattern::{PatSet, Pattern};
use crate::map::preimage::preimage_pattern;
use crate::universe::Universe;
use crate::value::Value;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BoolVar {
    Root,
    X(usize, Value),
    Y(usize, Value),
}

impl fmt::Display for BoolVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoolVar::Root => write!(f, "x0"),
            BoolVar::X(n, v) => write!(f, "x[{n}]{v}"),
            BoolVar::Y(a, v) => write!(f, "y[{a}]{v}"),
        }
    }
}

/// Right-hand side of a disjunction.
#[derive(Debug, Clone)]
pub enum Disjuncts {
    Vars(Vec<BoolVar>),
    /// `x_u` for every `u` in `node` with `f(u) = target`.
    Preimage { node: usize, f: MapExpr, target: Value },
}

/// The single constraint with a given variable on its left-hand side.
#[derive(Debug, Clone)]
pub enum Constraint {
    True,
    False,
    Eq(BoolVar),
    Or(Disjuncts),
    And(Vec<BoolVar>),
}

/// Position of a variable in the enumeration.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Rank {
    pub level: u64,
    pub group: usize,
    pub value: Option<Value>,
}

#[derive(Debug, Clone)]
pub struct ConstraintSystem<'a> {
    d: &'a Diagram,
    anchors: PartialSection,
    bounds: SolverBounds,
}

pub fn build_constraints<'a>(d: &'a Diagram, anchors: &PartialSection) -> Result<ConstraintSystem<'a>> {
    if d.has_cmpl() {
        return Err(Error::ComplementInForcing);
    }
    for (&n, s) in anchors {
        let node = d.nodes.get(n).ok_or_else(|| Error::UnknownNode(n.to_string()))?;
        if !s.is_ext() {
            return Err(Error::NotEnumerable(format!("anchor at {} must be extensional", node.name)));
        }
    }
    for (n, node) in d.nodes.iter().enumerate() {
        if d.ins(n).is_empty() && !anchors.contains_key(&n) {
            return Err(Error::Underdetermined(node.name.clone()));
        }
    }
    Ok(ConstraintSystem { d, anchors: anchors.clone(), bounds: SolverBounds::default() })
}

impl<'a> ConstraintSystem<'a> {
    pub fn diagram(&self) -> &'a Diagram {
        self.d
    }

    fn anchored(&self, n: usize) -> Option<&BTreeSet<Value>> {
        self.anchors.get(&n).and_then(|s| s.values())
    }

    fn universe_of(&self, var: &BoolVar) -> Option<&Universe> {
        match var {
            BoolVar::Root => None,
            BoolVar::X(n, _) => Some(&self.d.nodes[*n].universe),
            BoolVar::Y(a, _) => Some(&self.d.nodes[self.d.arrows[*a].target].universe),
        }
    }

    fn check(&self, var: &BoolVar) -> Result<()> {
        let ok = match var {
            BoolVar::Root => true,
            BoolVar::X(n, _) => *n < self.d.len(),
            BoolVar::Y(a, _) => *a < self.d.arrows.len(),
        };
        if !ok {
            return Err(Error::UnknownNode(var.to_string()));
        }
        if let (Some(u), BoolVar::X(_, v) | BoolVar::Y(_, v)) = (self.universe_of(var), var) {
            u.check(v)?;
        }
        Ok(())
    }

    /// χ for one variable.
    pub fn constraint(&self, var: &BoolVar) -> Result<Constraint> {
        self.check(var)?;
        Ok(match var {
            BoolVar::Root => Constraint::True,
            BoolVar::X(n, v) => {
                if let Some(t) = self.anchored(*n) {
                    if t.contains(v) {
                        Constraint::Or(Disjuncts::Vars(vec![BoolVar::Root]))
                    } else {
                        Constraint::False
                    }
                } else {
                    let ys: Vec<BoolVar> = self.d.ins(*n).iter().map(|&a| BoolVar::Y(a, v.clone())).collect();
                    if self.d.nodes[*n].union {
                        Constraint::Or(Disjuncts::Vars(ys))
                    } else {
                        Constraint::And(ys)
                    }
                }
            }
            BoolVar::Y(a, v) => {
                let arrow = &self.d.arrows[*a];
                match &arrow.map {
                    ArrowMap::Inverse(f) => Constraint::Eq(BoolVar::X(arrow.source, f.apply(v)?)),
                    ArrowMap::Forward(f) => {
                        let pats = preimage_pattern(f, &Pattern::Exact(v.clone()), &self.bounds)?;
                        if pats.is_finite_exact() {
                            let mut xs = Vec::new();
                            for p in &pats.pats {
                                if let Pattern::Exact(u) = p {
                                    xs.push(BoolVar::X(arrow.source, u.clone()));
                                }
                            }
                            Constraint::Or(Disjuncts::Vars(xs))
                        } else {
                            Constraint::Or(Disjuncts::Preimage { node: arrow.source, f: f.clone(), target: v.clone() })
                        }
                    }
                    ArrowMap::Cmpl => return Err(Error::ComplementInForcing),
                }
            }
        })
    }

    pub fn rank(&self, var: &BoolVar) -> Rank {
        match var {
            BoolVar::Root => Rank { level: 0, group: 0, value: None },
            BoolVar::X(n, v) => Rank { level: v.level(), group: 1 + n, value: Some(v.clone()) },
            BoolVar::Y(a, v) => Rank { level: v.level(), group: 1 + self.d.len() + a, value: Some(v.clone()) },
        }
    }

    /// Every variable of level at most `level`, in enumeration order.
    pub fn vars_through_level(&self, level: u64) -> Result<Vec<BoolVar>> {
        let mut out = vec![BoolVar::Root];
        for l in 0..=level {
            for n in 0..self.d.len() {
                for v in level_slice(&self.d.nodes[n].universe, l, &Pattern::Any)? {
                    out.push(BoolVar::X(n, v));
                }
            }
            for (a, arrow) in self.d.arrows.iter().enumerate() {
                for v in level_slice(&self.d.nodes[arrow.target].universe, l, &Pattern::Any)? {
                    out.push(BoolVar::Y(a, v));
                }
            }
        }
        Ok(out)
    }

    fn forced_by(&self, z: &BoolVar, y: &HashSet<BoolVar>) -> Result<bool> {
        Ok(match self.constraint(z)? {
            Constraint::True => true,
            Constraint::False => false,
            Constraint::Eq(v) => y.contains(&v),
            Constraint::And(vs) => vs.iter().all(|v| y.contains(v)),
            Constraint::Or(Disjuncts::Vars(vs)) => vs.iter().any(|v| y.contains(v)),
            Constraint::Or(Disjuncts::Preimage { node, f, target }) => {
                let mut hit = false;
                for v in y {
                    if let BoolVar::X(n, u) = v {
                        if *n == node && f.apply(u).ok().as_ref() == Some(&target) {
                            hit = true;
                            break;
                        }
                    }
                }
                hit
            }
        })
    }
}

/// Values of `u` matching `p` whose level is exactly `level`.
pub fn level_slice(u: &Universe, level: u64, p: &Pattern) -> Result<Vec<Value>> {
    if let Pattern::Exact(v) = p {
        return Ok(if u.contains(v) && v.level() == level { vec![v.clone()] } else { Vec::new() });
    }
    let out: Vec<Value> = match u {
        Universe::Unit => {
            if level == 0 {
                vec![Value::Unit]
            } else {
                Vec::new()
            }
        }
        Universe::Bool | Universe::Fin(_) => {
            let card = u.cardinality().unwrap_or(0);
            if level < card {
                vec![Value::Nat(level)]
            } else {
                Vec::new()
            }
        }
        Universe::Nat => vec![Value::Nat(level)],
        Universe::Int => {
            let l = i64::try_from(level).map_err(|_| Error::Overflow("level".into()))?;
            if l == 0 {
                vec![Value::Int(0)]
            } else {
                vec![Value::Int(-l), Value::Int(l)]
            }
        }
        Universe::Rat => {
            let l = i64::try_from(level).map_err(|_| Error::Overflow("level".into()))?;
            let mut vs = Vec::new();
            for d in 1..=l {
                for n in -l..=l {
                    if n.abs().max(d) == l && n.gcd(&d) == 1 {
                        vs.push(Value::rat(n, d));
                    }
                }
            }
            vs
        }
        Universe::Alphabet { .. } | Universe::Pow(_) => {
            if level > 0 {
                Vec::new()
            } else {
                match u.cardinality() {
                    Some(c) if c <= 1 << 20 => u.elements().unwrap_or_default(),
                    _ => return Err(Error::NotEnumerable(u.to_string())),
                }
            }
        }
        Universe::Sum(us) => {
            let mut vs = Vec::new();
            for (i, ui) in us.iter().enumerate() {
                let sub = match p {
                    Pattern::Any => Pattern::Any,
                    Pattern::Inj(j, q) if *j == i => (**q).clone(),
                    _ => continue,
                };
                for v in level_slice(ui, level, &sub)? {
                    vs.push(Value::Inj(i, Box::new(v)));
                }
            }
            vs
        }
        Universe::Prod(us) => {
            let comps = match p.components(us.len()) {
                Some(c) => c,
                None => return Ok(Vec::new()),
            };
            let mut lo = Vec::with_capacity(us.len());
            let mut eq = Vec::with_capacity(us.len());
            for (ui, pi) in us.iter().zip(&comps) {
                let mut below = Vec::new();
                for l in 0..level {
                    below.extend(level_slice(ui, l, pi)?);
                }
                lo.push(below);
                eq.push(level_slice(ui, level, pi)?);
            }
            let mut vs = Vec::new();
            // the first component at the full level is j
            for j in 0..us.len() {
                let lists: Vec<Vec<&Value>> = (0..us.len())
                    .map(|i| match i.cmp(&j) {
                        std::cmp::Ordering::Less => lo[i].iter().collect(),
                        std::cmp::Ordering::Equal => eq[i].iter().collect(),
                        std::cmp::Ordering::Greater => lo[i].iter().chain(eq[i].iter()).collect(),
                    })
                    .collect();
                cartesian(&lists, &mut vs);
            }
            vs
        }
        Universe::Seq(e) => {
            let mut upto = Vec::new();
            for l in 0..=level {
                upto.extend(level_slice(e, l, &Pattern::Any)?);
            }
            let mut vs = Vec::new();
            for len in 0..=level as usize {
                let lists: Vec<Vec<&Value>> = vec![upto.iter().collect(); len];
                let mut tuples = Vec::new();
                cartesian(&lists, &mut tuples);
                for t in tuples {
                    let Value::Tuple(items) = t else { continue };
                    let s = Value::Seq(items);
                    if s.level() == level {
                        vs.push(s);
                    }
                }
                if vs.len() > 1 << 20 {
                    return Err(Error::NotEnumerable(u.to_string()));
                }
            }
            vs
        }
    };
    Ok(out.into_iter().filter(|v| p.matches(v)).collect())
}

fn has_rat(u: &Universe) -> bool {
    match u {
        Universe::Rat => true,
        Universe::Prod(us) | Universe::Sum(us) => us.iter().any(has_rat),
        Universe::Seq(e) | Universe::Pow(e) => has_rat(e),
        _ => false,
    }
}

/// Bounds whose window holds every value of `u` of level at most `level`.
fn level_window(u: &Universe, level: u64) -> Result<SolverBounds> {
    let l = i64::try_from(level).map_err(|_| Error::Overflow("level".into()))?;
    let mut den = 1;
    if has_rat(u) {
        for k in 2..=l {
            den = den.lcm(&k);
            if den > 1 << 20 {
                return Err(Error::NotEnumerable(format!("rationals of level {level}")));
            }
        }
    }
    Ok(SolverBounds { nat_max: level, int_min: -l, int_max: l, rat_den: den, ..SolverBounds::default() })
}

fn cartesian(lists: &[Vec<&Value>], out: &mut Vec<Value>) {
    if lists.iter().any(Vec::is_empty) {
        return;
    }
    let mut idx = vec![0usize; lists.len()];
    loop {
        out.push(Value::Tuple(idx.iter().zip(lists).map(|(&i, l)| l[i].clone()).collect()));
        let mut k = lists.len();
        loop {
            if k == 0 {
                return;
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

/// The closure of `z` starting from `x0`: the stable set of
/// `Y_i = Y_{i-1} ∪ {z ∈ Z forced by Y_{i-1}}`.
pub fn forcing_closure(c: &ConstraintSystem<'_>, z: &[BoolVar]) -> Result<BTreeSet<BoolVar>> {
    let mut y: HashSet<BoolVar> = HashSet::new();
    if z.contains(&BoolVar::Root) {
        y.insert(BoolVar::Root);
    }
    loop {
        let mut add = Vec::new();
        for v in z {
            if !y.contains(v) && c.forced_by(v, &y)? {
                add.push(v.clone());
            }
        }
        if add.is_empty() {
            break;
        }
        y.extend(add);
    }
    Ok(y.into_iter().collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsOne {
    Forced { steps: u64 },
    Exhausted { steps: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReadOutcome {
    String { text: String, steps: u64 },
    Exhausted { steps: u64 },
}

/// Grows `Z_k = ν⁻¹{0..k} ∪ {x0, x}` and reports the first closure that
/// contains `x`. One step is one variable entering the forced set.
pub fn is_one(c: &ConstraintSystem<'_>, x: &BoolVar, budget: u64) -> Result<IsOne> {
    c.check(x)?;
    let mut e = Engine::new(c);
    e.add_query(x.clone())?;
    let done = e.run_until(budget, |e| e.forced.contains(x))?;
    Ok(if done { IsOne::Forced { steps: e.forced_at[x] } } else { IsOne::Exhausted { steps: e.steps } })
}

/// The forced variables once every variable of level at most `level` has
/// entered `Z`; equal to `forcing_closure` over that prefix.
pub fn closure_through_level(c: &ConstraintSystem<'_>, level: u64) -> Result<BTreeSet<BoolVar>> {
    let mut e = Engine::new(c);
    e.run_through_level(level)?;
    Ok(e.forced.into_iter().collect())
}

/// Reads the string encoded at a node over ℕ×ℕ by racing the membership
/// tests of `(i,0)`, `(i,1)` and the terminator check `(i-1, 1-ρ[i-1])`.
pub fn read_string(c: &ConstraintSystem<'_>, node: usize, budget: u64) -> Result<ReadOutcome> {
    if *c.d.universe(node) != Universe::nat2() {
        return Err(Error::UniverseMismatch(format!("{} is not N x N", c.d.nodes[node].name)));
    }
    let at = |i: usize, b: u64| BoolVar::X(node, Value::nat_pair(i as u64, b));
    let mut e = Engine::new(c);
    let mut rho: Vec<u64> = Vec::new();
    loop {
        let i = rho.len();
        let mut racers = vec![at(i, 0), at(i, 1)];
        if let Some(&last) = rho.last() {
            racers.push(at(i - 1, 1 - last));
        }
        for r in &racers {
            e.add_query(r.clone())?;
        }
        let done = e.run_until(budget, |e| racers.iter().any(|r| e.forced.contains(r)))?;
        if !done {
            return Ok(ReadOutcome::Exhausted { steps: e.steps });
        }
        let winner = racers
            .iter()
            .enumerate()
            .filter_map(|(k, r)| e.forced_at.get(r).map(|&s| (s, k)))
            .min()
            .map(|(_, k)| k)
            .expect("a racer was forced");
        match winner {
            2 => {
                rho.pop();
                let text: String = rho.iter().map(|b| if *b == 0 { '0' } else { '1' }).collect();
                return Ok(ReadOutcome::String { text, steps: e.steps });
            }
            b => {
                if racers.len() == 3 && e.forced.contains(&racers[2]) {
                    return Err(Error::NotStringEncoding(format!(
                        "position {} holds both symbols and position {i} is occupied",
                        i - 1
                    )));
                }
                rho.push(b as u64);
            }
        }
    }
}

enum Entry {
    Var(Rank, BoolVar),
    /// Preimage `f⁻¹(u)` of an inverse arrow, released one level at a time.
    Stream { rank: Rank, arrow: usize, point: Value, pats: PatSet },
}

impl Entry {
    fn rank(&self) -> &Rank {
        match self {
            Entry::Var(r, _) | Entry::Stream { rank: r, .. } => r,
        }
    }
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.rank() == other.rank()
    }
}

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.rank().cmp(other.rank())
    }
}

/// Incremental closure. `Z` is advanced directly to the next rank at which a
/// supported variable enters; the skipped variables are unsupported, so the
/// closures in between are unchanged.
struct Engine<'c, 'a> {
    c: &'c ConstraintSystem<'a>,
    forced: HashSet<BoolVar>,
    forced_at: HashMap<BoolVar, u64>,
    supported: HashSet<BoolVar>,
    counts: HashMap<(usize, Value), usize>,
    heap: BinaryHeap<Reverse<Entry>>,
    frontier: Rank,
    queries: HashSet<BoolVar>,
    pending: Vec<BoolVar>,
    steps: u64,
}

impl<'c, 'a> Engine<'c, 'a> {
    fn new(c: &'c ConstraintSystem<'a>) -> Engine<'c, 'a> {
        let mut e = Engine {
            c,
            forced: HashSet::new(),
            forced_at: HashMap::new(),
            supported: HashSet::new(),
            counts: HashMap::new(),
            heap: BinaryHeap::new(),
            frontier: Rank { level: 0, group: 0, value: None },
            queries: HashSet::new(),
            pending: Vec::new(),
            steps: 0,
        };
        e.force(BoolVar::Root);
        e
    }

    fn add_query(&mut self, v: BoolVar) -> Result<()> {
        self.c.check(&v)?;
        if self.queries.insert(v.clone()) && self.supported.remove(&v) {
            self.force(v);
        }
        Ok(())
    }

    fn force(&mut self, v: BoolVar) {
        if self.forced.contains(&v) {
            return;
        }
        self.steps += 1;
        self.forced_at.insert(v.clone(), self.steps);
        self.forced.insert(v.clone());
        self.pending.push(v);
    }

    fn support(&mut self, v: BoolVar) {
        if self.forced.contains(&v) {
            return;
        }
        let r = self.c.rank(&v);
        if self.queries.contains(&v) || r <= self.frontier {
            self.supported.remove(&v);
            self.force(v);
        } else if self.supported.insert(v.clone()) {
            self.heap.push(Reverse(Entry::Var(r, v)));
        }
    }

    fn propagate(&mut self) -> Result<()> {
        while let Some(v) = self.pending.pop() {
            let d = self.c.d;
            match v {
                BoolVar::Root => {
                    let anchored: Vec<(usize, Vec<Value>)> = self
                        .c
                        .anchors
                        .iter()
                        .map(|(&n, s)| (n, s.values().map(|vs| vs.iter().cloned().collect()).unwrap_or_default()))
                        .collect();
                    for (n, vs) in anchored {
                        for u in vs {
                            self.support(BoolVar::X(n, u));
                        }
                    }
                }
                BoolVar::X(n, u) => {
                    for &a in d.outs(n) {
                        match &d.arrows[a].map {
                            ArrowMap::Forward(f) => match f.apply(&u) {
                                Ok(t) => self.support(BoolVar::Y(a, t)),
                                // values beyond the machine integers are not represented
                                Err(Error::Overflow(_)) => {}
                                Err(e) => return Err(e),
                            },
                            ArrowMap::Inverse(f) => {
                                let pats = preimage_pattern(f, &Pattern::Exact(u.clone()), &self.c.bounds)?;
                                if pats.is_finite_exact() {
                                    for p in pats.pats {
                                        if let Pattern::Exact(t) = p {
                                            self.support(BoolVar::Y(a, t));
                                        }
                                    }
                                } else {
                                    self.open_stream(a, u.clone(), pats)?;
                                }
                            }
                            ArrowMap::Cmpl => return Err(Error::ComplementInForcing),
                        }
                    }
                }
                BoolVar::Y(a, t) => {
                    let n = d.arrows[a].target;
                    if self.c.anchors.contains_key(&n) {
                        continue;
                    }
                    if d.nodes[n].union {
                        self.support(BoolVar::X(n, t));
                    } else {
                        let need = d.ins(n).len();
                        let k = self.counts.entry((n, t.clone())).or_insert(0);
                        *k += 1;
                        if *k == need {
                            self.counts.remove(&(n, t.clone()));
                            self.support(BoolVar::X(n, t));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn open_stream(&mut self, arrow: usize, point: Value, pats: PatSet) -> Result<()> {
        for l in 0..=self.frontier.level {
            self.release(arrow, &point, &pats, l)?;
        }
        let group = 1 + self.c.d.len() + arrow;
        let rank = Rank { level: self.frontier.level + 1, group, value: None };
        self.heap.push(Reverse(Entry::Stream { rank, arrow, point, pats }));
        Ok(())
    }

    /// Supports the preimages of `point` at exactly `level`. A window-relative
    /// preimage is recomputed inside the window of that level, which holds
    /// every preimage of the level.
    fn release(&mut self, arrow: usize, point: &Value, pats: &PatSet, level: u64) -> Result<()> {
        let d = self.c.d;
        let ArrowMap::Inverse(f) = &d.arrows[arrow].map else { unreachable!("streams come from inverse arrows") };
        let u = &d.nodes[d.arrows[arrow].target].universe;
        let windowed;
        let pats = if pats.inexact {
            windowed = preimage_pattern(f, &Pattern::Exact(point.clone()), &level_window(u, level)?)?;
            &windowed
        } else {
            pats
        };
        for p in &pats.pats {
            for t in level_slice(u, level, p)? {
                match f.apply(&t) {
                    Ok(x) if x == *point => self.support(BoolVar::Y(arrow, t)),
                    Ok(_) | Err(Error::Overflow(_)) => {}
                    Err(e) => return Err(e),
                }
            }
        }
        Ok(())
    }

    /// Admit the next entry of the enumeration. False when nothing is left.
    fn advance(&mut self) -> Result<bool> {
        let Some(Reverse(entry)) = self.heap.pop() else { return Ok(false) };
        match entry {
            Entry::Var(rank, v) => {
                if !self.forced.contains(&v) {
                    self.frontier = rank;
                    self.supported.remove(&v);
                    self.force(v);
                }
            }
            Entry::Stream { rank, arrow, point, pats } => {
                self.frontier = rank.clone();
                self.release(arrow, &point, &pats, rank.level)?;
                let next = Rank { level: rank.level + 1, ..rank };
                self.heap.push(Reverse(Entry::Stream { rank: next, arrow, point, pats }));
            }
        }
        Ok(true)
    }

    fn run_until(&mut self, budget: u64, done: impl Fn(&Self) -> bool) -> Result<bool> {
        loop {
            self.propagate()?;
            if done(self) {
                return Ok(true);
            }
            if self.steps >= budget || !self.advance()? {
                return Ok(false);
            }
        }
    }

    fn run_through_level(&mut self, level: u64) -> Result<()> {
        loop {
            self.propagate()?;
            match self.heap.peek() {
                Some(Reverse(e)) if e.rank().level <= level => {
                    self.advance()?;
                }
                _ => return Ok(()),
            }
        }
    }
}

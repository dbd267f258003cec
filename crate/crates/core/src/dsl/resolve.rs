use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::bounds::SolverBounds;
use crate::diagram::{Diagram, PartialSection, RepresentationData};
use crate::map::expr::{GenDef, MapExpr};
use crate::map::structure::{builtin, table, StructureMapSet};
use crate::solver::FreeSpec;
use crate::subset::Subset;
use crate::universe::Universe;
use crate::value::Value;

use super::ast::{ArrowKind, Decl, GenBody, Ident, Located, MapAst, SetExpr};
use super::{DiagKind, Diagnostic};

/// The resolved content of a document.
#[derive(Debug, Clone)]
pub struct Model {
    pub diagram: Diagram,
    pub anchors: PartialSection,
    pub free: FreeSpec,
    pub target: Option<usize>,
    pub expected: Option<Subset>,
    pub minimize: Vec<usize>,
    pub bounds: SolverBounds,
    pub gens: BTreeMap<String, Arc<GenDef>>,
    /// Values of every `const` map written in the document.
    pub constants: BTreeSet<Value>,
}

impl Model {
    /// The document's own structure set: its generators and the constants
    /// it writes, including anchor values.
    pub fn structure(&self) -> StructureMapSet {
        let mut m = StructureMapSet::new();
        for g in self.gens.values() {
            m = m.with_gen(g);
        }
        for v in self.constants.iter().chain(self.anchors.values().flat_map(|s| s.values().into_iter().flatten())) {
            m = m.with_const(v.clone());
        }
        m
    }

    pub fn representation(&self) -> Option<RepresentationData> {
        let t = self.target?;
        let r = RepresentationData::new(self.diagram.clone(), self.anchors.clone(), t)
            .with_bounds(self.bounds.clone())
            .with_minimize(self.minimize.clone())
            .with_free(self.free.clone());
        Some(r)
    }
}

type Pos = (u32, u32);

fn res(at: Pos, msg: impl Into<String>) -> Diagnostic {
    Diagnostic::new(DiagKind::Resolution, at, msg)
}

enum SetDef<'a> {
    Alphabet(&'a [Ident]),
    Expr(&'a SetExpr),
}

enum MapDef<'a> {
    Gen(&'a GenBody),
    Map(&'a SetExpr, &'a SetExpr, &'a MapAst),
}

struct Resolver<'a> {
    sets: BTreeMap<&'a str, (SetDef<'a>, Pos)>,
    maps: BTreeMap<&'a str, (MapDef<'a>, Pos)>,
    set_memo: BTreeMap<String, Universe>,
    gen_memo: BTreeMap<String, Arc<GenDef>>,
    map_memo: BTreeMap<String, MapExpr>,
    active: Vec<String>,
    constants: BTreeSet<Value>,
}

impl<'a> Resolver<'a> {
    fn set_named(&mut self, id: &Ident) -> Result<Universe, Diagnostic> {
        if let Some(u) = self.set_memo.get(&id.name) {
            return Ok(u.clone());
        }
        let Some((def, _)) = self.sets.get(id.name.as_str()) else {
            return Err(res(id.pos(), format!("unknown set `{}`", id.name)).expecting("a declared set or alphabet"));
        };
        if self.active.contains(&id.name) {
            return Err(res(id.pos(), format!("set `{}` is defined in terms of itself", id.name)));
        }
        let u = match def {
            SetDef::Alphabet(syms) => {
                let names: Vec<&str> = syms.iter().map(|s| s.name.as_str()).collect();
                Universe::alphabet(&id.name, &names)
            }
            SetDef::Expr(e) => {
                let e: &SetExpr = e;
                self.active.push(id.name.clone());
                let u = self.set(e);
                self.active.pop();
                u?
            }
        };
        self.set_memo.insert(id.name.clone(), u.clone());
        Ok(u)
    }

    fn set(&mut self, e: &SetExpr) -> Result<Universe, Diagnostic> {
        Ok(match e {
            SetExpr::Unit => Universe::Unit,
            SetExpr::Bool => Universe::Bool,
            SetExpr::Fin(n) => Universe::Fin(*n),
            SetExpr::Nat => Universe::Nat,
            SetExpr::Int => Universe::Int,
            SetExpr::Rat => Universe::Rat,
            SetExpr::Named(i) => self.set_named(i)?,
            SetExpr::Prod(xs) => Universe::Prod(xs.iter().map(|x| self.set(x)).collect::<Result<_, _>>()?),
            SetExpr::Sum(xs) => Universe::Sum(xs.iter().map(|x| self.set(x)).collect::<Result<_, _>>()?),
            SetExpr::Pow(x) => {
                let u = self.set(x)?;
                Universe::pow(u).map_err(|e| res(first_pos(x), e.to_string()).expecting("a finite set of at most 64 elements"))?
            }
            SetExpr::Seq(x) => Universe::Seq(Box::new(self.set(x)?)),
        })
    }

    fn gen(&mut self, name: &str, body: &GenBody, at: Pos) -> Result<Arc<GenDef>, Diagnostic> {
        if let Some(g) = self.gen_memo.get(name) {
            return Ok(g.clone());
        }
        let g = match body {
            GenBody::Builtin { key, args, consts } => {
                let args = args.iter().map(|a| self.set(a)).collect::<Result<Vec<_>, _>>()?;
                builtin(name, &key.name, &args, consts).map_err(|e| {
                    res(key.pos(), e.to_string()).expecting(format!("one of {}", crate::map::structure::BUILTIN_KEYS.join(", ")))
                })?
            }
            GenBody::Table { dom, cod, rows } => {
                let (du, cu) = (self.set(dom)?, self.set(cod)?);
                let rows = rows
                    .iter()
                    .map(|(k, v)| Ok((du.coerce(k)?, cu.coerce(v)?)))
                    .collect::<crate::error::Result<Vec<_>>>()
                    .map_err(|e| res(at, e.to_string()))?;
                table(name, du, cu, rows).map_err(|e| res(at, e.to_string()))?
            }
        };
        let g = Arc::new(g);
        self.gen_memo.insert(name.to_string(), g.clone());
        Ok(g)
    }

    /// A named gen or map, checked against the domain it is applied on.
    fn map_named(&mut self, id: &Ident, dom: &Universe) -> Result<MapExpr, Diagnostic> {
        let Some((def, at)) = self.maps.get(id.name.as_str()) else {
            return Err(res(id.pos(), format!("unknown map `{}`", id.name)).expecting("a declared gen or map"));
        };
        let at = *at;
        let e = match def {
            MapDef::Gen(body) => {
                let body: &GenBody = body;
                MapExpr::Gen(self.gen(&id.name, body, at)?)
            }
            MapDef::Map(d, c, expr) => {
                if let Some(e) = self.map_memo.get(&id.name) {
                    e.clone()
                } else {
                    if self.active.contains(&id.name) {
                        return Err(res(id.pos(), format!("map `{}` is defined in terms of itself", id.name)));
                    }
                    let (d, c, expr): (&SetExpr, &SetExpr, &MapAst) = (d, c, expr);
                    self.active.push(id.name.clone());
                    let r = (|| {
                        let (du, cu) = (self.set(d)?, self.set(c)?);
                        let e = self.map(expr, &du, at)?;
                        if e.cod() != cu {
                            return Err(res(at, format!("map `{}` lands in {}, declared {}", id.name, e.cod(), cu)));
                        }
                        Ok(e)
                    })();
                    self.active.pop();
                    let e = r?;
                    self.map_memo.insert(id.name.clone(), e.clone());
                    e
                }
            }
        };
        if e.dom() != *dom {
            return Err(res(id.pos(), format!("`{}` has domain {}, applied on {dom}", id.name, e.dom())).expecting(format!("a map out of {dom}")));
        }
        Ok(e)
    }

    /// Elaborate `e` as a map out of `dom`; `at` locates errors in
    /// unnamed parts.
    fn map(&mut self, e: &MapAst, dom: &Universe, at: Pos) -> Result<MapExpr, Diagnostic> {
        let here = |e: &MapAst| first_map_pos(e).unwrap_or(at);
        Ok(match e {
            MapAst::Name(id) => self.map_named(id, dom)?,
            MapAst::Id => MapExpr::Id(dom.clone()),
            MapAst::Omega => MapExpr::Omega(dom.clone()),
            MapAst::Proj(ix) => {
                let width = match dom {
                    Universe::Prod(us) => us.len(),
                    _ => 0,
                };
                if let Some(bad) = ix.iter().find(|&&i| i > width) {
                    return Err(res(at, format!("projection p{bad} out of range for {dom}"))
                        .expecting(format!("components 1..{width} of a product")));
                }
                match ix[..] {
                    [i] => MapExpr::proj(dom, i - 1),
                    _ => MapExpr::proj_multi(dom, &ix.iter().map(|i| i - 1).collect::<Vec<_>>()),
                }
            }
            MapAst::Const(v, u) => {
                let cu = self.set(u)?;
                let v = cu.coerce(v).map_err(|err| res(at, err.to_string()).expecting(format!("a value of {cu}")))?;
                self.constants.insert(v.clone());
                MapExpr::constant(dom, v, &cu)
            }
            MapAst::Inj(k, u) => {
                let cu = self.set(u)?;
                let comp = match &cu {
                    Universe::Sum(us) => us.get(k - 1).cloned(),
                    _ => None,
                };
                match comp {
                    Some(c) if c == *dom => MapExpr::Inj { index: k - 1, cod: cu },
                    _ => return Err(res(at, format!("inj {k} into {cu} does not start from {dom}"))),
                }
            }
            MapAst::Compose(parts) => {
                let mut acc: Option<MapExpr> = None;
                for p in parts.iter().rev() {
                    let d = acc.as_ref().map_or_else(|| dom.clone(), MapExpr::cod);
                    let f = self.map(p, &d, here(p))?;
                    acc = Some(match acc {
                        None => f,
                        Some(inner) => MapExpr::compose(f, inner),
                    });
                }
                acc.unwrap_or(MapExpr::Id(dom.clone()))
            }
            MapAst::Prod(parts) => MapExpr::prod(parts.iter().map(|p| self.map(p, dom, here(p))).collect::<Result<Vec<_>, _>>()?),
            MapAst::Union(parts) => {
                let [a, b] = &parts[..] else {
                    return Err(res(at, "a union joins exactly two maps").expecting("parentheses around nested unions"));
                };
                let Universe::Sum(us) = dom else {
                    return Err(res(at, format!("a union of maps needs a sum domain, found {dom}")));
                };
                let [da, db] = &us[..] else {
                    return Err(res(at, format!("a union of two maps needs a two-way sum, found {dom}")));
                };
                let (fa, fb) = (self.map(a, da, here(a))?, self.map(b, db, here(b))?);
                if fa.cod() != fb.cod() {
                    return Err(res(at, format!("union parts land in {} and {}", fa.cod(), fb.cod())));
                }
                MapExpr::MapUnion(Box::new(fa), Box::new(fb))
            }
        })
    }
}

fn first_pos(e: &SetExpr) -> Pos {
    match e {
        SetExpr::Named(i) => i.pos(),
        SetExpr::Prod(xs) | SetExpr::Sum(xs) => xs.first().map_or((0, 0), first_pos),
        SetExpr::Pow(x) | SetExpr::Seq(x) => first_pos(x),
        _ => (0, 0),
    }
}

fn first_map_pos(e: &MapAst) -> Option<Pos> {
    match e {
        MapAst::Name(i) => Some(i.pos()),
        MapAst::Compose(xs) | MapAst::Prod(xs) | MapAst::Union(xs) => xs.iter().find_map(first_map_pos),
        _ => None,
    }
}

const BOUND_KEYS: &str = "nat_max, int_min, int_max, rat_den, grade_cap, card_cap or iter_cap";

fn apply_bound(b: &mut SolverBounds, k: &Ident, v: i64) -> Result<(), Diagnostic> {
    let nonneg = |v: i64| u64::try_from(v).map_err(|_| res(k.pos(), format!("bound {} must be non-negative", k.name)));
    match k.name.as_str() {
        "nat_max" => b.nat_max = nonneg(v)?,
        "int_min" => b.int_min = v,
        "int_max" => b.int_max = v,
        "rat_den" => *b = b.clone().with_rat_den(v),
        "grade_cap" => b.grade_cap = nonneg(v)?,
        "card_cap" => *b = b.clone().with_card_cap(nonneg(v)? as usize),
        "iter_cap" => *b = b.clone().with_iter_cap(nonneg(v)?),
        _ => return Err(res(k.pos(), format!("unknown bound `{}`", k.name)).expecting(BOUND_KEYS)),
    }
    Ok(())
}

pub fn resolve(decls: &[Located<Decl>]) -> Result<Model, Vec<Diagnostic>> {
    let mut errs = Vec::new();
    let mut r = Resolver {
        sets: BTreeMap::new(),
        maps: BTreeMap::new(),
        set_memo: BTreeMap::new(),
        gen_memo: BTreeMap::new(),
        map_memo: BTreeMap::new(),
        active: Vec::new(),
        constants: BTreeSet::new(),
    };
    let mut node_decls: Vec<(&Ident, &SetExpr, bool, &Option<(MapAst, Option<u64>)>)> = Vec::new();
    let mut node_names: BTreeSet<&str> = BTreeSet::new();
    for d in decls {
        let at = (d.line, d.col);
        let dup = |id: &Ident| res(id.pos(), format!("`{}` is defined twice", id.name)).expecting("one definition per name");
        match &d.item {
            Decl::Alphabet { name, symbols } => {
                if r.sets.insert(&name.name, (SetDef::Alphabet(symbols), at)).is_some() {
                    errs.push(dup(name));
                }
            }
            Decl::Set { name, expr } => {
                if r.sets.insert(&name.name, (SetDef::Expr(expr), at)).is_some() {
                    errs.push(dup(name));
                }
            }
            Decl::Gen { name, body } => {
                if r.maps.insert(&name.name, (MapDef::Gen(body), at)).is_some() {
                    errs.push(dup(name));
                }
            }
            Decl::Map { name, dom, cod, expr } => {
                if r.maps.insert(&name.name, (MapDef::Map(dom, cod, expr), at)).is_some() {
                    errs.push(dup(name));
                }
            }
            Decl::Node { name, set, union, grade } => {
                if !node_names.insert(&name.name) {
                    errs.push(dup(name));
                }
                node_decls.push((name, set, *union, grade));
            }
            _ => {}
        }
    }

    // every generator resolves, used or not
    let gen_names: Vec<(&str, Pos)> = r.maps.iter().filter(|(_, (d, _))| matches!(d, MapDef::Gen(_))).map(|(n, (_, p))| (*n, *p)).collect();
    for (n, at) in gen_names {
        if let Some((MapDef::Gen(body), _)) = r.maps.get(n) {
            let body: &GenBody = body;
            if let Err(e) = r.gen(n, body, at) {
                errs.push(e);
            }
        }
    }
    let map_names: Vec<(&str, Pos)> = r.maps.iter().filter(|(_, (d, _))| matches!(d, MapDef::Map(..))).map(|(n, (_, p))| (*n, *p)).collect();
    for (n, at) in map_names {
        if let Some((MapDef::Map(d, ..), _)) = r.maps.get(n) {
            let d: &SetExpr = d;
            let id = Ident { name: n.to_string(), line: at.0, col: at.1 };
            match r.set(d) {
                Ok(du) => {
                    if let Err(e) = r.map_named(&id, &du) {
                        errs.push(e);
                    }
                }
                Err(e) => errs.push(e),
            }
        }
    }

    let mut diagram = Diagram::new();
    for (name, set, union, _) in &node_decls {
        let u = r.set(set).unwrap_or_else(|e| {
            errs.push(e);
            Universe::Unit
        });
        diagram.add_node(&name.name, u, *union);
    }
    let node = |id: &Ident, errs: &mut Vec<Diagnostic>| -> Option<usize> {
        let n = diagram.node_id(&id.name).ok();
        if n.is_none() {
            errs.push(res(id.pos(), format!("unknown node `{}`", id.name)).expecting("a declared node"));
        }
        n
    };
    let mut grades = Vec::new();
    for (name, _, _, grade) in &node_decls {
        if let (Some((g, cap)), Some(n)) = (grade, node(name, &mut errs)) {
            match r.map(g, diagram.universe(n), name.pos()) {
                Ok(e) => grades.push((n, e, *cap, name.pos())),
                Err(e) => errs.push(e),
            }
        }
    }

    let mut arrows = Vec::new();
    let mut anchors = PartialSection::new();
    let mut free = FreeSpec::new();
    let (mut target, mut expected, mut minimize) = (None, None, Vec::new());
    let mut bounds = SolverBounds::default();
    let (mut seen_target, mut seen_min, mut seen_bounds) = (false, false, false);
    for d in decls {
        let at = (d.line, d.col);
        match &d.item {
            Decl::Arrow { kind, source, target: tgt } => {
                let (Some(s), Some(t)) = (node(source, &mut errs), node(tgt, &mut errs)) else { continue };
                let built = match kind {
                    ArrowKind::Fwd(m) => r.map(m, diagram.universe(s), at).map(|e| (Some(e), true)),
                    ArrowKind::Inv(m) => r.map(m, diagram.universe(t), at).map(|e| (Some(e), false)),
                    ArrowKind::Cmpl => Ok((None, true)),
                };
                match built {
                    Ok(b) => arrows.push((b, s, t, at)),
                    Err(e) => errs.push(e),
                }
            }
            Decl::Anchor { node: id, values } | Decl::Free { node: id, values } => {
                let Some(n) = node(id, &mut errs) else { continue };
                let u = diagram.universe(n).clone();
                let is_anchor = matches!(d.item, Decl::Anchor { .. });
                let vals: Result<Vec<Value>, _> = values.iter().map(|v| u.coerce(v)).collect();
                let vals = match vals {
                    Ok(v) => v,
                    Err(e) => {
                        errs.push(res(id.pos(), e.to_string()).expecting(format!("values of {u}")));
                        continue;
                    }
                };
                if anchors.contains_key(&n) || free.candidates.contains_key(&n) {
                    errs.push(res(id.pos(), format!("node `{}` is anchored or freed twice", id.name)));
                    continue;
                }
                if is_anchor {
                    match Subset::ext(&u, vals) {
                        Ok(s) => {
                            anchors.insert(n, s);
                        }
                        Err(e) => errs.push(res(id.pos(), e.to_string())),
                    }
                } else {
                    let vals: Vec<Value> = vals.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
                    match FreeSpec::all_subsets(&u, &vals) {
                        Ok(c) => free = free.with(n, c),
                        Err(e) => errs.push(res(id.pos(), e.to_string()).expecting("at most 20 values")),
                    }
                }
            }
            Decl::Target { node: id, expected: exp } => {
                if std::mem::replace(&mut seen_target, true) {
                    errs.push(res(at, "second target").expecting("one target"));
                }
                let Some(n) = node(id, &mut errs) else { continue };
                target = Some(n);
                if let Some(vs) = exp {
                    match Subset::ext_coerced(diagram.universe(n), vs.iter().cloned()) {
                        Ok(s) => expected = Some(s),
                        Err(e) => errs.push(res(id.pos(), e.to_string())),
                    }
                }
            }
            Decl::Minimize { nodes } => {
                if std::mem::replace(&mut seen_min, true) {
                    errs.push(res(at, "second minimize").expecting("one minimize sequence"));
                }
                minimize = nodes.iter().filter_map(|n| node(n, &mut errs)).collect();
            }
            Decl::Bounds { items } => {
                if std::mem::replace(&mut seen_bounds, true) {
                    errs.push(res(at, "second bounds").expecting("one bounds declaration"));
                }
                for (k, v) in items {
                    if let Err(e) = apply_bound(&mut bounds, k, *v) {
                        errs.push(e);
                    }
                }
            }
            _ => {}
        }
    }
    for ((e, fwd), s, t, at) in arrows {
        let out = match (e, fwd) {
            (Some(e), true) => diagram.forward(e, s, t),
            (Some(e), false) => diagram.inverse(e, s, t),
            (None, _) => diagram.cmpl(s, t),
        };
        if let Err(e) = out {
            errs.push(res(at, e.to_string()));
        }
    }
    for (n, e, cap, at) in grades {
        if let Err(e) = diagram.grade(n, e, cap) {
            errs.push(res(at, e.to_string()));
        }
    }
    if !errs.is_empty() {
        errs.sort_by_key(|d| (d.line, d.col));
        errs.dedup();
        return Err(errs);
    }
    Ok(Model { diagram, anchors, free, target, expected, minimize, bounds, gens: r.gen_memo, constants: r.constants })
}

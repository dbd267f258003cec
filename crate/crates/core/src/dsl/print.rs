use std::fmt::Write;

use crate::value::Value;

use super::ast::{ArrowKind, Decl, GenBody, Located, MapAst, SetExpr};

fn join<T>(xs: &[T], sep: &str, f: impl Fn(&T) -> String) -> String {
    xs.iter().map(f).collect::<Vec<_>>().join(sep)
}

fn values(vs: &[Value]) -> String {
    format!("{{{}}}", join(vs, ", ", Value::to_string))
}

pub fn set(e: &SetExpr) -> String {
    set_prec(e, 0)
}

// 0: sum, 1: product, 2: atom
fn set_prec(e: &SetExpr, prec: u8) -> String {
    let (own, s) = match e {
        SetExpr::Unit => (2, "1".into()),
        SetExpr::Bool => (2, "2".into()),
        SetExpr::Fin(n) => (2, format!("fin({n})")),
        SetExpr::Nat => (2, "N".into()),
        SetExpr::Int => (2, "Z".into()),
        SetExpr::Rat => (2, "Q".into()),
        SetExpr::Named(i) => (2, i.name.clone()),
        SetExpr::Pow(x) => (2, format!("P({})", set(x))),
        SetExpr::Seq(x) => (2, format!("Seq({})", set(x))),
        SetExpr::Prod(xs) => (1, join(xs, " * ", |x| set_prec(x, 2))),
        SetExpr::Sum(xs) => (0, join(xs, " + ", |x| set_prec(x, 1))),
    };
    if own < prec {
        format!("({s})")
    } else {
        s
    }
}

pub fn map(e: &MapAst) -> String {
    map_prec(e, 0)
}

// 0: union, 1: product, 2: composition, 3: atom
fn map_prec(e: &MapAst, prec: u8) -> String {
    let (own, s) = match e {
        MapAst::Name(i) => (3, i.name.clone()),
        MapAst::Id => (3, "id".into()),
        MapAst::Omega => (3, "omega".into()),
        MapAst::Proj(ix) if ix.iter().all(|&i| (1..=9).contains(&i)) => (3, format!("p{}", join(ix, "", usize::to_string))),
        MapAst::Proj(ix) => (3, format!("p[{}]", join(ix, ",", usize::to_string))),
        MapAst::Const(v, u) => (3, format!("(const {v} : {})", set(u))),
        MapAst::Inj(k, u) => (3, format!("(inj {k} : {})", set(u))),
        MapAst::Compose(xs) => (2, join(xs, " . ", |x| map_prec(x, 3))),
        MapAst::Prod(xs) => (1, join(xs, " * ", |x| map_prec(x, 2))),
        MapAst::Union(xs) => (0, join(xs, " + ", |x| map_prec(x, 1))),
    };
    if own < prec {
        format!("({s})")
    } else {
        s
    }
}

fn decl(d: &Decl) -> String {
    match d {
        Decl::Alphabet { name, symbols } => format!("alphabet {} = {{{}}}", name.name, join(symbols, ", ", |s| s.name.clone())),
        Decl::Set { name, expr } => format!("set {} = {}", name.name, set(expr)),
        Decl::Gen { name, body: GenBody::Builtin { key, args, consts } } => {
            let mut s = format!("gen {} = builtin {}", name.name, key.name);
            if !args.is_empty() {
                let _ = write!(s, "({})", join(args, ", ", set));
            }
            if !consts.is_empty() {
                let _ = write!(s, " [{}]", join(consts, ", ", Value::to_string));
            }
            s
        }
        Decl::Gen { name, body: GenBody::Table { dom, cod, rows } } => {
            let rows = join(rows, ", ", |(k, v)| format!("{k} -> {v}"));
            format!("gen {} : {} -> {} = table {{{rows}}}", name.name, set(dom), set(cod))
        }
        Decl::Map { name, dom, cod, expr } => format!("map {} : {} -> {} = {}", name.name, set(dom), set(cod), map(expr)),
        Decl::Node { name, set: u, union, grade } => {
            let mut s = format!("node {} : {}", name.name, set(u));
            if *union {
                s.push_str(" union");
            }
            if let Some((g, cap)) = grade {
                let _ = write!(s, " grade {}", map(g));
                if let Some(c) = cap {
                    let _ = write!(s, " cap {c}");
                }
            }
            s
        }
        Decl::Arrow { kind, source, target } => {
            let head = match kind {
                ArrowKind::Fwd(m) => format!("fwd {}", map(m)),
                ArrowKind::Inv(m) => format!("inv {}", map(m)),
                ArrowKind::Cmpl => "cmpl".into(),
            };
            format!("{head} : {} -> {}", source.name, target.name)
        }
        Decl::Anchor { node, values: vs } => format!("anchor {} = {}", node.name, values(vs)),
        Decl::Free { node, values: vs } => format!("free {} = {}", node.name, values(vs)),
        Decl::Target { node, expected: None } => format!("target {}", node.name),
        Decl::Target { node, expected: Some(vs) } => format!("target {} = {}", node.name, values(vs)),
        Decl::Minimize { nodes } => format!("minimize {}", join(nodes, ", ", |n| n.name.clone())),
        Decl::Bounds { items } => format!("bounds {}", join(items, ", ", |(k, v)| format!("{} = {v}", k.name))),
    }
}

/// One declaration per line, in document order, without comments.
pub fn print_spec(decls: &[Located<Decl>]) -> String {
    let mut out = String::new();
    for d in decls {
        out.push_str(&decl(&d.item));
        out.push_str(";\n");
    }
    out
}

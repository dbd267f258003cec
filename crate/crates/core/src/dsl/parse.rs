use crate::value::{Rat, Value};

use super::ast::{ArrowKind, Decl, GenBody, Ident, Located, MapAst, SetExpr};
use super::lex::{Tok, Token};
use super::{DiagKind, Diagnostic};

pub const DECL_KEYWORDS: &str =
    "`alphabet`, `set`, `gen`, `map`, `node`, `fwd`, `inv`, `cmpl`, `anchor`, `free`, `target`, `minimize` or `bounds`";

type PResult<T> = Result<T, Diagnostic>;

pub struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

/// `p1`, `p13`: projection names written with component digits.
pub fn proj_digits(s: &str) -> Option<Vec<usize>> {
    let d = s.strip_prefix('p')?;
    if d.is_empty() || !d.bytes().all(|b| (b'1'..=b'9').contains(&b)) {
        return None;
    }
    Some(d.bytes().map(|b| (b - b'0') as usize).collect())
}

pub fn is_reserved(s: &str) -> bool {
    matches!(s, "id" | "omega" | "const" | "inj" | "p") || proj_digits(s).is_some()
}

impl Parser {
    pub fn new(toks: Vec<Token>) -> Parser {
        Parser { toks, pos: 0 }
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.pos + 1).min(self.toks.len() - 1)].tok
    }

    fn here(&self) -> (u32, u32) {
        let t = &self.toks[self.pos];
        (t.line, t.col)
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &str) -> PResult<T> {
        Err(Diagnostic::new(DiagKind::Syntax, self.here(), format!("unexpected {}", self.peek().describe())).expecting(expected))
    }

    fn is_punct(&self, p: &str) -> bool {
        matches!(self.peek(), Tok::Punct(q) if *q == p)
    }

    fn is_word(&self, w: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == w)
    }

    fn eat_punct(&mut self, p: &str) -> bool {
        let hit = self.is_punct(p);
        if hit {
            self.bump();
        }
        hit
    }

    fn eat_word(&mut self, w: &str) -> bool {
        let hit = self.is_word(w);
        if hit {
            self.bump();
        }
        hit
    }

    fn punct(&mut self, p: &str) -> PResult<()> {
        if self.eat_punct(p) {
            Ok(())
        } else {
            self.fail(&format!("`{p}`"))
        }
    }

    fn word(&mut self, w: &str) -> PResult<()> {
        if self.eat_word(w) {
            Ok(())
        } else {
            self.fail(&format!("`{w}`"))
        }
    }

    fn ident(&mut self, what: &str) -> PResult<Ident> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                let (line, col) = self.here();
                self.bump();
                Ok(Ident { name, line, col })
            }
            _ => self.fail(what),
        }
    }

    /// A name being declared; reserved map names are refused.
    fn binder(&mut self, what: &str) -> PResult<Ident> {
        let at = self.here();
        let id = self.ident(what)?;
        if is_reserved(&id.name) {
            return Err(Diagnostic::new(DiagKind::Syntax, at, format!("`{}` is reserved", id.name)).expecting(what));
        }
        Ok(id)
    }

    fn nat(&mut self) -> PResult<u64> {
        match *self.peek() {
            Tok::Num(n) => {
                self.bump();
                Ok(n)
            }
            _ => self.fail("a natural number"),
        }
    }

    fn int(&mut self) -> PResult<i64> {
        let neg = self.eat_punct("-");
        let n = self.nat()?;
        let n = i64::try_from(n).map_err(|_| Diagnostic::new(DiagKind::Syntax, self.here(), "integer out of range"))?;
        Ok(if neg { -n } else { n })
    }

    pub fn document(&mut self) -> PResult<Vec<Located<Decl>>> {
        let mut out = Vec::new();
        while *self.peek() != Tok::Eof {
            let (line, col) = self.here();
            let item = self.decl()?;
            self.punct(";")?;
            out.push(Located { item, line, col });
        }
        Ok(out)
    }

    fn decl(&mut self) -> PResult<Decl> {
        let kw = match self.peek() {
            Tok::Ident(s) => s.clone(),
            _ => return self.fail(DECL_KEYWORDS),
        };
        match kw.as_str() {
            "alphabet" => {
                self.bump();
                let name = self.binder("an alphabet name")?;
                self.punct("=")?;
                self.punct("{")?;
                let symbols = self.comma_list("}", |p| p.ident("a symbol name"))?;
                Ok(Decl::Alphabet { name, symbols })
            }
            "set" => {
                self.bump();
                let name = self.binder("a set name")?;
                self.punct("=")?;
                Ok(Decl::Set { name, expr: self.set_expr()? })
            }
            "gen" => {
                self.bump();
                let name = self.binder("a generator name")?;
                if self.eat_punct(":") {
                    let dom = self.set_expr()?;
                    self.punct("->")?;
                    let cod = self.set_expr()?;
                    self.punct("=")?;
                    self.word("table")?;
                    self.punct("{")?;
                    let rows = self.comma_list("}", |p| {
                        let k = p.value()?;
                        p.punct("->")?;
                        Ok((k, p.value()?))
                    })?;
                    return Ok(Decl::Gen { name, body: GenBody::Table { dom, cod, rows } });
                }
                self.punct("=")?;
                self.word("builtin")?;
                let key = self.ident("a built-in name")?;
                let args = if self.eat_punct("(") { self.comma_list(")", Parser::set_expr)? } else { Vec::new() };
                let consts = if self.eat_punct("[") { self.comma_list("]", Parser::value)? } else { Vec::new() };
                Ok(Decl::Gen { name, body: GenBody::Builtin { key, args, consts } })
            }
            "map" => {
                self.bump();
                let name = self.binder("a map name")?;
                self.punct(":")?;
                let dom = self.set_expr()?;
                self.punct("->")?;
                let cod = self.set_expr()?;
                self.punct("=")?;
                Ok(Decl::Map { name, dom, cod, expr: self.map_expr()? })
            }
            "node" => {
                self.bump();
                let name = self.ident("a node name")?;
                self.punct(":")?;
                let set = self.set_expr()?;
                let union = self.eat_word("union");
                let grade = if self.eat_word("grade") {
                    let m = self.map_expr()?;
                    let cap = if self.eat_word("cap") { Some(self.nat()?) } else { None };
                    Some((m, cap))
                } else {
                    None
                };
                Ok(Decl::Node { name, set, union, grade })
            }
            "fwd" | "inv" | "cmpl" => {
                self.bump();
                let kind = match kw.as_str() {
                    "fwd" => ArrowKind::Fwd(self.map_expr()?),
                    "inv" => ArrowKind::Inv(self.map_expr()?),
                    _ => ArrowKind::Cmpl,
                };
                self.punct(":")?;
                let source = self.ident("a source node")?;
                self.punct("->")?;
                let target = self.ident("a target node")?;
                Ok(Decl::Arrow { kind, source, target })
            }
            "anchor" | "free" => {
                self.bump();
                let node = self.ident("a node name")?;
                self.punct("=")?;
                let values = self.value_set()?;
                Ok(if kw == "anchor" { Decl::Anchor { node, values } } else { Decl::Free { node, values } })
            }
            "target" => {
                self.bump();
                let node = self.ident("a node name")?;
                let expected = if self.eat_punct("=") { Some(self.value_set()?) } else { None };
                Ok(Decl::Target { node, expected })
            }
            "minimize" => {
                self.bump();
                let mut nodes = vec![self.ident("a node name")?];
                while self.eat_punct(",") {
                    nodes.push(self.ident("a node name")?);
                }
                Ok(Decl::Minimize { nodes })
            }
            "bounds" => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    let k = self.ident("a bound name")?;
                    self.punct("=")?;
                    items.push((k, self.int()?));
                    if !self.eat_punct(",") {
                        break;
                    }
                }
                Ok(Decl::Bounds { items })
            }
            _ => self.fail(DECL_KEYWORDS),
        }
    }

    /// Items up to `close`, which is consumed; the opener already was.
    fn comma_list<T>(&mut self, close: &str, mut item: impl FnMut(&mut Parser) -> PResult<T>) -> PResult<Vec<T>> {
        let mut out = Vec::new();
        if self.eat_punct(close) {
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            if self.eat_punct(close) {
                return Ok(out);
            }
            if !self.eat_punct(",") {
                return self.fail(&format!("`,` or `{close}`"));
            }
        }
    }

    fn value_set(&mut self) -> PResult<Vec<Value>> {
        self.punct("{")?;
        self.comma_list("}", Parser::value)
    }

    // set := sum ; sum := prod {"+" prod} ; prod := atom {"*" atom}
    fn set_expr(&mut self) -> PResult<SetExpr> {
        let mut parts = vec![self.set_prod()?];
        while self.eat_punct("+") {
            parts.push(self.set_prod()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap_or(SetExpr::Unit) } else { SetExpr::Sum(parts) })
    }

    fn set_prod(&mut self) -> PResult<SetExpr> {
        let mut parts = vec![self.set_atom()?];
        while self.eat_punct("*") {
            parts.push(self.set_atom()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap_or(SetExpr::Unit) } else { SetExpr::Prod(parts) })
    }

    fn set_atom(&mut self) -> PResult<SetExpr> {
        const WHAT: &str = "a set: `1`, `2`, `fin(n)`, `N`, `Z`, `Q`, `P(..)`, `Seq(..)`, a name or `(`";
        match self.peek().clone() {
            Tok::Num(1) => {
                self.bump();
                Ok(SetExpr::Unit)
            }
            Tok::Num(2) => {
                self.bump();
                Ok(SetExpr::Bool)
            }
            Tok::Punct("(") => {
                self.bump();
                let e = self.set_expr()?;
                self.punct(")")?;
                Ok(e)
            }
            Tok::Ident(s) => match s.as_str() {
                "N" | "Z" | "Q" => {
                    self.bump();
                    Ok(match s.as_str() {
                        "N" => SetExpr::Nat,
                        "Z" => SetExpr::Int,
                        _ => SetExpr::Rat,
                    })
                }
                "fin" if *self.peek2() == Tok::Punct("(") => {
                    self.bump();
                    self.bump();
                    let n = self.nat()?;
                    self.punct(")")?;
                    Ok(SetExpr::Fin(n))
                }
                "P" | "Seq" if *self.peek2() == Tok::Punct("(") => {
                    self.bump();
                    self.bump();
                    let e = Box::new(self.set_expr()?);
                    self.punct(")")?;
                    Ok(if s == "P" { SetExpr::Pow(e) } else { SetExpr::Seq(e) })
                }
                _ => Ok(SetExpr::Named(self.ident(WHAT)?)),
            },
            _ => self.fail(WHAT),
        }
    }

    // map := prod {"+" prod} ; prod := comp {"*" comp} ; comp := atom {"." atom}
    fn map_expr(&mut self) -> PResult<MapAst> {
        let mut parts = vec![self.map_prod()?];
        while self.eat_punct("+") {
            parts.push(self.map_prod()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap_or(MapAst::Id) } else { MapAst::Union(parts) })
    }

    fn map_prod(&mut self) -> PResult<MapAst> {
        let mut parts = vec![self.map_comp()?];
        while self.eat_punct("*") {
            parts.push(self.map_comp()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap_or(MapAst::Id) } else { MapAst::Prod(parts) })
    }

    fn map_comp(&mut self) -> PResult<MapAst> {
        let mut parts = vec![self.map_atom()?];
        while self.eat_punct(".") {
            parts.push(self.map_atom()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap_or(MapAst::Id) } else { MapAst::Compose(parts) })
    }

    fn map_atom(&mut self) -> PResult<MapAst> {
        const WHAT: &str = "a map: a name, `id`, `omega`, `pN`, `p[..]`, `(const v : set)`, `(inj k : set)` or `(`";
        match self.peek().clone() {
            Tok::Punct("(") => {
                self.bump();
                if self.eat_word("const") {
                    let v = self.value()?;
                    self.punct(":")?;
                    let u = self.set_expr()?;
                    self.punct(")")?;
                    return Ok(MapAst::Const(v, u));
                }
                if self.eat_word("inj") {
                    let k = self.nat()? as usize;
                    if k == 0 {
                        return self.fail("an injection index from 1");
                    }
                    self.punct(":")?;
                    let u = self.set_expr()?;
                    self.punct(")")?;
                    return Ok(MapAst::Inj(k, u));
                }
                let e = self.map_expr()?;
                self.punct(")")?;
                Ok(e)
            }
            Tok::Ident(s) => {
                if s == "id" {
                    self.bump();
                    return Ok(MapAst::Id);
                }
                if s == "omega" {
                    self.bump();
                    return Ok(MapAst::Omega);
                }
                if s == "p" && *self.peek2() == Tok::Punct("[") {
                    self.bump();
                    self.bump();
                    let idx = self.comma_list("]", |p| {
                        let n = p.nat()?;
                        if n == 0 {
                            return p.fail("a component index from 1");
                        }
                        Ok(n as usize)
                    })?;
                    if idx.is_empty() {
                        return self.fail("a component index");
                    }
                    return Ok(MapAst::Proj(idx));
                }
                if let Some(d) = proj_digits(&s) {
                    self.bump();
                    return Ok(MapAst::Proj(d));
                }
                if is_reserved(&s) {
                    return self.fail(WHAT);
                }
                Ok(MapAst::Name(self.ident(WHAT)?))
            }
            _ => self.fail(WHAT),
        }
    }

    /// Value literals, in the same notation values print in. Rationals with
    /// denominator 1 read as integers.
    pub fn value(&mut self) -> PResult<Value> {
        const WHAT: &str = "a value: number, `n/d`, `'sym`, `(..)`, `[..]`, `{..}` or `inK(..)`";
        match self.peek().clone() {
            Tok::Punct("(") => {
                self.bump();
                let mut items = self.comma_list(")", Parser::value)?;
                Ok(match items.len() {
                    0 => Value::Unit,
                    1 => items.pop().unwrap_or(Value::Unit),
                    _ => Value::Tuple(items),
                })
            }
            Tok::Punct("[") => {
                self.bump();
                Ok(Value::Seq(self.comma_list("]", Parser::value)?))
            }
            Tok::Punct("{") => {
                self.bump();
                let at = self.here();
                let bits = self.comma_list("}", Parser::nat)?;
                let mut m = 0u64;
                for b in bits {
                    if b >= 64 {
                        return Err(Diagnostic::new(DiagKind::Syntax, at, format!("bit {b} out of range")).expecting("bit indices below 64"));
                    }
                    m |= 1 << b;
                }
                Ok(Value::Mask(m))
            }
            Tok::Sym(s) => {
                self.bump();
                Ok(Value::sym(&s))
            }
            Tok::Ident(s) if s.starts_with("in") && s[2..].parse::<usize>().is_ok_and(|k| k >= 1) => {
                let k: usize = s[2..].parse().unwrap_or(1);
                self.bump();
                self.punct("(")?;
                let v = self.value()?;
                self.punct(")")?;
                Ok(Value::Inj(k - 1, Box::new(v)))
            }
            Tok::Num(_) | Tok::Punct("-") => {
                let at = self.here();
                let n = self.int()?;
                if !self.eat_punct("/") {
                    return Ok(if n >= 0 { Value::Nat(n as u64) } else { Value::Int(n) });
                }
                let d = self.int()?;
                if d == 0 {
                    return Err(Diagnostic::new(DiagKind::Syntax, at, "zero denominator").expecting("a nonzero denominator"));
                }
                let r = Rat::new(n, d);
                Ok(if !r.is_integer() {
                    Value::Rat(r)
                } else if *r.numer() >= 0 {
                    Value::Nat(*r.numer() as u64)
                } else {
                    Value::Int(*r.numer())
                })
            }
            _ => self.fail(WHAT),
        }
    }
}

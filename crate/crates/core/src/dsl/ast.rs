use crate::value::Value;

/// A name with the position it was written at. Positions do not take part
/// in equality.
#[derive(Debug, Clone, Eq)]
pub struct Ident {
    pub name: String,
    pub line: u32,
    pub col: u32,
}

impl Ident {
    pub fn pos(&self) -> (u32, u32) {
        (self.line, self.col)
    }
}

impl PartialEq for Ident {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
    }
}

#[derive(Debug, Clone, Eq)]
pub struct Located<T> {
    pub item: T,
    pub line: u32,
    pub col: u32,
}

impl<T: PartialEq> PartialEq for Located<T> {
    fn eq(&self, other: &Self) -> bool {
        self.item == other.item
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SetExpr {
    Unit,
    Bool,
    Fin(u64),
    Nat,
    Int,
    Rat,
    Named(Ident),
    Prod(Vec<SetExpr>),
    Sum(Vec<SetExpr>),
    Pow(Box<SetExpr>),
    Seq(Box<SetExpr>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MapAst {
    Name(Ident),
    Id,
    Omega,
    /// 1-based, as written.
    Proj(Vec<usize>),
    Const(Value, SetExpr),
    /// 1-based component of a sum carrier.
    Inj(usize, SetExpr),
    /// Outermost first: `[g, f]` is g after f.
    Compose(Vec<MapAst>),
    Prod(Vec<MapAst>),
    Union(Vec<MapAst>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenBody {
    Builtin { key: Ident, args: Vec<SetExpr>, consts: Vec<Value> },
    Table { dom: SetExpr, cod: SetExpr, rows: Vec<(Value, Value)> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ArrowKind {
    Fwd(MapAst),
    Inv(MapAst),
    Cmpl,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decl {
    Alphabet { name: Ident, symbols: Vec<Ident> },
    Set { name: Ident, expr: SetExpr },
    Gen { name: Ident, body: GenBody },
    Map { name: Ident, dom: SetExpr, cod: SetExpr, expr: MapAst },
    Node { name: Ident, set: SetExpr, union: bool, grade: Option<(MapAst, Option<u64>)> },
    Arrow { kind: ArrowKind, source: Ident, target: Ident },
    Anchor { node: Ident, values: Vec<Value> },
    /// Leaves a node free for enumeration over every subset of `values`.
    Free { node: Ident, values: Vec<Value> },
    Target { node: Ident, expected: Option<Vec<Value>> },
    Minimize { nodes: Vec<Ident> },
    Bounds { items: Vec<(Ident, i64)> },
}

//! Structure-map sets and the built-in generator library.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_integer::Roots;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub};

use crate::error::{Error, Result};
use crate::map::expr::{GenDef, MapExpr};
use crate::map::pattern::{PatSet, Pattern};
use crate::universe::Universe;
use crate::value::{Rat, Value};

/// Which constant maps count as members of the structure set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConstPolicy {
    All,
    Only(BTreeSet<Value>),
}

/// A set of named generators plus admitted constants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureMapSet {
    pub gens: BTreeMap<String, Arc<GenDef>>,
    pub constants: ConstPolicy,
}

impl StructureMapSet {
    pub fn new() -> StructureMapSet {
        StructureMapSet { gens: BTreeMap::new(), constants: ConstPolicy::Only(BTreeSet::new()) }
    }

    pub fn with_gen(mut self, g: &Arc<GenDef>) -> Self {
        self.gens.insert(g.name.clone(), g.clone());
        self
    }

    pub fn with_const(mut self, v: Value) -> Self {
        if let ConstPolicy::Only(s) = &mut self.constants {
            s.insert(v);
        }
        self
    }

    pub fn with_all_constants(mut self) -> Self {
        self.constants = ConstPolicy::All;
        self
    }

    /// The natural-number structure: `succ` and the constant `0`.
    pub fn m_nat() -> StructureMapSet {
        StructureMapSet::new().with_gen(&succ()).with_const(Value::Nat(0))
    }

    pub fn has_gen(&self, g: &GenDef) -> bool {
        self.gens.get(&g.name).is_some_and(|h| **h == *g)
    }

    pub fn admits_const(&self, v: &Value) -> bool {
        match &self.constants {
            ConstPolicy::All => true,
            ConstPolicy::Only(s) => s.contains(v),
        }
    }

    pub fn get(&self, name: &str) -> Result<&Arc<GenDef>> {
        self.gens.get(name).ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }
}

impl Default for StructureMapSet {
    fn default() -> Self {
        StructureMapSet::new()
    }
}

fn nat(v: &Value) -> Result<u64> {
    v.as_nat().ok_or_else(|| Error::Domain(format!("{v} is not a natural number")))
}

fn pair(v: &Value) -> Result<(&Value, &Value)> {
    match v {
        Value::Tuple(vs) if vs.len() == 2 => Ok((&vs[0], &vs[1])),
        _ => Err(Error::Domain(format!("{v} is not a pair"))),
    }
}

fn overflow(what: &str) -> Error {
    Error::Overflow(what.to_string())
}

/// Scalar carriers usable by the arithmetic built-ins.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scalar {
    N,
    Z,
    Q,
}

impl Scalar {
    pub fn universe(self) -> Universe {
        match self {
            Scalar::N => Universe::Nat,
            Scalar::Z => Universe::Int,
            Scalar::Q => Universe::Rat,
        }
    }

    pub fn parse(u: &Universe) -> Result<Scalar> {
        match u {
            Universe::Nat => Ok(Scalar::N),
            Universe::Int => Ok(Scalar::Z),
            Universe::Rat => Ok(Scalar::Q),
            _ => Err(Error::Domain(format!("{u} is not a scalar carrier"))),
        }
    }

    fn to_rat(self, v: &Value) -> Result<Rat> {
        v.as_rat().ok_or_else(|| Error::Domain(format!("{v} is not a scalar")))
    }

    fn from_rat(self, r: Rat) -> Result<Value> {
        match self {
            Scalar::N => {
                if r.is_integer() && *r.numer() >= 0 {
                    Ok(Value::Nat(*r.numer() as u64))
                } else {
                    Err(Error::Domain(format!("{r} is not a natural number")))
                }
            }
            Scalar::Z => {
                if r.is_integer() {
                    Ok(Value::Int(*r.numer()))
                } else {
                    Err(Error::Domain(format!("{r} is not an integer")))
                }
            }
            Scalar::Q => Ok(Value::Rat(r)),
        }
    }

    fn plane(self) -> Universe {
        Universe::Prod(vec![self.universe(), self.universe()])
    }

    fn vec2(self, v: &Value) -> Result<(Rat, Rat)> {
        let (a, b) = pair(v)?;
        Ok((self.to_rat(a)?, self.to_rat(b)?))
    }

    fn mk2(self, a: Rat, b: Rat) -> Result<Value> {
        Ok(Value::Tuple(vec![self.from_rat(a)?, self.from_rat(b)?]))
    }
}

fn radd(a: Rat, b: Rat) -> Result<Rat> {
    a.checked_add(&b).ok_or_else(|| overflow("addition"))
}

fn rsub(a: Rat, b: Rat) -> Result<Rat> {
    a.checked_sub(&b).ok_or_else(|| overflow("subtraction"))
}

fn rmul(a: Rat, b: Rat) -> Result<Rat> {
    a.checked_mul(&b).ok_or_else(|| overflow("multiplication"))
}

pub fn succ() -> Arc<GenDef> {
    Arc::new(
        GenDef::new("succ", Universe::Nat, Universe::Nat, |v| {
            nat(v)?.checked_add(1).map(Value::Nat).ok_or_else(|| overflow("succ"))
        })
        .with_preimage(|t, _| {
            Ok(match t.as_nat() {
                Some(n) if n > 0 => PatSet::exact([Value::Nat(n - 1)]),
                _ => PatSet::empty(),
            })
        }),
    )
}

fn nat_add() -> GenDef {
    GenDef::new("add", Universe::nat2(), Universe::Nat, |v| {
        let (a, b) = pair(v)?;
        nat(a)?.checked_add(nat(b)?).map(Value::Nat).ok_or_else(|| overflow("add"))
    })
    .with_preimage(|t, b| {
        let Some(n) = t.as_nat() else { return Ok(PatSet::empty()) };
        if n as u128 + 1 > b.card_cap as u128 {
            return Ok(PatSet { pats: Vec::new(), inexact: true });
        }
        Ok(PatSet::exact((0..=n).map(|a| Value::nat_pair(a, n - a))))
    })
}

fn nat_mult() -> GenDef {
    GenDef::new("mult", Universe::nat2(), Universe::Nat, |v| {
        let (a, b) = pair(v)?;
        nat(a)?.checked_mul(nat(b)?).map(Value::Nat).ok_or_else(|| overflow("mult"))
    })
    .with_preimage(|t, _| {
        let Some(n) = t.as_nat() else { return Ok(PatSet::empty()) };
        if n == 0 {
            let z = Pattern::Exact(Value::Nat(0));
            return Ok(PatSet {
                pats: vec![Pattern::Tuple(vec![z.clone(), Pattern::Any]), Pattern::Tuple(vec![Pattern::Any, z])],
                inexact: false,
            });
        }
        let mut out = Vec::new();
        let r = n.sqrt();
        for d in 1..=r {
            if n % d == 0 {
                out.push(Value::nat_pair(d, n / d));
                out.push(Value::nat_pair(n / d, d));
            }
        }
        Ok(PatSet::exact(out))
    })
}

fn scalar_binop(name: &str, s: Scalar, op: fn(Rat, Rat) -> Result<Rat>) -> GenDef {
    let dom = Universe::Prod(vec![s.universe(), s.universe()]);
    GenDef::new(name, dom, s.universe(), move |v| {
        let (a, b) = pair(v)?;
        s.from_rat(op(s.to_rat(a)?, s.to_rat(b)?)?)
    })
}

fn vector_sub(name: &str, s: Scalar) -> GenDef {
    let x = s.plane();
    GenDef::new(name, Universe::Prod(vec![x.clone(), x.clone()]), x.clone(), move |v| {
        let (p, q) = pair(v)?;
        let (a, b) = (s.vec2(p)?, s.vec2(q)?);
        s.mk2(rsub(a.0, b.0)?, rsub(a.1, b.1)?)
    })
    .with_preimage(move |t, b| {
        // (x, x - t) for x in the window
        let Ok((t0, t1)) = s.vec2(t) else { return Ok(PatSet::empty()) };
        let w = x.window(b)?;
        let mut out = Vec::new();
        for p in w.values {
            let (p0, p1) = s.vec2(&p)?;
            if let Ok(q) = s.mk2(rsub(p0, t0)?, rsub(p1, t1)?) {
                out.push(Value::pair(p, q));
            }
        }
        Ok(PatSet { pats: out.into_iter().map(Pattern::Exact).collect(), inexact: true })
    })
}

fn vector_add(name: &str, s: Scalar) -> GenDef {
    let x = s.plane();
    GenDef::new(name, Universe::Prod(vec![x.clone(), x.clone()]), x.clone(), move |v| {
        let (p, q) = pair(v)?;
        let (a, b) = (s.vec2(p)?, s.vec2(q)?);
        s.mk2(radd(a.0, b.0)?, radd(a.1, b.1)?)
    })
    .with_preimage(move |t, b| {
        // (x, t - x) for x in the window
        let Ok((t0, t1)) = s.vec2(t) else { return Ok(PatSet::empty()) };
        let w = x.window(b)?;
        let mut out = Vec::new();
        for p in w.values {
            let (p0, p1) = s.vec2(&p)?;
            if let Ok(q) = s.mk2(rsub(t0, p0)?, rsub(t1, p1)?) {
                out.push(Value::pair(p, q));
            }
        }
        Ok(PatSet { pats: out.into_iter().map(Pattern::Exact).collect(), inexact: true })
    })
}

fn scalar_mult(name: &str, s: Scalar) -> GenDef {
    let x = s.plane();
    GenDef::new(name, Universe::Prod(vec![x.clone(), s.universe()]), x, move |v| {
        let (p, c) = pair(v)?;
        let (a0, a1) = s.vec2(p)?;
        let c = s.to_rat(c)?;
        s.mk2(rmul(a0, c)?, rmul(a1, c)?)
    })
}

fn len2(name: &str, s: Scalar) -> GenDef {
    let g = GenDef::new(name, s.plane(), s.universe(), move |v| {
        let (a, b) = s.vec2(v)?;
        s.from_rat(radd(rmul(a, a)?, rmul(b, b)?)?)
    });
    if s == Scalar::Q {
        return g;
    }
    g.with_preimage(move |t, _| {
        // integer lattice points on the circle: finite and exact
        let Some(r) = t.as_rat() else { return Ok(PatSet::empty()) };
        if !r.is_integer() || *r.numer() < 0 {
            return Ok(PatSet::empty());
        }
        let n = *r.numer();
        let m = n.sqrt();
        let mut out = Vec::new();
        for a in -m..=m {
            let rest = n - a * a;
            let bb = rest.sqrt();
            if bb * bb == rest {
                for b in [bb, -bb] {
                    if let Ok(v) = s.mk2(Rat::from_integer(a), Rat::from_integer(b)) {
                        out.push(v);
                    }
                }
            }
        }
        Ok(PatSet::exact(out))
    })
}

fn compare(name: &str, s: Scalar, strict: bool) -> GenDef {
    let dom = Universe::Prod(vec![s.universe(), s.universe()]);
    GenDef::new(name, dom, Universe::Bool, move |v| {
        let (a, b) = pair(v)?;
        let (a, b) = (s.to_rat(a)?, s.to_rat(b)?);
        Ok(Value::Nat(u64::from(if strict { a < b } else { a <= b })))
    })
}

fn greater_than(name: &str, s: Scalar, c: Rat) -> GenDef {
    GenDef::new(name, s.universe(), Universe::Bool, move |v| Ok(Value::Nat(u64::from(s.to_rat(v)? > c))))
}

fn complex() -> Universe {
    Universe::rat2()
}

fn cadd(name: &str) -> GenDef {
    GenDef::new(name, Universe::Prod(vec![complex(), complex()]), complex(), |v| {
        let (p, q) = pair(v)?;
        let (a, b) = (Scalar::Q.vec2(p)?, Scalar::Q.vec2(q)?);
        Scalar::Q.mk2(radd(a.0, b.0)?, radd(a.1, b.1)?)
    })
}

fn csq(name: &str) -> GenDef {
    GenDef::new(name, complex(), complex(), |v| {
        let (a, b) = Scalar::Q.vec2(v)?;
        let re = rsub(rmul(a, a)?, rmul(b, b)?)?;
        let im = rmul(Rat::from_integer(2), rmul(a, b)?)?;
        Scalar::Q.mk2(re, im)
    })
}

fn cabs2(name: &str) -> GenDef {
    GenDef::new(name, complex(), Universe::Rat, |v| {
        let (a, b) = Scalar::Q.vec2(v)?;
        Ok(Value::Rat(radd(rmul(a, a)?, rmul(b, b)?)?))
    })
}

fn seq_car(name: &str, a: Universe) -> GenDef {
    GenDef::new(name, Universe::Seq(Box::new(a.clone())), a, |v| match v {
        Value::Seq(xs) if !xs.is_empty() => Ok(xs[0].clone()),
        _ => Err(Error::Domain("car of an empty sequence".into())),
    })
}

fn seq_cdr(name: &str, a: Universe) -> GenDef {
    let u = Universe::Seq(Box::new(a));
    GenDef::new(name, u.clone(), u, |v| match v {
        Value::Seq(xs) if !xs.is_empty() => Ok(Value::Seq(xs[1..].to_vec())),
        Value::Seq(_) => Ok(Value::Seq(Vec::new())),
        _ => Err(Error::Domain(format!("{v} is not a sequence"))),
    })
}

/// A finite table generator; its preimages come from the reverse table.
pub fn table(name: &str, dom: Universe, cod: Universe, rows: Vec<(Value, Value)>) -> Result<GenDef> {
    let mut fwd = BTreeMap::new();
    let mut rev: BTreeMap<Value, Vec<Value>> = BTreeMap::new();
    for (k, v) in rows {
        dom.check(&k)?;
        cod.check(&v)?;
        if fwd.insert(k.clone(), v.clone()).is_some() {
            return Err(Error::Malformed(format!("table {name} repeats key {k}")));
        }
        rev.entry(v).or_default().push(k);
    }
    if let Some(all) = dom.elements() {
        if let Some(missing) = all.iter().find(|k| !fwd.contains_key(*k)) {
            return Err(Error::Malformed(format!("table {name} is not total: missing {missing}")));
        }
    } else {
        return Err(Error::Malformed(format!("table {name} needs a finite domain")));
    }
    let fwd = Arc::new(fwd);
    let rev = Arc::new(rev);
    let label = name.to_string();
    Ok(GenDef::new(name, dom, cod, move |v| {
        fwd.get(v).cloned().ok_or_else(|| Error::Domain(format!("{v} not in table {label}")))
    })
    .with_preimage(move |t, _| Ok(PatSet::exact(rev.get(t).cloned().unwrap_or_default()))))
}

/// `x ↦ {x}` into the powerset of a finite carrier.
fn singleton(name: &str, x: Universe) -> Result<GenDef> {
    let p = Universe::pow(x.clone())?;
    let base = x.clone();
    Ok(GenDef::new(name, x, p, move |v| {
        let i = base.index_of(v).ok_or_else(|| Error::Domain(format!("{v} is not in {base}")))?;
        Ok(Value::Mask(1 << i))
    }))
}

fn mask_op(name: &str, x: Universe, union: bool) -> Result<GenDef> {
    let p = Universe::pow(x)?;
    Ok(GenDef::new(name, Universe::Prod(vec![p.clone(), p.clone()]), p, move |v| match v.as_tuple() {
        Some([Value::Mask(a), Value::Mask(b)]) => Ok(Value::Mask(if union { a | b } else { a & b })),
        _ => Err(Error::Domain(format!("{v} is not a pair of subsets"))),
    }))
}

/// Resolve a library built-in, naming the generator `name`.
pub fn builtin(name: &str, key: &str, args: &[Universe], consts: &[Value]) -> Result<GenDef> {
    let scalar = |i: usize| -> Result<Scalar> {
        args.get(i)
            .ok_or_else(|| Error::Parse(format!("builtin {key} needs a scalar carrier argument")))
            .and_then(Scalar::parse)
    };
    let g = match key {
        "succ" => {
            let mut g = (*succ()).clone();
            g.name = name.to_string();
            g
        }
        "add" if args.is_empty() => GenDef { name: name.into(), ..nat_add() },
        "mult" if args.is_empty() => GenDef { name: name.into(), ..nat_mult() },
        "add" => match scalar(0)? {
            Scalar::N => GenDef { name: name.into(), ..nat_add() },
            s => scalar_binop(name, s, radd),
        },
        "mult" => match scalar(0)? {
            Scalar::N => GenDef { name: name.into(), ..nat_mult() },
            s => scalar_binop(name, s, rmul),
        },
        "sub" => scalar_binop(name, scalar(0)?, rsub),
        "vsub" => vector_sub(name, scalar(0)?),
        "vadd" => vector_add(name, scalar(0)?),
        "smult" => scalar_mult(name, scalar(0)?),
        "len2" => len2(name, scalar(0)?),
        "lt" => compare(name, scalar(0)?, true),
        "leq" => compare(name, scalar(0)?, false),
        "gt" => {
            let s = scalar(0)?;
            let c = consts
                .first()
                .and_then(Value::as_rat)
                .ok_or_else(|| Error::Parse("builtin gt needs a threshold constant".into()))?;
            greater_than(name, s, c)
        }
        "cadd" => cadd(name),
        "csq" => csq(name),
        "cabs2" => cabs2(name),
        "singleton" => singleton(name, args.first().cloned().ok_or_else(|| Error::Parse("singleton needs a carrier".into()))?)?,
        "union" | "inter" => {
            let u = args.first().cloned().ok_or_else(|| Error::Parse(format!("{key} needs a carrier")))?;
            mask_op(name, u, key == "union")?
        }
        "car" => seq_car(name, args.first().cloned().ok_or_else(|| Error::Parse("car needs an alphabet".into()))?),
        "cdr" => seq_cdr(name, args.first().cloned().ok_or_else(|| Error::Parse("cdr needs an alphabet".into()))?),
        _ => return Err(Error::UnknownGenerator(key.to_string())),
    };
    Ok(g)
}

/// Built-in keys recognized by [`builtin`].
pub const BUILTIN_KEYS: &[&str] = &[
    "succ", "add", "mult", "sub", "vsub", "vadd", "smult", "len2", "lt", "leq", "gt", "cadd", "csq", "cabs2", "singleton",
    "union", "inter", "car", "cdr",
];

/// `succ^k ∘ 0` as a constant of ℕ built from M_ℕ leaves, over `dom`.
pub fn nat_const(dom: &Universe, k: u64) -> MapExpr {
    let mut e = MapExpr::constant(dom, Value::Nat(0), &Universe::Nat);
    let s = succ();
    for _ in 0..k {
        e = MapExpr::compose(MapExpr::Gen(s.clone()), e);
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::SolverBounds;

    #[test]
    fn succ_applies_and_inverts() {
        let s = MapExpr::Gen(succ());
        assert_eq!(s.apply(&Value::Nat(4)).unwrap(), Value::Nat(5));
        let b = SolverBounds::default();
        let p = crate::map::preimage::preimage_of_points(&s, [&Value::Nat(1), &Value::Nat(2)], &b).unwrap();
        assert_eq!(p.values.into_iter().collect::<Vec<_>>(), vec![Value::Nat(0), Value::Nat(1)]);
    }

    #[test]
    fn lattice_circle_preimage() {
        let g = MapExpr::Gen(Arc::new(len2("len2", Scalar::Z)));
        let b = SolverBounds::default().with_int_window(-5, 5);
        let p = crate::map::preimage::preimage_of_points(&g, [&Value::Int(25)], &b).unwrap();
        assert_eq!(p.values.len(), 12);
        assert!(!p.escapes);
    }

    #[test]
    fn table_must_be_total() {
        let r = table("t", Universe::Bool, Universe::Bool, vec![(Value::Nat(0), Value::Nat(1))]);
        assert!(r.is_err());
    }
}

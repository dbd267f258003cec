//! The plane at desk scale: exact scalar carriers, the built-in structure
//! maps, the pattern corpus as diagrams, derived subset maps and rasters.
//!
//! Radii are given squared so that every carrier stays inside ℤ or ℚ.

use std::sync::Arc;

use crate::bounds::SolverBounds;
use crate::diagram::{Diagram, PartialSection, RepresentationData};
use crate::error::{Error, Result};
use crate::map::expr::{GenDef, MapExpr};
use crate::map::structure::{builtin, succ, Scalar, StructureMapSet};
use crate::subset::Subset;
use crate::universe::Universe;
use crate::value::{Rat, Value};

pub mod derived;
pub mod raster;

pub use derived::{derived_map_diagram, inf_by_key, ltsup_in_window, max_by_key, DerivedDiagram, DerivedMap};
pub use raster::{rasterize, Image, Style, Viewport};

/// Points and vectors share the carrier `scalar²`.
#[derive(Debug, Clone)]
pub struct PlaneModel {
    pub scalar: Scalar,
    pub bounds: SolverBounds,
    sub: Arc<GenDef>,
    add: Arc<GenDef>,
    mult: Arc<GenDef>,
    len2: Arc<GenDef>,
    lt: Arc<GenDef>,
    leq: Arc<GenDef>,
}

impl PlaneModel {
    pub fn new(scalar: Scalar, bounds: SolverBounds) -> Result<PlaneModel> {
        if scalar == Scalar::N {
            return Err(Error::Domain("the plane needs signed scalars".into()));
        }
        let s = [scalar.universe()];
        let g = |name: &str, key: &str| builtin(name, key, &s, &[]).map(Arc::new);
        Ok(PlaneModel {
            scalar,
            bounds,
            sub: g("sub", "vsub")?,
            add: g("add", "vadd")?,
            mult: g("mult", "smult")?,
            len2: g("len2", "len2")?,
            lt: g("lt", "lt")?,
            leq: g("leq", "leq")?,
        })
    }

    /// Integer lattice `[lo, hi]²`.
    pub fn integer(lo: i64, hi: i64) -> PlaneModel {
        PlaneModel::new(Scalar::Z, SolverBounds::default().with_int_window(lo, hi)).expect("integer plane")
    }

    /// Rational plane whose window is the integer grid of `[lo, hi]²`.
    pub fn rational(lo: i64, hi: i64) -> PlaneModel {
        PlaneModel::new(Scalar::Q, SolverBounds::default().with_int_window(lo, hi).with_rat_den(1)).expect("rational plane")
    }

    pub fn scalars(&self) -> Universe {
        self.scalar.universe()
    }

    pub fn plane(&self) -> Universe {
        Universe::Prod(vec![self.scalars(), self.scalars()])
    }

    pub fn scalar_value(&self, r: Rat) -> Result<Value> {
        match self.scalar {
            Scalar::Q => Ok(Value::Rat(r)),
            _ if r.is_integer() => Ok(Value::Int(*r.numer())),
            _ => Err(Error::Domain(format!("{r} is not an integer"))),
        }
    }

    pub fn pt(&self, x: i64, y: i64) -> Value {
        match self.scalar {
            Scalar::Q => Value::pair(Value::rat(x, 1), Value::rat(y, 1)),
            _ => Value::int_pair(x, y),
        }
    }

    pub fn sub(&self) -> MapExpr {
        MapExpr::Gen(self.sub.clone())
    }

    pub fn add(&self) -> MapExpr {
        MapExpr::Gen(self.add.clone())
    }

    pub fn mult(&self) -> MapExpr {
        MapExpr::Gen(self.mult.clone())
    }

    pub fn len2(&self) -> MapExpr {
        MapExpr::Gen(self.len2.clone())
    }

    pub fn lt(&self) -> MapExpr {
        MapExpr::Gen(self.lt.clone())
    }

    pub fn leq(&self) -> MapExpr {
        MapExpr::Gen(self.leq.clone())
    }

    /// Structure set with the named plane maps and the given constants.
    pub fn structure(&self, names: &[&str], constants: impl IntoIterator<Item = Value>) -> Result<StructureMapSet> {
        let mut m = StructureMapSet::new();
        for &n in names {
            let g = match n {
                "sub" => &self.sub,
                "add" => &self.add,
                "mult" => &self.mult,
                "len2" => &self.len2,
                "lt" => &self.lt,
                "leq" => &self.leq,
                _ => return Err(Error::UnknownGenerator(n.to_string())),
            };
            m = m.with_gen(g);
        }
        for c in constants {
            m = m.with_const(c);
        }
        Ok(m)
    }

    fn in_window(&self, u: &Universe, v: &Value) -> bool {
        u.in_window(v, &self.bounds)
    }
}

/// Plane pattern parameters; every set is finite and extensional.
#[derive(Debug, Clone, PartialEq)]
pub enum PatternSpec {
    Circle { centers: Vec<Value>, radii2: Vec<Value> },
    /// The scalar range is the model's window.
    Line { points: Vec<Value>, directions: Vec<Value> },
    Dots { seed: Value, steps: Vec<Value>, cap: u64 },
    GridOfCircles { seed: Value, steps: Vec<Value>, cap: u64, radii2: Vec<Value> },
    GridOfLines { seed: Value, steps: Vec<Value>, cap: u64, directions: Vec<Value> },
    /// Vertices `a, b, c`, iterated `depth` times.
    Sierpinski { a: Value, b: Value, c: Value, depth: u64 },
    PatchRepeat { vectors: Vec<Value>, patch: Vec<Value> },
}

struct Builder<'m> {
    m: &'m PlaneModel,
    d: Diagram,
    t: PartialSection,
}

impl<'m> Builder<'m> {
    fn new(m: &'m PlaneModel) -> Builder<'m> {
        Builder { m, d: Diagram::new(), t: PartialSection::new() }
    }

    fn node(&mut self, name: &str, u: Universe, union: bool) -> usize {
        self.d.add_node(name, u, union)
    }

    fn anchor(&mut self, name: &str, u: Universe, vals: &[Value]) -> Result<usize> {
        // scalar parameters such as squared radii may exceed the point window
        let planar = u != self.m.scalars();
        for v in vals {
            if !u.contains(v) || (planar && !self.m.in_window(&u, v)) {
                return Err(Error::OutsideWindow(format!("{v} at {name}")));
            }
        }
        let n = self.node(name, u.clone(), false);
        self.t.insert(n, Subset::ext(&u, vals.iter().cloned())?);
        Ok(n)
    }

    /// `S1 ⊂ R --len2⁻¹--> S2 ⊂ V --sub⁻¹--> S4 ⊂ X×X <--π2⁻¹-- S3 ⊂ X`,
    /// `S5 = π1(S4)`.
    fn circle(&mut self, p: &str, radii: usize, centers: usize) -> Result<usize> {
        let (x, xx) = (self.m.plane(), Universe::Prod(vec![self.m.plane(), self.m.plane()]));
        let s2 = self.node(&format!("{p}S2"), x.clone(), false);
        let s4 = self.node(&format!("{p}S4"), xx.clone(), false);
        let s5 = self.node(&format!("{p}S5"), x, false);
        self.d.inverse(self.m.len2(), radii, s2)?;
        self.d.inverse(self.m.sub(), s2, s4)?;
        self.d.inverse(MapExpr::proj(&xx, 1), centers, s4)?;
        self.d.forward(MapExpr::proj(&xx, 0), s4, s5)?;
        Ok(s5)
    }

    /// `S2 = π1⁻¹(S1) ⊂ V×R`, `mult` into `V`, then `sub⁻¹` meets `π2⁻¹(S3)`.
    fn line(&mut self, p: &str, dirs: usize, points: usize) -> Result<usize> {
        let (x, xx) = (self.m.plane(), Universe::Prod(vec![self.m.plane(), self.m.plane()]));
        let vr = Universe::Prod(vec![x.clone(), self.m.scalars()]);
        let s2 = self.node(&format!("{p}S2"), vr.clone(), false);
        let mid = self.node(&format!("{p}S2.mult"), x.clone(), false);
        let s4 = self.node(&format!("{p}S4"), xx.clone(), false);
        let s5 = self.node(&format!("{p}S5"), x, false);
        self.d.inverse(MapExpr::proj(&vr, 0), dirs, s2)?;
        self.d.forward(self.m.mult(), s2, mid)?;
        self.d.inverse(self.m.sub(), mid, s4)?;
        self.d.inverse(MapExpr::proj(&xx, 1), points, s4)?;
        self.d.forward(MapExpr::proj(&xx, 0), s4, s5)?;
        Ok(s5)
    }

    /// The graded dots recursion: `S4 = S3 ∪ φ(S2)` with
    /// `φ(x, w, k) = (x + w, k + 1)` and `S2 = π2⁻¹(S1) ∩ π13⁻¹(S4)`.
    fn dots(&mut self, p: &str, steps: usize, seed: usize, cap: u64) -> Result<usize> {
        let x = self.m.plane();
        let xn = Universe::Prod(vec![x.clone(), Universe::Nat]);
        let xvn = Universe::Prod(vec![x.clone(), x.clone(), Universe::Nat]);
        let s2 = self.node(&format!("{p}S2"), xvn.clone(), false);
        let s4 = self.node(&format!("{p}S4"), xn.clone(), true);
        let s5 = self.node(&format!("{p}S5"), x, false);
        self.d.inverse(MapExpr::proj(&xvn, 1), steps, s2)?;
        self.d.inverse(MapExpr::proj_multi(&xvn, &[0, 2]), s4, s2)?;
        self.d.forward(MapExpr::Id(xn.clone()), seed, s4)?;
        let phi = MapExpr::prod([
            MapExpr::compose(self.m.add(), MapExpr::proj_multi(&xvn, &[0, 1])),
            MapExpr::compose(MapExpr::Gen(succ()), MapExpr::proj(&xvn, 2)),
        ]);
        self.d.forward(phi, s2, s4)?;
        self.d.grade(s4, MapExpr::proj(&xn, 1), Some(cap))?;
        self.d.forward(MapExpr::proj(&xn, 0), s4, s5)?;
        Ok(s5)
    }

    /// `d_p(x) = p + (x − p)/2` on graded points, feeding `into`.
    fn halve_toward(&mut self, p: &str, src: usize, point: usize, half: usize, into: usize) -> Result<()> {
        let x = self.m.plane();
        let xxn = Universe::Prod(vec![x.clone(), x.clone(), Universe::Nat]);
        let vn = Universe::Prod(vec![x.clone(), Universe::Nat]);
        let vrn = Universe::Prod(vec![x.clone(), self.m.scalars(), Universe::Nat]);
        let b = self.node(&format!("{p}S2"), xxn.clone(), false);
        self.d.inverse(MapExpr::proj_multi(&xxn, &[0, 2]), src, b)?;
        self.d.inverse(MapExpr::proj(&xxn, 1), point, b)?;
        let c0 = self.node(&format!("{p}S3.sub"), vn.clone(), false);
        let diff = MapExpr::prod([MapExpr::compose(self.m.sub(), MapExpr::proj_multi(&xxn, &[0, 1])), MapExpr::proj(&xxn, 2)]);
        self.d.forward(diff.clone(), b, c0)?;
        let c = self.node(&format!("{p}S3"), vrn.clone(), false);
        self.d.inverse(MapExpr::proj_multi(&vrn, &[0, 2]), c0, c)?;
        self.d.inverse(MapExpr::proj(&vrn, 1), half, c)?;
        let d0 = self.node(&format!("{p}S6.mult"), vn.clone(), false);
        let scaled = MapExpr::prod([MapExpr::compose(self.m.mult(), MapExpr::proj_multi(&vrn, &[0, 1])), MapExpr::proj(&vrn, 2)]);
        self.d.forward(scaled, c, d0)?;
        let e = self.node(&format!("{p}S6"), xxn.clone(), false);
        self.d.inverse(diff, d0, e)?;
        self.d.inverse(MapExpr::proj(&xxn, 1), point, e)?;
        let step = MapExpr::prod([MapExpr::proj(&xxn, 0), MapExpr::compose(MapExpr::Gen(succ()), MapExpr::proj(&xxn, 2))]);
        self.d.forward(step, e, into)?;
        Ok(())
    }

    fn finish(self, target: usize) -> RepresentationData {
        RepresentationData::new(self.d, self.t, target).with_bounds(self.m.bounds.clone())
    }
}

/// The diagram for `spec` with its parameter sets as anchors.
pub fn build_pattern(spec: &PatternSpec, m: &PlaneModel) -> Result<RepresentationData> {
    let mut b = Builder::new(m);
    let x = m.plane();
    let xn = Universe::Prod(vec![x.clone(), Universe::Nat]);
    let seeded = |b: &mut Builder, seed: &Value| -> Result<usize> {
        b.anchor("S3", xn.clone(), &[Value::pair(seed.clone(), Value::Nat(0))])
    };
    let out = match spec {
        PatternSpec::Circle { centers, radii2 } => {
            let r = b.anchor("S1", m.scalars(), radii2)?;
            let c = b.anchor("S3", x.clone(), centers)?;
            b.circle("", r, c)?
        }
        PatternSpec::Line { points, directions } => {
            let v = b.anchor("S1", x.clone(), directions)?;
            let p = b.anchor("S3", x.clone(), points)?;
            b.line("", v, p)?
        }
        PatternSpec::Dots { seed, steps, cap } => {
            let v = b.anchor("S1", x.clone(), steps)?;
            let s = seeded(&mut b, seed)?;
            b.dots("", v, s, *cap)?
        }
        PatternSpec::GridOfCircles { seed, steps, cap, radii2 } => {
            let v = b.anchor("S1", x.clone(), steps)?;
            let s = seeded(&mut b, seed)?;
            let centers = b.dots("grid.", v, s, *cap)?;
            let r = b.anchor("R", m.scalars(), radii2)?;
            b.circle("circle.", r, centers)?
        }
        PatternSpec::GridOfLines { seed, steps, cap, directions } => {
            let v = b.anchor("S1", x.clone(), steps)?;
            let s = seeded(&mut b, seed)?;
            let points = b.dots("grid.", v, s, *cap)?;
            let u = b.anchor("U", x.clone(), directions)?;
            b.line("line.", u, points)?
        }
        PatternSpec::Sierpinski { a, b: bv, c, depth } => {
            if m.scalar != Scalar::Q {
                return Err(Error::Domain("halving needs rational scalars".into()));
            }
            let t = b.anchor("S1", x.clone(), &[a.clone(), bv.clone(), c.clone()])?;
            let s2 = b.node("S2", xn.clone(), true);
            b.d.forward(MapExpr::prod([MapExpr::Id(x.clone()), MapExpr::constant(&x, Value::Nat(0), &Universe::Nat)]), t, s2)?;
            let half = b.node("half", m.scalars(), false);
            b.t.insert(half, Subset::ext(&m.scalars(), [Value::rat(1, 2)])?);
            for (i, p) in [a, bv, c].into_iter().enumerate() {
                let pn = b.anchor(&format!("d{i}.S5"), x.clone(), &[p.clone()])?;
                b.halve_toward(&format!("d{i}."), s2, pn, half, s2)?;
            }
            b.d.grade(s2, MapExpr::proj(&xn, 1), Some(*depth))?;
            let s3 = b.node("S3", x.clone(), false);
            b.d.forward(MapExpr::proj(&xn, 0), s2, s3)?;
            s3
        }
        PatternSpec::PatchRepeat { vectors, patch } => {
            let a = b.anchor("S1", x.clone(), vectors)?;
            let p = b.anchor("S3", x.clone(), patch)?;
            let xv = Universe::Prod(vec![x.clone(), x.clone()]);
            let s2 = b.node("S2", xv.clone(), false);
            b.d.inverse(MapExpr::proj(&xv, 1), a, s2)?;
            b.d.inverse(MapExpr::proj(&xv, 0), p, s2)?;
            let s4 = b.node("S4", x.clone(), false);
            b.d.forward(m.add(), s2, s4)?;
            s4
        }
    };
    Ok(b.finish(out))
}

/// Solve a pattern and return its point set, with the truncation flag.
pub fn solve_pattern(spec: &PatternSpec, m: &PlaneModel) -> Result<(std::collections::BTreeSet<Value>, bool)> {
    let r = build_pattern(spec, m)?;
    let s = crate::solver::solve(&r.diagram, &r.anchors, &r.bounds, crate::solver::Mode::Auto)?;
    Ok((s.values(r.target), s.truncated))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn dots_with_one_step() {
        let m = PlaneModel::integer(-6, 6);
        let spec = PatternSpec::Dots { seed: m.pt(0, 0), steps: vec![m.pt(1, 0)], cap: 3 };
        let (pts, _) = solve_pattern(&spec, &m).unwrap();
        assert_eq!(pts, (0..4).map(|i| m.pt(i, 0)).collect::<BTreeSet<_>>());
    }

    #[test]
    fn circle_of_radius_five() {
        let m = PlaneModel::integer(-5, 5);
        let spec = PatternSpec::Circle { centers: vec![m.pt(0, 0)], radii2: vec![Value::Int(25)] };
        let (pts, _) = solve_pattern(&spec, &m).unwrap();
        assert_eq!(pts.len(), 12);
    }

    #[test]
    fn parameters_must_fit_the_window() {
        let m = PlaneModel::integer(-2, 2);
        let spec = PatternSpec::Circle { centers: vec![m.pt(3, 0)], radii2: vec![Value::Int(1)] };
        assert!(matches!(build_pattern(&spec, &m), Err(Error::OutsideWindow(_))));
    }
}

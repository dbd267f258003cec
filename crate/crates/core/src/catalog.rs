//! Ready-made diagrams for the worked examples: recursive sequences, the
//! escape-time set, finite sums, ltsup and a first-order random field.

use std::sync::Arc;

use crate::diagram::{Diagram, PartialSection};
use crate::error::Result;
use crate::map::arrow::ArrowMap;
use crate::map::expr::MapExpr;
use crate::map::structure::{builtin, succ, table};
use crate::subset::{Pred, Subset};
use crate::universe::Universe;
use crate::value::Value;

fn gen(name: &str, key: &str, args: &[Universe], consts: &[Value]) -> Result<MapExpr> {
    Ok(MapExpr::Gen(Arc::new(builtin(name, key, args, consts)?)))
}

/// `S1 --id--> S2 (union) <--phi-- S2`, `phi(n, m) = (n+1, (n+1)m)`, graded by the first component.
pub fn factorial() -> Result<Diagram> {
    let u = Universe::nat2();
    let mut d = Diagram::new();
    let s1 = d.add_node("S1", u.clone(), false);
    let s2 = d.add_node("S2", u.clone(), true);
    let sp1 = MapExpr::compose(MapExpr::Gen(succ()), MapExpr::proj(&u, 0));
    let mult = gen("mult", "mult", &[], &[])?;
    let phi = MapExpr::prod([sp1.clone(), MapExpr::compose(mult, MapExpr::prod([sp1, MapExpr::proj(&u, 1)]))]);
    d.forward(MapExpr::Id(u.clone()), s1, s2)?;
    d.forward(phi, s2, s2)?;
    d.grade(s2, MapExpr::proj(&u, 0), None)?;
    Ok(d)
}

/// `S1 --id--> S2 (union) <--pi2 x add-- S2`, `S3 = pi1(S2)`.
pub fn fibonacci() -> Result<Diagram> {
    let u = Universe::nat2();
    let mut d = Diagram::new();
    let s1 = d.add_node("S1", u.clone(), false);
    let s2 = d.add_node("S2", u.clone(), true);
    let s3 = d.add_node("S3", Universe::Nat, false);
    let add = gen("add", "add", &[], &[])?;
    d.forward(MapExpr::Id(u.clone()), s1, s2)?;
    d.forward(MapExpr::prod([MapExpr::proj(&u, 1), add]), s2, s2)?;
    d.forward(MapExpr::proj(&u, 0), s2, s3)?;
    Ok(d)
}

pub fn complex() -> Universe {
    Universe::rat2()
}

pub fn complex_value(re: i64, im: i64) -> Value {
    Value::pair(Value::rat(re, 1), Value::rat(im, 1))
}

/// Escape-time diagram: `S1` collects `(c, z_n, n)`, `S2` the escaped pairs,
/// `S3` the complement of their first components. Returns the diagram and
/// the anchors for the given grid of `c` values.
pub fn mandelbrot(grid: &[Value]) -> Result<(Diagram, PartialSection)> {
    let c = complex();
    let u1 = Universe::prod([c.clone(), c.clone(), Universe::Nat]);
    let u2 = Universe::prod([c.clone(), c.clone()]);
    let mut d = Diagram::new();
    let s1 = d.add_node("S1", u1.clone(), true);
    let s2 = d.add_node("S2", u2.clone(), false);
    let s3 = d.add_node("S3", c.clone(), false);
    let s4 = d.add_node("S4", u1.clone(), false);
    let s5 = d.add_node("S5", c.clone(), false);
    let cadd = gen("cadd", "cadd", &[], &[])?;
    let csq = gen("csq", "csq", &[], &[])?;
    let step = MapExpr::compose(
        cadd,
        MapExpr::prod([MapExpr::proj(&u1, 0), MapExpr::compose(csq, MapExpr::proj(&u1, 1))]),
    );
    let phi = MapExpr::prod([
        MapExpr::proj(&u1, 0),
        step,
        MapExpr::compose(MapExpr::Gen(succ()), MapExpr::proj(&u1, 2)),
    ]);
    d.forward(phi, s1, s1)?;
    d.forward(MapExpr::Id(u1.clone()), s4, s1)?;
    d.grade(s1, MapExpr::proj(&u1, 2), None)?;
    d.forward(MapExpr::proj_multi(&u1, &[0, 1]), s1, s2)?;
    d.inverse(MapExpr::proj(&u2, 1), s5, s2)?;
    d.add_chain(s2, vec![ArrowMap::Forward(MapExpr::proj(&u2, 0)), ArrowMap::Cmpl], s3)?;

    let mut t = PartialSection::new();
    let zero = complex_value(0, 0);
    let seeds = grid.iter().map(|g| Value::Tuple(vec![g.clone(), zero.clone(), Value::Nat(0)]));
    t.insert(s4, Subset::ext(&u1, seeds)?);
    t.insert(s5, escaped()?);
    Ok((d, t))
}

/// `{z : |z| > 2}` as the preimage of `{1}` under `|.|^2 > 4`.
pub fn escaped() -> Result<Subset> {
    let c = complex();
    let f = MapExpr::compose(gen("gt4", "gt", &[Universe::Rat], &[Value::rat(4, 1)])?, gen("cabs2", "cabs2", &[], &[])?);
    Ok(Subset::int(
        &c,
        Pred::Preimage { f, target: Box::new(Subset::ext(&Universe::Bool, [Value::Nat(1)])?) },
    ))
}

/// Node ids of an inlined sum fragment.
#[derive(Debug, Clone, Copy)]
pub struct SumNodes {
    pub input: usize,
    pub pairs: usize,
    pub selected: usize,
    pub output: usize,
    pub empty: usize,
    pub whole: usize,
}

/// Inline the finite-sum fragment reading `input ⊂ X × Q` and writing the
/// sum into `output ⊂ Q`. The fragment's own anchors (`{∅}` and the index
/// set to sum over) are added to `t`.
pub fn add_sum(d: &mut Diagram, prefix: &str, x: &Universe, input: usize, output: usize, t: &mut PartialSection, over: Value) -> Result<SumNodes> {
    let q = Universe::Rat;
    let p = Universe::pow(x.clone())?;
    let pq = Universe::prod([p.clone(), q.clone()]);
    let pqpq = Universe::prod([p.clone(), q.clone(), p.clone(), q.clone()]);
    let xq = Universe::prod([x.clone(), q.clone()]);
    let gathered = d.add_node(&format!("{prefix}S2+"), pq.clone(), true);
    let pairs = d.add_node(&format!("{prefix}S2"), pq.clone(), false);
    let selected = d.add_node(&format!("{prefix}S3"), pq.clone(), false);
    let empty = d.add_node(&format!("{prefix}S5"), p.clone(), false);
    let split = d.add_node(&format!("{prefix}S6"), pqpq.clone(), false);
    let whole = d.add_node(&format!("{prefix}S7"), p.clone(), false);

    let single = gen("singleton", "singleton", &[x.clone()], &[])?;
    let cup = gen("union", "union", &[x.clone()], &[])?;
    let cap = gen("inter", "inter", &[x.clone()], &[])?;
    let add = gen("addq", "add", &[q.clone()], &[])?;
    d.forward(MapExpr::prod([MapExpr::compose(single, MapExpr::proj(&xq, 0)), MapExpr::proj(&xq, 1)]), input, gathered)?;
    let phi = MapExpr::prod([
        MapExpr::compose(cup, MapExpr::proj_multi(&pqpq, &[0, 2])),
        MapExpr::compose(add, MapExpr::proj_multi(&pqpq, &[1, 3])),
    ]);
    d.forward(phi, split, gathered)?;
    d.forward(MapExpr::Id(pq.clone()), gathered, pairs)?;
    d.add_chain(empty, vec![ArrowMap::Cmpl, ArrowMap::Inverse(MapExpr::proj(&pq, 0))], pairs)?;
    d.inverse(MapExpr::proj_multi(&pqpq, &[0, 1]), pairs, split)?;
    d.inverse(MapExpr::proj_multi(&pqpq, &[2, 3]), pairs, split)?;
    d.inverse(MapExpr::compose(cap, MapExpr::proj_multi(&pqpq, &[0, 2])), empty, split)?;
    // the empty index set sums to 0; (∅, 0) never reaches S2
    let zero = d.add_node(&format!("{prefix}S8"), pq.clone(), false);
    let rows = d.add_node(&format!("{prefix}S3+"), pq.clone(), true);
    d.forward(MapExpr::Id(pq.clone()), pairs, rows)?;
    d.forward(MapExpr::Id(pq.clone()), zero, rows)?;
    d.forward(MapExpr::Id(pq.clone()), rows, selected)?;
    d.inverse(MapExpr::proj(&pq, 0), whole, selected)?;
    d.forward(MapExpr::proj(&pq, 1), selected, output)?;
    t.insert(empty, Subset::ext(&p, [Value::Mask(0)])?);
    t.insert(whole, Subset::ext(&p, [over])?);
    t.insert(zero, Subset::ext(&pq, [Value::pair(Value::Mask(0), Value::rat(0, 1))])?);
    Ok(SumNodes { input, pairs, selected, output, empty, whole })
}

/// The sum diagram over a finite index set `x`: `S1 ⊂ X × Q` in, `S4 ⊂ Q` out,
/// summing over the subset `over` of `x` (a mask).
pub fn sum(x: &Universe, over: u64) -> Result<(Diagram, PartialSection, SumNodes)> {
    let mut d = Diagram::new();
    let s1 = d.add_node("S1", Universe::prod([x.clone(), Universe::Rat]), false);
    let s4 = d.add_node("S4", Universe::Rat, false);
    let mut t = PartialSection::new();
    let nodes = add_sum(&mut d, "", x, s1, s4, &mut t, Value::Mask(over))?;
    Ok((d, t, nodes))
}

/// Inline the ltsup fragment `target = {x : x <= y for some y in source}`.
/// Returns the Boolean anchor node, which must be pinned to `{1}`.
pub fn add_ltsup(d: &mut Diagram, prefix: &str, source: usize, target: usize, t: &mut PartialSection) -> Result<usize> {
    let q = Universe::Rat;
    let qq = Universe::prod([q.clone(), q.clone()]);
    let q2 = Universe::prod([q.clone(), Universe::Bool]);
    let pairs = d.add_node(&format!("{prefix}RxR"), qq.clone(), false);
    let tagged = d.add_node(&format!("{prefix}Rx2"), q2.clone(), false);
    let one = d.add_node(&format!("{prefix}2"), Universe::Bool, false);
    let leq = gen("leq", "leq", &[q.clone()], &[])?;
    d.inverse(MapExpr::proj(&qq, 1), source, pairs)?;
    d.forward(MapExpr::prod([MapExpr::proj(&qq, 0), leq]), pairs, tagged)?;
    d.inverse(MapExpr::proj(&q2, 1), one, tagged)?;
    d.forward(MapExpr::proj(&q2, 0), tagged, target)?;
    t.insert(one, Subset::ext(&Universe::Bool, [Value::Nat(1)])?);
    Ok(one)
}

/// Standalone ltsup diagram: `A` in, down-set out.
pub fn ltsup() -> Result<(Diagram, PartialSection, usize, usize)> {
    let mut d = Diagram::new();
    let a = d.add_node("A", Universe::Rat, false);
    let out = d.add_node("ltsup", Universe::Rat, false);
    let mut t = PartialSection::new();
    add_ltsup(&mut d, "", a, out, &mut t)?;
    Ok((d, t, a, out))
}

/// A first-order random field on vertices `0..nv` with labels `0..nl`.
pub struct Field {
    pub nv: u64,
    pub nl: u64,
    pub unary: Vec<Vec<i64>>,
    /// `pair[u][l][v][m]`, zero unless `(u, v)` is an edge.
    pub pair: Vec<Vec<Vec<Vec<i64>>>>,
}

impl Field {
    pub fn energy(&self, labels: &[u64]) -> i64 {
        let mut e = 0;
        for (v, &l) in labels.iter().enumerate() {
            e += self.unary[v][l as usize];
        }
        for (u, &l) in labels.iter().enumerate() {
            for (v, &m) in labels.iter().enumerate() {
                e += self.pair[u][l as usize][v][m as usize];
            }
        }
        e
    }
}

/// Node ids of the random-field diagram.
#[derive(Debug, Clone, Copy)]
pub struct FieldNodes {
    pub terms: usize,
    pub energies: usize,
    pub total: usize,
    pub clash: usize,
    pub config: usize,
    pub vertices: usize,
    pub bound: usize,
}

pub fn markov_field(f: &Field) -> Result<(Diagram, PartialSection, FieldNodes)> {
    let v = Universe::Fin(f.nv);
    let l = Universe::Fin(f.nl);
    let q = Universe::Rat;
    let vl = Universe::prod([v.clone(), l.clone()]);
    let vlvl = Universe::prod([v.clone(), l.clone(), v.clone(), l.clone()]);
    let vll = Universe::prod([v.clone(), l.clone(), l.clone()]);
    let terms_u = Universe::Sum(vec![vl.clone(), vlvl.clone()]);
    let index = Universe::Sum(vec![v.clone(), Universe::prod([v.clone(), v.clone()])]);
    let vq = Universe::prod([v.clone(), q.clone()]);
    let vvq = Universe::prod([v.clone(), v.clone(), q.clone()]);
    let split = Universe::Sum(vec![vq.clone(), vvq.clone()]);
    let energies_u = Universe::prod([index.clone(), q.clone()]);

    let mut d = Diagram::new();
    let terms = d.add_node("S1", terms_u.clone(), false);
    let energies = d.add_node("S2", energies_u.clone(), false);
    let total = d.add_node("S3", q.clone(), false);
    let clash = d.add_node("S4", vll.clone(), false);
    let config = d.add_node("S5", vl.clone(), false);
    let vertices = d.add_node("S6", v.clone(), false);
    let bound = d.add_node("S7", q.clone(), false);

    let nat = |n: u64| Value::Nat(n);
    let mut rows1 = Vec::new();
    for a in 0..f.nv {
        for x in 0..f.nl {
            rows1.push((Value::pair(nat(a), nat(x)), Value::rat(f.unary[a as usize][x as usize], 1)));
        }
    }
    let mut rows2 = Vec::new();
    for a in 0..f.nv {
        for x in 0..f.nl {
            for b in 0..f.nv {
                for y in 0..f.nl {
                    let e = f.pair[a as usize][x as usize][b as usize][y as usize];
                    rows2.push((Value::Tuple(vec![nat(a), nat(x), nat(b), nat(y)]), Value::rat(e, 1)));
                }
            }
        }
    }
    let e1 = MapExpr::Gen(Arc::new(table("E1", vl.clone(), q.clone(), rows1)?));
    let e2 = MapExpr::Gen(Arc::new(table("E2", vlvl.clone(), q.clone(), rows2)?));
    let e1p = MapExpr::prod([MapExpr::proj(&vl, 0), e1]);
    let e2p = MapExpr::prod([MapExpr::proj(&vlvl, 0), MapExpr::proj(&vlvl, 2), e2]);
    let both = MapExpr::MapUnion(
        Box::new(MapExpr::compose(MapExpr::Inj { index: 0, cod: split.clone() }, e1p)),
        Box::new(MapExpr::compose(MapExpr::Inj { index: 1, cod: split.clone() }, e2p)),
    );
    let psi = MapExpr::prod([
        MapExpr::MapUnion(
            Box::new(MapExpr::compose(MapExpr::Inj { index: 0, cod: index.clone() }, MapExpr::proj(&vq, 0))),
            Box::new(MapExpr::compose(MapExpr::Inj { index: 1, cod: index.clone() }, MapExpr::proj_multi(&vvq, &[0, 1]))),
        ),
        MapExpr::MapUnion(Box::new(MapExpr::proj(&vq, 1)), Box::new(MapExpr::proj(&vvq, 2))),
    ]);
    let first = MapExpr::MapUnion(Box::new(MapExpr::Id(vl.clone())), Box::new(MapExpr::proj_multi(&vlvl, &[0, 1])));
    let second = MapExpr::MapUnion(Box::new(MapExpr::Id(vl.clone())), Box::new(MapExpr::proj_multi(&vlvl, &[2, 3])));
    d.inverse(first, config, terms)?;
    d.inverse(second, config, terms)?;
    d.forward(MapExpr::compose(psi, both), terms, energies)?;
    d.inverse(MapExpr::proj_multi(&vll, &[0, 1]), config, clash)?;
    d.inverse(MapExpr::proj_multi(&vll, &[0, 2]), config, clash)?;
    d.add_chain(config, vec![ArrowMap::Forward(MapExpr::proj_multi(&vl, &[0, 1, 1])), ArrowMap::Cmpl], clash)?;
    d.forward(MapExpr::proj(&vl, 0), config, vertices)?;

    let mut t = PartialSection::new();
    let all = (1u64 << index.cardinality().unwrap_or(0)) - 1;
    add_sum(&mut d, "sum.", &index, energies, total, &mut t, Value::Mask(all))?;
    add_ltsup(&mut d, "ltsup.", total, bound, &mut t)?;
    t.insert(clash, Subset::empty(&vll));
    t.insert(vertices, Subset::ext(&v, (0..f.nv).map(Value::Nat))?);
    Ok((d, t, FieldNodes { terms, energies, total, clash, config, vertices, bound }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::SolverBounds;
    use crate::diagram::check_section;
    use crate::solver::solve_least;
    use std::collections::BTreeSet;

    #[test]
    fn fibonacci_window() {
        let d = fibonacci().unwrap();
        let mut t = PartialSection::new();
        t.insert(0, Subset::ext(&Universe::nat2(), [Value::nat_pair(1, 1)]).unwrap());
        let b = SolverBounds::default().with_nat_max(13);
        let s = solve_least(&d, &t, &b).unwrap();
        let want: BTreeSet<Value> =
            [(1, 1), (1, 2), (2, 3), (3, 5), (5, 8), (8, 13)].iter().map(|&(a, c)| Value::nat_pair(a, c)).collect();
        assert_eq!(s.values(1), want);
        assert!(check_section(&d, &s, &b).unwrap().is_valid());
    }

    #[test]
    fn sum_of_weights() {
        let x = Universe::Fin(3);
        let (d, mut t, n) = sum(&x, 0b101).unwrap();
        let w = [Value::rat(1, 2), Value::rat(3, 1), Value::rat(-2, 1)];
        let xq = Universe::prod([x.clone(), Universe::Rat]);
        t.insert(n.input, Subset::ext(&xq, (0..3).map(|i| Value::pair(Value::Nat(i), w[i as usize].clone()))).unwrap());
        let b = SolverBounds::default().with_rat_den(2);
        let s = solve_least(&d, &t, &b).unwrap();
        assert_eq!(s.values(n.output), [Value::rat(-3, 2)].into_iter().collect());
        assert!(check_section(&d, &s, &b).unwrap().is_valid());
    }
}

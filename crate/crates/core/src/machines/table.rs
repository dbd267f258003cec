//! A finite function `m × n → m × n × 2` as a diagram over `{0, succ}`.
//!
//! `A_i = {i}` through a `succ` chain. For every argument `(i, j)` the node
//! `B_{i,j} ⊆ ℕ⁵` intersects the preimages of the input and of the five
//! singletons of its table row, so it is the row itself exactly when `(i, j)`
//! is in the input. `C_1` collects the last three coordinates.

use crate::diagram::{Diagram, PartialSection};
use crate::error::{Error, Result};
use crate::machines::compile::{pi, Kit};
use crate::map::expr::MapExpr;
use crate::map::structure::succ;
use crate::subset::Subset;
use crate::universe::Universe;
use crate::value::Value;

#[derive(Debug, Clone)]
pub struct FunTable {
    pub diagram: Diagram,
    pub one: usize,
    pub input: usize,
    pub output: usize,
}

pub fn build_fun_table(m: usize, n: usize, f: impl Fn(usize, usize) -> (usize, usize, usize)) -> Result<FunTable> {
    if m == 0 || n == 0 {
        return Err(Error::Malformed("table needs m, n >= 1".into()));
    }
    let mut k = Kit::new();
    let len = m.max(n).max(2);
    let mut a = Vec::with_capacity(len);
    let a0 = k.node("A.0", 1, false);
    k.fwd(k.one, MapExpr::constant(&Universe::Unit, Value::Nat(0), &Universe::Nat), a0)?;
    a.push(a0);
    for i in 1..len {
        let ai = k.node(&format!("A.{i}"), 1, false);
        k.fwd(a[i - 1], MapExpr::Gen(succ()), ai)?;
        a.push(ai);
    }
    let c0 = k.node("C.0", 2, false);
    let c1 = k.node("C.1", 3, true);
    for i in 0..m {
        for j in 0..n {
            let (x, y, v) = f(i, j);
            if x >= m || y >= n || v > 1 {
                return Err(Error::Malformed(format!("table value at ({i}, {j}) is out of range")));
            }
            let b = k.node(&format!("B.{i}.{j}"), 5, false);
            k.inv(c0, pi(5, &[0, 1]), b)?;
            for (slot, val) in [i, j, x, y, v].into_iter().enumerate() {
                k.inv(a[val], pi(5, &[slot]), b)?;
            }
            k.fwd(b, pi(5, &[2, 3, 4]), c1)?;
        }
    }
    Ok(FunTable { diagram: k.d, one: k.one, input: c0, output: c1 })
}

impl FunTable {
    pub fn anchors(&self, input: impl IntoIterator<Item = (usize, usize)>) -> Result<PartialSection> {
        let mut t = PartialSection::new();
        t.insert(self.one, Subset::ext(&Universe::Unit, [Value::Unit])?);
        let vals = input.into_iter().map(|(i, j)| Value::nat_pair(i as u64, j as u64));
        t.insert(self.input, Subset::ext(&Universe::nat2(), vals)?);
        Ok(t)
    }
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;
    use crate::bounds::SolverBounds;
    use crate::solver::solve_least;

    fn image(t: &FunTable, input: &[(usize, usize)]) -> BTreeSet<Value> {
        let s = solve_least(&t.diagram, &t.anchors(input.iter().copied()).unwrap(), &SolverBounds::default().with_nat_max(4)).unwrap();
        s.values(t.output)
    }

    fn triple(a: usize, b: usize, c: usize) -> Value {
        Value::Tuple(vec![Value::Nat(a as u64), Value::Nat(b as u64), Value::Nat(c as u64)])
    }

    #[test]
    fn lookups() {
        let t = build_fun_table(2, 2, |i, j| (i, j, 1)).unwrap();
        assert_eq!(image(&t, &[(0, 1)]), BTreeSet::from([triple(0, 1, 1)]));
        assert!(image(&t, &[]).is_empty());
        let g = |i: usize, j: usize| ((i + j) % 2, i, j % 2);
        let t = build_fun_table(2, 2, g).unwrap();
        let all = [(0, 0), (0, 1), (1, 0), (1, 1)];
        let want: BTreeSet<Value> = all.iter().map(|&(i, j)| {
            let (a, b, c) = g(i, j);
            triple(a, b, c)
        }).collect();
        assert_eq!(image(&t, &all), want);
    }
}

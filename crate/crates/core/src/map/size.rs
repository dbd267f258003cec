//! Membership in the generated set and tree size relative to a structure set.

use crate::error::{Error, Result};
use crate::map::expr::MapExpr;
use crate::map::structure::StructureMapSet;

/// Whether every leaf is a generator, identity, ω, projection or admitted
/// constant, joined only by composition and product.
pub fn in_generated(f: &MapExpr, m: &StructureMapSet) -> bool {
    match f {
        MapExpr::Gen(g) => m.has_gen(g),
        MapExpr::Id(_) | MapExpr::Omega(_) | MapExpr::Proj { .. } | MapExpr::ProjMulti { .. } => true,
        MapExpr::Const { value, .. } => m.admits_const(value),
        MapExpr::Compose(g, h) => in_generated(g, m) && in_generated(h, m),
        MapExpr::Prod(fs) => fs.iter().all(|x| in_generated(x, m)),
        MapExpr::MapUnion(..) | MapExpr::Inj { .. } => false,
    }
}

/// Size of the given tree: leaves cost 1, each composition or product node
/// costs 1 plus its children.
pub fn map_size(f: &MapExpr, m: &StructureMapSet) -> Result<u64> {
    if !in_generated(f, m) {
        return Err(Error::NotGenerated(f.to_string()));
    }
    Ok(tree_size(f))
}

fn tree_size(f: &MapExpr) -> u64 {
    match f {
        MapExpr::Compose(g, h) => 1 + tree_size(g) + tree_size(h),
        MapExpr::Prod(fs) => 1 + fs.iter().map(tree_size).sum::<u64>(),
        MapExpr::MapUnion(g, h) => 1 + tree_size(g) + tree_size(h),
        _ => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::structure::{nat_const, succ};
    use crate::universe::Universe;

    #[test]
    fn theorem_atoms() {
        let m = StructureMapSet::m_nat();
        let s = MapExpr::Gen(succ());
        assert_eq!(map_size(&s, &m).unwrap(), 1);
        assert_eq!(map_size(&nat_const(&Universe::Unit, 1), &m).unwrap(), 3);
        let one = MapExpr::prod([MapExpr::Id(Universe::Nat), nat_const(&Universe::Nat, 1)]);
        assert_eq!(map_size(&one, &m).unwrap(), 5);
        let zero = MapExpr::prod([MapExpr::Id(Universe::Nat), nat_const(&Universe::Nat, 0)]);
        assert_eq!(map_size(&zero, &m).unwrap(), 3);
    }

    #[test]
    fn unions_are_not_generated() {
        let u = MapExpr::MapUnion(Box::new(MapExpr::Id(Universe::Nat)), Box::new(MapExpr::Id(Universe::Nat)));
        assert!(!in_generated(&u, &StructureMapSet::m_nat()));
        assert!(map_size(&u, &StructureMapSet::m_nat()).is_err());
    }
}

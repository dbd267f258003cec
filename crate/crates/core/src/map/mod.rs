//! Map expressions, their element and powerset semantics, and size accounting.

pub mod arrow;
pub mod expr;
pub mod pattern;
pub mod preimage;
pub mod size;
pub mod structure;

pub use arrow::{apply_arrow, Arrow, ArrowMap};
pub use expr::{GenDef, MapExpr};
pub use pattern::{PatSet, Pattern};
pub use size::{in_generated, map_size};
pub use structure::StructureMapSet;

use crate::value::Value;
use crate::error::Result;

/// Element-level evaluation.
pub fn apply_point(f: &MapExpr, v: &Value) -> Result<Value> {
    f.apply(v)
}

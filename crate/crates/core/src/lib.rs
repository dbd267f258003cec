//! Objects as cross sections of powerset diagrams.
//!
//! A diagram is a family of carrier sets joined by arrows that lift
//! element maps to subsets (direct image, preimage, complement). A cross
//! section assigns a subset to each node so that every constrained node is the
//! intersection, or for union-marked nodes the union, of its incoming images.
//! This crate solves, checks, enumerates and minimizes cross sections; compiles
//! automata and Turing machines into diagrams over `{0, succ}`; decodes
//! represented strings by Boolean forcing; bounds structural information by
//! map-size ledgers; and evaluates a corpus of plane patterns exactly.

pub mod bounds;
pub mod catalog;
pub mod cli;
pub mod diagram;
pub mod dsl;
pub mod error;
pub mod forcing;
pub mod geometry;
pub mod machines;
pub mod map;
pub mod measure;
pub mod solver;
pub mod subset;
pub mod universe;
pub mod value;

pub use bounds::SolverBounds;
pub use diagram::{CrossSection, Diagram, PartialSection};
pub use error::{Error, Result};
pub use subset::{Pred, Subset};
pub use universe::Universe;
pub use value::Value;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("universe mismatch: {0}")]
    UniverseMismatch(String),
    #[error("non-materializable union over {0}")]
    NonMaterializableUnion(String),
    #[error("universe {0} is not enumerable under the current bounds")]
    NotEnumerable(String),
    #[error("needs normalization: {0}")]
    NeedsNormalization(String),
    #[error("domain mismatch: {0}")]
    Domain(String),
    #[error("arithmetic overflow in {0}")]
    Overflow(String),
    #[error("map not generated by the structure set: {0}")]
    NotGenerated(String),
    #[error("unknown generator {0}")]
    UnknownGenerator(String),
    #[error("unknown node {0}")]
    UnknownNode(String),
    #[error("malformed diagram: {0}")]
    Malformed(String),
    #[error("underdetermined node {0}: no incoming arrows and not anchored")]
    Underdetermined(String),
    #[error("non-monotone cycle through {0}")]
    NonMonotoneCycle(String),
    #[error("grading violated at {node}: {witness} has grade {grade} in row {row}")]
    GradingViolated {
        node: String,
        witness: String,
        grade: u64,
        row: u64,
    },
    #[error("missing grading on cycle through {0}")]
    MissingGrading(String),
    #[error("iteration cap exceeded after {0} candidates")]
    IterationCap(u64),
    #[error("incomparable subsets at {0}")]
    Incomparable(String),
    #[error("non-materializable comparison at {0}")]
    NonMaterializableComparison(String),
    #[error("forcing requires complement-free diagram")]
    ComplementInForcing,
    #[error("infinite conjunction at {0}")]
    InfiniteConjunction(String),
    #[error("not a string encoding: {0}")]
    NotStringEncoding(String),
    #[error("malformed machine: {0}")]
    MalformedMachine(String),
    #[error("representation check failed: {0}")]
    NotRepresenting(String),
    #[error("parameters outside window: {0}")]
    OutsideWindow(String),
    #[error("unknown derived map {0}")]
    UnknownDerived(String),
    #[error("degenerate canvas {0}")]
    DegenerateCanvas(String),
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

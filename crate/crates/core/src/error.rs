use thiserror::Error;

/// Errors raised by algebra, ideal, derivation and jet computations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeilError {
    #[error("structure constants are not commutative: e{i}*e{j} != e{j}*e{i}")]
    NotCommutative { i: usize, j: usize },
    #[error("structure constants are not associative on (e{i}, e{j}, e{k})")]
    NotAssociative { i: usize, j: usize, k: usize },
    #[error("basis element 0 is not a two-sided unit")]
    NoUnit,
    #[error("algebra is not local with residue field Q: {0}")]
    NotLocal(String),
    #[error("malformed structure table: {0}")]
    MalformedTable(String),
    #[error("dimension {dim} exceeds the cap of {cap}")]
    DimensionCap { dim: usize, cap: usize },
    #[error("ideal contains the unit; a proper ideal is required")]
    ImproperIdeal,
    #[error("generator {0} is not in the maximal ideal")]
    GeneratorNotNilpotent(usize),
    #[error("element {0} is not in the maximal ideal")]
    ElementNotInMaximal(usize),
    #[error("operands belong to different algebras")]
    AlgebraMismatch,
    #[error("coordinate vector has length {got}, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("module data incompatible with the requested derivation space: {0}")]
    IncompatibleModule(String),
    #[error("ideal is not preserved by every derivation of the algebra")]
    NotInvariant,
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("generator images do not satisfy the defining relations")]
    RelationsViolated,
    #[error("map is not invertible")]
    NotInvertible,
    #[error("linear map is not an automorphism: {0}")]
    NotAutomorphism(String),
    #[error("near-point is not regular")]
    NotRegular,
    #[error("base points or algebras do not match")]
    BaseMismatch,
    #[error("invalid rational literal {0:?}")]
    BadRational(String),
    #[error("serialization error: {0}")]
    Serialization(String),
}

pub type Result<T> = std::result::Result<T, WeilError>;

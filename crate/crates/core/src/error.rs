use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("variable x{index} out of range for dimension {dim}")]
    VariableOutOfRange { index: usize, dim: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("zero coordinate in evaluation point (index {0})")]
    ZeroCoordinate(usize),

    #[error("zero polynomial")]
    ZeroPolynomial,

    #[error("non-rational coefficient present")]
    NonRational,

    #[error("non-integer coefficient present")]
    NonInteger,

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("order mismatch: group modulus {group} but point order {point}")]
    OrderMismatch { group: u64, point: u64 },

    #[error("invalid torsion point: {0}")]
    InvalidTorsion(String),

    #[error("invalid subgroup: {0}")]
    InvalidSubgroup(String),

    #[error("group too large: {size} elements exceeds cap {cap}")]
    GroupTooLarge { size: u128, cap: u128 },

    #[error("exact zero: the polynomial vanishes at the torsion point")]
    ExactZero,

    #[error("matrix is not unimodular")]
    NotUnimodular,

    #[error("vectors are not a basis of a saturated lattice: {0}")]
    NotSaturated(String),

    #[error("dimension {dim} exceeds the exact-mode cap {cap}")]
    ExactCapExceeded { dim: usize, cap: usize },

    #[error("lattice has determinant below one")]
    DeterminantBelowOne,

    #[error("point set of size {n} in dimension {d} exceeds the exact discrepancy cap {cap}")]
    DiscrepancyCap { n: usize, d: usize, cap: usize },

    #[error("root finding failed: {0}")]
    RootFinding(String),

    #[error("coincident root indices in pairing")]
    CoincidentIndices,

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

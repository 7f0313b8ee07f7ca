use alloc::string::String;
use alloc::vec::Vec;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid invariant factor {0}: entries must be at least 2")]
    InvalidInvariant(u64),
    #[error("element {coords:?} does not belong to the group with invariants {invariants:?}")]
    ElementOutOfRange { coords: Vec<u64>, invariants: Vec<u64> },
    #[error("pairing mismatch: {0}")]
    PairingMismatch(String),
    #[error("ambient mismatch: {0}")]
    AmbientMismatch(String),
    #[error("group of order {order} exceeds the enumeration bound {bound}")]
    EnumerationBound { order: u64, bound: u64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid form: {0}")]
    InvalidForm(String),
    #[error("the form is degenerate")]
    DegenerateForm,
    #[error("subgroup is not isotropic")]
    NotIsotropic,
    #[error("subgroup is not Lagrangian")]
    NotLagrangian,
    #[error("matrix is not scalar")]
    NotScalar,
    #[error("subgroup is not abelian in PGL_n")]
    NotAbelianInPgl,
    #[error("group of order {0} is not a p-group")]
    NotPGroup(u64),
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error("dimension {dim} exceeds the supported maximum {max}")]
    DimensionTooLarge { dim: usize, max: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("unsupported group type: {0}")]
    UnsupportedType(String),
    #[error("r = {r} exceeds the search bound {max}")]
    SearchBound { r: u32, max: u32 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal invariant failed: {0}")]
    Internal(String),
}

/// Coarse classification used by frontends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Bad input or a violated precondition.
    Validation,
    /// A bug: a postcondition the library guarantees did not hold.
    Internal,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Internal(_) => ErrorKind::Internal,
            _ => ErrorKind::Validation,
        }
    }

    /// Stable machine-readable tag.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidInvariant(_) => "invalid-invariant",
            Error::ElementOutOfRange { .. } => "element-out-of-range",
            Error::PairingMismatch(_) => "pairing-mismatch",
            Error::AmbientMismatch(_) => "ambient-mismatch",
            Error::EnumerationBound { .. } => "enumeration-bound",
            Error::Precondition(_) => "precondition",
            Error::InvalidForm(_) => "invalid-form",
            Error::DegenerateForm => "degenerate-form",
            Error::NotIsotropic => "not-isotropic",
            Error::NotLagrangian => "not-lagrangian",
            Error::NotScalar => "not-scalar",
            Error::NotAbelianInPgl => "not-abelian-in-pgl",
            Error::NotPGroup(_) => "not-p-group",
            Error::HypothesisViolation(_) => "hypothesis-violation",
            Error::DimensionTooLarge { .. } => "dimension-too-large",
            Error::DimensionMismatch { .. } => "dimension-mismatch",
            Error::UnsupportedType(_) => "unsupported-type",
            Error::SearchBound { .. } => "search-bound",
            Error::Parse(_) => "parse",
            Error::Internal(_) => "internal",
        }
    }
}

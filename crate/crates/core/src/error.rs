use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("label {0} is outside 1..=7")]
    InvalidLabel(u8),
    #[error("invalid divisor: {0}")]
    InvalidDivisor(String),
    #[error("invalid stratum: {0}")]
    InvalidStratum(String),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("no normal form: {0}")]
    NoNormalForm(String),
    #[error("repeated labels in Keel relation")]
    RepeatedLabels,
    #[error("unsupported-configuration: {0}")]
    UnsupportedConfiguration(String),
    #[error("no admissible Keel relation for {0}")]
    NoAdmissibleRelation(String),
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("basis vectors are linearly dependent")]
    DependentBasis,
    #[error("label consistency: {0}")]
    LabelConsistency(String),
    #[error("points not distinct: {0}")]
    PointsNotDistinct(String),
    #[error("points lie on a common conic")]
    CommonConic,
    #[error("all points are collinear")]
    AllCollinear,
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("inconsistent-input: {0}")]
    InconsistentInput(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("structure constants are not antisymmetric: c[{i}][{j}][{k}] = {a}, c[{j}][{i}][{k}] = {b}")]
    NotAntisymmetric {
        i: usize,
        j: usize,
        k: usize,
        a: f64,
        b: f64,
    },
    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("invalid parameters for {family}: {detail}")]
    InvalidParameters { family: String, detail: String },
    #[error("unknown algebra family `{0}`")]
    UnknownFamily(String),
    #[error("no table entry: no automorphism family is recorded for {0}")]
    NoTableEntry(String),
    #[error("dependent spanning set")]
    DependentSpanningSet,
    #[error("expected a {expected}-dimensional subspace, got dimension {got}")]
    WrongDimension { expected: &'static str, got: usize },
    #[error("subspace does not generate the algebra (flag dimensions {0:?})")]
    NotGenerating(Vec<usize>),
    #[error("canonicalization failed: neither spanner order yields a basis")]
    CanonicalizationFailed,
    #[error("invalid body: {0}")]
    InvalidBody(String),
    #[error("operation requires a {0}")]
    WrongBodyKind(&'static str),
    #[error("wrong algebra: {0}")]
    WrongAlgebra(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("internal assertion failed: {0}")]
    Internal(String),
    #[error("catalog data error: {0}")]
    Catalog(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

use crate::poly::parse::ParseError;
use crate::poly::PolyError;

/// Errors from the symbolic and numeric modules.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error("expected {expected} entries, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("zero vector field")]
    ZeroField,
    #[error("not a morphism: coordinate {coordinate}: dφ(v) = {lhs} but w∘φ = {rhs}")]
    MorphismPrecondition {
        coordinate: usize,
        lhs: String,
        rhs: String,
    },
    #[error("generators are dependent: rank {rank} < {count}")]
    DependentGenerators { rank: usize, count: usize },
    #[error("not dominant at the generic point: Jacobian rank {rank} < {expected}")]
    NotDominant { rank: usize, expected: usize },
    #[error("expected a non-constant polynomial")]
    ConstantInput,
    #[error("polynomial is not squarefree: {0}")]
    NotSquarefree(String),
    #[error("Q vanishes identically: the line at infinity is not invariant")]
    DegenerateQ,
    #[error("orbit does not close up: distance {distance:e} after the given period")]
    NonPeriodic { distance: f64 },
    #[error("spectrum is not three real eigenvalues of distinct modulus: {0}")]
    DefectiveSpectrum(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

use thiserror::Error;

use crate::chart::Parity;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate generator name `{0}`")]
    DuplicateName(String),
    #[error("operands live on different charts")]
    ChartMismatch,
    #[error("generator `{0}` is not in the chart")]
    UnknownGenerator(String),
    #[error("binding for `{name}` has parity {found:?}, expected {expected:?}")]
    ParityMismatch {
        name: String,
        expected: Parity,
        found: Parity,
    },
    #[error("binding for `{0}` is not parity-homogeneous")]
    MixedBinding(String),
    #[error("cannot substitute for `{0}`: it carries an exponential tag")]
    ExpSubstitution(String),
    #[error("exponential tag base `{0}` must be an even generator")]
    OddExpBase(String),
    #[error("chart is not a cotangent chart")]
    NotCotangent,
    #[error("chart is already a cotangent chart")]
    AlreadyCotangent,
    #[error("chart is not an anticotangent chart")]
    NotAnticotangent,
    #[error("expected a function of momentum degree {expected}, found {found}")]
    MomentumDegree { expected: u32, found: String },
    #[error("function depends on momenta")]
    NotMomentumFree,
    #[error("vector field components have inconsistent parity")]
    InhomogeneousField,
    #[error("shape violation: {0}")]
    Shape(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("weight audit failed: {0}")]
    Weight(String),
    #[error("reserved name `{0}` already present in chart")]
    NameCollision(String),
    #[error("hamiltonian vector field of `{0}` disagrees with its defining action")]
    HamiltonianMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

use crate::lattice::LatticeVertex;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("vertices {0} and {1} are not adjacent")]
    NotAdjacent(LatticeVertex, LatticeVertex),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty input")]
    EmptyInput,
    #[error("unexpected character {found:?} at position {position}")]
    InvalidChar { position: usize, found: char },
    #[error("malformed repeat count at position {position}")]
    MalformedCount { position: usize },
    #[error("zero repeat count at position {position}")]
    ZeroCount { position: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DomainError {
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConformationError {
    #[error("placement has {found} vertices, sequence has {expected} residues")]
    LengthMismatch { expected: usize, found: usize },
    #[error("residue {0} is not a lattice neighbour of the next one")]
    NonAdjacentStep(usize),
    #[error("residues {0} and {1} share a vertex")]
    SelfIntersection(usize, usize),
    #[error("binding edges starting at residues {0} and {1} cross")]
    BindingCross(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FoldError {
    #[error("need at least {needed} H residues, found {found}")]
    TooFewH { needed: usize, found: usize },
    #[error("could not route the P-run of length {len} starting at residue {start}")]
    InfeasibleRouting { start: usize, len: usize },
    #[error("search budget of {budget} nodes exhausted")]
    BudgetExceeded {
        budget: u64,
        best: Option<Box<crate::folding::BruteResult>>,
    },
    #[error("sequence too long for exhaustive search ({0} residues)")]
    TooLong(usize),
    #[error("folder produced an invalid conformation: {0}")]
    Invalid(#[from] ConformationError),
}

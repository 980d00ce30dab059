//! HP-model protein folding on the hexagonal prism lattice with diagonals.
//!
//! Two constructive folders (a stacked-hexagon helix and a two-layer chain
//! packing), an exhaustive search for small strings, exact validation of
//! conformations and the bound arithmetic that goes with them.

pub mod analysis;
pub mod cli;
pub mod conformation;
pub mod error;
pub mod folding;
pub mod format;
pub mod lattice;
pub mod sequence;

pub use conformation::{build_conformation, check_lemma2, count_contacts, edge_census, upper_bound, BoundValue, Conformation, EdgeCensus};
pub use error::{ConformationError, DomainError, FoldError, LatticeError, ParseError};
pub use lattice::{classify_edge, edge_neighborhood, segments_cross, EdgeClass, LatticeVertex, Point3, Sublattice};
pub use sequence::{expected_runs, parse_hp, HpSequence, Residue};

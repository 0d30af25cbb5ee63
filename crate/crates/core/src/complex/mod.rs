//! Simplices, Vietoris–Rips complexes and their diameter-lexicographic filtrations.

#[allow(clippy::module_inception)]
mod complex;
mod filtration;
mod levels;
mod simplex;

pub use complex::{
    diameter, euler_characteristic, subforest, vietoris_rips, vietoris_rips_at_level, SimplicialComplex,
    DEFAULT_SIMPLEX_BUDGET,
};
pub use filtration::{Filtration, SimplexOrder};
pub use levels::{distance_levels, DistanceLevels};
pub use simplex::{NamedSimplex, NotAPermutation, Simplex, VertexOrder, Vertices, MAX_VERTICES};

pub(crate) use complex::clique_complex_on;
pub(crate) use simplex::{bits, subsets};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ComplexError {
    #[error("{0} vertices exceed the supported maximum of {MAX_VERTICES}")]
    TooManyVertices(usize),
    #[error("simplex budget of {budget} exceeded")]
    Budget { budget: usize },
    #[error("simplex {simplex} is missing its face {missing}")]
    NotClosed { simplex: Simplex, missing: Simplex },
    #[error("simplex {0} uses a vertex outside the complex")]
    VertexOutOfRange(Simplex),
}

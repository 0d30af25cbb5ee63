//! Explicit gradients on Vietoris–Rips complexes: cones over hyperbolic geodesic spaces,
//! the filtered cone, the tree-metric gradients and apparent pairs.

mod apparent;
mod cone;
mod refinement;
mod tree;

pub use apparent::{apparent_pairs, max_facet, min_cofacet, zero_persistence_apparent_pairs};
pub use cone::{
    cone_gradient, contractibility_threshold, filtered_cone_gradient, point_order, ConeGradient, ConeStratum,
    FilteredConeGradient, Threshold,
};
pub use refinement::{refinement_check, RefinementReport, RefinementWitness};
pub use tree::{
    canonical_gradient, canonical_intervals, generic_gradient, max_edge_in, max_simplex_of_edge, maximal_simplices,
    perturbed_gradient, perturbed_intervals, MaximalSimplexRecord, TreeMetricSpace,
};

use crate::complex::ComplexError;
use crate::morse::MorseError;
use crate::value::DistanceValue;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GradientError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Morse(#[from] MorseError),
    #[error("decimal clustering merged distinct distances; rerun in rational mode")]
    DecimalMerge,
    #[error("not a tree metric: {0}")]
    NotTreeMetric(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("tree metric is not generic: pairs {first:?} and {second:?} share a distance")]
    NotGeneric { first: (usize, usize), second: (usize, usize) },
    #[error("threshold {t} is below 4*delta + 2*nu = {required}")]
    Threshold { t: Box<DistanceValue>, required: Box<DistanceValue> },
    #[error("no apex for the stratum of point {vertex} (position {index}{}): {reason}",
        level.map(|m| format!(", level {m}")).unwrap_or_default())]
    NoApex { level: Option<usize>, index: usize, vertex: usize, reason: String },
}

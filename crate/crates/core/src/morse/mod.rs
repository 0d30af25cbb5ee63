//! Discrete gradients as interval partitions, their validation, merging and the collapses
//! they induce.

mod collapse;
mod gradient;
mod merge;
mod validate;

pub use collapse::{collapse, critical_cells, replay, CollapseCertificate};
pub use gradient::{minimal_vertex_refinement, DiscreteGradient, GradientInterval, Matching};
pub use merge::merge_gradients;
pub use validate::{find_cycle, validate_gradient, Check, CheckOutcome, CheckStatus, ValidationOptions, ValidationReport};

use crate::complex::Simplex;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MorseError {
    #[error("[{rho}] -> [{phi}] is not a regular interval")]
    NotRegular { rho: Simplex, phi: Simplex },
    #[error("[{sigma}] is not a facet of [{tau}]")]
    NotFacet { sigma: Simplex, tau: Simplex },
    #[error("simplex [{0}] is matched twice")]
    Repeated(Simplex),
    #[error("cannot merge parts {} and {}: {reason} (simplex [{simplex}])", parts.0, parts.1)]
    Merge { simplex: Simplex, parts: (usize, usize), reason: String },
    #[error("collapse stuck with {remaining} pairs left, e.g. [{example}]")]
    Stuck { remaining: usize, example: Simplex },
    #[error("collapse ended away from the target subcomplex{}", example.map(|s| format!(" at [{s}]")).unwrap_or_default())]
    EndMismatch { example: Option<Simplex> },
    #[error("certificate step {step}: {reason}")]
    Replay { step: usize, reason: String },
}

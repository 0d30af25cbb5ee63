//! Z/2 persistent homology of diameter-lexicographic filtrations by column reduction, with
//! apparent pairs resolved without column operations, plus a Betti-number oracle.

mod oracle;
mod reduction;
mod surjectivity;

pub use oracle::{homology_oracle, DEFAULT_ORACLE_BUDGET};
pub use reduction::{persistent_homology, Barcode, DegreeStats, PersistenceInterval, ReductionStats};
pub use surjectivity::{h1_surjectivity_check, h1_surjectivity_from_barcode, SurjectivityReport};

use crate::complex::ComplexError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PersistenceError {
    #[error("budget of {budget} {what} exceeded")]
    Budget { budget: usize, what: &'static str },
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

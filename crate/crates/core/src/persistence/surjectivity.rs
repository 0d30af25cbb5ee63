use crate::complex::{distance_levels, vietoris_rips, Filtration, SimplexOrder, VertexOrder};
use crate::metric::FiniteMetricSpace;
use crate::persistence::{persistent_homology, Barcode, PersistenceError, PersistenceInterval};
use crate::value::{DistanceValue, NumericMode};

#[derive(Debug, Clone, PartialEq)]
pub struct SurjectivityReport {
    pub holds: bool,
    /// `2 nu`; maps `H1(VR_t) -> H1(VR_u)` are onto for `bound < t < u` iff nothing is born above it.
    pub bound: DistanceValue,
    /// A degree-1 interval born above the bound.
    pub witness: Option<PersistenceInterval>,
}

/// Checks that no positive-length degree-1 interval of `barcode` is born after `2 nu`.
pub fn h1_surjectivity_from_barcode(barcode: &Barcode, nu: &DistanceValue, mode: NumericMode) -> SurjectivityReport {
    let bound = nu.scale(2);
    let witness = barcode.degree(1).iter().find(|i| !mode.le(&i.birth, &bound)).cloned();
    SurjectivityReport { holds: witness.is_none(), bound, witness }
}

/// Computes the degree-1 barcode of the full Vietoris–Rips filtration of `space` and checks it
/// against `2 nu`.
pub fn h1_surjectivity_check(
    space: &FiniteMetricSpace,
    nu: &DistanceValue,
    budget: usize,
) -> Result<SurjectivityReport, PersistenceError> {
    let k = vietoris_rips(space, &space.max_distance(), Some(2), budget)?;
    let f = Filtration::new(k, distance_levels(space), VertexOrder::identity(space.len()), SimplexOrder::default());
    let (barcode, _) = persistent_homology(&f, 1, true, usize::MAX)?;
    Ok(h1_surjectivity_from_barcode(&barcode, nu, space.mode()))
}

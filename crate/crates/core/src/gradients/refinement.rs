use std::collections::HashSet;

use crate::complex::Simplex;
use crate::morse::{DiscreteGradient, GradientInterval};

/// Why `fine` fails to refine `coarse`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RefinementWitness {
    /// A fine interval not contained in any single coarse interval.
    Straddles { fine: GradientInterval },
    /// Two fine intervals sharing a simplex.
    Overlap { simplex: Simplex },
    /// A simplex of a coarse interval covered by no fine interval.
    Uncovered { coarse: GradientInterval, simplex: Simplex },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefinementReport {
    pub refines: bool,
    pub coarse_intervals: usize,
    pub fine_intervals: usize,
    pub witness: Option<RefinementWitness>,
}

/// Checks that the intervals of `fine` partition every interval of `coarse`.
///
/// A matching can be checked by passing its pairs as two-element intervals.
pub fn refinement_check(coarse: &DiscreteGradient, fine: &DiscreteGradient) -> RefinementReport {
    let report = |witness: Option<RefinementWitness>| RefinementReport {
        refines: witness.is_none(),
        coarse_intervals: coarse.len(),
        fine_intervals: fine.len(),
        witness,
    };
    let home = coarse.cover_map();
    let mut covered = HashSet::with_capacity(fine.covered_count());
    for f in fine.intervals() {
        let inside = home
            .get(&f.rho)
            .map(|&c| {
                let c = &coarse.intervals()[c];
                c.rho.is_face_of(f.rho) && f.phi.is_face_of(c.phi)
            })
            .unwrap_or(false);
        if !inside {
            return report(Some(RefinementWitness::Straddles { fine: *f }));
        }
        for s in f.simplices() {
            if !covered.insert(s) {
                return report(Some(RefinementWitness::Overlap { simplex: s }));
            }
        }
    }
    for c in coarse.intervals() {
        if let Some(simplex) = c.simplices().find(|s| !covered.contains(s)) {
            return report(Some(RefinementWitness::Uncovered { coarse: *c, simplex }));
        }
    }
    report(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[usize]) -> Simplex {
        Simplex::new(v)
    }

    fn interval(a: &[usize], b: &[usize]) -> GradientInterval {
        GradientInterval::new(s(a), s(b)).unwrap()
    }

    #[test]
    fn square_splits_into_two_pairs() {
        let coarse = DiscreteGradient::new(vec![interval(&[0], &[0, 1, 2])]);
        let fine = DiscreteGradient::new(vec![interval(&[0], &[0, 1]), interval(&[0, 2], &[0, 1, 2])]);
        assert!(refinement_check(&coarse, &fine).refines);
    }

    #[test]
    fn missing_and_straddling_pieces() {
        let coarse = DiscreteGradient::new(vec![interval(&[0], &[0, 1, 2])]);
        let partial = DiscreteGradient::new(vec![interval(&[0], &[0, 1])]);
        assert!(matches!(
            refinement_check(&coarse, &partial).witness,
            Some(RefinementWitness::Uncovered { .. })
        ));
        let outside = DiscreteGradient::new(vec![interval(&[1], &[0, 1])]);
        assert!(matches!(
            refinement_check(&coarse, &outside).witness,
            Some(RefinementWitness::Straddles { .. })
        ));
    }
}

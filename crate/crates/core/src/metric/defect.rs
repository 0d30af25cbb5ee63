//! Exact geodesic defect of a finite metric space.
//!
//! For a pair `x, y` at distance `d` and a split parameter `r` in `[0, d]`, a point `z`
//! witnesses the split with slack `g_z(r) = max(d(x,z) - r, d(y,z) - d + r)`. The defect of
//! the pair is the maximum over `r` of the lower envelope `min_z g_z(r)`. That envelope is
//! piecewise linear with slopes `-1` and `+1`, so its maximum sits at `r = 0`, `r = d`, or
//! at a crossing of a falling line `d(x,z) - r` with a rising line `d(y,z') - d + r`.

use crate::metric::FiniteMetricSpace;
use crate::value::{DistanceValue, NumericMode};

#[derive(Debug, Clone, PartialEq)]
pub struct DefectReport {
    pub nu: DistanceValue,
    /// `(x, y, r)` attaining `nu`; `None` for a singleton.
    pub witness: Option<(usize, usize, DistanceValue)>,
    pub mode: NumericMode,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NuGeodesicCheck {
    pub holds: bool,
    /// A pair and split parameter where no point is within the allowed slack.
    pub counterexample: Option<(usize, usize, DistanceValue)>,
}

/// `min_z g_z(r)` for the pair `(x, y)`.
fn envelope(space: &FiniteMetricSpace, x: usize, y: usize, r: &DistanceValue) -> DistanceValue {
    let d = space.dist(x, y);
    (0..space.len())
        .map(|z| {
            let towards_x = space.dist(x, z) - r;
            let towards_y = &(space.dist(y, z) - d) + r;
            towards_x.max(towards_y)
        })
        .min()
        .expect("nonempty space")
}

/// Candidate split parameters where the envelope can attain its maximum.
fn candidates(space: &FiniteMetricSpace, x: usize, y: usize) -> Vec<DistanceValue> {
    let d = space.dist(x, y);
    let zero = space.mode().zero();
    let mut out = vec![zero.clone(), d.clone()];
    for z in 0..space.len() {
        for w in 0..space.len() {
            // d(x,z) - r = d(y,w) - d + r
            let r = (&(space.dist(x, z) - space.dist(y, w)) + d).half();
            if r > zero && &r < d {
                out.push(r);
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

pub fn geodesic_defect(space: &FiniteMetricSpace) -> DefectReport {
    let mut nu = space.mode().zero();
    let mut witness = None;
    for (x, y) in space.pairs() {
        for r in candidates(space, x, y) {
            let value = envelope(space, x, y, &r);
            if witness.is_none() || value > nu {
                nu = value;
                witness = Some((x, y, r));
            }
        }
    }
    DefectReport { nu, witness, mode: space.mode() }
}

/// Whether every pair and split admits a point within slack `nu`; in decimal mode the
/// comparison uses the space tolerance.
pub fn is_nu_geodesic(space: &FiniteMetricSpace, nu: &DistanceValue) -> NuGeodesicCheck {
    let mode = space.mode();
    for (x, y) in space.pairs() {
        for r in candidates(space, x, y) {
            if !mode.le(&envelope(space, x, y, &r), nu) {
                return NuGeodesicCheck { holds: false, counterexample: Some((x, y, r)) };
            }
        }
    }
    NuGeodesicCheck { holds: true, counterexample: None }
}

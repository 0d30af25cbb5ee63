use crate::metric::FiniteMetricSpace;
use crate::value::DistanceValue;

#[derive(Debug, Clone, PartialEq)]
pub struct HyperbolicityReport {
    pub delta: DistanceValue,
    /// Four points attaining `delta`; `None` for spaces with fewer than four points.
    pub witness: Option<[usize; 4]>,
}

/// Half the gap between the largest and second largest of the three pairing sums of a
/// quadruple. This is the smallest `delta` for which the four-point condition holds on it.
pub fn four_point_excess(x: &FiniteMetricSpace, q: [usize; 4]) -> DistanceValue {
    let [w, a, b, c] = q;
    let mut sums = [
        x.dist(w, a) + x.dist(b, c),
        x.dist(w, b) + x.dist(a, c),
        x.dist(w, c) + x.dist(a, b),
    ];
    sums.sort();
    (&sums[2] - &sums[1]).half()
}

/// Exact Gromov hyperbolicity by enumerating all 4-subsets, `O(n^4)`.
///
/// Ties keep the lexicographically first quadruple.
pub fn hyperbolicity(x: &FiniteMetricSpace) -> HyperbolicityReport {
    let n = x.len();
    let mut best = HyperbolicityReport { delta: x.mode().zero(), witness: None };
    for w in 0..n {
        for a in (w + 1)..n {
            for b in (a + 1)..n {
                for c in (b + 1)..n {
                    let excess = four_point_excess(x, [w, a, b, c]);
                    if best.witness.is_none() || excess > best.delta {
                        best = HyperbolicityReport { delta: excess, witness: Some([w, a, b, c]) };
                    }
                }
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datasets;
    use crate::metric::{load_metric, tree_metric, LoadOptions, MatrixFormat};
    use crate::value::NumericMode;

    #[test]
    fn trees_are_zero_hyperbolic() {
        let x = tree_metric(&datasets::generic_tree());
        assert!(hyperbolicity(&x).delta.is_zero());
        let x = tree_metric(&datasets::unit_star_tree());
        assert!(hyperbolicity(&x).delta.is_zero());
    }

    #[test]
    fn counterexample_graph_has_hyperbolicity_one() {
        let x = datasets::counterexample_graph();
        let report = hyperbolicity(&x);
        assert_eq!(report.delta, DistanceValue::from_int(1));
        assert_eq!(four_point_excess(&x, report.witness.unwrap()), report.delta);
    }

    #[test]
    fn small_spaces() {
        let x = load_metric("1\n2 1", MatrixFormat::LowerTriangular, NumericMode::Rational, LoadOptions::default())
            .unwrap();
        let r = hyperbolicity(&x);
        assert!(r.delta.is_zero());
        assert!(r.witness.is_none());
    }

    #[test]
    fn unit_square_cycle() {
        // C4 path metric: each quadruple pairing gives sums 2, 2, 4.
        let x = datasets::cycle_graph(4);
        assert_eq!(hyperbolicity(&x).delta, DistanceValue::from_int(1));
    }
}

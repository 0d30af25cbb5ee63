use crate::complex::Simplex;
use crate::metric::FiniteMetricSpace;
use crate::value::{DistanceValue, NumericMode};

/// The distinct pairwise distances `0 = r_0 < r_1 < ... < r_l` and the level of every pair.
///
/// In decimal mode the levels are clusters of values within `eps` of their neighbour; each
/// cluster is represented by its smallest member.
#[derive(Debug, Clone)]
pub struct DistanceLevels {
    values: Vec<DistanceValue>,
    pair_level: Vec<u32>,
    n: usize,
    mode: NumericMode,
    warnings: Vec<String>,
    merged_distinct: bool,
}

pub fn distance_levels(space: &FiniteMetricSpace) -> DistanceLevels {
    let n = space.len();
    let mode = space.mode();
    let mut pairs: Vec<(usize, usize)> = space.pairs().collect();
    pairs.sort_by(|&(a, b), &(c, d)| space.dist(a, b).cmp(space.dist(c, d)));
    let mut values = vec![mode.zero()];
    let mut pair_level = vec![0u32; n * n];
    let mut warnings = Vec::new();
    let mut merged_distinct = false;
    let mut previous: Option<DistanceValue> = None;
    for (a, b) in pairs {
        let d = space.dist(a, b);
        let same = match &previous {
            Some(p) => mode.eq(p, d),
            None => false,
        };
        if same {
            if previous.as_ref() != Some(d) {
                merged_distinct = true;
            }
        } else {
            values.push(d.clone());
        }
        previous = Some(d.clone());
        let level = (values.len() - 1) as u32;
        pair_level[a * n + b] = level;
        pair_level[b * n + a] = level;
    }
    if let NumericMode::Decimal { eps } = mode {
        for w in values.windows(2).skip(1) {
            if w[1].to_f64() - w[0].to_f64() <= 2.0 * eps {
                warnings.push(format!("distance levels {} and {} are within 2*eps", w[0], w[1]));
            }
        }
    }
    DistanceLevels { values, pair_level, n, mode, warnings, merged_distinct }
}

impl DistanceLevels {
    pub fn values(&self) -> &[DistanceValue] {
        &self.values
    }

    /// Number of levels including `r_0 = 0`.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Index of the largest level.
    pub fn top(&self) -> usize {
        self.values.len() - 1
    }

    pub fn value(&self, level: usize) -> &DistanceValue {
        &self.values[level]
    }

    pub fn points(&self) -> usize {
        self.n
    }

    pub fn mode(&self) -> NumericMode {
        self.mode
    }

    #[inline]
    pub fn pair(&self, a: usize, b: usize) -> usize {
        self.pair_level[a * self.n + b] as usize
    }

    /// Level of the diameter of `s`.
    pub fn simplex(&self, s: Simplex) -> usize {
        let mut best = 0;
        let vs: Vec<usize> = s.vertices().collect();
        for (i, &a) in vs.iter().enumerate() {
            let row = &self.pair_level[a * self.n..(a + 1) * self.n];
            for &b in &vs[i + 1..] {
                best = best.max(row[b] as usize);
            }
        }
        best
    }

    /// The largest level `m` with `r_m <= t` (tolerant in decimal mode), `None` for negative `t`.
    pub fn level_at_most(&self, t: &DistanceValue) -> Option<usize> {
        self.values.iter().rposition(|v| self.mode.le(v, t))
    }

    /// Warnings raised while clustering decimal values.
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Whether some decimal level merged numerically distinct values.
    pub fn merged_distinct(&self) -> bool {
        self.merged_distinct
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datasets;
    use crate::metric::{load_metric, tree_metric, LoadOptions, MatrixFormat};

    fn ints(levels: &DistanceLevels) -> Vec<i64> {
        levels.values().iter().map(|v| v.to_f64() as i64).collect()
    }

    #[test]
    fn examples() {
        let star = distance_levels(&tree_metric(&datasets::unit_star_tree()));
        assert_eq!(ints(&star), vec![0, 1, 2]);
        let generic = distance_levels(&tree_metric(&datasets::generic_tree()));
        assert_eq!(ints(&generic), vec![0, 1, 2, 3, 4, 5, 6]);
        let single = load_metric("0", MatrixFormat::Square, NumericMode::Rational, LoadOptions::default())
            .unwrap();
        assert_eq!(ints(&distance_levels(&single)), vec![0]);
    }

    #[test]
    fn simplex_levels() {
        let levels = distance_levels(&tree_metric(&datasets::generic_tree()));
        assert_eq!(levels.simplex(Simplex::vertex(0)), 0);
        assert_eq!(levels.value(levels.simplex(Simplex::new(&[0, 2, 3]))), &DistanceValue::from_int(6));
        assert_eq!(levels.level_at_most(&DistanceValue::ratio(9, 2)), Some(4));
    }

    #[test]
    fn decimal_clusters() {
        let text = "1\n1.0000000001 2\n2 2.0000000002 1";
        let x = load_metric(text, MatrixFormat::LowerTriangular, NumericMode::decimal(), LoadOptions::default())
            .unwrap();
        let levels = distance_levels(&x);
        assert_eq!(levels.len(), 3);
        assert!(levels.merged_distinct());
        assert_eq!(levels.pair(0, 1), levels.pair(0, 2));
    }
}

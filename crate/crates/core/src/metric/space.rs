use crate::metric::MetricError;
use crate::value::{DistanceValue, NumericMode};

/// Options applied when validating a distance matrix.
#[derive(Debug, Clone, Copy, Default)]
pub struct LoadOptions {
    /// Accept zero distances between distinct points and merge such duplicates.
    pub allow_pseudo: bool,
}

/// A finite metric space given by its full symmetric distance matrix.
#[derive(Debug, Clone)]
pub struct FiniteMetricSpace {
    names: Vec<String>,
    dist: Vec<DistanceValue>,
    mode: NumericMode,
}

impl FiniteMetricSpace {
    /// Validates `matrix` (row-major, `names.len()` squared entries) and builds the space.
    pub fn new(
        names: Vec<String>,
        matrix: Vec<DistanceValue>,
        mode: NumericMode,
        options: LoadOptions,
    ) -> Result<Self, MetricError> {
        let n = names.len();
        if n == 0 {
            return Err(MetricError::Empty);
        }
        if matrix.len() != n * n {
            return Err(MetricError::Shape { expected: n * n, found: matrix.len() });
        }
        let dist: Vec<DistanceValue> = matrix.iter().map(|v| mode.coerce(v)).collect();
        let space = FiniteMetricSpace { names, dist, mode };
        space.check_axioms(options)?;
        if options.allow_pseudo {
            Ok(space.collapse_duplicates())
        } else {
            Ok(space)
        }
    }

    fn check_axioms(&self, options: LoadOptions) -> Result<(), MetricError> {
        let n = self.len();
        let zero = self.mode.zero();
        for i in 0..n {
            if !self.mode.eq(self.dist(i, i), &zero) {
                return Err(MetricError::Diagonal { point: self.names[i].clone() });
            }
            for j in 0..n {
                let d = self.dist(i, j);
                if d.is_negative() {
                    return Err(MetricError::Negative {
                        a: self.names[i].clone(),
                        b: self.names[j].clone(),
                    });
                }
                if j > i {
                    if !self.mode.eq(d, self.dist(j, i)) {
                        return Err(MetricError::Asymmetric {
                            a: self.names[i].clone(),
                            b: self.names[j].clone(),
                        });
                    }
                    if !options.allow_pseudo && self.mode.le(d, &zero) {
                        return Err(MetricError::Duplicate {
                            a: self.names[i].clone(),
                            b: self.names[j].clone(),
                        });
                    }
                }
            }
        }
        for a in 0..n {
            for c in (a + 1)..n {
                for b in 0..n {
                    if b == a || b == c {
                        continue;
                    }
                    let via = self.dist(a, b) + self.dist(b, c);
                    if !self.mode.le(self.dist(a, c), &via) {
                        return Err(MetricError::Triangle {
                            a: self.names[a].clone(),
                            b: self.names[b].clone(),
                            c: self.names[c].clone(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    fn collapse_duplicates(self) -> Self {
        let n = self.len();
        let zero = self.mode.zero();
        let mut representative: Vec<usize> = (0..n).collect();
        for j in 0..n {
            if let Some(i) = (0..j).find(|&i| representative[i] == i && self.mode.eq(self.dist(i, j), &zero)) {
                representative[j] = i;
            }
        }
        let kept: Vec<usize> = (0..n).filter(|&i| representative[i] == i).collect();
        if kept.len() == n {
            return self;
        }
        let names = kept
            .iter()
            .map(|&i| {
                let merged: Vec<&str> =
                    (0..n).filter(|&j| representative[j] == i).map(|j| self.names[j].as_str()).collect();
                merged.join("=")
            })
            .collect();
        self.subspace_named(&kept, names)
    }

    fn subspace_named(&self, points: &[usize], names: Vec<String>) -> Self {
        let mut dist = Vec::with_capacity(points.len() * points.len());
        for &i in points {
            for &j in points {
                dist.push(self.dist(i, j).clone());
            }
        }
        FiniteMetricSpace { names, dist, mode: self.mode }
    }

    /// The subspace on `points`, in the given order.
    pub fn subspace(&self, points: &[usize]) -> Self {
        let names = points.iter().map(|&i| self.names[i].clone()).collect();
        self.subspace_named(points, names)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> &DistanceValue {
        &self.dist[i * self.names.len() + j]
    }

    pub fn mode(&self) -> NumericMode {
        self.mode
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Smallest distance between distinct points, `None` for a singleton.
    pub fn min_positive_distance(&self) -> Option<DistanceValue> {
        self.pairs().map(|(i, j)| self.dist(i, j).clone()).min()
    }

    pub fn max_distance(&self) -> DistanceValue {
        self.pairs()
            .map(|(i, j)| self.dist(i, j).clone())
            .max()
            .unwrap_or_else(|| self.mode.zero())
    }

    /// Unordered pairs `(i, j)` with `i < j`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.len();
        (0..n).flat_map(move |i| ((i + 1)..n).map(move |j| (i, j)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(n: usize, vals: &[i64]) -> Vec<DistanceValue> {
        assert_eq!(vals.len(), n * n);
        vals.iter().map(|&v| DistanceValue::from_int(v)).collect()
    }

    fn names(n: usize) -> Vec<String> {
        (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
    }

    #[test]
    fn rejects_duplicates_unless_pseudo() {
        let m = ints(3, &[0, 0, 2, 0, 0, 2, 2, 2, 0]);
        let err = FiniteMetricSpace::new(names(3), m.clone(), NumericMode::Rational, LoadOptions::default())
            .unwrap_err();
        assert!(matches!(err, MetricError::Duplicate { .. }));
        let x = FiniteMetricSpace::new(names(3), m, NumericMode::Rational, LoadOptions { allow_pseudo: true })
            .unwrap();
        assert_eq!(x.len(), 2);
        assert_eq!(x.name(0), "a=b");
        assert_eq!(x.dist(0, 1), &DistanceValue::from_int(2));
    }

    #[test]
    fn rejects_asymmetry_and_diagonal() {
        let m = ints(2, &[0, 1, 2, 0]);
        assert!(matches!(
            FiniteMetricSpace::new(names(2), m, NumericMode::Rational, LoadOptions::default()),
            Err(MetricError::Asymmetric { .. })
        ));
        let m = ints(2, &[1, 1, 1, 0]);
        assert!(matches!(
            FiniteMetricSpace::new(names(2), m, NumericMode::Rational, LoadOptions::default()),
            Err(MetricError::Diagonal { .. })
        ));
    }

    #[test]
    fn decimal_tolerates_rounding_in_triangle_check() {
        let vals = [0.0, 1.0, 2.0 + 1e-12, 1.0, 0.0, 1.0, 2.0 + 1e-12, 1.0, 0.0];
        let m = vals.iter().map(|&v| DistanceValue::Decimal(v)).collect();
        assert!(FiniteMetricSpace::new(names(3), m, NumericMode::decimal(), LoadOptions::default()).is_ok());
    }
}

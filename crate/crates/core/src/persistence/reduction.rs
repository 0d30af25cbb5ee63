use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use crate::complex::{Filtration, Simplex};
use crate::gradients::apparent_pairs;
use crate::persistence::PersistenceError;
use crate::value::DistanceValue;

#[derive(Debug, Clone, PartialEq)]
pub struct PersistenceInterval {
    pub degree: usize,
    pub birth_level: usize,
    pub death_level: Option<usize>,
    pub birth: DistanceValue,
    /// `None` for an essential class.
    pub death: Option<DistanceValue>,
    pub birth_simplex: Simplex,
    pub death_simplex: Option<Simplex>,
}

impl PersistenceInterval {
    pub fn is_essential(&self) -> bool {
        self.death_level.is_none()
    }

    pub fn is_zero_length(&self) -> bool {
        self.death_level == Some(self.birth_level)
    }
}

/// Persistence intervals per degree. Zero-length intervals are kept apart from the rest.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Barcode {
    intervals: Vec<Vec<PersistenceInterval>>,
    zero_length: Vec<Vec<PersistenceInterval>>,
}

impl Barcode {
    pub fn max_degree(&self) -> usize {
        self.intervals.len().saturating_sub(1)
    }

    /// Positive-length and essential intervals in degree `k`, by birth then death.
    pub fn degree(&self, k: usize) -> &[PersistenceInterval] {
        self.intervals.get(k).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn zero_length(&self, k: usize) -> &[PersistenceInterval] {
        self.zero_length.get(k).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Adds an interval, e.g. to build a barcode by hand.
    pub fn push(&mut self, interval: PersistenceInterval) {
        let k = interval.degree;
        for bars in [&mut self.intervals, &mut self.zero_length] {
            if bars.len() <= k {
                bars.resize(k + 1, Vec::new());
            }
        }
        if interval.is_zero_length() {
            self.zero_length[k].push(interval);
        } else {
            self.intervals[k].push(interval);
        }
    }

    /// Whether every degree from `k` up has no positive-length interval.
    pub fn is_trivial_from(&self, k: usize) -> bool {
        self.intervals.iter().skip(k).all(Vec::is_empty)
    }

    /// `degree birth death` per line, `inf` for essential classes.
    pub fn table(&self) -> String {
        let mut out = String::new();
        for (k, bars) in self.intervals.iter().enumerate() {
            for b in bars {
                let death = b.death.as_ref().map(|d| d.to_string()).unwrap_or_else(|| "inf".into());
                let _ = writeln!(out, "{k} {} {death}", b.birth);
            }
        }
        out
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DegreeStats {
    pub columns: usize,
    pub apparent_skipped: usize,
    pub reduced_with_work: usize,
    pub critical: usize,
    pub additions: usize,
    /// Columns outside every apparent pair, counted by diameter level.
    pub non_apparent_by_level: BTreeMap<usize, usize>,
}

/// Column accounting. Every column is exactly one of: resolved as half of an apparent pair
/// without work, reduced with at least one addition, or critical (reduced with none).
///
/// The column of a `(d+1)`-simplex is booked under degree `d`; vertex columns under degree 0.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReductionStats {
    pub columns: usize,
    pub apparent_skipped: usize,
    pub reduced_with_work: usize,
    pub critical: usize,
    pub additions: usize,
    pub per_degree: Vec<DegreeStats>,
}

impl ReductionStats {
    /// Additions performed in degrees `k` and above.
    pub fn additions_from(&self, k: usize) -> usize {
        self.per_degree.iter().skip(k).map(|d| d.additions).sum()
    }
}

fn column_degree(s: Simplex) -> usize {
    s.card().saturating_sub(2)
}

/// Symmetric difference of two sorted index lists.
fn add_column(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Standard Z/2 reduction of the boundary matrix in filtration order.
///
/// The filtration must contain all simplices through dimension `max_degree + 1`. Columns of
/// higher simplices are not reduced; if present (one dimension more suffices) they only serve
/// to recognize apparent pairs among the `(max_degree + 1)`-simplices, which keeps the
/// statistics of the top degree independent of the truncation. With `shortcut`, apparent
/// pairs are paired directly: the column of `tau` keeps its boundary, whose pivot is already
/// `sigma`, and the column of `sigma` is known to reduce to zero. `budget` caps the total
/// number of column additions.
pub fn persistent_homology(
    f: &Filtration,
    max_degree: usize,
    shortcut: bool,
    budget: usize,
) -> Result<(Barcode, ReductionStats), PersistenceError> {
    let entries = f.simplices();
    let n = entries.len();
    let mut partner: HashMap<usize, usize> = HashMap::new();
    if shortcut {
        for &(s, t) in apparent_pairs(f).pairs() {
            let (i, j) = (f.position(s).expect("in filtration"), f.position(t).expect("in filtration"));
            partner.insert(i, j);
            partner.insert(j, i);
        }
    }
    let mut stats = ReductionStats { per_degree: vec![DegreeStats::default(); max_degree + 1], ..Default::default() };
    let mut columns: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut pivot_owner: HashMap<usize, usize> = HashMap::new();

    for j in 0..n {
        let tau = entries[j];
        if tau.dim() > max_degree + 1 {
            continue;
        }
        stats.columns += 1;
        let bucket = &mut stats.per_degree[column_degree(tau)];
        bucket.columns += 1;
        if let Some(&k) = partner.get(&j) {
            bucket.apparent_skipped += 1;
            if k < j {
                let mut col: Vec<usize> = tau.facets().map(|s| f.position(s).expect("closed")).collect();
                col.sort_unstable();
                debug_assert_eq!(col.last(), Some(&k));
                pivot_owner.insert(k, j);
                columns[j] = col;
            }
            continue;
        }
        *bucket.non_apparent_by_level.entry(f.level_at(j)).or_default() += 1;
        let mut col: Vec<usize> = tau.facets().map(|s| f.position(s).expect("closed")).collect();
        col.sort_unstable();
        let mut work = 0;
        while let Some(&low) = col.last() {
            let Some(&owner) = pivot_owner.get(&low) else { break };
            col = add_column(&col, &columns[owner]);
            work += 1;
            stats.additions += 1;
            if stats.additions > budget {
                return Err(PersistenceError::Budget { budget, what: "column additions" });
            }
        }
        let bucket = &mut stats.per_degree[column_degree(tau)];
        bucket.additions += work;
        if work > 0 {
            bucket.reduced_with_work += 1;
        } else {
            bucket.critical += 1;
        }
        if let Some(&low) = col.last() {
            pivot_owner.insert(low, j);
        }
        columns[j] = col;
    }
    for d in &stats.per_degree {
        stats.apparent_skipped += d.apparent_skipped;
        stats.reduced_with_work += d.reduced_with_work;
        stats.critical += d.critical;
    }

    let mut barcode = Barcode {
        intervals: vec![Vec::new(); max_degree + 1],
        zero_length: vec![Vec::new(); max_degree + 1],
    };
    let levels = f.levels();
    let mut killed = vec![false; n];
    for (&low, &j) in &pivot_owner {
        killed[low] = true;
        let sigma = entries[low];
        let degree = sigma.dim();
        if degree > max_degree {
            continue;
        }
        let interval = PersistenceInterval {
            degree,
            birth_level: f.level_at(low),
            death_level: Some(f.level_at(j)),
            birth: levels.value(f.level_at(low)).clone(),
            death: Some(levels.value(f.level_at(j)).clone()),
            birth_simplex: sigma,
            death_simplex: Some(entries[j]),
        };
        if interval.is_zero_length() {
            barcode.zero_length[degree].push(interval);
        } else {
            barcode.intervals[degree].push(interval);
        }
    }
    for i in 0..n {
        let sigma = entries[i];
        if killed[i] || !columns[i].is_empty() || sigma.dim() > max_degree {
            continue;
        }
        barcode.intervals[sigma.dim()].push(PersistenceInterval {
            degree: sigma.dim(),
            birth_level: f.level_at(i),
            death_level: None,
            birth: levels.value(f.level_at(i)).clone(),
            death: None,
            birth_simplex: sigma,
            death_simplex: None,
        });
    }
    for bars in barcode.intervals.iter_mut().chain(barcode.zero_length.iter_mut()) {
        bars.sort_by(|a, b| {
            (a.birth_level, a.death_level.unwrap_or(usize::MAX), f.position(a.birth_simplex))
                .cmp(&(b.birth_level, b.death_level.unwrap_or(usize::MAX), f.position(b.birth_simplex)))
        });
    }
    Ok((barcode, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{distance_levels, vietoris_rips, SimplexOrder, VertexOrder, DEFAULT_SIMPLEX_BUDGET};
    use crate::datasets;
    use crate::metric::{tree_metric, FiniteMetricSpace};

    fn filtration(x: &FiniteMetricSpace, cap: usize, order: VertexOrder) -> Filtration {
        let k = vietoris_rips(x, &x.max_distance(), Some(cap), DEFAULT_SIMPLEX_BUDGET).unwrap();
        Filtration::new(k, distance_levels(x), order, SimplexOrder::Lexicographic)
    }

    #[test]
    fn unit_star_barcode() {
        let x = tree_metric(&datasets::unit_star_tree());
        let f = filtration(&x, 3, VertexOrder::identity(4));
        let (b, _) = persistent_homology(&f, 2, true, usize::MAX).unwrap();
        let zero: Vec<_> = b.degree(0).iter().map(|i| (i.birth.to_string(), i.death.as_ref().map(|d| d.to_string()))).collect();
        assert_eq!(zero.len(), 4);
        assert_eq!(zero.iter().filter(|(_, d)| d.as_deref() == Some("1")).count(), 3);
        assert_eq!(zero.iter().filter(|(_, d)| d.is_none()).count(), 1);
        assert!(b.is_trivial_from(1));
    }

    #[test]
    fn one_extra_dimension_gives_untruncated_statistics() {
        let (tree, x) = datasets::random_tree_metric(7, 3);
        let order = crate::metric::compatible_order(&tree, 0).reversed();
        let f = |cap| {
            let k = vietoris_rips(&x, &x.max_distance(), cap, DEFAULT_SIMPLEX_BUDGET).unwrap();
            Filtration::new(k, distance_levels(&x), order.clone(), SimplexOrder::ReverseColexicographic)
        };
        let (full_barcode, full) = persistent_homology(&f(None), 5, true, usize::MAX).unwrap();
        let (barcode, truncated) = persistent_homology(&f(Some(4)), 2, true, usize::MAX).unwrap();
        assert_eq!(truncated.per_degree[..], full.per_degree[..3]);
        for k in 0..=2 {
            assert_eq!(barcode.degree(k), full_barcode.degree(k));
        }
        assert_eq!(truncated.additions_from(1), 0);
    }

    #[test]
    fn shortcut_preserves_barcode() {
        let x = datasets::counterexample_graph();
        let f = filtration(&x, 3, VertexOrder::identity(x.len()));
        let (with, s1) = persistent_homology(&f, 2, true, usize::MAX).unwrap();
        let (without, s2) = persistent_homology(&f, 2, false, usize::MAX).unwrap();
        assert_eq!(with, without);
        assert_eq!(s2.apparent_skipped, 0);
        for s in [&s1, &s2] {
            assert_eq!(s.apparent_skipped + s.reduced_with_work + s.critical, s.columns);
        }
    }

    #[test]
    fn budget_is_enforced() {
        let x = datasets::cycle_graph(6);
        let f = filtration(&x, 2, VertexOrder::identity(6));
        let (_, stats) = persistent_homology(&f, 1, false, usize::MAX).unwrap();
        if stats.additions > 0 {
            assert!(persistent_homology(&f, 1, false, stats.additions - 1).is_err());
        }
    }
}

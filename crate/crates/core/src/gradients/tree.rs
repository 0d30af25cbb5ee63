use std::collections::BTreeMap;

use crate::complex::{bits, distance_levels, subsets, DistanceLevels, Simplex, VertexOrder};
use crate::gradients::GradientError;
use crate::metric::{tree_metric, FiniteMetricSpace, TreeEdge, WeightedTree};
use crate::morse::{DiscreteGradient, GradientInterval};

/// A tree metric space together with its recovered tree and distance levels.
#[derive(Debug, Clone)]
pub struct TreeMetricSpace {
    space: FiniteMetricSpace,
    levels: DistanceLevels,
    tree: WeightedTree,
    tree_nbr: Vec<u64>,
}

impl TreeMetricSpace {
    /// The path metric of `tree`.
    pub fn from_tree(tree: &WeightedTree) -> Result<Self, GradientError> {
        Self::recover(&tree_metric(tree))
    }

    /// Recovers the tree behind `space`: its edges are the pairs with no third point between
    /// them. Fails unless the recovered tree reproduces every distance.
    pub fn recover(space: &FiniteMetricSpace) -> Result<Self, GradientError> {
        let n = space.len();
        if n > crate::complex::MAX_VERTICES {
            return Err(GradientError::Complex(crate::complex::ComplexError::TooManyVertices(n)));
        }
        let levels = distance_levels(space);
        if levels.merged_distinct() {
            return Err(GradientError::DecimalMerge);
        }
        let mode = space.mode();
        let mut edges = Vec::new();
        let mut tree_nbr = vec![0u64; n];
        for (x, y) in space.pairs() {
            let d = space.dist(x, y);
            let between = (0..n)
                .filter(|&z| z != x && z != y)
                .any(|z| mode.eq(&(space.dist(x, z) + space.dist(z, y)), d));
            if !between {
                edges.push(TreeEdge { u: x, v: y, length: d.clone() });
                tree_nbr[x] |= 1 << y;
                tree_nbr[y] |= 1 << x;
            }
        }
        let tree = WeightedTree::new(space.names().to_vec(), edges, None, mode)
            .map_err(|e| GradientError::NotTreeMetric(e.to_string()))?;
        let rebuilt = tree_metric(&tree);
        if let Some((a, b)) = space.pairs().find(|&(a, b)| !mode.eq(rebuilt.dist(a, b), space.dist(a, b))) {
            return Err(GradientError::NotTreeMetric(format!(
                "d({},{}) = {} but the recovered tree gives {}",
                space.name(a),
                space.name(b),
                space.dist(a, b),
                rebuilt.dist(a, b)
            )));
        }
        Ok(TreeMetricSpace { space: space.clone(), levels, tree, tree_nbr })
    }

    pub fn space(&self) -> &FiniteMetricSpace {
        &self.space
    }

    pub fn levels(&self) -> &DistanceLevels {
        &self.levels
    }

    pub fn tree(&self) -> &WeightedTree {
        &self.tree
    }

    pub fn len(&self) -> usize {
        self.space.len()
    }

    pub fn is_empty(&self) -> bool {
        self.space.is_empty()
    }

    pub fn is_tree_edge(&self, a: usize, b: usize) -> bool {
        self.tree_nbr[a] & (1 << b) != 0
    }

    /// Non-tree edges `{x, y}` with `d(x, y) = r_m`.
    pub fn non_tree_edges_at(&self, m: usize) -> Vec<Simplex> {
        self.space
            .pairs()
            .filter(|&(a, b)| self.levels.pair(a, b) == m && !self.is_tree_edge(a, b))
            .map(|(a, b)| Simplex::edge(a, b))
            .collect()
    }
}

/// The unique maximal simplex of `VR_{r_m}` containing the edge `e` of diameter `r_m`: all `z`
/// with `d(x,z) ≤ r_m` and `d(y,z) ≤ r_m`.
///
/// Fails if that ball intersection has diameter above `r_m`, which cannot happen in a tree metric.
pub fn max_simplex_of_edge(levels: &DistanceLevels, e: Simplex) -> Result<Simplex, GradientError> {
    if e.card() != 2 {
        return Err(GradientError::Precondition(format!("[{e}] is not an edge")));
    }
    let mut vs = e.vertices();
    let (x, y) = (vs.next().expect("edge"), vs.next().expect("edge"));
    let m = levels.pair(x, y);
    let mask = (0..levels.points())
        .filter(|&z| levels.pair(x, z) <= m && levels.pair(y, z) <= m)
        .fold(0u64, |acc, z| acc | (1 << z));
    let delta = Simplex::from_mask(mask);
    if levels.simplex(delta) != m {
        return Err(GradientError::Precondition(format!(
            "ball intersection of [{e}] has diameter {} > {}",
            levels.value(levels.simplex(delta)),
            levels.value(m)
        )));
    }
    Ok(delta)
}

/// A maximal simplex `Delta` of `VR_{r_m} ∖ (VR_{r_{m-1}} ∪ T_{r_m})` with its non-tree edges
/// `E_Delta` and cone vertices `L_Delta` (vertices of `Delta` on no `E_Delta` edge).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaximalSimplexRecord {
    pub level: usize,
    pub delta: Simplex,
    pub edges: Vec<Simplex>,
    pub cone: u64,
}

impl MaximalSimplexRecord {
    /// Vertices of `Delta` lying on some `E_Delta` edge.
    pub fn edge_vertices(&self) -> u64 {
        self.delta.mask() & !self.cone
    }
}

/// Every maximal simplex record, ordered by level and then canonically by `Delta`.
pub fn maximal_simplices(tm: &TreeMetricSpace) -> Result<Vec<MaximalSimplexRecord>, GradientError> {
    let levels = tm.levels();
    let mut records = Vec::new();
    for m in 1..levels.len() {
        let mut by_delta: BTreeMap<u64, Vec<Simplex>> = BTreeMap::new();
        for e in tm.non_tree_edges_at(m) {
            let delta = max_simplex_of_edge(levels, e)?;
            if delta == e {
                return Err(GradientError::NotTreeMetric(format!("non-tree edge [{e}] is its own maximal simplex")));
            }
            by_delta.entry(delta.mask()).or_default().push(e);
        }
        let mut level_records: Vec<MaximalSimplexRecord> = by_delta
            .into_iter()
            .map(|(mask, edges)| {
                let delta = Simplex::from_mask(mask);
                let covered = edges.iter().fold(0u64, |acc, e| acc | e.mask());
                MaximalSimplexRecord { level: m, delta, edges, cone: mask & !covered }
            })
            .collect();
        for r in &level_records {
            let inside = tm
                .non_tree_edges_at(m)
                .into_iter()
                .filter(|e| e.is_face_of(r.delta))
                .count();
            if inside != r.edges.len() || r.cone == 0 {
                return Err(GradientError::NotTreeMetric(format!(
                    "maximal simplex [{}] violates the tree-metric structure",
                    r.delta
                )));
            }
        }
        level_records.sort_by(|a, b| a.delta.canonical_cmp(&b.delta));
        records.extend(level_records);
    }
    Ok(records)
}

/// `{[e, Delta_e] : e non-tree edge}`; requires all positive distances to be distinct.
pub fn generic_gradient(tm: &TreeMetricSpace) -> Result<DiscreteGradient, GradientError> {
    let x = tm.space();
    let levels = tm.levels();
    let mut first: Vec<Option<(usize, usize)>> = vec![None; levels.len()];
    for (a, b) in x.pairs() {
        let m = levels.pair(a, b);
        if let Some(prev) = first[m] {
            return Err(GradientError::NotGeneric { first: prev, second: (a, b) });
        }
        first[m] = Some((a, b));
    }
    let mut gradient = DiscreteGradient::default();
    for m in 1..levels.len() {
        for e in tm.non_tree_edges_at(m) {
            let delta = max_simplex_of_edge(levels, e)?;
            gradient.push(GradientInterval::new(e, delta).map_err(GradientError::Morse)?);
        }
    }
    Ok(gradient)
}

/// Unions of `E_Delta` edges: the nonempty `U ⊆ Delta ∖ L_Delta` in which every vertex lies on an
/// `E_Delta` edge inside `U`.
fn edge_unions(record: &MaximalSimplexRecord) -> Vec<u64> {
    let mut out: Vec<u64> = subsets(record.edge_vertices())
        .filter(|&u| {
            let covered = record
                .edges
                .iter()
                .filter(|e| e.mask() & !u == 0)
                .fold(0u64, |acc, e| acc | e.mask());
            covered == u
        })
        .collect();
    out.sort_unstable();
    out
}

/// Intervals `[∪S, ∪S ∪ L_Delta]` of one maximal simplex.
pub fn canonical_intervals(record: &MaximalSimplexRecord) -> Vec<GradientInterval> {
    edge_unions(record)
        .into_iter()
        .map(|u| GradientInterval { rho: Simplex::from_mask(u), phi: Simplex::from_mask(u | record.cone) })
        .collect()
}

/// The order-independent canonical gradient `W = ⋃_m ⋃_Delta W_Delta`.
pub fn canonical_gradient(tm: &TreeMetricSpace) -> Result<DiscreteGradient, GradientError> {
    let mut gradient = DiscreteGradient::default();
    for record in maximal_simplices(tm)? {
        for interval in canonical_intervals(&record) {
            gradient.push(interval);
        }
    }
    Ok(gradient)
}

/// The lexicographically largest `E_Delta` edge inside `s`.
pub fn max_edge_in(record: &MaximalSimplexRecord, s: Simplex, order: &VertexOrder) -> Option<Simplex> {
    record
        .edges
        .iter()
        .copied()
        .filter(|e| e.is_face_of(s))
        .max_by(|a, b| order.lex_cmp(*a, *b))
}

/// Intervals `[e_i, Sigma_i]` of one maximal simplex, `e_1 < ... < e_q` lexicographically.
///
/// `Sigma_i` is `e_i` together with every vertex `v` of `Delta` for which `e_i` is the largest
/// `E_Delta` edge of `e_i ∪ {v}`.
pub fn perturbed_intervals(record: &MaximalSimplexRecord, order: &VertexOrder) -> Vec<GradientInterval> {
    let mut edges = record.edges.clone();
    edges.sort_by(|a, b| order.lex_cmp(*a, *b));
    edges
        .into_iter()
        .map(|e| {
            let sigma = bits(record.delta.minus_mask(e))
                .filter(|&v| max_edge_in(record, e.with(v), order) == Some(e))
                .fold(e, |acc, v| acc.with(v));
            GradientInterval { rho: e, phi: sigma }
        })
        .collect()
}

/// The perturbed gradient `N = ⋃_m ⋃_Delta N_Delta` under `order`.
pub fn perturbed_gradient(tm: &TreeMetricSpace, order: &VertexOrder) -> Result<DiscreteGradient, GradientError> {
    let mut gradient = DiscreteGradient::default();
    for record in maximal_simplices(tm)? {
        for interval in perturbed_intervals(&record, order) {
            gradient.push(interval);
        }
    }
    Ok(gradient)
}

//! Fixed example spaces and seeded random generators.
//!
//! Every generator is deterministic in its seed: the same `(n, seed, parameters)` always
//! yields the same space.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::metric::{default_names, tree_metric, FiniteMetricSpace, LoadOptions, TreeEdge, WeightedTree};
use crate::value::{DistanceValue, NumericMode};

fn q(v: i64) -> DistanceValue {
    DistanceValue::from_int(v)
}

fn tree_from(names: &[&str], edges: &[(usize, usize, DistanceValue)], root: Option<usize>) -> WeightedTree {
    let names = names.iter().map(|s| s.to_string()).collect();
    let edges = edges.iter().map(|(u, v, l)| TreeEdge { u: *u, v: *v, length: l.clone() }).collect();
    WeightedTree::new(names, edges, root, NumericMode::Rational).expect("fixture tree")
}

/// `a–b:1, b–c:2, b–d:4`; all pairwise distances distinct.
pub fn generic_tree() -> WeightedTree {
    tree_from(&["a", "b", "c", "d"], &[(0, 1, q(1)), (1, 2, q(2)), (1, 3, q(4))], None)
}

/// Unit-length star `a–b, b–c, b–d` centred at `b`.
pub fn unit_star_tree() -> WeightedTree {
    tree_from(&["a", "b", "c", "d"], &[(0, 1, q(1)), (1, 2, q(1)), (1, 3, q(1))], None)
}

/// Shortest-path metric of a connected weighted graph.
pub fn graph_metric(names: &[&str], edges: &[(usize, usize, DistanceValue)]) -> FiniteMetricSpace {
    let n = names.len();
    let mut d: Vec<Option<DistanceValue>> = vec![None; n * n];
    for i in 0..n {
        d[i * n + i] = Some(q(0));
    }
    for (u, v, w) in edges {
        for (a, b) in [(*u, *v), (*v, *u)] {
            if d[a * n + b].as_ref().is_none_or(|old| w < old) {
                d[a * n + b] = Some(w.clone());
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if let (Some(a), Some(b)) = (&d[i * n + k], &d[k * n + j]) {
                    let via = a + b;
                    if d[i * n + j].as_ref().is_none_or(|old| &via < old) {
                        d[i * n + j] = Some(via);
                    }
                }
            }
        }
    }
    let matrix = d.into_iter().map(|v| v.expect("connected graph")).collect();
    let names = names.iter().map(|s| s.to_string()).collect();
    FiniteMetricSpace::new(names, matrix, NumericMode::Rational, LoadOptions::default()).expect("graph metric")
}

/// The graph `a–b:1, a–c:1, b–d:5, c–d:5, d–e:10` with its path metric: hyperbolicity 1,
/// geodesic defect 5.
pub fn counterexample_graph() -> FiniteMetricSpace {
    graph_metric(
        &["a", "b", "c", "d", "e"],
        &[(0, 1, q(1)), (0, 2, q(1)), (1, 3, q(5)), (2, 3, q(5)), (3, 4, q(10))],
    )
}

/// Path metric of the unit-length cycle on `n >= 3` vertices.
pub fn cycle_graph(n: usize) -> FiniteMetricSpace {
    assert!(n >= 3, "a cycle needs at least three vertices");
    let names = default_names(n);
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n, q(1))).collect();
    graph_metric(&refs, &edges)
}

/// Integer weight range for random generators, inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WeightRange {
    pub low: i64,
    pub high: i64,
}

impl Default for WeightRange {
    fn default() -> Self {
        WeightRange { low: 1, high: 10 }
    }
}

impl WeightRange {
    fn sample(&self, rng: &mut impl Rng) -> DistanceValue {
        q(rng.gen_range(self.low..=self.high))
    }
}

/// A uniformly random labelled tree on `n` vertices (via a random Prüfer sequence) with
/// integer weights drawn uniformly from `weights`.
pub fn random_tree(n: usize, seed: u64, weights: WeightRange) -> WeightedTree {
    assert!(n >= 1);
    assert!(weights.low >= 1 && weights.low <= weights.high, "weights must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::with_capacity(n.saturating_sub(1));
    if n == 2 {
        pairs.push((0, 1));
    } else if n > 2 {
        let code: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
        let mut degree = vec![1usize; n];
        for &c in &code {
            degree[c] += 1;
        }
        for &c in &code {
            let leaf = (0..n).find(|&v| degree[v] == 1).expect("a leaf exists");
            pairs.push((leaf.min(c), leaf.max(c)));
            degree[leaf] -= 1;
            degree[c] -= 1;
        }
        let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
        pairs.push((rest[0], rest[1]));
    }
    let edges = pairs.into_iter().map(|(u, v)| TreeEdge { u, v, length: weights.sample(&mut rng) }).collect();
    WeightedTree::new(default_names(n), edges, None, NumericMode::Rational).expect("Prüfer trees are trees")
}

/// A random metric on `n` points: the shortest-path closure of the complete graph with
/// integer edge weights drawn uniformly from `weights`.
pub fn random_metric(n: usize, seed: u64, weights: WeightRange) -> FiniteMetricSpace {
    assert!(n >= 1);
    assert!(weights.low >= 1 && weights.low <= weights.high, "weights must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            edges.push((i, j, weights.sample(&mut rng)));
        }
    }
    let names = default_names(n);
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    graph_metric(&refs, &edges)
}

/// Subdivides every edge of `tree` into equal pieces of length at most `step`, returning the
/// subdivided tree. Its vertex set is `step/2`-dense in the geometric realization of `tree`.
pub fn grid_sample_of_tree(tree: &WeightedTree, step: &DistanceValue) -> WeightedTree {
    assert!(!step.is_negative() && !step.is_zero(), "step must be positive");
    let mut names: Vec<String> = tree.names().to_vec();
    let mut edges = Vec::new();
    for e in tree.edges() {
        let mut pieces = 1i64;
        while &e.length.div_int(pieces) > step {
            pieces += 1;
        }
        let piece = e.length.div_int(pieces);
        let mut prev = e.u;
        for k in 1..pieces {
            names.push(format!("{}{}.{}", tree.names()[e.u], tree.names()[e.v], k));
            let cur = names.len() - 1;
            edges.push(TreeEdge { u: prev, v: cur, length: piece.clone() });
            prev = cur;
        }
        edges.push(TreeEdge { u: prev, v: e.v, length: piece });
    }
    WeightedTree::new(names, edges, tree.root(), tree.mode()).expect("subdivision of a tree")
}

/// A random tree whose path metric is generic: edge weights are distinct powers of two in
/// random order, so distinct paths have distinct lengths. Requires `n <= 62`.
pub fn random_generic_tree(n: usize, seed: u64) -> WeightedTree {
    assert!((1..=62).contains(&n));
    let shape = random_tree(n, seed, WeightRange::default());
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut exponents: Vec<u32> = (0..shape.edges().len() as u32).collect();
    exponents.shuffle(&mut rng);
    let edges = shape
        .edges()
        .iter()
        .zip(exponents)
        .map(|(e, k)| TreeEdge { u: e.u, v: e.v, length: q(1i64 << k) })
        .collect();
    WeightedTree::new(shape.names().to_vec(), edges, None, NumericMode::Rational).expect("same shape")
}

/// A uniformly random permutation order of `0..n`.
pub fn random_order(n: usize, seed: u64) -> crate::complex::VertexOrder {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seq: Vec<usize> = (0..n).collect();
    seq.shuffle(&mut rng);
    crate::complex::VertexOrder::from_sequence(seq).expect("shuffled permutation")
}

/// A random tree together with its path metric.
pub fn random_tree_metric(n: usize, seed: u64) -> (WeightedTree, FiniteMetricSpace) {
    let t = random_tree(n, seed, WeightRange::default());
    let x = tree_metric(&t);
    (t, x)
}

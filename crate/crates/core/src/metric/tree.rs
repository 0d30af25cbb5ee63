use crate::complex::VertexOrder;
use crate::metric::{FiniteMetricSpace, LoadOptions, MetricError};
use crate::value::{DistanceValue, NumericMode};

#[derive(Debug, Clone, PartialEq)]
pub struct TreeEdge {
    pub u: usize,
    pub v: usize,
    pub length: DistanceValue,
}

/// A positively weighted tree on `names.len()` vertices.
#[derive(Debug, Clone)]
pub struct WeightedTree {
    names: Vec<String>,
    edges: Vec<TreeEdge>,
    root: Option<usize>,
    mode: NumericMode,
}

impl WeightedTree {
    pub fn new(
        names: Vec<String>,
        edges: Vec<TreeEdge>,
        root: Option<usize>,
        mode: NumericMode,
    ) -> Result<Self, MetricError> {
        let n = names.len();
        if n == 0 {
            return Err(MetricError::Empty);
        }
        if edges.len() + 1 != n {
            return Err(MetricError::Tree(format!(
                "{} vertices need {} edges, found {}",
                n,
                n - 1,
                edges.len()
            )));
        }
        let zero = mode.zero();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let edges: Vec<TreeEdge> = edges
            .into_iter()
            .map(|e| TreeEdge { length: mode.coerce(&e.length), ..e })
            .collect();
        for e in &edges {
            if e.u >= n || e.v >= n || e.u == e.v {
                return Err(MetricError::Tree(format!("invalid edge ({}, {})", e.u, e.v)));
            }
            if !mode.lt(&zero, &e.length) {
                return Err(MetricError::Tree(format!(
                    "edge {}-{} has non-positive length {}",
                    names[e.u], names[e.v], e.length
                )));
            }
            let (ru, rv) = (find(&mut parent, e.u), find(&mut parent, e.v));
            if ru == rv {
                return Err(MetricError::Tree(format!(
                    "edge {}-{} closes a cycle",
                    names[e.u], names[e.v]
                )));
            }
            parent[ru] = rv;
        }
        if let Some(r) = root {
            if r >= n {
                return Err(MetricError::Tree(format!("root index {r} out of range")));
            }
        }
        Ok(WeightedTree { names, edges, root, mode })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn edges(&self) -> &[TreeEdge] {
        &self.edges
    }

    pub fn root(&self) -> Option<usize> {
        self.root
    }

    pub fn mode(&self) -> NumericMode {
        self.mode
    }

    pub fn with_root(mut self, root: usize) -> Self {
        assert!(root < self.len());
        self.root = Some(root);
        self
    }

    pub fn max_edge_length(&self) -> DistanceValue {
        self.edges
            .iter()
            .map(|e| e.length.clone())
            .max()
            .unwrap_or_else(|| self.mode.zero())
    }

    fn adjacency(&self) -> Vec<Vec<(usize, &DistanceValue)>> {
        let mut adj = vec![Vec::new(); self.len()];
        for e in &self.edges {
            adj[e.u].push((e.v, &e.length));
            adj[e.v].push((e.u, &e.length));
        }
        adj
    }

    /// Path lengths from `source` and the parent of each vertex on its path back to `source`.
    pub fn paths_from(&self, source: usize) -> (Vec<DistanceValue>, Vec<Option<usize>>) {
        let adj = self.adjacency();
        let mut dist = vec![self.mode.zero(); self.len()];
        let mut parent = vec![None; self.len()];
        let mut seen = vec![false; self.len()];
        let mut stack = vec![source];
        seen[source] = true;
        while let Some(u) = stack.pop() {
            for &(v, len) in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    dist[v] = &dist[u] + len;
                    parent[v] = Some(u);
                    stack.push(v);
                }
            }
        }
        (dist, parent)
    }
}

/// The path-length metric of `tree` on its vertex set.
pub fn tree_metric(tree: &WeightedTree) -> FiniteMetricSpace {
    let n = tree.len();
    let mut matrix = Vec::with_capacity(n * n);
    for v in 0..n {
        matrix.extend(tree.paths_from(v).0);
    }
    FiniteMetricSpace::new(tree.names.clone(), matrix, tree.mode, LoadOptions::default())
        .expect("tree path metrics satisfy the metric axioms")
}

/// A total order extending the rooted tree order: ancestors come first, incomparable
/// vertices by distance to `root` and then by index.
pub fn compatible_order(tree: &WeightedTree, root: usize) -> VertexOrder {
    let (dist, _) = tree.paths_from(root);
    let mut sequence: Vec<usize> = (0..tree.len()).collect();
    sequence.sort_by(|&a, &b| dist[a].cmp(&dist[b]).then(a.cmp(&b)));
    VertexOrder::from_sequence(sequence).expect("sorted permutation")
}

/// Whether `order` extends the tree partial order rooted at `root`.
pub fn is_compatible_order(tree: &WeightedTree, root: usize, order: &VertexOrder) -> bool {
    let (_, parent) = tree.paths_from(root);
    (0..tree.len()).all(|v| match parent[v] {
        Some(p) => order.rank(p) < order.rank(v),
        None => v == root,
    })
}

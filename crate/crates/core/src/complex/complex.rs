use std::collections::HashSet;

use crate::complex::simplex::bits;
use crate::complex::{ComplexError, DistanceLevels, Simplex, MAX_VERTICES};
use crate::metric::{FiniteMetricSpace, WeightedTree};
use crate::value::DistanceValue;

/// Default cap on the number of simplices a construction may materialize.
pub const DEFAULT_SIMPLEX_BUDGET: usize = 10_000_000;

/// A finite simplicial complex on the vertices `0..n`.
///
/// Simplices are kept in canonical order (dimension, then index-lexicographic). Complexes built
/// as Vietoris–Rips complexes remember their neighbourhood graph so that cofacet enumeration
/// only tries common neighbours.
#[derive(Debug, Clone)]
pub struct SimplicialComplex {
    n_vertices: usize,
    simplices: Vec<Simplex>,
    members: HashSet<Simplex>,
    dim_cap: Option<usize>,
    neighborhoods: Option<Vec<u64>>,
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.n_vertices == other.n_vertices && self.simplices == other.simplices
    }
}

impl Eq for SimplicialComplex {}

impl SimplicialComplex {
    /// Builds a complex from a face-closed collection of simplices.
    pub fn from_simplices(
        n_vertices: usize,
        simplices: impl IntoIterator<Item = Simplex>,
    ) -> Result<Self, ComplexError> {
        check_vertex_count(n_vertices)?;
        let members: HashSet<Simplex> = simplices.into_iter().collect();
        for &s in &members {
            if s.vertices().any(|v| v >= n_vertices) {
                return Err(ComplexError::VertexOutOfRange(s));
            }
            if let Some(f) = s.facets().find(|f| !members.contains(f)) {
                return Err(ComplexError::NotClosed { simplex: s, missing: f });
            }
        }
        Ok(Self::from_set(n_vertices, members, None, None))
    }

    /// The smallest complex containing every given simplex.
    pub fn closure(
        n_vertices: usize,
        generators: impl IntoIterator<Item = Simplex>,
    ) -> Result<Self, ComplexError> {
        check_vertex_count(n_vertices)?;
        let mut members = HashSet::new();
        for g in generators {
            if g.vertices().any(|v| v >= n_vertices) {
                return Err(ComplexError::VertexOutOfRange(g));
            }
            if members.contains(&g) {
                continue;
            }
            members.extend(g.faces());
        }
        Ok(Self::from_set(n_vertices, members, None, None))
    }

    pub(crate) fn from_set(
        n_vertices: usize,
        members: HashSet<Simplex>,
        dim_cap: Option<usize>,
        neighborhoods: Option<Vec<u64>>,
    ) -> Self {
        let mut simplices: Vec<Simplex> = members.iter().copied().collect();
        simplices.sort_by(|a, b| a.canonical_cmp(b));
        SimplicialComplex { n_vertices, simplices, members, dim_cap, neighborhoods }
    }

    /// The full simplex on `n` vertices with all its faces.
    pub fn full(n_vertices: usize) -> Result<Self, ComplexError> {
        check_vertex_count(n_vertices)?;
        if n_vertices == 0 {
            return Ok(Self::from_set(0, HashSet::new(), None, None));
        }
        let top = if n_vertices == 64 { u64::MAX } else { (1u64 << n_vertices) - 1 };
        Self::closure(n_vertices, [Simplex::from_mask(top)])
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn contains(&self, s: Simplex) -> bool {
        self.members.contains(&s)
    }

    /// Simplices in canonical order.
    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn iter(&self) -> impl Iterator<Item = Simplex> + '_ {
        self.simplices.iter().copied()
    }

    pub fn dim_cap(&self) -> Option<usize> {
        self.dim_cap
    }

    /// Largest simplex dimension, `None` when empty.
    pub fn dimension(&self) -> Option<usize> {
        self.simplices.last().map(|s| s.dim())
    }

    /// Codimension-one cofaces of `s` present in the complex.
    pub fn cofacets(&self, s: Simplex) -> Vec<Simplex> {
        let all = if self.n_vertices == 64 { u64::MAX } else { (1u64 << self.n_vertices) - 1 };
        let candidates = match &self.neighborhoods {
            Some(nbr) => s.vertices().fold(all, |m, v| m & nbr[v]),
            None => all,
        } & !s.mask();
        bits(candidates)
            .map(|v| s.with(v))
            .filter(|c| self.members.contains(c))
            .collect()
    }

    pub fn is_subcomplex_of(&self, other: &SimplicialComplex) -> bool {
        self.len() <= other.len() && self.simplices.iter().all(|s| other.contains(*s))
    }

    pub fn union(&self, other: &SimplicialComplex) -> SimplicialComplex {
        let mut members = self.members.clone();
        members.extend(other.simplices.iter().copied());
        let cap = match (self.dim_cap, other.dim_cap) {
            (Some(a), Some(b)) => Some(a.max(b)),
            _ => None,
        };
        Self::from_set(self.n_vertices.max(other.n_vertices), members, cap, None)
    }

    /// Simplices of `self` missing from `other`, in canonical order.
    pub fn difference(&self, other: &SimplicialComplex) -> Vec<Simplex> {
        self.simplices.iter().copied().filter(|s| !other.contains(*s)).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        euler_characteristic(self.iter())
    }

    /// Stable 64-bit identifier of the simplex set (FNV-1a over the canonical listing).
    pub fn digest(&self) -> u64 {
        let mut h: u64 = 0xcbf29ce484222325;
        for b in (self.n_vertices as u64).to_le_bytes() {
            h = (h ^ b as u64).wrapping_mul(0x100000001b3);
        }
        for s in &self.simplices {
            for b in s.mask().to_le_bytes() {
                h = (h ^ b as u64).wrapping_mul(0x100000001b3);
            }
        }
        h
    }
}

/// Alternating count of simplices by dimension.
pub fn euler_characteristic(simplices: impl IntoIterator<Item = Simplex>) -> i64 {
    simplices
        .into_iter()
        .map(|s| if s.dim() % 2 == 0 { 1 } else { -1 })
        .sum()
}

fn check_vertex_count(n: usize) -> Result<(), ComplexError> {
    if n > MAX_VERTICES {
        Err(ComplexError::TooManyVertices(n))
    } else {
        Ok(())
    }
}

/// Clique complex of the graph with neighbourhood masks `nbr`, up to dimension `dim_cap`.
pub(crate) fn clique_complex(
    n: usize,
    nbr: Vec<u64>,
    dim_cap: Option<usize>,
    budget: usize,
) -> Result<SimplicialComplex, ComplexError> {
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    clique_complex_on(n, nbr, all, dim_cap, budget)
}

/// Clique complex of the graph induced on the vertex set `vertices`.
pub(crate) fn clique_complex_on(
    n: usize,
    nbr: Vec<u64>,
    vertices: u64,
    dim_cap: Option<usize>,
    budget: usize,
) -> Result<SimplicialComplex, ComplexError> {
    check_vertex_count(n)?;
    let nbr: Vec<u64> = nbr.into_iter().map(|m| m & vertices).collect();
    let mut members = HashSet::new();
    let max_card = dim_cap.map(|d| d + 1).unwrap_or(usize::MAX);
    // Depth-first expansion; candidates are common neighbours above the current top vertex.
    let mut stack: Vec<(u64, u64)> = bits(vertices)
        .collect::<Vec<_>>()
        .into_iter()
        .rev()
        .map(|v| {
            let above = if v == 63 { 0 } else { !((2u64 << v) - 1) };
            (1u64 << v, nbr[v] & above)
        })
        .collect();
    while let Some((mask, candidates)) = stack.pop() {
        members.insert(Simplex::from_mask(mask));
        if members.len() > budget {
            return Err(ComplexError::Budget { budget });
        }
        if mask.count_ones() as usize >= max_card {
            continue;
        }
        let mut rest = candidates;
        let mut children = Vec::new();
        while rest != 0 {
            let c = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let above = if c == 63 { 0 } else { !((2u64 << c) - 1) };
            children.push((mask | (1 << c), candidates & nbr[c] & above));
        }
        stack.extend(children.into_iter().rev());
    }
    Ok(SimplicialComplex::from_set(n, members, dim_cap, Some(nbr)))
}

/// All nonempty subsets of `space` with diameter at most `t`, optionally capped in dimension.
pub fn vietoris_rips(
    space: &FiniteMetricSpace,
    t: &DistanceValue,
    dim_cap: Option<usize>,
    budget: usize,
) -> Result<SimplicialComplex, ComplexError> {
    let n = space.len();
    check_vertex_count(n)?;
    let mode = space.mode();
    let mut nbr = vec![0u64; n];
    for (i, j) in space.pairs() {
        if mode.le(space.dist(i, j), t) {
            nbr[i] |= 1 << j;
            nbr[j] |= 1 << i;
        }
    }
    clique_complex(n, nbr, dim_cap, budget)
}

/// The Vietoris–Rips complex at the level value `r_level`.
pub fn vietoris_rips_at_level(
    levels: &DistanceLevels,
    level: usize,
    dim_cap: Option<usize>,
    budget: usize,
) -> Result<SimplicialComplex, ComplexError> {
    let n = levels.points();
    check_vertex_count(n)?;
    let mut nbr = vec![0u64; n];
    for i in 0..n {
        for j in (i + 1)..n {
            if levels.pair(i, j) <= level {
                nbr[i] |= 1 << j;
                nbr[j] |= 1 << i;
            }
        }
    }
    clique_complex(n, nbr, dim_cap, budget)
}

/// Largest pairwise distance among the vertices of `s`; zero for a vertex.
pub fn diameter(s: Simplex, space: &FiniteMetricSpace) -> DistanceValue {
    let vs: Vec<usize> = s.vertices().collect();
    let mut best = space.mode().zero();
    for (i, &a) in vs.iter().enumerate() {
        for &b in &vs[i + 1..] {
            if space.dist(a, b) > &best {
                best = space.dist(a, b).clone();
            }
        }
    }
    best
}

/// The forest on all vertices of `tree` with the edges of length at most `t`.
pub fn subforest(tree: &WeightedTree, t: &DistanceValue) -> SimplicialComplex {
    let mode = tree.mode();
    let simplices = (0..tree.len()).map(Simplex::vertex).chain(
        tree.edges()
            .iter()
            .filter(|e| mode.le(&e.length, t))
            .map(|e| Simplex::edge(e.u, e.v)),
    );
    SimplicialComplex::from_simplices(tree.len(), simplices).expect("forests are complexes")
}

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::complex::{subsets, Simplex, SimplicialComplex, VertexOrder};
use crate::morse::MorseError;

/// A regular interval `[rho, phi] = { psi : rho ⊆ psi ⊆ phi }` with `rho ≠ phi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GradientInterval {
    pub rho: Simplex,
    pub phi: Simplex,
}

impl GradientInterval {
    /// Rejects `rho ⊄ phi` and degenerate intervals `rho = phi`.
    pub fn new(rho: Simplex, phi: Simplex) -> Result<Self, MorseError> {
        if !rho.is_face_of(phi) || rho == phi {
            return Err(MorseError::NotRegular { rho, phi });
        }
        Ok(GradientInterval { rho, phi })
    }

    pub fn contains(&self, s: Simplex) -> bool {
        self.rho.is_face_of(s) && s.is_face_of(self.phi)
    }

    /// Number of simplices, `2^(card phi - card rho)`.
    pub fn size(&self) -> usize {
        1 << (self.phi.card() - self.rho.card())
    }

    /// All simplices of the interval, starting with `rho`.
    pub fn simplices(&self) -> impl Iterator<Item = Simplex> {
        let rho = self.rho.mask();
        let free = self.phi.minus_mask(self.rho);
        std::iter::once(0).chain(subsets(free)).map(move |m| Simplex::from_mask(rho | m))
    }

    /// Whether two intervals share a simplex.
    pub fn meets(&self, other: &GradientInterval) -> bool {
        let lo = self.rho.union(other.rho);
        let hi = self.phi.mask() & other.phi.mask();
        lo.mask() & !hi == 0
    }

    fn canonical_cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.rho.canonical_cmp(&other.rho).then_with(|| self.phi.canonical_cmp(&other.phi))
    }
}

/// A collection of regular intervals; simplices outside every interval are critical.
///
/// Equality compares interval sets, ignoring order.
#[derive(Debug, Clone, Default)]
pub struct DiscreteGradient {
    intervals: Vec<GradientInterval>,
}

impl PartialEq for DiscreteGradient {
    fn eq(&self, other: &Self) -> bool {
        self.sorted().intervals == other.sorted().intervals
    }
}

impl Eq for DiscreteGradient {}

impl DiscreteGradient {
    pub fn new(intervals: Vec<GradientInterval>) -> Self {
        DiscreteGradient { intervals }
    }

    /// Builds from `(rho, phi)` pairs, rejecting non-regular ones.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Simplex, Simplex)>) -> Result<Self, MorseError> {
        let intervals = pairs
            .into_iter()
            .map(|(r, p)| GradientInterval::new(r, p))
            .collect::<Result<_, _>>()?;
        Ok(DiscreteGradient { intervals })
    }

    pub fn intervals(&self) -> &[GradientInterval] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn push(&mut self, interval: GradientInterval) {
        self.intervals.push(interval);
    }

    pub fn extend(&mut self, other: &DiscreteGradient) {
        self.intervals.extend_from_slice(&other.intervals);
    }

    /// Intervals in canonical order of `(rho, phi)`.
    pub fn sorted(&self) -> DiscreteGradient {
        let mut intervals = self.intervals.clone();
        intervals.sort_by(|a, b| a.canonical_cmp(b));
        DiscreteGradient { intervals }
    }

    /// Total number of simplices covered, counted with multiplicity.
    pub fn covered_count(&self) -> usize {
        self.intervals.iter().map(|i| i.size()).sum()
    }

    /// Map from each covered simplex to the index of its (first) interval.
    pub fn cover_map(&self) -> HashMap<Simplex, usize> {
        let mut map = HashMap::with_capacity(self.covered_count());
        for (k, interval) in self.intervals.iter().enumerate() {
            for s in interval.simplices() {
                map.entry(s).or_insert(k);
            }
        }
        map
    }

    /// The intervals lying entirely in `k ∖ l`: `phi ∈ k` and `rho ∉ l`.
    pub fn restrict(&self, k: &SimplicialComplex, l: Option<&SimplicialComplex>) -> DiscreteGradient {
        let intervals = self
            .intervals
            .iter()
            .filter(|i| k.contains(i.phi) && l.is_none_or(|l| !l.contains(i.rho)))
            .copied()
            .collect();
        DiscreteGradient { intervals }
    }

    /// One interval per line, `rho -> phi`, in canonical order. With `names`, simplices are
    /// printed as labelled sets, otherwise as vertex indices.
    pub fn dump(&self, names: Option<&[String]>) -> String {
        let mut out = String::new();
        for i in self.sorted().intervals {
            let _ = writeln!(out, "{} -> {}", show(i.rho, names), show(i.phi, names));
        }
        out
    }
}

pub(crate) fn show(s: Simplex, names: Option<&[String]>) -> String {
    match names {
        Some(names) => s.display_with(names).to_string(),
        None => s.to_string(),
    }
}

/// Facet pairs `(sigma, tau)`; every simplex occurs in at most one pair.
#[derive(Debug, Clone, Default)]
pub struct Matching {
    pairs: Vec<(Simplex, Simplex)>,
}

impl PartialEq for Matching {
    fn eq(&self, other: &Self) -> bool {
        self.sorted_pairs() == other.sorted_pairs()
    }
}

impl Eq for Matching {}

impl Matching {
    pub fn new(pairs: Vec<(Simplex, Simplex)>) -> Result<Self, MorseError> {
        let mut seen = HashMap::new();
        for &(s, t) in &pairs {
            if !s.is_face_of(t) || s.card() + 1 != t.card() {
                return Err(MorseError::NotFacet { sigma: s, tau: t });
            }
            for x in [s, t] {
                if seen.insert(x, ()).is_some() {
                    return Err(MorseError::Repeated(x));
                }
            }
        }
        Ok(Matching { pairs })
    }

    pub fn pairs(&self) -> &[(Simplex, Simplex)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn sorted_pairs(&self) -> Vec<(Simplex, Simplex)> {
        let mut p = self.pairs.clone();
        p.sort_by(|a, b| a.0.canonical_cmp(&b.0).then_with(|| a.1.canonical_cmp(&b.1)));
        p
    }

    /// Keeps the pairs satisfying `keep`.
    pub fn filter(&self, mut keep: impl FnMut(Simplex, Simplex) -> bool) -> Matching {
        Matching { pairs: self.pairs.iter().copied().filter(|&(s, t)| keep(s, t)).collect() }
    }

    /// Each pair as a two-element interval.
    pub fn to_gradient(&self) -> DiscreteGradient {
        DiscreteGradient {
            intervals: self.pairs.iter().map(|&(rho, phi)| GradientInterval { rho, phi }).collect(),
        }
    }

    /// Partner of every matched simplex.
    pub fn partner_map(&self) -> HashMap<Simplex, Simplex> {
        let mut m = HashMap::with_capacity(2 * self.pairs.len());
        for &(s, t) in &self.pairs {
            m.insert(s, t);
            m.insert(t, s);
        }
        m
    }

    /// One pair per line, `sigma -> tau`, in canonical order.
    pub fn dump(&self, names: Option<&[String]>) -> String {
        let mut out = String::new();
        for (s, t) in self.sorted_pairs() {
            let _ = writeln!(out, "{} -> {}", show(s, names), show(t, names));
        }
        out
    }
}

/// Splits every interval `[rho, phi]` into the pairs `(psi, psi ∪ {v})` with
/// `v = min(phi ∖ rho)` under `order`.
pub fn minimal_vertex_refinement(gradient: &DiscreteGradient, order: &VertexOrder) -> Matching {
    let mut pairs = Vec::with_capacity(gradient.covered_count() / 2);
    for interval in gradient.intervals() {
        let v = order.min_vertex(interval.phi.minus_mask(interval.rho));
        for psi in interval.simplices().filter(|s| !s.contains(v)) {
            pairs.push((psi, psi.with(v)));
        }
    }
    Matching { pairs }
}

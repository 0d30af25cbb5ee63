use std::cmp::Ordering;
use std::collections::HashMap;

use crate::complex::{DistanceLevels, Simplex, SimplicialComplex, VertexOrder};
use crate::value::DistanceValue;

/// How simplices of equal diameter and dimension are ordered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SimplexOrder {
    /// Lexicographic in the vertex order.
    #[default]
    Lexicographic,
    /// Reverse colexicographic in the vertex order. Coincides with lexicographic order under
    /// the reversed vertex order.
    ReverseColexicographic,
}

/// A complex with the diameter-lexicographic total order on its simplices: by diameter,
/// then dimension, then the chosen vertex-order refinement.
#[derive(Debug, Clone)]
pub struct Filtration {
    complex: SimplicialComplex,
    levels: DistanceLevels,
    order: VertexOrder,
    convention: SimplexOrder,
    entries: Vec<Simplex>,
    entry_levels: Vec<usize>,
    position: HashMap<Simplex, usize>,
}

impl Filtration {
    pub fn new(
        complex: SimplicialComplex,
        levels: DistanceLevels,
        order: VertexOrder,
        convention: SimplexOrder,
    ) -> Self {
        assert_eq!(order.len(), levels.points(), "vertex order size mismatch");
        let mut keyed: Vec<((usize, usize, u64), Simplex)> = complex
            .iter()
            .map(|s| (sort_key(&levels, &order, convention, s), s))
            .collect();
        keyed.sort_unstable_by_key(|(k, _)| *k);
        let entries: Vec<Simplex> = keyed.iter().map(|(_, s)| *s).collect();
        let entry_levels = keyed.iter().map(|((l, _, _), _)| *l).collect();
        let position = entries.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        Filtration { complex, levels, order, convention, entries, entry_levels, position }
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn levels(&self) -> &DistanceLevels {
        &self.levels
    }

    pub fn order(&self) -> &VertexOrder {
        &self.order
    }

    pub fn convention(&self) -> SimplexOrder {
        self.convention
    }

    /// Simplices in filtration order.
    pub fn simplices(&self) -> &[Simplex] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn position(&self, s: Simplex) -> Option<usize> {
        self.position.get(&s).copied()
    }

    /// Diameter level of the simplex at filtration position `i`.
    pub fn level_at(&self, i: usize) -> usize {
        self.entry_levels[i]
    }

    pub fn level(&self, s: Simplex) -> usize {
        match self.position(s) {
            Some(i) => self.entry_levels[i],
            None => self.levels.simplex(s),
        }
    }

    pub fn diameter(&self, s: Simplex) -> &DistanceValue {
        self.levels.value(self.level(s))
    }

    /// The total order; `Equal` only for identical simplices.
    pub fn compare(&self, a: Simplex, b: Simplex) -> Ordering {
        match (self.position(a), self.position(b)) {
            (Some(i), Some(j)) => i.cmp(&j),
            _ => sort_key(&self.levels, &self.order, self.convention, a)
                .cmp(&sort_key(&self.levels, &self.order, self.convention, b)),
        }
    }

    /// One line per simplex, `v0 v1 ... vk : diameter`, in filtration order.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (i, s) in self.entries.iter().enumerate() {
            out.push_str(&format!("{} : {}\n", s, self.levels.value(self.entry_levels[i])));
        }
        out
    }
}

fn sort_key(
    levels: &DistanceLevels,
    order: &VertexOrder,
    convention: SimplexOrder,
    s: Simplex,
) -> (usize, usize, u64) {
    let ranked = order.rank_mask(s);
    let refinement = match convention {
        // Equal cardinality: the lexicographically smaller set owns the lowest differing bit.
        SimplexOrder::Lexicographic => !ranked.reverse_bits(),
        // The set owning the highest differing bit comes first.
        SimplexOrder::ReverseColexicographic => !ranked,
    };
    (levels.simplex(s), s.card(), refinement)
}

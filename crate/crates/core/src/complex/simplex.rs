use std::cmp::Ordering;
use std::fmt;

/// Simplices are stored as vertex bitmasks, so complexes are limited to this many vertices.
pub const MAX_VERTICES: usize = 64;

/// A nonempty vertex set, stored in canonical index order as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Simplex(u64);

impl Simplex {
    /// Builds a simplex from distinct vertex indices below [`MAX_VERTICES`].
    ///
    /// Panics on an empty, repeated or out-of-range vertex list.
    pub fn new(vertices: &[usize]) -> Self {
        let mut mask = 0u64;
        for &v in vertices {
            assert!(v < MAX_VERTICES, "vertex {v} out of range");
            assert!(mask & (1 << v) == 0, "repeated vertex {v}");
            mask |= 1 << v;
        }
        assert!(mask != 0, "empty simplex");
        Simplex(mask)
    }

    pub fn vertex(v: usize) -> Self {
        Simplex::new(&[v])
    }

    pub fn edge(a: usize, b: usize) -> Self {
        Simplex::new(&[a, b])
    }

    pub fn from_mask(mask: u64) -> Self {
        assert!(mask != 0, "empty simplex");
        Simplex(mask)
    }

    #[inline]
    pub fn mask(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn card(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn dim(self) -> usize {
        self.card() - 1
    }

    #[inline]
    pub fn contains(self, v: usize) -> bool {
        v < MAX_VERTICES && self.0 & (1 << v) != 0
    }

    #[inline]
    pub fn is_face_of(self, other: Simplex) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: Simplex) -> Simplex {
        Simplex(self.0 | other.0)
    }

    /// `self` with `v` added.
    pub fn with(self, v: usize) -> Simplex {
        Simplex(self.0 | (1 << v))
    }

    /// `self` with `v` removed, `None` if that leaves nothing.
    pub fn without(self, v: usize) -> Option<Simplex> {
        let m = self.0 & !(1 << v);
        (m != 0).then_some(Simplex(m))
    }

    /// `self \ other` as a raw mask (possibly empty).
    pub fn minus_mask(self, other: Simplex) -> u64 {
        self.0 & !other.0
    }

    /// Vertices in increasing index order.
    pub fn vertices(self) -> Vertices {
        Vertices(self.0)
    }

    /// Codimension-one faces; a vertex has none.
    pub fn facets(self) -> impl Iterator<Item = Simplex> {
        let mask = self.0;
        self.vertices().filter_map(move |v| {
            let m = mask & !(1 << v);
            (m != 0).then_some(Simplex(m))
        })
    }

    /// All nonempty faces including `self`.
    pub fn faces(self) -> impl Iterator<Item = Simplex> {
        subsets(self.0).map(Simplex)
    }

    /// Canonical order: by dimension, then lexicographically by vertex index.
    pub fn canonical_cmp(&self, other: &Simplex) -> Ordering {
        self.card()
            .cmp(&other.card())
            .then_with(|| lex_first_by_lowest(self.0, other.0))
    }

    pub fn display_with<'a>(&self, names: &'a [String]) -> NamedSimplex<'a> {
        NamedSimplex { simplex: *self, names }
    }
}

/// For equal-cardinality masks: the one holding the lowest differing bit is smaller.
fn lex_first_by_lowest(a: u64, b: u64) -> Ordering {
    if a == b {
        return Ordering::Equal;
    }
    let low = (a ^ b) & (a ^ b).wrapping_neg();
    if a & low != 0 {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

/// Nonempty submasks of `mask`.
pub(crate) fn subsets(mask: u64) -> impl Iterator<Item = u64> {
    let mut sub = mask;
    let mut done = mask == 0;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let out = sub;
        if sub == 0 {
            return None;
        }
        sub = (sub - 1) & mask;
        if sub == 0 {
            done = true;
        }
        Some(out)
    })
}

pub struct Vertices(u64);

/// Set bits of `mask` in increasing order.
pub(crate) fn bits(mask: u64) -> Vertices {
    Vertices(mask)
}

impl Iterator for Vertices {
    type Item = usize;
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(v)
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.vertices()).finish()
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.vertices().map(|v| v.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

pub struct NamedSimplex<'a> {
    simplex: Simplex,
    names: &'a [String],
}

impl fmt::Display for NamedSimplex<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<&str> = self.simplex.vertices().map(|v| self.names[v].as_str()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// A total order on the vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexOrder {
    rank: Vec<usize>,
    sequence: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("not a permutation of 0..{0}")]
pub struct NotAPermutation(pub usize);

impl VertexOrder {
    pub fn identity(n: usize) -> Self {
        VertexOrder { rank: (0..n).collect(), sequence: (0..n).collect() }
    }

    /// Builds the order listing `sequence[0] < sequence[1] < ...`.
    pub fn from_sequence(sequence: Vec<usize>) -> Result<Self, NotAPermutation> {
        let n = sequence.len();
        let mut rank = vec![usize::MAX; n];
        for (r, &v) in sequence.iter().enumerate() {
            if v >= n || rank[v] != usize::MAX {
                return Err(NotAPermutation(n));
            }
            rank[v] = r;
        }
        Ok(VertexOrder { rank, sequence })
    }

    pub fn reversed(&self) -> Self {
        let mut seq = self.sequence.clone();
        seq.reverse();
        VertexOrder::from_sequence(seq).expect("reversal of a permutation")
    }

    pub fn len(&self) -> usize {
        self.sequence.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequence.is_empty()
    }

    #[inline]
    pub fn rank(&self, v: usize) -> usize {
        self.rank[v]
    }

    pub fn sequence(&self) -> &[usize] {
        &self.sequence
    }

    /// The simplex re-indexed by rank.
    pub fn rank_mask(&self, s: Simplex) -> u64 {
        s.vertices().fold(0u64, |m, v| m | (1 << self.rank[v]))
    }

    /// The order-minimal vertex of a nonempty mask.
    pub fn min_vertex(&self, mask: u64) -> usize {
        Simplex::from_mask(mask).vertices().min_by_key(|&v| self.rank[v]).expect("nonempty")
    }

    pub fn max_vertex(&self, mask: u64) -> usize {
        Simplex::from_mask(mask).vertices().max_by_key(|&v| self.rank[v]).expect("nonempty")
    }

    /// Lexicographic comparison of the vertex sequences sorted by this order.
    pub fn lex_cmp(&self, a: Simplex, b: Simplex) -> Ordering {
        let (ra, rb) = (self.rank_mask(a), self.rank_mask(b));
        if a.card() == b.card() {
            return lex_first_by_lowest(ra, rb);
        }
        let sa = Simplex::from_mask(ra).vertices();
        let sb = Simplex::from_mask(rb).vertices();
        sa.cmp(sb)
    }

    /// Reverse colexicographic comparison: sequences compared from their largest element,
    /// and the one with the larger element there comes first.
    pub fn reverse_colex_cmp(&self, a: Simplex, b: Simplex) -> Ordering {
        let (ra, rb) = (self.rank_mask(a), self.rank_mask(b));
        let mut sa: Vec<usize> = Simplex::from_mask(ra).vertices().collect();
        let mut sb: Vec<usize> = Simplex::from_mask(rb).vertices().collect();
        sa.reverse();
        sb.reverse();
        sb.cmp(&sa)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn facets_and_faces() {
        let s = Simplex::new(&[0, 1, 2]);
        let f: Vec<Simplex> = s.facets().collect();
        assert_eq!(f.len(), 3);
        for expected in [Simplex::new(&[1, 2]), Simplex::new(&[0, 2]), Simplex::new(&[0, 1])] {
            assert!(f.contains(&expected));
        }
        assert_eq!(s.faces().count(), 7);
        assert_eq!(Simplex::vertex(3).facets().count(), 0);
        assert_eq!(s.dim(), 2);
    }

    #[test]
    fn lexicographic_comparisons() {
        let id = VertexOrder::identity(4);
        let ac = Simplex::edge(0, 2);
        let ad = Simplex::edge(0, 3);
        let bc = Simplex::edge(1, 2);
        assert_eq!(id.lex_cmp(ac, ad), Ordering::Less);
        assert_eq!(id.lex_cmp(ad, bc), Ordering::Less);
        assert_eq!(id.lex_cmp(Simplex::vertex(0), ac), Ordering::Less);
        let rev = id.reversed();
        // Under d<c<b<a, {b,c} reads (c,b) and {a,d} reads (d,a).
        assert_eq!(rev.lex_cmp(ad, bc), Ordering::Less);
    }

    #[test]
    fn rejects_bad_sequences() {
        assert!(VertexOrder::from_sequence(vec![0, 0]).is_err());
        assert!(VertexOrder::from_sequence(vec![2, 0]).is_err());
        let o = VertexOrder::from_sequence(vec![2, 0, 1]).unwrap();
        assert_eq!(o.rank(2), 0);
        assert_eq!(o.min_vertex(0b011), 0);
        assert_eq!(o.max_vertex(0b101), 0);
    }
}

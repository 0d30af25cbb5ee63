use crate::complex::{Filtration, Simplex};
use crate::morse::Matching;

/// The maximal facet of `tau` in the filtration order, `None` for vertices.
pub fn max_facet(f: &Filtration, tau: Simplex) -> Option<Simplex> {
    tau.facets().max_by(|a, b| f.compare(*a, *b))
}

/// The minimal cofacet of `sigma` present in the filtration, `None` if it has none.
pub fn min_cofacet(f: &Filtration, sigma: Simplex) -> Option<Simplex> {
    f.complex().cofacets(sigma).into_iter().min_by(|a, b| f.compare(*a, *b))
}

/// All apparent pairs `(sigma, tau)`: `sigma` is the maximal facet of `tau` and `tau` the
/// minimal cofacet of `sigma`. Listed in filtration order of `tau`.
pub fn apparent_pairs(f: &Filtration) -> Matching {
    let mut pairs = Vec::new();
    for &tau in f.simplices() {
        let Some(sigma) = max_facet(f, tau) else { continue };
        if min_cofacet(f, sigma) == Some(tau) {
            pairs.push((sigma, tau));
        }
    }
    Matching::new(pairs).expect("apparent pairs are a matching")
}

/// Apparent pairs whose two simplices have the same diameter.
pub fn zero_persistence_apparent_pairs(f: &Filtration) -> Matching {
    apparent_pairs(f).filter(|s, t| f.level(s) == f.level(t))
}

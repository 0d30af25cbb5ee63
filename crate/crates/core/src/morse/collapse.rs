use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

use crate::complex::{Simplex, SimplicialComplex, VertexOrder};
use crate::morse::gradient::show;
use crate::morse::{minimal_vertex_refinement, DiscreteGradient, MorseError};

/// An explicit sequence of elementary collapses `K ↘ L`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollapseCertificate {
    /// Removed pairs `(sigma, tau)` in order; `sigma` is a free facet of `tau` at its step.
    pub steps: Vec<(Simplex, Simplex)>,
    pub start_id: u64,
    pub end_id: u64,
}

impl CollapseCertificate {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// One step per line, `sigma ; tau`.
    pub fn dump(&self, names: Option<&[String]>) -> String {
        let mut out = String::new();
        for &(s, t) in &self.steps {
            let _ = writeln!(out, "{} ; {}", show(s, names), show(t, names));
        }
        out
    }
}

/// A mutable complex with cofacet counts.
struct LiveComplex<'a> {
    host: &'a SimplicialComplex,
    alive: HashSet<Simplex>,
    cofacets: HashMap<Simplex, usize>,
}

impl<'a> LiveComplex<'a> {
    fn new(host: &'a SimplicialComplex) -> Self {
        let alive: HashSet<Simplex> = host.iter().collect();
        let cofacets = host.iter().map(|s| (s, host.cofacets(s).len())).collect();
        LiveComplex { host, alive, cofacets }
    }

    /// Whether `tau` is the unique proper coface of its facet `sigma`.
    fn is_free_pair(&self, sigma: Simplex, tau: Simplex) -> bool {
        self.alive.contains(&sigma)
            && self.alive.contains(&tau)
            && self.cofacets[&tau] == 0
            && self.cofacets[&sigma] == 1
    }

    fn remove(&mut self, s: Simplex) {
        self.alive.remove(&s);
        for f in s.facets() {
            if let Some(c) = self.cofacets.get_mut(&f) {
                *c -= 1;
            }
        }
    }

    /// Recounts live cofacets of `s` from scratch.
    fn live_cofacets(&self, s: Simplex) -> usize {
        self.host.cofacets(s).into_iter().filter(|c| self.alive.contains(c)).count()
    }

    fn into_complex(self) -> SimplicialComplex {
        let n = self.host.n_vertices();
        SimplicialComplex::from_simplices(n, self.alive).expect("collapses keep the complex closed")
    }
}

/// Greedily realizes `K ↘ L` from the minimal vertex refinement of `gradient`.
///
/// The gradient's intervals must cover exactly `K ∖ L`.
pub fn collapse(
    k: &SimplicialComplex,
    gradient: &DiscreteGradient,
    l: &SimplicialComplex,
    order: &VertexOrder,
) -> Result<CollapseCertificate, MorseError> {
    let matching = minimal_vertex_refinement(gradient, order);
    let pairs = matching.pairs();
    let mut live = LiveComplex::new(k);
    let mut pair_of: HashMap<Simplex, usize> = HashMap::with_capacity(2 * pairs.len());
    for (i, &(s, t)) in pairs.iter().enumerate() {
        pair_of.insert(s, i);
        pair_of.insert(t, i);
    }
    let mut done = vec![false; pairs.len()];
    let mut queue: VecDeque<usize> = (0..pairs.len()).collect();
    let mut queued = vec![true; pairs.len()];
    let mut steps = Vec::with_capacity(pairs.len());
    while let Some(i) = queue.pop_front() {
        queued[i] = false;
        if done[i] {
            continue;
        }
        let (sigma, tau) = pairs[i];
        if !live.is_free_pair(sigma, tau) {
            continue;
        }
        live.remove(tau);
        live.remove(sigma);
        done[i] = true;
        steps.push((sigma, tau));
        // Removing the pair changes cofacet counts of the facets of both simplices.
        for f in tau.facets().chain(sigma.facets()) {
            if let Some(&j) = pair_of.get(&f) {
                if !done[j] && !queued[j] {
                    queued[j] = true;
                    queue.push_back(j);
                }
            }
        }
    }
    if let Some(j) = done.iter().position(|d| !d) {
        return Err(MorseError::Stuck { remaining: done.iter().filter(|d| !**d).count(), example: pairs[j].1 });
    }
    let end = live.into_complex();
    if end != *l {
        let extra = end.difference(l);
        let example = extra.first().copied().or_else(|| l.difference(&end).first().copied());
        return Err(MorseError::EndMismatch { example });
    }
    Ok(CollapseCertificate { steps, start_id: k.digest(), end_id: l.digest() })
}

/// Applies a certificate to `k`, re-verifying every step, and returns the end complex.
pub fn replay(k: &SimplicialComplex, certificate: &CollapseCertificate) -> Result<SimplicialComplex, MorseError> {
    if k.digest() != certificate.start_id {
        return Err(MorseError::Replay { step: 0, reason: "start complex does not match".into() });
    }
    let mut live = LiveComplex::new(k);
    for (step, &(sigma, tau)) in certificate.steps.iter().enumerate() {
        if !sigma.is_face_of(tau) || sigma.card() + 1 != tau.card() {
            return Err(MorseError::Replay { step, reason: format!("[{sigma}] is not a facet of [{tau}]") });
        }
        if !live.alive.contains(&sigma) || !live.alive.contains(&tau) {
            return Err(MorseError::Replay { step, reason: "pair already removed".into() });
        }
        if live.live_cofacets(tau) != 0 || live.live_cofacets(sigma) != 1 {
            return Err(MorseError::Replay { step, reason: format!("[{sigma}] is not a free face of [{tau}]") });
        }
        live.remove(tau);
        live.remove(sigma);
    }
    let end = live.into_complex();
    if end.digest() != certificate.end_id {
        return Err(MorseError::Replay { step: certificate.steps.len(), reason: "end complex does not match".into() });
    }
    Ok(end)
}

/// Simplices of `k` in no interval of `gradient`, in canonical order.
pub fn critical_cells(gradient: &DiscreteGradient, k: &SimplicialComplex) -> Vec<Simplex> {
    let cover = gradient.cover_map();
    k.iter().filter(|s| !cover.contains_key(s)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::euler_characteristic;

    fn s(v: &[usize]) -> Simplex {
        Simplex::new(v)
    }

    #[test]
    fn edge_collapses_to_vertex() {
        let k = SimplicialComplex::full(2).unwrap();
        let l = SimplicialComplex::closure(2, [s(&[1])]).unwrap();
        let v = DiscreteGradient::from_pairs([(s(&[0]), s(&[0, 1]))]).unwrap();
        let cert = collapse(&k, &v, &l, &VertexOrder::identity(2)).unwrap();
        assert_eq!(cert.steps, vec![(s(&[0]), s(&[0, 1]))]);
        assert_eq!(replay(&k, &cert).unwrap(), l);
        assert_eq!(cert.dump(None), "0 ; 0 1\n");
    }

    #[test]
    fn empty_gradient_on_equal_complexes() {
        let k = SimplicialComplex::full(3).unwrap();
        let cert = collapse(&k, &DiscreteGradient::default(), &k, &VertexOrder::identity(3)).unwrap();
        assert!(cert.is_empty());
        assert_eq!(replay(&k, &cert).unwrap(), k);
    }

    #[test]
    fn stuck_on_cycle() {
        let k = SimplicialComplex::closure(3, [s(&[0, 1]), s(&[1, 2]), s(&[0, 2])]).unwrap();
        let l = SimplicialComplex::closure(3, [s(&[0])]).unwrap();
        let v = DiscreteGradient::from_pairs([
            (s(&[1]), s(&[0, 1])),
            (s(&[2]), s(&[1, 2])),
        ])
        .unwrap();
        assert!(collapse(&k, &v, &l, &VertexOrder::identity(3)).is_err());
    }

    #[test]
    fn tampered_certificate_rejected() {
        let k = SimplicialComplex::full(3).unwrap();
        let l = SimplicialComplex::closure(3, [s(&[0])]).unwrap();
        let v = DiscreteGradient::from_pairs([(s(&[1]), s(&[0, 1])), (s(&[2]), s(&[0, 2])), (s(&[1, 2]), s(&[0, 1, 2]))])
            .unwrap();
        let mut cert = collapse(&k, &v, &l, &VertexOrder::identity(3)).unwrap();
        assert_eq!(cert.len(), 3);
        assert_eq!(euler_characteristic(critical_cells(&v, &k)), k.euler_characteristic());
        cert.steps.swap(0, 2);
        assert!(replay(&k, &cert).is_err());
    }
}

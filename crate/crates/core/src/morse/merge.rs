use std::collections::HashMap;

use crate::complex::{Simplex, SimplicialComplex};
use crate::morse::{DiscreteGradient, MorseError};

/// Unions gradients on a covering family of subcomplexes.
///
/// Checks, for every simplex of the covered complex, that exactly one part containing it is
/// minimal under inclusion, and that the simplex is critical in every other part containing it.
pub fn merge_gradients(parts: &[(SimplicialComplex, DiscreteGradient)]) -> Result<DiscreteGradient, MorseError> {
    if let [(_, only)] = parts {
        return Ok(only.clone());
    }
    let covers: Vec<HashMap<Simplex, usize>> = parts.iter().map(|(_, v)| v.cover_map()).collect();
    for (idx, (k, v)) in parts.iter().enumerate() {
        if let Some(i) = v.intervals().iter().find(|i| !k.contains(i.phi)) {
            return Err(MorseError::Merge {
                simplex: i.phi,
                parts: (idx, idx),
                reason: "interval leaves its subcomplex".into(),
            });
        }
    }

    let mut inclusion: HashMap<(usize, usize), bool> = HashMap::new();
    let mut includes = |a: usize, b: usize| -> bool {
        *inclusion.entry((a, b)).or_insert_with(|| parts[a].0.is_subcomplex_of(&parts[b].0))
    };

    let mut holders: HashMap<Simplex, Vec<usize>> = HashMap::new();
    for (idx, (k, _)) in parts.iter().enumerate() {
        for s in k.iter() {
            holders.entry(s).or_default().push(idx);
        }
    }
    let mut simplices: Vec<(&Simplex, &Vec<usize>)> = holders.iter().collect();
    simplices.sort_by(|a, b| a.0.canonical_cmp(b.0));

    for (&s, owners) in simplices {
        let minimal: Vec<usize> = owners
            .iter()
            .copied()
            .filter(|&a| !owners.iter().any(|&b| b != a && includes(b, a) && !includes(a, b)))
            .collect();
        // Equal complexes are both minimal; a single minimal part must lie below all others.
        if minimal.len() != 1 {
            return Err(MorseError::Merge {
                simplex: s,
                parts: (minimal[0], minimal[1]),
                reason: "no unique minimal subcomplex contains the simplex".into(),
            });
        }
        let home = minimal[0];
        if let Some(&other) = owners.iter().find(|&&b| b != home && covers[b].contains_key(&s)) {
            return Err(MorseError::Merge {
                simplex: s,
                parts: (home, other),
                reason: "simplex is not critical outside its minimal subcomplex".into(),
            });
        }
    }

    let mut merged = DiscreteGradient::default();
    for (_, v) in parts {
        merged.extend(v);
    }
    Ok(merged)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[usize]) -> Simplex {
        Simplex::new(v)
    }

    #[test]
    fn nested_parts_merge() {
        let k1 = SimplicialComplex::closure(3, [s(&[0, 1])]).unwrap();
        let v1 = DiscreteGradient::from_pairs([(s(&[1]), s(&[0, 1]))]).unwrap();
        let k2 = SimplicialComplex::full(3).unwrap();
        let v2 = DiscreteGradient::from_pairs([(s(&[2]), s(&[0, 2])), (s(&[1, 2]), s(&[0, 1, 2]))]).unwrap();
        let merged = merge_gradients(&[(k1, v1), (k2, v2)]).unwrap();
        assert_eq!(merged.len(), 3);
    }

    #[test]
    fn shared_pairing_rejected() {
        let k = SimplicialComplex::closure(2, [s(&[0, 1])]).unwrap();
        let k_big = SimplicialComplex::full(3).unwrap();
        let v1 = DiscreteGradient::from_pairs([(s(&[1]), s(&[0, 1]))]).unwrap();
        let v2 = DiscreteGradient::from_pairs([(s(&[0]), s(&[0, 1]))]).unwrap();
        match merge_gradients(&[(k, v1), (k_big, v2)]) {
            Err(MorseError::Merge { simplex, .. }) => assert_eq!(simplex, s(&[0])),
            other => panic!("expected a merge error, got {other:?}"),
        }
    }

    #[test]
    fn single_part_is_identity() {
        let k = SimplicialComplex::full(2).unwrap();
        let v = DiscreteGradient::from_pairs([(s(&[1]), s(&[0, 1]))]).unwrap();
        assert_eq!(merge_gradients(&[(k, v.clone())]).unwrap(), v);
    }
}

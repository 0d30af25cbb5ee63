use std::collections::HashMap;

use crate::complex::{Simplex, SimplicialComplex};
use crate::persistence::PersistenceError;

pub const DEFAULT_ORACLE_BUDGET: usize = 5000;

/// Rank over Z/2 of a matrix given as columns of row indices, via dense bitset elimination.
fn rank(columns: Vec<Vec<usize>>, rows: usize) -> usize {
    let words = rows.div_ceil(64).max(1);
    let mut basis: HashMap<usize, Vec<u64>> = HashMap::new();
    for col in columns {
        let mut v = vec![0u64; words];
        for r in col {
            v[r / 64] ^= 1 << (r % 64);
        }
        while let Some(w) = v.iter().rposition(|&x| x != 0) {
            let top = w * 64 + 63 - v[w].leading_zeros() as usize;
            match basis.get(&top) {
                Some(b) => v.iter_mut().zip(b).for_each(|(x, y)| *x ^= y),
                None => {
                    basis.insert(top, v);
                    break;
                }
            }
        }
    }
    basis.len()
}

/// Z/2 Betti numbers `beta_0 ..= beta_dim` of `k`, refusing complexes above `budget` simplices.
pub fn homology_oracle(k: &SimplicialComplex, budget: usize) -> Result<Vec<usize>, PersistenceError> {
    if k.len() > budget {
        return Err(PersistenceError::Budget { budget, what: "oracle simplices" });
    }
    let Some(dim) = k.dimension() else { return Ok(Vec::new()) };
    let mut by_dim: Vec<Vec<Simplex>> = vec![Vec::new(); dim + 1];
    for s in k.iter() {
        by_dim[s.dim()].push(s);
    }
    let index: Vec<HashMap<Simplex, usize>> =
        by_dim.iter().map(|ss| ss.iter().enumerate().map(|(i, s)| (*s, i)).collect()).collect();
    // ranks[d] = rank of the boundary map from d-chains to (d-1)-chains.
    let mut ranks = vec![0usize; dim + 2];
    for d in 1..=dim {
        let columns = by_dim[d].iter().map(|s| s.facets().map(|f| index[d - 1][&f]).collect()).collect();
        ranks[d] = rank(columns, by_dim[d - 1].len());
    }
    Ok((0..=dim).map(|d| by_dim[d].len() - ranks[d] - ranks[d + 1]).collect())
}

//! Normal form of a lattice polytope up to `GL(n, Z)` and vertex order.
//!
//! Vertex orders are scored by the facet-vertex distance matrix with its
//! rows sorted; among the orders reaching the lexicographically smallest
//! score the smallest Hermite normal form of the vertex matrix is kept.

use super::LatticePolytope;
use crate::error::{Error, Result};
use crate::linalg::{hermite_normal_form, IntMatrix};

/// Brute force over vertex orders stops being reasonable past this.
pub const MAX_VERTICES: usize = 10;

fn score(pairing: &[Vec<i64>], order: &[usize]) -> Vec<Vec<i64>> {
    let mut rows: Vec<Vec<i64>> = pairing
        .iter()
        .map(|r| order.iter().map(|&j| r[j]).collect())
        .collect();
    rows.sort_unstable();
    rows
}

/// Calls `f` on every permutation of `0..n` (Heap's algorithm).
fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize])) {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    f(&perm);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            f(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

pub(super) fn canonical_form(p: &LatticePolytope) -> Result<IntMatrix> {
    let nv = p.vertices().len();
    if nv > MAX_VERTICES {
        return Err(Error::TooManyVertices(nv));
    }
    let pairing = p.pairing_matrix();
    let mut best: Option<Vec<Vec<i64>>> = None;
    let mut optimal: Vec<Vec<usize>> = Vec::new();
    for_each_permutation(nv, |order| {
        let s = score(&pairing, order);
        match &best {
            Some(b) if s > *b => {}
            Some(b) if s == *b => optimal.push(order.to_vec()),
            _ => {
                best = Some(s);
                optimal.clear();
                optimal.push(order.to_vec());
            }
        }
    });
    let vm = p.vertex_matrix();
    let form = optimal
        .iter()
        .map(|order| hermite_normal_form(&vm.select_cols(order)).0)
        .min()
        .expect("at least one vertex order");
    Ok(form)
}

#[cfg(test)]
mod tests {
    use crate::polytope::{LatticePolytope, LatticeTag};

    fn poly(v: &[[i64; 2]]) -> LatticePolytope {
        let pts: Vec<Vec<i64>> = v.iter().map(|p| p.to_vec()).collect();
        LatticePolytope::hull(&pts, LatticeTag::m(2)).unwrap()
    }

    fn transform(v: &[[i64; 2]], g: [[i64; 2]; 2]) -> Vec<[i64; 2]> {
        v.iter()
            .map(|p| {
                [
                    g[0][0] * p[0] + g[0][1] * p[1],
                    g[1][0] * p[0] + g[1][1] * p[1],
                ]
            })
            .collect()
    }

    #[test]
    fn invariant_under_unimodular_maps() {
        let sq = [[1, 1], [1, -1], [-1, 1], [-1, -1]];
        let f = poly(&sq).canonical_form().unwrap();
        for g in [
            [[1, 1], [0, 1]],
            [[0, 1], [1, 0]],
            [[2, 1], [1, 1]],
            [[-1, 3], [0, -1]],
        ] {
            assert_eq!(poly(&transform(&sq, g)).canonical_form().unwrap(), f);
        }
    }

    #[test]
    fn square_and_diamond_differ() {
        let sq = poly(&[[1, 1], [1, -1], [-1, 1], [-1, -1]]);
        let di = poly(&[[1, 0], [0, 1], [-1, 0], [0, -1]]);
        assert_ne!(sq.canonical_form().unwrap(), di.canonical_form().unwrap());
    }
}

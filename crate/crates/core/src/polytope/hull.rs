//! Incremental beneath-beyond convex hull over exact rationals.
//!
//! The boundary is kept as a simplicial complex. A new point replaces the
//! facets it sees strictly and cones over the horizon ridges; coplanar
//! simplices are merged into facets at the end.

use std::collections::{BTreeMap, HashMap};

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{kernel, rank_rat, rat_from_int, Int, Rat};

/// `⟨normal, x⟩ + offset ≥ 0` on the inside; `normal` is a primitive
/// integer vector.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Hyperplane {
    pub normal: Vec<Int>,
    pub offset: Rat,
}

impl Hyperplane {
    pub fn eval(&self, x: &[Rat]) -> Rat {
        self.normal
            .iter()
            .zip(x)
            .fold(self.offset.clone(), |acc, (n, v)| acc + v * rat_from_int(n))
    }

    /// Hyperplane through `d` affinely independent points of `Q^d`,
    /// oriented so that `inside` evaluates positive.
    pub fn through(points: &[&[Rat]], inside: &[Rat]) -> Option<Self> {
        let d = inside.len();
        let rows: Vec<Vec<Rat>> = points
            .iter()
            .map(|p| {
                let mut r = p.to_vec();
                r.push(Rat::from_integer(1.into()));
                r
            })
            .collect();
        let k = kernel(&rows, d + 1);
        if k.len() != 1 {
            return None;
        }
        let v = &k[0];
        let scale = normal_scale(&v[..d])?;
        let mut plane = Hyperplane {
            normal: v[..d].iter().map(|x| (x * &scale).to_integer()).collect(),
            offset: &v[d] * &scale,
        };
        let s = plane.eval(inside);
        if s.is_zero() {
            return None;
        }
        if s.is_negative() {
            plane
                .normal
                .iter_mut()
                .for_each(|x| *x = -std::mem::take(x));
            plane.offset = -plane.offset;
        }
        Some(plane)
    }
}

/// Positive factor turning `v` into a primitive integer vector.
fn normal_scale(v: &[Rat]) -> Option<Rat> {
    use num_integer::Integer;
    let l = v.iter().fold(Int::from(1), |l, x| l.lcm(x.denom()));
    let g = v.iter().fold(Int::zero(), |g, x| {
        g.gcd(&(x * rat_from_int(&l)).to_integer())
    });
    if g.is_zero() {
        return None;
    }
    Some(Rat::new(l, g))
}

#[derive(Clone, Debug)]
pub struct HullFacet {
    pub plane: Hyperplane,
    /// every input point lying on the facet, ascending
    pub points: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct Hull {
    pub dim: usize,
    /// ordered lexicographically by normal
    pub facets: Vec<HullFacet>,
    /// ascending indices of the extreme points
    pub vertices: Vec<usize>,
    pub interior: Vec<Rat>,
}

/// Greedy choice of `d + 1` affinely independent points, lowest indices
/// first.
fn initial_simplex(points: &[Vec<Rat>], d: usize) -> Option<Vec<usize>> {
    let mut chosen = vec![0usize];
    let mut diffs: Vec<Vec<Rat>> = Vec::new();
    for (i, p) in points.iter().enumerate().skip(1) {
        let diff: Vec<Rat> = p.iter().zip(&points[0]).map(|(a, b)| a - b).collect();
        diffs.push(diff);
        if rank_rat(&diffs) == diffs.len() {
            chosen.push(i);
            if chosen.len() == d + 1 {
                return Some(chosen);
            }
        } else {
            diffs.pop();
        }
    }
    None
}

/// Facet plane in the integer-scaled coordinates: `⟨normal, X⟩ + offset`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct IntPlane {
    normal: Vec<Int>,
    offset: Int,
}

impl IntPlane {
    fn eval(&self, x: &[Int]) -> Int {
        self.normal
            .iter()
            .zip(x)
            .fold(self.offset.clone(), |acc, (n, v)| acc + n * v)
    }

    /// Plane through `d` integer points, positive on `inside_sum / weight`.
    fn through(points: &[&[Int]], inside_sum: &[Int], weight: &Int) -> Option<Self> {
        let d = inside_sum.len();
        let rows: Vec<Vec<Rat>> = points
            .iter()
            .map(|p| {
                p.iter()
                    .map(rat_from_int)
                    .chain([Rat::from_integer(1.into())])
                    .collect()
            })
            .collect();
        let k = kernel(&rows, d + 1);
        if k.len() != 1 {
            return None;
        }
        let v = crate::linalg::primitive(&k[0]);
        let g = v[..d]
            .iter()
            .fold(Int::zero(), |g, x| num_integer::Integer::gcd(&g, x));
        if g.is_zero() {
            return None;
        }
        // primitive normal; the offset stays integral at integer points
        let normal: Vec<Int> = v[..d].iter().map(|x| x / &g).collect();
        let offset = -normal
            .iter()
            .zip(points[0])
            .fold(Int::zero(), |acc, (n, x)| acc + n * x);
        let mut plane = IntPlane { normal, offset };
        let s = plane
            .normal
            .iter()
            .zip(inside_sum)
            .fold(&plane.offset * weight, |acc, (n, x)| acc + n * x);
        if s.is_zero() {
            return None;
        }
        if s.is_negative() {
            plane
                .normal
                .iter_mut()
                .for_each(|x| *x = -std::mem::take(x));
            plane.offset = -plane.offset;
        }
        Some(plane)
    }
}

pub fn convex_hull(points: &[Vec<Rat>]) -> Result<Hull> {
    let Some(first) = points.first() else {
        return Err(Error::NotFullDimensional);
    };
    let d = first.len();
    if d == 0 {
        return Err(Error::NotFullDimensional);
    }
    let simplex = initial_simplex(points, d).ok_or(Error::NotFullDimensional)?;
    let n = Rat::from_integer(Int::from(simplex.len()));
    let interior: Vec<Rat> = (0..d)
        .map(|k| {
            simplex
                .iter()
                .fold(Rat::zero(), |acc, &i| acc + &points[i][k])
                / &n
        })
        .collect();

    // the combinatorics is invariant under scaling to integer coordinates
    let scale = points.iter().flatten().fold(Int::from(1), |l, x| {
        num_integer::Integer::lcm(&l, x.denom())
    });
    let ipts: Vec<Vec<Int>> = points
        .iter()
        .map(|p| {
            p.iter()
                .map(|x| (x * rat_from_int(&scale)).to_integer())
                .collect()
        })
        .collect();
    let weight = Int::from(simplex.len());
    let inside_sum: Vec<Int> = (0..d)
        .map(|k| simplex.iter().map(|&i| &ipts[i][k]).sum())
        .collect();
    let plane_through = |verts: &[usize]| -> Option<IntPlane> {
        let refs: Vec<&[Int]> = verts.iter().map(|&v| ipts[v].as_slice()).collect();
        IntPlane::through(&refs, &inside_sum, &weight)
    };

    // simplicial boundary: sorted vertex lists with their hyperplanes
    let mut faces: Vec<(Vec<usize>, IntPlane)> = Vec::new();
    for skip in 0..simplex.len() {
        let verts: Vec<usize> = simplex
            .iter()
            .copied()
            .filter(|&v| v != simplex[skip])
            .collect();
        let plane = plane_through(&verts).expect("simplex facets are affinely independent");
        faces.push((verts, plane));
    }

    for (p, point) in ipts.iter().enumerate() {
        if simplex.contains(&p) {
            continue;
        }
        let visible: Vec<bool> = faces
            .iter()
            .map(|(_, h)| h.eval(point).is_negative())
            .collect();
        if !visible.iter().any(|&v| v) {
            continue;
        }
        let mut ridge_count: HashMap<Vec<usize>, usize> = HashMap::new();
        for ((verts, _), _) in faces.iter().zip(&visible).filter(|(_, &v)| v) {
            for skip in 0..verts.len() {
                let ridge: Vec<usize> = verts
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != skip)
                    .map(|(_, &v)| v)
                    .collect();
                *ridge_count.entry(ridge).or_default() += 1;
            }
        }
        let mut horizon: Vec<Vec<usize>> = ridge_count
            .into_iter()
            .filter(|(_, c)| *c == 1)
            .map(|(r, _)| r)
            .collect();
        horizon.sort();
        let mut kept: Vec<(Vec<usize>, IntPlane)> = faces
            .into_iter()
            .zip(&visible)
            .filter(|(_, &v)| !v)
            .map(|(f, _)| f)
            .collect();
        for ridge in horizon {
            let mut verts = ridge;
            verts.push(p);
            verts.sort_unstable();
            let plane = plane_through(&verts).expect("cone over horizon ridge is non-degenerate");
            kept.push((verts, plane));
        }
        faces = kept;
    }

    let mut merged: BTreeMap<IntPlane, ()> = BTreeMap::new();
    for (_, h) in faces {
        merged.insert(h, ());
    }
    let scale_rat = rat_from_int(&scale);
    let mut facets: Vec<HullFacet> = merged
        .into_keys()
        .map(|plane| {
            let on: Vec<usize> = (0..ipts.len())
                .filter(|&i| plane.eval(&ipts[i]).is_zero())
                .collect();
            let offset = rat_from_int(&plane.offset) / &scale_rat;
            HullFacet {
                plane: Hyperplane {
                    normal: plane.normal,
                    offset,
                },
                points: on,
            }
        })
        .collect();
    facets.sort_by(|a, b| a.plane.cmp(&b.plane));

    let vertices = (0..points.len())
        .filter(|&i| {
            let normals: Vec<Vec<Rat>> = facets
                .iter()
                .filter(|f| f.points.binary_search(&i).is_ok())
                .map(|f| f.plane.normal.iter().map(rat_from_int).collect())
                .collect();
            normals.len() >= d && rank_rat(&normals) == d
        })
        .collect();

    Ok(Hull {
        dim: d,
        facets,
        vertices,
        interior,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int, to_rat_vec};

    fn pts(v: &[&[i64]]) -> Vec<Vec<Rat>> {
        v.iter().map(|p| to_rat_vec(p)).collect()
    }

    #[test]
    fn square_with_interior_and_edge_points() {
        let p = pts(&[
            &[0, 0],
            &[1, 1],
            &[-1, 1],
            &[1, -1],
            &[-1, -1],
            &[0, 1],
            &[1, 0],
        ]);
        let h = convex_hull(&p).unwrap();
        assert_eq!(h.facets.len(), 4);
        assert_eq!(h.vertices, vec![1, 2, 3, 4]);
        for f in &h.facets {
            assert_eq!(f.plane.offset, Rat::from_integer(int(1)));
        }
    }

    #[test]
    fn cube_merges_coplanar_triangles() {
        let mut v = Vec::new();
        for x in [-1, 1] {
            for y in [-1, 1] {
                for z in [-1, 1] {
                    v.push(vec![x, y, z]);
                }
            }
        }
        let p: Vec<Vec<Rat>> = v.iter().map(|q| to_rat_vec(q)).collect();
        let h = convex_hull(&p).unwrap();
        assert_eq!(h.facets.len(), 6);
        assert_eq!(h.vertices.len(), 8);
        assert!(h.facets.iter().all(|f| f.points.len() == 4));
    }

    #[test]
    fn one_dimensional() {
        let p = pts(&[&[3], &[-2], &[0], &[5]]);
        let h = convex_hull(&p).unwrap();
        assert_eq!(h.facets.len(), 2);
        assert_eq!(h.vertices, vec![1, 3]);
    }

    #[test]
    fn rejects_flat_input() {
        let p = pts(&[&[0, 0], &[1, 1], &[2, 2]]);
        assert_eq!(convex_hull(&p).unwrap_err(), Error::NotFullDimensional);
    }
}

//! Rational fans with primitive ray generators.

mod cpl;
mod subdivide;
mod support;

pub use cpl::{cpl_cone, wall_inequalities, CplCone};
pub use subdivide::{default_heights, subdivide};
pub use support::{support_function, Convexity, SupportFunction};

pub(crate) use cpl::{cone_from_ambient, eliminate};
pub(crate) use support::classify_values;

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{
    int, is_primitive_i64, lp_feasible_strict, rank_rat, to_rat_vec, IntMatrix, LinearConstraint,
    Rat, Relation,
};
use crate::polytope::{convex_hull, LatticePolytope, LatticeTag};

/// Fans with at most this many rays get the exhaustive pairwise
/// intersection check on construction.
pub const VALIDATION_RAY_LIMIT: usize = 32;

/// A cone spanned by primitive integral rays.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone {
    pub rays: Vec<Vec<i64>>,
    pub dim: usize,
}

impl Cone {
    pub fn new(rays: Vec<Vec<i64>>) -> Self {
        let dim = rank_rat(&rays.iter().map(|r| to_rat_vec(r)).collect::<Vec<_>>());
        Self { rays, dim }
    }

    pub fn is_simplicial(&self) -> bool {
        self.dim == self.rays.len()
    }

    /// Inward facet normals of a full-dimensional pointed cone:
    /// `⟨normal, x⟩ ≥ 0` on the cone.
    pub fn inequalities(&self) -> Result<Vec<Vec<i64>>> {
        let n = self.rays.first().map_or(0, Vec::len);
        if self.dim != n {
            return Err(Error::NotFullDimensional);
        }
        let mut pts = vec![vec![Rat::zero(); n]];
        pts.extend(self.rays.iter().map(|r| to_rat_vec(r)));
        let hull = convex_hull(&pts)?;
        Ok(hull
            .facets
            .iter()
            .filter(|f| f.plane.offset.is_zero())
            .map(|f| {
                f.plane
                    .normal
                    .iter()
                    .map(|v| i64::try_from(v).expect("normal fits"))
                    .collect()
            })
            .collect())
    }
}

/// Maximal cones are stored as ascending ray-index lists into a global ray
/// table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    lattice: LatticeTag,
    rays: Vec<Vec<i64>>,
    max_cones: Vec<Vec<usize>>,
    complete: bool,
}

impl Fan {
    pub fn new(
        lattice: LatticeTag,
        rays: Vec<Vec<i64>>,
        max_cones: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let n = lattice.rank;
        for r in &rays {
            if r.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: r.len(),
                });
            }
            if !is_primitive_i64(r) {
                return Err(Error::InvalidFan(format!("ray {r:?} is not primitive")));
            }
        }
        if rays.iter().collect::<BTreeSet<_>>().len() != rays.len() {
            return Err(Error::InvalidFan("duplicate rays".into()));
        }
        let mut cones: Vec<Vec<usize>> = max_cones
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c.dedup();
                c
            })
            .collect();
        cones.sort();
        cones.dedup();
        let mut used = vec![false; rays.len()];
        for c in &cones {
            if c.is_empty() {
                return Err(Error::InvalidFan("empty cone".into()));
            }
            for &i in c {
                if i >= rays.len() {
                    return Err(Error::InvalidFan(format!("ray index {i} out of range")));
                }
                used[i] = true;
            }
        }
        if let Some(i) = used.iter().position(|u| !u) {
            return Err(Error::InvalidFan(format!(
                "ray {i} lies in no maximal cone"
            )));
        }
        let mut fan = Fan {
            lattice,
            rays,
            max_cones: cones,
            complete: false,
        };
        for c in 0..fan.max_cones.len() {
            fan.check_cone_generators(c)?;
        }
        if fan.rays.len() <= VALIDATION_RAY_LIMIT {
            fan.check_intersections()?;
        }
        fan.complete = fan.compute_complete()?;
        Ok(fan)
    }

    pub fn lattice(&self) -> LatticeTag {
        self.lattice
    }

    pub fn dim(&self) -> usize {
        self.lattice.rank
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.max_cones
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn cone(&self, i: usize) -> Cone {
        Cone::new(
            self.max_cones[i]
                .iter()
                .map(|&r| self.rays[r].clone())
                .collect(),
        )
    }

    pub fn is_simplicial(&self) -> bool {
        (0..self.max_cones.len()).all(|i| self.cone(i).is_simplicial())
    }

    /// Simplicial with every maximal cone full-dimensional.
    pub fn is_pure_simplicial(&self) -> bool {
        self.max_cones.iter().all(|c| c.len() == self.dim()) && self.is_simplicial()
    }

    pub fn ray_index(&self, r: &[i64]) -> Option<usize> {
        self.rays.iter().position(|x| x == r)
    }

    /// Rows are the ray generators, so `m ↦ (⟨ray, m⟩)_ray`.
    pub fn ad_matrix(&self) -> IntMatrix {
        IntMatrix::from_i64_rows(&self.rays, self.dim())
    }

    /// Pairs of adjacent full-dimensional simplicial cones with their
    /// shared ridge.
    pub fn walls(&self) -> Vec<(usize, usize, Vec<usize>)> {
        let n = self.dim();
        let mut by_ridge: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for (ci, c) in self.max_cones.iter().enumerate() {
            if c.len() != n {
                continue;
            }
            for skip in 0..c.len() {
                let ridge: Vec<usize> = c
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != skip)
                    .map(|(_, &v)| v)
                    .collect();
                by_ridge.entry(ridge).or_default().push(ci);
            }
        }
        by_ridge
            .into_iter()
            .filter(|(_, cs)| cs.len() == 2)
            .map(|(ridge, cs)| (cs[0], cs[1], ridge))
            .collect()
    }

    /// Indices of maximal cones containing `x` (all of them on walls).
    pub fn containing_cones(&self, x: &[i64]) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for i in 0..self.max_cones.len() {
            if cone_contains(&self.cone(i), x)? {
                out.push(i);
            }
        }
        Ok(out)
    }

    fn check_cone_generators(&self, c: usize) -> Result<()> {
        let cone = self.cone(c);
        if cone.is_simplicial() {
            return Ok(());
        }
        // each generator must be extreme: not in the cone of the others
        for (k, r) in cone.rays.iter().enumerate() {
            let others: Vec<&Vec<i64>> = cone
                .rays
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != k)
                .map(|(_, v)| v)
                .collect();
            if in_cone_lp(&others, r) {
                return Err(Error::InvalidFan(format!(
                    "ray {r:?} is not extreme in cone {c}"
                )));
            }
        }
        Ok(())
    }

    /// Every pair of maximal cones must meet in a common face, witnessed by
    /// a separating functional vanishing exactly on the shared rays.
    fn check_intersections(&self) -> Result<()> {
        let n = self.dim();
        for a in 0..self.max_cones.len() {
            for b in a + 1..self.max_cones.len() {
                let (ca, cb) = (&self.max_cones[a], &self.max_cones[b]);
                let cons: Vec<LinearConstraint> = ca
                    .iter()
                    .map(|&r| (r, cb.binary_search(&r).is_ok(), 1))
                    .chain(
                        cb.iter()
                            .filter(|r| ca.binary_search(r).is_err())
                            .map(|&r| (r, false, -1)),
                    )
                    .map(|(r, shared, s)| {
                        let coeffs: Vec<Rat> = self.rays[r]
                            .iter()
                            .map(|&v| Rat::from_integer(int(v * s)))
                            .collect();
                        let rel = if shared { Relation::Eq } else { Relation::Gt };
                        LinearConstraint::homogeneous(coeffs, rel)
                    })
                    .collect();
                if lp_feasible_strict(n, &cons).is_err() {
                    return Err(Error::InvalidFan(format!(
                        "cones {a} and {b} do not meet in a common face"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Complete when every maximal cone is full-dimensional and every facet
    /// of a maximal cone is shared by exactly two of them.
    fn compute_complete(&self) -> Result<bool> {
        let n = self.dim();
        let mut facet_count: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for (ci, c) in self.max_cones.iter().enumerate() {
            let cone = self.cone(ci);
            if cone.dim != n {
                return Ok(false);
            }
            if cone.is_simplicial() {
                for skip in 0..c.len() {
                    let f: Vec<usize> = c
                        .iter()
                        .enumerate()
                        .filter(|&(k, _)| k != skip)
                        .map(|(_, &v)| v)
                        .collect();
                    *facet_count.entry(f).or_default() += 1;
                }
            } else {
                for normal in cone.inequalities()? {
                    let f: Vec<usize> = c
                        .iter()
                        .copied()
                        .filter(|&r| crate::linalg::dot_i64(&normal, &self.rays[r]) == 0)
                        .collect();
                    *facet_count.entry(f).or_default() += 1;
                }
            }
        }
        Ok(!facet_count.is_empty() && facet_count.values().all(|&k| k == 2))
    }
}

fn in_cone_lp(gens: &[&Vec<i64>], x: &[i64]) -> bool {
    // x = Σ λ_i g_i with λ ≥ 0
    let k = gens.len();
    let mut cons: Vec<LinearConstraint> = (0..x.len())
        .map(|row| {
            let coeffs = gens
                .iter()
                .map(|g| Rat::from_integer(int(g[row])))
                .collect();
            LinearConstraint::new(coeffs, Rat::from_integer(int(-x[row])), Relation::Eq)
        })
        .collect();
    for i in 0..k {
        let mut e = vec![Rat::zero(); k];
        e[i] = Rat::from_integer(1.into());
        cons.push(LinearConstraint::homogeneous(e, Relation::Geq));
    }
    lp_feasible_strict(k, &cons).is_ok()
}

pub(crate) fn cone_contains(cone: &Cone, x: &[i64]) -> Result<bool> {
    if cone.is_simplicial() && cone.dim == x.len() {
        let rows: Vec<Vec<Rat>> = (0..x.len())
            .map(|i| {
                cone.rays
                    .iter()
                    .map(|r| Rat::from_integer(int(r[i])))
                    .collect()
            })
            .collect();
        let lambda = crate::linalg::solve(&rows, cone.rays.len(), &to_rat_vec(x))?;
        return Ok(lambda.iter().all(|l| *l >= Rat::zero()));
    }
    if cone.dim == x.len() {
        return Ok(cone
            .inequalities()?
            .iter()
            .all(|n| crate::linalg::dot_i64(n, x) >= 0));
    }
    let gens: Vec<&Vec<i64>> = cone.rays.iter().collect();
    Ok(in_cone_lp(&gens, x))
}

/// Complete fan of normal cones of the vertices; the rays are the facet
/// normals of `p`, in the dual lattice.
pub fn normal_fan(p: &LatticePolytope) -> Result<Fan> {
    let rays: Vec<Vec<i64>> = p.facets().iter().map(|f| f.normal.clone()).collect();
    let cones: Vec<Vec<usize>> = p
        .vertices()
        .iter()
        .map(|v| {
            (0..p.facets().len())
                .filter(|&i| p.facets()[i].slack(v) == 0)
                .collect()
        })
        .collect();
    Fan::new(p.lattice().dual(), rays, cones)
}

/// Fan of cones over the proper faces of a polytope with the origin in its
/// interior, assuming its vertices are primitive.
pub fn face_fan(p: &LatticePolytope) -> Result<Fan> {
    if !p.origin_interior() {
        return Err(Error::OriginNotInterior);
    }
    let rays = p.vertices().to_vec();
    let cones = p
        .facets()
        .iter()
        .map(|f| {
            (0..rays.len())
                .filter(|&i| f.slack(&rays[i]) == 0)
                .collect()
        })
        .collect();
    Fan::new(p.lattice(), rays, cones)
}

//! Full-dimensional lattice polytopes with paired vertex and facet
//! descriptions, polar duality and lattice point classification.

mod hull;
mod normal_form;
mod points;

pub use hull::{convex_hull, Hull, HullFacet, Hyperplane};
pub use points::{lattice_points_in, PointClassification};

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{dot_i64, int_to_i64, rank_rat, to_rat_vec, IntMatrix, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LatticeName {
    M,
    N,
}

/// Which of the two dual lattices a vector lives in, and its rank.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LatticeTag {
    pub name: LatticeName,
    pub rank: usize,
}

impl LatticeTag {
    pub fn m(rank: usize) -> Self {
        Self {
            name: LatticeName::M,
            rank,
        }
    }

    pub fn n(rank: usize) -> Self {
        Self {
            name: LatticeName::N,
            rank,
        }
    }

    pub fn dual(self) -> Self {
        let name = match self.name {
            LatticeName::M => LatticeName::N,
            LatticeName::N => LatticeName::M,
        };
        Self {
            name,
            rank: self.rank,
        }
    }

    pub fn pairs_with(self, other: LatticeTag) -> bool {
        self.dual() == other
    }
}

impl fmt::Display for LatticeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}(rank {})", self.name, self.rank)
    }
}

/// `⟨normal, y⟩ ≥ −offset`, with `normal` primitive in the dual lattice.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Facet {
    pub normal: Vec<i64>,
    pub offset: i64,
}

impl Facet {
    /// Lattice distance of `y` above the facet hyperplane.
    pub fn slack(&self, y: &[i64]) -> i64 {
        dot_i64(&self.normal, y) + self.offset
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub dim: usize,
    pub vertices: Vec<usize>,
    pub facets: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct LatticePolytope {
    lattice: LatticeTag,
    vertices: Vec<Vec<i64>>,
    facets: Vec<Facet>,
    faces: OnceLock<Vec<Face>>,
}

impl PartialEq for LatticePolytope {
    fn eq(&self, other: &Self) -> bool {
        self.lattice == other.lattice
            && self.vertices == other.vertices
            && self.facets == other.facets
    }
}

impl Eq for LatticePolytope {}

impl LatticePolytope {
    /// Convex hull of integral points. Vertices come out in lexicographic
    /// order, facets ordered by normal.
    pub fn hull(points: &[Vec<i64>], lattice: LatticeTag) -> Result<Self> {
        if let Some(bad) = points.iter().find(|p| p.len() != lattice.rank) {
            return Err(Error::DimensionMismatch {
                expected: lattice.rank,
                found: bad.len(),
            });
        }
        let mut pts = points.to_vec();
        pts.sort();
        pts.dedup();
        let rat_pts: Vec<Vec<Rat>> = pts.iter().map(|p| to_rat_vec(p)).collect();
        let hull = convex_hull(&rat_pts)?;
        let vertices: Vec<Vec<i64>> = hull.vertices.iter().map(|&i| pts[i].clone()).collect();
        let facets = hull
            .facets
            .iter()
            .map(|f| {
                let normal = f
                    .plane
                    .normal
                    .iter()
                    .map(|v| int_to_i64(v).expect("normal fits in i64"))
                    .collect();
                let offset = int_to_i64(&f.plane.offset.to_integer()).expect("offset fits in i64");
                Facet { normal, offset }
            })
            .collect();
        let p = Self {
            lattice,
            vertices,
            facets,
            faces: OnceLock::new(),
        };
        debug_assert!(p.check_consistency());
        Ok(p)
    }

    fn check_consistency(&self) -> bool {
        let d = self.dim();
        self.facets.iter().all(|f| {
            self.vertices.iter().all(|v| f.slack(v) >= 0) && {
                let on: Vec<Vec<Rat>> = self
                    .vertices
                    .iter()
                    .filter(|v| f.slack(v) == 0)
                    .map(|v| to_rat_vec(v))
                    .collect();
                let diffs: Vec<Vec<Rat>> = on
                    .iter()
                    .skip(1)
                    .map(|p| p.iter().zip(&on[0]).map(|(a, b)| a - b).collect())
                    .collect();
                rank_rat(&diffs) == d - 1
            }
        })
    }

    pub fn lattice(&self) -> LatticeTag {
        self.lattice
    }

    pub fn dim(&self) -> usize {
        self.lattice.rank
    }

    pub fn vertices(&self) -> &[Vec<i64>] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn contains(&self, y: &[i64]) -> bool {
        self.facets.iter().all(|f| f.slack(y) >= 0)
    }

    pub fn origin_interior(&self) -> bool {
        self.facets.iter().all(|f| f.offset > 0)
    }

    /// Reflexive: origin interior and every facet at lattice distance one.
    pub fn is_reflexive(&self) -> bool {
        self.origin_interior() && self.facets.iter().all(|f| f.offset == 1)
    }

    /// `{x : ⟨x, y⟩ ≥ −1 for all y in P}` in the dual lattice. Its vertices
    /// are the facet normals scaled by their offsets.
    pub fn polar(&self) -> Result<LatticePolytope> {
        if !self.origin_interior() {
            return Err(Error::OriginNotInterior);
        }
        let mut verts = Vec::with_capacity(self.facets.len());
        for f in &self.facets {
            if f.normal.iter().any(|c| c % f.offset != 0) {
                return Err(Error::PolarNotIntegral);
            }
            verts.push(f.normal.iter().map(|c| c / f.offset).collect::<Vec<i64>>());
        }
        LatticePolytope::hull(&verts, self.lattice.dual())
    }

    /// Facet-vertex incidence matrix of lattice distances.
    pub fn pairing_matrix(&self) -> Vec<Vec<i64>> {
        self.facets
            .iter()
            .map(|f| self.vertices.iter().map(|v| f.slack(v)).collect())
            .collect()
    }

    /// Vertex matrix with one column per vertex.
    pub fn vertex_matrix(&self) -> IntMatrix {
        IntMatrix::from_i64_rows(&self.vertices, self.dim()).transpose()
    }

    /// All nonempty faces, the polytope itself included, ordered by
    /// dimension then vertex list.
    pub fn faces(&self) -> &[Face] {
        self.faces.get_or_init(|| self.compute_faces())
    }

    fn compute_faces(&self) -> Vec<Face> {
        use std::collections::BTreeSet;
        let incidence: Vec<BTreeSet<usize>> = self
            .facets
            .iter()
            .map(|f| {
                (0..self.vertices.len())
                    .filter(|&i| f.slack(&self.vertices[i]) == 0)
                    .collect()
            })
            .collect();
        let mut found: BTreeSet<Vec<usize>> = incidence
            .iter()
            .map(|s| s.iter().copied().collect())
            .collect();
        let mut frontier: Vec<BTreeSet<usize>> = incidence.clone();
        while let Some(face) = frontier.pop() {
            for facet in &incidence {
                let meet: BTreeSet<usize> = face.intersection(facet).copied().collect();
                if meet.is_empty() {
                    continue;
                }
                let key: Vec<usize> = meet.iter().copied().collect();
                if found.insert(key) {
                    frontier.push(meet);
                }
            }
        }
        found.insert((0..self.vertices.len()).collect());
        let mut faces: Vec<Face> = found
            .into_iter()
            .map(|verts| {
                let pts: Vec<Vec<Rat>> = verts
                    .iter()
                    .map(|&i| to_rat_vec(&self.vertices[i]))
                    .collect();
                let diffs: Vec<Vec<Rat>> = pts
                    .iter()
                    .skip(1)
                    .map(|p| p.iter().zip(&pts[0]).map(|(a, b)| a - b).collect())
                    .collect();
                let facets = (0..self.facets.len())
                    .filter(|&f| verts.iter().all(|v| incidence[f].contains(v)))
                    .collect();
                Face {
                    dim: rank_rat(&diffs),
                    vertices: verts,
                    facets,
                }
            })
            .collect();
        faces.sort_by(|a, b| a.dim.cmp(&b.dim).then_with(|| a.vertices.cmp(&b.vertices)));
        faces
    }

    /// Every lattice point, in lexicographic order.
    pub fn lattice_points(&self) -> Vec<Vec<i64>> {
        let cons: Vec<(Vec<Rat>, Rat)> = self
            .facets
            .iter()
            .map(|f| (to_rat_vec(&f.normal), Rat::from_integer(f.offset.into())))
            .collect();
        lattice_points_in(self.dim(), &cons).expect("polytopes are bounded")
    }

    pub fn classify_points(&self) -> Result<PointClassification> {
        if !self.is_reflexive() {
            return Err(Error::NotReflexive);
        }
        Ok(PointClassification::of(self))
    }

    /// Normal form under lattice automorphisms and vertex reordering.
    pub fn canonical_form(&self) -> Result<IntMatrix> {
        normal_form::canonical_form(self)
    }
}

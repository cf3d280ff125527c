//! Torus-invariant Weil divisors: class groups, sections and roots.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::linalg::{
    cokernel, dot_i64, int, lp_feasible_strict, rank, to_int_vec, CokernelPresentation, Int,
    LinearConstraint, Rat, Relation,
};
use crate::polytope::{lattice_points_in, LatticePolytope};

/// `Z^Ξ / M` presented by the Smith form of the ray-evaluation map.
pub type ClassGroupPresentation = CokernelPresentation;

/// `Σ d_a D_a`, with one coefficient per ray of the fan in ray order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToricDivisor {
    fan: Fan,
    coefficients: Vec<i64>,
}

impl ToricDivisor {
    pub fn new(fan: &Fan, coefficients: Vec<i64>) -> Result<Self> {
        if coefficients.len() != fan.rays().len() {
            return Err(Error::DimensionMismatch {
                expected: fan.rays().len(),
                found: coefficients.len(),
            });
        }
        Ok(Self {
            fan: fan.clone(),
            coefficients,
        })
    }

    /// `Σ D_a`.
    pub fn anticanonical(fan: &Fan) -> Self {
        Self {
            fan: fan.clone(),
            coefficients: vec![1; fan.rays().len()],
        }
    }

    /// The divisor of the character `χ^m`, `Σ ⟨a, m⟩ D_a`.
    pub fn principal(fan: &Fan, m: &[i64]) -> Result<Self> {
        if m.len() != fan.dim() {
            return Err(Error::DimensionMismatch {
                expected: fan.dim(),
                found: m.len(),
            });
        }
        Ok(Self {
            fan: fan.clone(),
            coefficients: fan.rays().iter().map(|a| dot_i64(a, m)).collect(),
        })
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.coefficients
    }
}

/// Coordinates of a class: free part, then torsion residues.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DivisorClass {
    pub free: Vec<Int>,
    pub torsion: Vec<Int>,
}

impl DivisorClass {
    pub fn is_zero(&self) -> bool {
        self.free.iter().chain(&self.torsion).all(|v| *v == int(0))
    }
}

pub fn class_group(fan: &Fan) -> Result<ClassGroupPresentation> {
    let ad = fan.ad_matrix();
    if rank(&ad) != fan.dim() {
        return Err(Error::RaysDoNotSpan);
    }
    Ok(cokernel(&ad))
}

pub fn divisor_class(d: &ToricDivisor) -> Result<DivisorClass> {
    Ok(class_in(&class_group(&d.fan)?, &d.coefficients))
}

pub fn class_in(pres: &ClassGroupPresentation, coefficients: &[i64]) -> DivisorClass {
    let (free, torsion) = pres.apply(&to_int_vec(coefficients));
    DivisorClass { free, torsion }
}

/// Rays that are not interior to a facet of `polar`, and the class group
/// they generate.
pub fn restrict_to_hypersurface(
    fan: &Fan,
    polar: &LatticePolytope,
) -> Result<(Vec<usize>, ClassGroupPresentation)> {
    let keep = hypersurface_rays(fan.rays(), polar)?;
    let rows: Vec<Vec<i64>> = keep.iter().map(|&i| fan.rays()[i].clone()).collect();
    let ad = crate::linalg::IntMatrix::from_i64_rows(&rows, fan.dim());
    if rank(&ad) != fan.dim() {
        return Err(Error::RaysDoNotSpan);
    }
    Ok((keep, cokernel(&ad)))
}

pub(crate) fn hypersurface_rays(rays: &[Vec<i64>], polar: &LatticePolytope) -> Result<Vec<usize>> {
    let mut keep = Vec::new();
    for (i, r) in rays.iter().enumerate() {
        if r.len() != polar.dim() {
            return Err(Error::DimensionMismatch {
                expected: polar.dim(),
                found: r.len(),
            });
        }
        if !polar.contains(r) {
            return Err(Error::RayOutsidePolar(r.clone()));
        }
        let tight = polar.facets().iter().filter(|f| f.slack(r) == 0).count();
        if tight != 1 {
            keep.push(i);
        }
    }
    Ok(keep)
}

/// Global sections of `O(D)`: the lattice points of
/// `P_D = {m : ⟨a, m⟩ ≥ -d_a}` with their Cox monomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionsBasis {
    pub divisor: ToricDivisor,
    /// `P_D ∩ M` in lexicographic order.
    pub points: Vec<Vec<i64>>,
    /// Exponents `⟨a, m⟩ + d_a`, aligned with `points`.
    pub monomials: Vec<Vec<i64>>,
    /// `P_D` itself when it is a full-dimensional lattice polytope.
    pub polytope: Option<LatticePolytope>,
}

pub fn sections(d: &ToricDivisor) -> Result<SectionsBasis> {
    let fan = &d.fan;
    let n = fan.dim();
    let cons: Vec<(Vec<Rat>, Rat)> = fan
        .rays()
        .iter()
        .zip(&d.coefficients)
        .map(|(a, &c)| (crate::linalg::to_rat_vec(a), Rat::from_integer(int(c))))
        .collect();
    let mut points = lattice_points_in(n, &cons)?;
    points.sort();
    let monomials = points
        .iter()
        .map(|m| {
            fan.rays()
                .iter()
                .zip(&d.coefficients)
                .map(|(a, c)| dot_i64(a, m) + c)
                .collect()
        })
        .collect();
    let polytope = integral_hull_if_equal(fan, &d.coefficients, &points);
    Ok(SectionsBasis {
        divisor: d.clone(),
        points,
        monomials,
        polytope,
    })
}

/// `conv(P_D ∩ M)` when it is full-dimensional and equals `P_D`.
fn integral_hull_if_equal(
    fan: &Fan,
    coefficients: &[i64],
    points: &[Vec<i64>],
) -> Option<LatticePolytope> {
    let q = LatticePolytope::hull(points, fan.lattice().dual()).ok()?;
    let n = fan.dim();
    let base: Vec<LinearConstraint> = fan
        .rays()
        .iter()
        .zip(coefficients)
        .map(|(a, &c)| {
            LinearConstraint::new(
                crate::linalg::to_rat_vec(a),
                Rat::from_integer(int(c)),
                Relation::Geq,
            )
        })
        .collect();
    // P_D ⊆ Q iff no point of P_D violates a facet of Q
    for f in q.facets() {
        let mut cons = base.clone();
        let neg: Vec<Rat> = f
            .normal
            .iter()
            .map(|&v| Rat::from_integer(int(-v)))
            .collect();
        cons.push(LinearConstraint::new(
            neg,
            Rat::from_integer(int(-f.offset)),
            Relation::Gt,
        ));
        if lp_feasible_strict(n, &cons).is_ok() {
            return None;
        }
    }
    Some(q)
}

/// Lattice vectors `m` with `⟨a, m⟩ ≤ 1` on all rays and equality on
/// exactly one, in lexicographic order.
pub fn roots(fan: &Fan) -> Result<Vec<Vec<i64>>> {
    if !fan.is_complete() {
        return Err(Error::NotComplete);
    }
    let cons: Vec<(Vec<Rat>, Rat)> = fan
        .rays()
        .iter()
        .map(|a| {
            (
                a.iter().map(|&v| Rat::from_integer(int(-v))).collect(),
                Rat::from_integer(int(1)),
            )
        })
        .collect();
    let mut out: Vec<Vec<i64>> = lattice_points_in(fan.dim(), &cons)?
        .into_iter()
        .filter(|m| fan.rays().iter().filter(|a| dot_i64(a, m) == 1).count() == 1)
        .collect();
    out.sort();
    Ok(out)
}

/// Dimension of the automorphism group of the Cox quotient presentation:
/// one per ray plus one per root.
pub fn aut_dimension(fan: &Fan) -> Result<usize> {
    Ok(fan.rays().len() + roots(fan)?.len())
}

/// Whether the family of anticanonical hypersurfaces is known to dominate
/// its moduli. Only the sufficient condition "no roots" is decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Dominance {
    Holds,
    Unknown,
    NotChecked,
}

impl Dominance {
    pub fn as_str(self) -> &'static str {
        match self {
            Dominance::Holds => "holds",
            Dominance::Unknown => "unknown",
            Dominance::NotChecked => "not-checked",
        }
    }
}

impl fmt::Display for Dominance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    use crate::fan::tests::{p112, p1xp1, p2};
    use crate::fan::{face_fan, normal_fan};
    use crate::polytope::LatticeTag;

    #[test]
    fn class_groups_of_surfaces() {
        let g = class_group(&p2()).unwrap();
        assert_eq!((g.free_rank, g.torsion.len()), (1, 0));
        let g = class_group(&p1xp1()).unwrap();
        assert_eq!((g.free_rank, g.torsion.len()), (2, 0));
        let g = class_group(&p112()).unwrap();
        let images: Vec<Int> = (0..3).map(|i| g.projection[(0, i)].clone()).collect();
        assert!(
            images == vec![int(1), int(2), int(1)] || images == vec![int(-1), int(-2), int(-1)]
        );
    }

    #[test]
    fn anticanonical_class_of_plane() {
        let c = divisor_class(&ToricDivisor::anticanonical(&p2())).unwrap();
        assert_eq!(c.free, vec![int(3)]);
        let d = ToricDivisor::new(&p112(), vec![0, 1, 0]).unwrap();
        assert_eq!(divisor_class(&d).unwrap().free, vec![int(2)]);
    }

    #[test]
    fn principal_divisors_vanish() {
        for m in [[1, 0], [0, 1], [-3, 7], [5, 5]] {
            assert!(
                divisor_class(&ToricDivisor::principal(&p112(), &m).unwrap())
                    .unwrap()
                    .is_zero()
            );
        }
    }

    #[test]
    fn rays_must_span() {
        let f = Fan::new(
            LatticeTag::n(2),
            vec![vec![1, 0], vec![-1, 0]],
            vec![vec![0], vec![1]],
        )
        .unwrap();
        assert_eq!(class_group(&f).unwrap_err(), Error::RaysDoNotSpan);
    }

    #[test]
    fn sections_of_hyperplane_and_trivial() {
        let d = ToricDivisor::new(&p2(), vec![1, 0, 0]).unwrap();
        assert_eq!(sections(&d).unwrap().points.len(), 3);
        let z = sections(&ToricDivisor::new(&p2(), vec![0, 0, 0]).unwrap()).unwrap();
        assert_eq!(z.points, vec![vec![0, 0]]);
        assert!(z.polytope.is_none());
    }

    #[test]
    fn anticanonical_sections_recover_polytope() {
        let p = LatticePolytope::hull(&[vec![2, -1], vec![-1, 2], vec![-1, -1]], LatticeTag::m(2))
            .unwrap();
        let s = sections(&ToricDivisor::anticanonical(&normal_fan(&p).unwrap())).unwrap();
        assert_eq!(s.polytope.as_ref(), Some(&p));
        assert_eq!(s.points.len(), 10);
        assert!(s.monomials.iter().flatten().all(|&e| e >= 0));
    }

    #[test]
    fn weighted_sections_have_rational_vertex() {
        // O(D_(1,0)) on P(1,1,2): P_D has the vertex (-1, 1/2)
        let d = ToricDivisor::new(&p112(), vec![1, 0, 0]).unwrap();
        let s = sections(&d).unwrap();
        assert_eq!(s.points, vec![vec![-1, 0], vec![0, 0]]);
        assert!(s.polytope.is_none());
    }

    #[test]
    fn roots_of_small_fans() {
        let r = roots(&p2()).unwrap();
        assert_eq!(r.len(), 6);
        assert_eq!(aut_dimension(&p2()).unwrap(), 9);
        assert_eq!(aut_dimension(&p1xp1()).unwrap(), 8);
    }

    /// Roots by scanning a box against the defining conditions.
    fn roots_by_scan(fan: &Fan, bound: i64) -> BTreeSet<Vec<i64>> {
        let n = fan.dim();
        let mut out = BTreeSet::new();
        let side = (2 * bound + 1) as usize;
        for code in 0..side.pow(n as u32) {
            let m: Vec<i64> = (0..n)
                .map(|k| (code / side.pow(k as u32) % side) as i64 - bound)
                .collect();
            let vals: Vec<i64> = fan
                .rays()
                .iter()
                .map(|r| r.iter().zip(&m).map(|(a, b)| a * b).sum())
                .collect();
            if vals.iter().all(|&v| v <= 1) && vals.iter().filter(|&&v| v == 1).count() == 1 {
                out.insert(m);
            }
        }
        out
    }

    #[test]
    fn cube_normal_fan_has_six_roots() {
        let corners: Vec<Vec<i64>> = (0..8)
            .map(|i| {
                (0..3)
                    .map(|k| if i >> k & 1 == 1 { 1 } else { -1 })
                    .collect()
            })
            .collect();
        let cube = LatticePolytope::hull(&corners, LatticeTag::m(3)).unwrap();
        let fan = normal_fan(&cube).unwrap();
        let r: BTreeSet<Vec<i64>> = roots(&fan).unwrap().into_iter().collect();
        assert_eq!(r.len(), 6);
        assert_eq!(r, roots_by_scan(&fan, 2));
        let octahedron_fan = normal_fan(&cube.polar().unwrap()).unwrap();
        assert!(roots(&octahedron_fan).unwrap().is_empty());
        assert!(roots_by_scan(&octahedron_fan, 2).is_empty());
    }

    #[test]
    fn fan_over_the_small_simplex_has_twenty_roots() {
        let mut verts: Vec<Vec<i64>> = (0..4)
            .map(|i| (0..4).map(|j| i64::from(i == j)).collect())
            .collect();
        verts.push(vec![-1; 4]);
        let simplex = LatticePolytope::hull(&verts, LatticeTag::n(4)).unwrap();
        let fan = face_fan(&simplex).unwrap();
        let r: BTreeSet<Vec<i64>> = roots(&fan).unwrap().into_iter().collect();
        assert_eq!(r.len(), 20);
        assert_eq!(r, roots_by_scan(&fan, 1));
        assert_eq!(aut_dimension(&fan).unwrap(), 25);
    }

    #[test]
    fn facet_interior_rays_are_dropped() {
        let big =
            LatticePolytope::hull(&[vec![2, -1], vec![-1, 2], vec![-1, -1]], LatticeTag::n(2))
                .unwrap();
        let rays = big.classify_points().unwrap().reduced_nonzero_points();
        assert_eq!(rays.len(), 3);
        let all: Vec<Vec<i64>> = big
            .lattice_points()
            .into_iter()
            .filter(|p| p.iter().any(|&x| x != 0))
            .collect();
        let fan =
            crate::fan::subdivide(&crate::fan::face_fan(&big).unwrap(), &all, None, 0).unwrap();
        let (keep, g) = restrict_to_hypersurface(&fan, &big).unwrap();
        assert_eq!((keep.len(), g.free_rank), (3, 1));
        assert_eq!(fan.rays().len(), 9);
    }
}

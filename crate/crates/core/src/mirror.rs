//! Reflexive pairs and the monomial-divisor mirror correspondence.

use crate::divisor::{class_in, restrict_to_hypersurface, roots, DivisorClass, Dominance};
use crate::error::{Error, Result};
use crate::fan::{cone_from_ambient, normal_fan, subdivide, wall_inequalities, CplCone, Fan};
use crate::linalg::{cokernel, Int, IntMatrix, Rat};
use crate::polytope::LatticePolytope;

/// A reflexive polytope `P`, its polar, and a simplicial refinement of the
/// normal fan of `P` with rays among the lattice points of the polar.
#[derive(Clone, Debug)]
pub struct MirrorPair {
    pub p: LatticePolytope,
    pub polar: LatticePolytope,
    pub fan_x: Fan,
    /// Optional refinement of the normal fan of the polar, used for the
    /// dominance check on the mirror side.
    pub fan_y: Option<Fan>,
}

impl MirrorPair {
    /// The pair with the roles of `P` and its polar exchanged, built with
    /// default rays.
    pub fn swapped(&self, seed: u64) -> Result<MirrorPair> {
        let mut out = make_pair(&self.polar, None, None, seed)?;
        out.fan_y = Some(self.fan_x.clone());
        Ok(out)
    }

    pub fn with_fan_y(mut self, fan: Fan) -> Result<Self> {
        if fan.dim() != self.p.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.p.dim(),
                found: fan.dim(),
            });
        }
        if let Some(r) = fan.rays().iter().find(|r| !self.p.contains(r)) {
            return Err(Error::RayOutsidePolar(r.clone()));
        }
        self.fan_y = Some(fan);
        Ok(self)
    }
}

/// Rays default to the lattice points of the polar that are neither the
/// origin nor interior to a facet. An explicit choice must contain those
/// and lie among the nonzero lattice points of the polar.
pub fn make_pair(
    p: &LatticePolytope,
    ray_choice: Option<&[Vec<i64>]>,
    heights: Option<&[Rat]>,
    seed: u64,
) -> Result<MirrorPair> {
    if !p.is_reflexive() {
        return Err(Error::NotReflexive);
    }
    let polar = p.polar()?;
    let required = polar.classify_points()?.reduced_nonzero_points();
    let rays: Vec<Vec<i64>> = match ray_choice {
        None => required.clone(),
        Some(choice) => {
            if let Some(r) = required.iter().find(|r| !choice.contains(r)) {
                return Err(Error::HypothesisViolated(format!("ray choice omits {r:?}")));
            }
            if let Some(r) = choice
                .iter()
                .find(|r| r.iter().all(|&x| x == 0) || !polar.contains(r))
            {
                return Err(Error::HypothesisViolated(format!(
                    "{r:?} is not a nonzero point of the polar"
                )));
            }
            choice.to_vec()
        }
    };
    let fan_x = subdivide(&normal_fan(p)?, &rays, heights, seed)?;
    Ok(MirrorPair {
        p: p.clone(),
        polar,
        fan_x,
        fan_y: None,
    })
}

/// Rank of the toric part of the divisor class group of the hypersurface.
pub fn h11_toric(pair: &MirrorPair) -> Result<usize> {
    Ok(restrict_to_hypersurface(&pair.fan_x, &pair.polar)?
        .1
        .free_rank)
}

/// Number of polynomial deformations of the hypersurface with Newton
/// polytope `P`, counted from lattice points alone.
pub fn hd11_poly(pair: &MirrorPair) -> Result<usize> {
    let reduced = pair.p.classify_points()?.reduced_points().len();
    Ok(reduced - 1 - pair.p.dim())
}

/// Classes of the points of the polar (minus the origin and facet
/// interiors) in the cokernel shared by both sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Correspondence {
    pub points: Vec<Vec<i64>>,
    /// Class of the monomial at each point; equal to the class of the toric
    /// divisor with that ray.
    pub classes: Vec<DivisorClass>,
    pub rank: usize,
    pub torsion: Vec<Int>,
    pub dominance: Dominance,
}

pub fn correspondence(pair: &MirrorPair) -> Result<Correspondence> {
    let points = pair.polar.classify_points()?.reduced_nonzero_points();
    let (keep, _) = restrict_to_hypersurface(&pair.fan_x, &pair.polar)?;
    let mut divisor_rays: Vec<Vec<i64>> =
        keep.iter().map(|&i| pair.fan_x.rays()[i].clone()).collect();
    divisor_rays.sort();
    if divisor_rays != points {
        return Err(Error::HypothesisViolated(
            "hypersurface rays differ from the polar's reduced points".into(),
        ));
    }
    let pres = cokernel(&IntMatrix::from_i64_rows(&points, pair.p.dim()));
    let classes = (0..points.len())
        .map(|i| {
            let mut e = vec![0; points.len()];
            e[i] = 1;
            class_in(&pres, &e)
        })
        .collect();
    let y_fan = match &pair.fan_y {
        Some(f) => f.clone(),
        None => normal_fan(&pair.polar)?,
    };
    Ok(Correspondence {
        points,
        classes,
        rank: pres.free_rank,
        torsion: pres.torsion.clone(),
        dominance: dominance_status(&y_fan)?,
    })
}

/// Holds when the fan has no roots; otherwise undecided.
pub fn dominance_status(fan: &Fan) -> Result<Dominance> {
    Ok(if roots(fan)?.is_empty() {
        Dominance::Holds
    } else {
        Dominance::Unknown
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KaehlerModuliData {
    pub torus_rank: usize,
    /// Indices into the rays of the pair's fan that carry coordinates.
    pub rays: Vec<usize>,
    pub cpl: CplCone,
    pub large_radius: bool,
}

/// The cone of convex functions on the pair's fan, projected to the
/// coordinates of rays not interior to facets of the polar.
pub fn kaehler_moduli(pair: &MirrorPair) -> Result<KaehlerModuliData> {
    let (keep, pres) = restrict_to_hypersurface(&pair.fan_x, &pair.polar)?;
    let walls = wall_inequalities(&pair.fan_x)?;
    let drop: Vec<usize> = (0..pair.fan_x.rays().len())
        .filter(|i| !keep.contains(i))
        .collect();
    let projected = if drop.is_empty() {
        walls
    } else {
        crate::fan::eliminate(&walls, &drop)
    };
    let cpl = cone_from_ambient(pres, &projected);
    let large_radius = cpl.full_dimensional && cpl.is_simplicial();
    Ok(KaehlerModuliData {
        torus_rank: cpl.dim(),
        rays: keep,
        cpl,
        large_radius,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::LatticeTag;

    fn square() -> LatticePolytope {
        LatticePolytope::hull(
            &[vec![1, 1], vec![1, -1], vec![-1, 1], vec![-1, -1]],
            LatticeTag::m(2),
        )
        .unwrap()
    }

    fn p2_triangle() -> LatticePolytope {
        LatticePolytope::hull(&[vec![2, -1], vec![-1, 2], vec![-1, -1]], LatticeTag::m(2)).unwrap()
    }

    #[test]
    fn square_and_diamond() {
        let pair = make_pair(&square(), None, None, 0).unwrap();
        assert_eq!(pair.polar.vertices().len(), 4);
        assert_eq!(h11_toric(&pair).unwrap(), 2);
        assert_eq!(hd11_poly(&pair).unwrap(), 2);
        let sw = pair.swapped(0).unwrap();
        assert_eq!(h11_toric(&sw).unwrap(), 2);
        assert_eq!(hd11_poly(&sw).unwrap(), 2);
    }

    #[test]
    fn plane_cubic_correspondence() {
        let pair = make_pair(&p2_triangle(), None, None, 0).unwrap();
        let c = correspondence(&pair).unwrap();
        assert_eq!(c.points.len(), 3);
        assert_eq!(c.rank, 1);
        assert!(c.torsion.is_empty());
        // the mirror side is the fan of P^2 / (Z/3)
        assert_eq!(c.dominance, Dominance::Holds);
    }

    #[test]
    fn ray_choice_hypothesis() {
        let tri = p2_triangle().polar().unwrap();
        // P = small triangle, polar = big triangle with 6 edge-interior points
        let q = tri;
        let polar = q.polar().unwrap();
        let mut choice = polar.classify_points().unwrap().reduced_nonzero_points();
        choice.push(vec![0, -1]);
        let pair = make_pair(&q, Some(&choice), None, 0).unwrap();
        assert_eq!(pair.fan_x.rays().len(), 4);
        assert_eq!(h11_toric(&pair).unwrap(), 1);
        let k = kaehler_moduli(&pair).unwrap();
        assert_eq!(k.torus_rank, 1);
        assert!(k.cpl.full_dimensional);
        assert!(make_pair(&q, Some(&[vec![-1, -1]]), None, 0).is_err());
        assert!(make_pair(
            &q,
            Some(&[choice.clone(), vec![vec![3, 3]]].concat()),
            None,
            0
        )
        .is_err());
    }

    #[test]
    fn not_reflexive_rejected() {
        let t = LatticePolytope::hull(&[vec![4, -2], vec![-2, 4], vec![-2, -2]], LatticeTag::m(2))
            .unwrap();
        assert_eq!(
            make_pair(&t, None, None, 0).unwrap_err(),
            Error::NotReflexive
        );
    }

    #[test]
    fn refinements_give_distinct_cones_of_equal_rank() {
        let octahedron = LatticePolytope::hull(
            &[
                vec![1, 0, 0],
                vec![-1, 0, 0],
                vec![0, 1, 0],
                vec![0, -1, 0],
                vec![0, 0, 1],
                vec![0, 0, -1],
            ],
            LatticeTag::m(3),
        )
        .unwrap();
        let mut fans = Vec::new();
        let mut cones = Vec::new();
        for seed in 0..6 {
            let pair = make_pair(&octahedron, None, None, seed).unwrap();
            let k = kaehler_moduli(&pair).unwrap();
            assert_eq!(k.torus_rank, 17);
            assert!(k.cpl.full_dimensional);
            if !fans.contains(&pair.fan_x) {
                fans.push(pair.fan_x.clone());
                cones.push(k.cpl.inequalities);
            }
        }
        assert!(
            fans.len() >= 2,
            "seeds should reach more than one refinement"
        );
        for (i, a) in cones.iter().enumerate() {
            assert!(cones[i + 1..].iter().all(|b| b != a));
        }
    }

    #[test]
    fn kaehler_cone_of_square_pair() {
        let pair = make_pair(&square(), None, None, 0).unwrap();
        let k = kaehler_moduli(&pair).unwrap();
        assert_eq!(k.torus_rank, 2);
        assert!(k.large_radius);
    }
}

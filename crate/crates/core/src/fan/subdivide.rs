//! Projective simplicial refinements of fans by regular lifting.

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{classify_values, cpl_cone, Convexity, Fan};
use crate::error::{Error, Result};
use crate::linalg::{int, is_primitive_i64, lcm_denominators, solve, to_rat_vec, Rat};
use crate::polytope::convex_hull;

const ATTEMPTS: u64 = 8;
const WITNESS_HALVINGS: usize = 40;

/// Refines `fan` into a simplicial fan whose rays are exactly `ray_set`.
///
/// With explicit `heights` (one positive value per element of `ray_set`)
/// each maximal cone is subdivided by the lower faces of the lifted points
/// `r / h_r`; a non-simplicial or ray-dropping result is
/// [`Error::HeightsNotGeneric`]. Without heights, deterministic heights
/// derived from `seed` are used and retried until generic.
pub fn subdivide(
    fan: &Fan,
    ray_set: &[Vec<i64>],
    heights: Option<&[Rat]>,
    seed: u64,
) -> Result<Fan> {
    let n = fan.dim();
    for r in ray_set {
        if r.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: r.len(),
            });
        }
        if !is_primitive_i64(r) {
            return Err(Error::InvalidInput(format!(
                "ray {r:?} is not a primitive nonzero vector"
            )));
        }
    }
    for (i, r) in ray_set.iter().enumerate() {
        if ray_set[..i].contains(r) {
            return Err(Error::InvalidInput(format!("ray {r:?} listed twice")));
        }
    }
    if let Some(r) = fan.rays().iter().find(|r| !ray_set.contains(r)) {
        return Err(Error::InvalidInput(format!(
            "ray set omits the fan ray {r:?}"
        )));
    }
    let members = cone_members(fan, ray_set)?;

    if let Some(h) = heights {
        if h.len() != ray_set.len() {
            return Err(Error::DimensionMismatch {
                expected: ray_set.len(),
                found: h.len(),
            });
        }
        if h.iter().any(|v| !v.is_positive()) {
            return Err(Error::InvalidInput("heights must be positive".into()));
        }
        let cells = lifted_cells(n, ray_set, &members, h)?.ok_or_else(|| {
            Error::HeightsNotGeneric("lifting is not simplicial or drops a ray".into())
        })?;
        let out = Fan::new(fan.lattice(), ray_set.to_vec(), cells)?;
        if classify_values(&out, h)? == Convexity::StrictlyConvex
            || cpl_cone(&out)?.full_dimensional
        {
            return Ok(out);
        }
        return Err(Error::HeightsNotGeneric("refinement is not regular".into()));
    }

    let (base, linear) = base_values(fan, ray_set, &members);
    for attempt in 0..ATTEMPTS {
        let gamma = Rat::new(int(1), int(8 << attempt));
        let t = perturbations(ray_set, &base, &gamma, seed.wrapping_add(attempt));
        let g: Vec<Rat> = base.iter().zip(&t).map(|(b, t)| b * t).collect();
        let max_g = g.iter().max().cloned().unwrap_or_else(Rat::zero);
        let mut eps = Rat::one() / (Rat::from_integer(int(4)) * (Rat::one() + max_g));
        let omega =
            |eps: &Rat| -> Vec<Rat> { base.iter().zip(&g).map(|(b, g)| b + eps * g).collect() };
        // where the base is linear on each cone, eps does not change the cells
        let lifting = if linear { g.clone() } else { omega(&eps) };
        let Some(cells) = lifted_cells(n, ray_set, &members, &lifting)? else {
            continue;
        };
        let out = Fan::new(fan.lattice(), ray_set.to_vec(), cells)?;
        for _ in 0..WITNESS_HALVINGS {
            if classify_values(&out, &omega(&eps))? == Convexity::StrictlyConvex {
                return Ok(out);
            }
            eps /= Rat::from_integer(int(2));
        }
        if cpl_cone(&out)?.full_dimensional {
            return Ok(out);
        }
    }
    Err(Error::HeightsNotGeneric(
        "no generic regular refinement found".into(),
    ))
}

/// Deterministic default heights for `ray_set` over `fan`, as used by
/// [`subdivide`] on its first attempt.
pub fn default_heights(fan: &Fan, ray_set: &[Vec<i64>], seed: u64) -> Result<Vec<Rat>> {
    let members = cone_members(fan, ray_set)?;
    let (base, _) = base_values(fan, ray_set, &members);
    let t = perturbations(ray_set, &base, &Rat::new(int(1), int(8)), seed);
    let g: Vec<Rat> = base.iter().zip(&t).map(|(b, t)| b * t).collect();
    let max_g = g.iter().max().cloned().unwrap_or_else(Rat::zero);
    let eps = Rat::one() / (Rat::from_integer(int(4)) * (Rat::one() + max_g));
    Ok(base.iter().zip(&g).map(|(b, g)| b + &eps * g).collect())
}

/// For each maximal cone, the indices of `ray_set` points it contains.
fn cone_members(fan: &Fan, ray_set: &[Vec<i64>]) -> Result<Vec<Vec<usize>>> {
    let n = fan.dim();
    let mut members = Vec::with_capacity(fan.max_cones().len());
    let mut covered = vec![false; ray_set.len()];
    for i in 0..fan.max_cones().len() {
        let cone = fan.cone(i);
        if cone.dim != n {
            return Err(Error::NotFullDimensional);
        }
        let ineqs = cone.inequalities()?;
        let inside: Vec<usize> = (0..ray_set.len())
            .filter(|&p| {
                ineqs
                    .iter()
                    .all(|h| crate::linalg::dot_i64(h, &ray_set[p]) >= 0)
            })
            .collect();
        for &p in &inside {
            covered[p] = true;
        }
        members.push(inside);
    }
    if let Some(p) = covered.iter().position(|c| !c) {
        return Err(Error::PointOutsideSupport(ray_set[p].clone()));
    }
    Ok(members)
}

/// The piecewise-linear function equal to 1 on the rays of `fan`, sampled
/// at `ray_set`, and whether it exists; constant 1 otherwise.
fn base_values(fan: &Fan, ray_set: &[Vec<i64>], members: &[Vec<usize>]) -> (Vec<Rat>, bool) {
    let n = fan.dim();
    let fallback = (vec![Rat::one(); ray_set.len()], false);
    let mut vals: Vec<Option<Rat>> = vec![None; ray_set.len()];
    for (c, inside) in fan.max_cones().iter().zip(members) {
        let rows: Vec<Vec<Rat>> = c.iter().map(|&r| to_rat_vec(&fan.rays()[r])).collect();
        let Ok(u) = solve(&rows, n, &vec![Rat::one(); c.len()]) else {
            return fallback;
        };
        for &p in inside {
            let v = crate::linalg::dot_mixed(&ray_set[p], &u);
            if !v.is_positive() {
                return fallback;
            }
            vals[p] = Some(v);
        }
    }
    (
        vals.into_iter()
            .map(|v| v.unwrap_or_else(Rat::one))
            .collect(),
        true,
    )
}

/// `|p_r|² + γ ρ_r` with `p_r = r / b(r)` and `ρ_r ∈ [0, 1)` drawn from a
/// generator keyed by the seed and the coordinates of `r`.
fn perturbations(ray_set: &[Vec<i64>], base: &[Rat], gamma: &Rat, seed: u64) -> Vec<Rat> {
    ray_set
        .iter()
        .zip(base)
        .map(|(r, b)| {
            let norm2: Rat = r
                .iter()
                .map(|&x| Rat::from_integer(int(x * x)))
                .sum::<Rat>()
                / (b * b);
            let mut key = seed ^ 0x9e37_79b9_7f4a_7c15;
            for &x in r {
                key = key.rotate_left(17).wrapping_mul(0xff51_afd7_ed55_8ccd) ^ (x as u64);
            }
            let mut rng = ChaCha8Rng::seed_from_u64(key);
            let rho = Rat::new(int(rng.random_range(0..1i64 << 20)), int(1i64 << 20));
            norm2 + gamma * rho
        })
        .collect()
}

/// Cells of the subdivision of each cone into the domains of linearity of
/// the largest convex homogeneous function with the given values on the
/// rays. These are the lower facets of `cone{(r, value_r)} + R₊e_{n+1}`,
/// read off from the facets through the origin of a hull. `None` when some
/// cell is not simplicial or some point is unused.
fn lifted_cells(
    n: usize,
    ray_set: &[Vec<i64>],
    members: &[Vec<usize>],
    values: &[Rat],
) -> Result<Option<Vec<Vec<usize>>>> {
    let scale = Rat::from_integer(lcm_denominators(values));
    let mut cells = Vec::new();
    let mut used = vec![false; ray_set.len()];
    for inside in members {
        let mut up = vec![Rat::zero(); n + 1];
        up[n] = Rat::one();
        let mut pts = vec![vec![Rat::zero(); n + 1], up];
        for &p in inside {
            let mut q: Vec<Rat> = ray_set[p]
                .iter()
                .map(|&x| Rat::from_integer(int(x)))
                .collect();
            q.push(&values[p] * &scale);
            pts.push(q);
        }
        let hull = convex_hull(&pts)?;
        for f in &hull.facets {
            if !f.plane.offset.is_zero() || !f.plane.normal[n].is_positive() {
                continue;
            }
            let mut cell: Vec<usize> = f
                .points
                .iter()
                .filter(|&&k| k >= 2)
                .map(|&k| inside[k - 2])
                .collect();
            if cell.len() != n {
                return Ok(None);
            }
            cell.sort_unstable();
            for &p in &cell {
                used[p] = true;
            }
            cells.push(cell);
        }
    }
    if used.iter().any(|u| !u) {
        return Ok(None);
    }
    Ok(Some(cells))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::normal_fan;
    use crate::fan::tests::p2;
    use crate::linalg::rat;
    use crate::polytope::{LatticePolytope, LatticeTag};

    #[test]
    fn refine_projective_plane_to_hexagon() {
        let rays = vec![
            vec![1, 0],
            vec![0, 1],
            vec![-1, -1],
            vec![1, 1],
            vec![-1, 0],
            vec![0, -1],
        ];
        let f = subdivide(&p2(), &rays, None, 0).unwrap();
        assert_eq!(f.max_cones().len(), 6);
        assert!(f.is_complete() && f.is_pure_simplicial());
        assert!(cpl_cone(&f).unwrap().full_dimensional);
    }

    #[test]
    fn trivial_refinement_is_identity() {
        let f = subdivide(&p2(), p2().rays(), None, 3).unwrap();
        assert_eq!(f, p2());
    }

    #[test]
    fn explicit_heights() {
        let rays = vec![vec![1, 0], vec![0, 1], vec![-1, -1], vec![1, 1]];
        let h = vec![rat(1), rat(1), rat(1), rat(1)];
        let f = subdivide(&p2(), &rays, Some(&h), 0).unwrap();
        assert_eq!(f.max_cones().len(), 4);
        // (1,1) lifted too high is skipped
        let h = vec![rat(1), rat(1), rat(1), rat(3)];
        assert!(matches!(
            subdivide(&p2(), &rays, Some(&h), 0),
            Err(Error::HeightsNotGeneric(_))
        ));
    }

    #[test]
    fn square_normal_fan_needs_no_new_rays() {
        let sq = LatticePolytope::hull(
            &[vec![1, 1], vec![1, -1], vec![-1, 1], vec![-1, -1]],
            LatticeTag::m(2),
        )
        .unwrap();
        let nf = normal_fan(&sq).unwrap();
        let polar = sq.polar().unwrap();
        let rays = polar.classify_points().unwrap().reduced_nonzero_points();
        let f = subdivide(&nf, &rays, None, 0).unwrap();
        assert_eq!(f.rays().len(), 4);
        assert_eq!(f.max_cones().len(), 4);
    }

    #[test]
    fn rejects_point_outside_incomplete_fan() {
        let f = Fan::new(
            LatticeTag::n(2),
            vec![vec![1, 0], vec![0, 1]],
            vec![vec![0, 1]],
        )
        .unwrap();
        let e = subdivide(&f, &[vec![1, 0], vec![0, 1], vec![-1, 0]], None, 0).unwrap_err();
        assert!(matches!(e, Error::PointOutsideSupport(_)));
    }
}

use num_traits::{Signed, Zero};

use super::LatticePolytope;
use crate::error::{Error, Result};
use crate::linalg::{maximize, rat_to_i64, LinearConstraint, LpOutcome, Rat, Relation};

/// Lattice points of `{x : coeffs · x + constant ≥ 0}` in lexicographic
/// order, by recursive coordinate bounds. Each range is an exact LP optimum
/// over the constraints with the prefix substituted.
pub fn lattice_points_in(dim: usize, constraints: &[(Vec<Rat>, Rat)]) -> Result<Vec<Vec<i64>>> {
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(dim);
    recurse(dim, constraints, &mut prefix, &mut out)?;
    Ok(out)
}

fn recurse(
    dim: usize,
    constraints: &[(Vec<Rat>, Rat)],
    prefix: &mut Vec<i64>,
    out: &mut Vec<Vec<i64>>,
) -> Result<()> {
    let k = prefix.len();
    if k == dim {
        if constraints.iter().all(|(_, c)| !c.is_negative()) {
            out.push(prefix.clone());
        }
        return Ok(());
    }
    let Some((lo, hi)) = coordinate_range(dim - k, constraints)? else {
        return Ok(());
    };
    for v in lo..=hi {
        let reduced: Vec<(Vec<Rat>, Rat)> = constraints
            .iter()
            .map(|(a, c)| (a[1..].to_vec(), c + &a[0] * Rat::from_integer(v.into())))
            .collect();
        prefix.push(v);
        recurse(dim, &reduced, prefix, out)?;
        prefix.pop();
    }
    Ok(())
}

/// Integer range of the first variable, or `None` when empty.
fn coordinate_range(vars: usize, constraints: &[(Vec<Rat>, Rat)]) -> Result<Option<(i64, i64)>> {
    let (lo, hi) = if vars == 1 {
        let mut lo: Option<Rat> = None;
        let mut hi: Option<Rat> = None;
        for (a, c) in constraints {
            let a = &a[0];
            if a.is_zero() {
                if c.is_negative() {
                    return Ok(None);
                }
                continue;
            }
            let bound = -c / a;
            if a.is_positive() {
                lo = Some(lo.map_or(bound.clone(), |l| l.max(bound)));
            } else {
                hi = Some(hi.map_or(bound.clone(), |h| h.min(bound)));
            }
        }
        (lo.ok_or(Error::Unbounded)?, hi.ok_or(Error::Unbounded)?)
    } else {
        let cons: Vec<LinearConstraint> = constraints
            .iter()
            .map(|(a, c)| LinearConstraint::new(a.clone(), c.clone(), Relation::Geq))
            .collect();
        let mut e = vec![Rat::zero(); vars];
        e[0] = Rat::from_integer(1.into());
        let hi = match maximize(vars, &e, &cons) {
            LpOutcome::Optimal { value, .. } => value,
            LpOutcome::Infeasible => return Ok(None),
            LpOutcome::Unbounded => return Err(Error::Unbounded),
        };
        e[0] = -e[0].clone();
        let lo = match maximize(vars, &e, &cons) {
            LpOutcome::Optimal { value, .. } => -value,
            LpOutcome::Infeasible => return Ok(None),
            LpOutcome::Unbounded => return Err(Error::Unbounded),
        };
        (lo, hi)
    };
    let lo = rat_to_i64(&lo.ceil())
        .ok_or_else(|| Error::InvalidInput("coordinate bound overflows".into()))?;
    let hi = rat_to_i64(&hi.floor())
        .ok_or_else(|| Error::InvalidInput("coordinate bound overflows".into()))?;
    Ok((lo <= hi).then_some((lo, hi)))
}

/// Lattice points of a reflexive polytope split by the smallest face
/// containing them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointClassification {
    pub origin_interior: bool,
    pub vertices: Vec<Vec<i64>>,
    pub interior_points: Vec<Vec<i64>>,
    /// points in the relative interior of a facet
    pub facet_interior_points: Vec<Vec<i64>>,
    /// boundary points that are neither vertices nor facet-interior
    pub boundary_nonfacet_points: Vec<Vec<i64>>,
}

impl PointClassification {
    pub(super) fn of(p: &LatticePolytope) -> Self {
        let mut c = PointClassification {
            origin_interior: p.origin_interior(),
            vertices: Vec::new(),
            interior_points: Vec::new(),
            facet_interior_points: Vec::new(),
            boundary_nonfacet_points: Vec::new(),
        };
        for pt in p.lattice_points() {
            let on = p.facets().iter().filter(|f| f.slack(&pt) == 0).count();
            if p.vertices().binary_search(&pt).is_ok() {
                c.vertices.push(pt);
            } else if on == 0 {
                c.interior_points.push(pt);
            } else if on == 1 {
                c.facet_interior_points.push(pt);
            } else {
                c.boundary_nonfacet_points.push(pt);
            }
        }
        c
    }

    pub fn total(&self) -> usize {
        self.vertices.len()
            + self.interior_points.len()
            + self.facet_interior_points.len()
            + self.boundary_nonfacet_points.len()
    }

    /// All lattice points except those interior to facets, origin included,
    /// in lexicographic order.
    pub fn reduced_points(&self) -> Vec<Vec<i64>> {
        let mut v: Vec<Vec<i64>> = self
            .vertices
            .iter()
            .chain(&self.interior_points)
            .chain(&self.boundary_nonfacet_points)
            .cloned()
            .collect();
        v.sort();
        v
    }

    /// [`Self::reduced_points`] without the origin.
    pub fn reduced_nonzero_points(&self) -> Vec<Vec<i64>> {
        self.reduced_points()
            .into_iter()
            .filter(|p| p.iter().any(|&c| c != 0))
            .collect()
    }
}

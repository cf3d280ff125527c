//! Chambers of the secondary fan and their phases.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{regular_subdivision, PointConfiguration, Triangulation};
use crate::error::{Error, Result};
use crate::fan::{cone_from_ambient, wall_inequalities, CplCone, Fan};
use crate::linalg::{
    int, kernel, lp_feasible_strict, primitive, rat_from_int, solve, Int, LinearConstraint, Rat,
    Relation,
};

pub const DEFAULT_MAX_POINTS: usize = 12;

const STEP_HALVINGS: usize = 64;
const START_ATTEMPTS: u64 = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Phase {
    Geometric,
    Other,
}

impl Phase {
    pub fn as_str(self) -> &'static str {
        match self {
            Phase::Geometric => "geometric",
            Phase::Other => "other",
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A regular triangulation with the closed cone of height vectors inducing
/// it, in the coordinates of `Z^points / M⁺`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chamber {
    pub triangulation: Triangulation,
    pub cone: CplCone,
    pub phase: Phase,
}

impl Chamber {
    /// Whether the height vector lies in the interior of the chamber.
    pub fn contains_heights(&self, heights: &[Rat]) -> bool {
        self.cone
            .interior_contains(&self.cone.presentation.apply_free_rat(heights))
    }
}

/// Geometric when every cell contains the origin.
pub fn classify_phase(
    chamber: &Chamber,
    config: &PointConfiguration,
    origin_index: usize,
) -> Result<Phase> {
    if config
        .points()
        .get(origin_index)
        .is_none_or(|p| p.iter().any(|&x| x != 0))
    {
        return Err(Error::OriginMissing);
    }
    Ok(phase_of(&chamber.triangulation, Some(origin_index)))
}

fn phase_of(t: &Triangulation, origin: Option<usize>) -> Phase {
    match origin {
        Some(o) if t.cells.iter().all(|c| c.contains(&o)) => Phase::Geometric,
        _ => Phase::Other,
    }
}

/// Ambient inequalities on heights cutting out the closure of the chamber
/// of a triangulation: local folding across interior walls, and each
/// unused point lying on or above the induced piecewise-linear function.
fn chamber_inequalities(config: &PointConfiguration, t: &Triangulation) -> Vec<Vec<Rat>> {
    let n = config.len();
    let dim = config.dim() + 1;
    let mut out = Vec::new();
    for (a, b, face) in t.walls() {
        let x = *t.cells[a]
            .iter()
            .find(|v| face.binary_search(v).is_err())
            .expect("extra vertex");
        let y = *t.cells[b]
            .iter()
            .find(|v| face.binary_search(v).is_err())
            .expect("extra vertex");
        let cols: Vec<usize> = face.iter().copied().chain([x, y]).collect();
        let rows: Vec<Vec<Rat>> = (0..dim)
            .map(|i| {
                cols.iter()
                    .map(|&c| Rat::from_integer(int(config.lifted()[c][i])))
                    .collect()
            })
            .collect();
        let mut rel = kernel(&rows, cols.len())
            .into_iter()
            .next()
            .expect("circuit");
        if rel[cols.len() - 1].is_negative() {
            rel.iter_mut().for_each(|v| *v = -v.clone());
        }
        let mut ell = vec![Rat::zero(); n];
        for (c, v) in cols.iter().zip(rel) {
            ell[*c] = v;
        }
        out.push(ell);
    }
    for j in 0..n {
        if t.used_points.binary_search(&j).is_ok() {
            continue;
        }
        let (cell, lam) = t
            .cells
            .iter()
            .find_map(|c| config.coordinates_in(c, j).map(|l| (c, l)))
            .expect("triangulation covers every point");
        let mut ell = vec![Rat::zero(); n];
        ell[j] = Rat::one();
        for (v, l) in cell.iter().zip(lam) {
            ell[*v] -= l;
        }
        out.push(ell);
    }
    out
}

fn build_chamber(config: &PointConfiguration, t: Triangulation) -> Chamber {
    let ineqs = chamber_inequalities(config, &t);
    let cone = cone_from_ambient(config.presentation().clone(), &ineqs);
    let phase = phase_of(&t, config.origin_index());
    Chamber {
        triangulation: t,
        cone,
        phase,
    }
}

/// The chamber whose interior contains the given generic heights.
pub fn chamber_of(config: &PointConfiguration, heights: &[Rat]) -> Result<Chamber> {
    let sub = regular_subdivision(config, heights)?;
    let t = sub
        .into_triangulation(config)
        .ok_or(Error::NonGenericHeights)?;
    let ch = build_chamber(config, t);
    if !ch.contains_heights(heights) {
        return Err(Error::NonGenericHeights);
    }
    Ok(ch)
}

pub fn enumerate_chambers(config: &PointConfiguration) -> Result<Vec<Chamber>> {
    enumerate_chambers_with_limit(config, DEFAULT_MAX_POINTS)
}

/// All chambers of the secondary fan, found by crossing every facet of
/// every chamber found so far. Sorted by triangulation.
pub fn enumerate_chambers_with_limit(
    config: &PointConfiguration,
    limit: usize,
) -> Result<Vec<Chamber>> {
    if config.len() > limit {
        return Err(Error::ConfigurationTooLarge {
            points: config.len(),
            bound: limit,
        });
    }
    let start = starting_chamber(config)?;
    let mut cache: BTreeMap<Triangulation, Chamber> = BTreeMap::new();
    let mut found: BTreeSet<Triangulation> = BTreeSet::new();
    let mut queue = vec![start.triangulation.clone()];
    found.insert(start.triangulation.clone());
    cache.insert(start.triangulation.clone(), start);
    while let Some(key) = queue.pop() {
        let chamber = cache[&key].clone();
        for facet in &chamber.cone.inequalities {
            let next = cross_facet(config, &chamber, facet, &mut cache)?;
            if found.insert(next.clone()) {
                queue.push(next);
            }
        }
    }
    Ok(found
        .into_iter()
        .map(|t| cache.remove(&t).expect("visited chambers are cached"))
        .collect())
}

fn starting_chamber(config: &PointConfiguration) -> Result<Chamber> {
    for seed in 0..START_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h: Vec<Rat> = (0..config.len())
            .map(|_| Rat::from_integer(int(rng.random_range(0..1i64 << 30))))
            .collect();
        if let Ok(c) = chamber_of(config, &h) {
            return Ok(c);
        }
    }
    Err(Error::NonGenericHeights)
}

/// The chamber across the facet `{⟨facet, y⟩ = 0}`: a relative-interior
/// point of the facet is pushed slightly outward until it lands in a
/// chamber that shares the facet.
fn cross_facet(
    config: &PointConfiguration,
    chamber: &Chamber,
    facet: &[Int],
    cache: &mut BTreeMap<Triangulation, Chamber>,
) -> Result<Triangulation> {
    let k = chamber.cone.dim();
    let to_rat = |l: &[Int]| l.iter().map(rat_from_int).collect::<Vec<Rat>>();
    let cons: Vec<LinearConstraint> = chamber
        .cone
        .inequalities
        .iter()
        .map(|l| {
            let rel = if l.as_slice() == facet {
                Relation::Eq
            } else {
                Relation::Gt
            };
            LinearConstraint::homogeneous(to_rat(l), rel)
        })
        .collect();
    let y0 = lp_feasible_strict(k, &cons)?;
    let dir = to_rat(facet);
    let opposite: Vec<Int> = facet.iter().map(|v| -v).collect();
    let mut delta = Rat::one();
    for _ in 0..STEP_HALVINGS {
        let y1: Vec<Rat> = y0.iter().zip(&dir).map(|(a, b)| a - &delta * b).collect();
        let heights = config.presentation().lift_rat(&y1);
        if let Some(t) = regular_subdivision(config, &heights)
            .ok()
            .and_then(|s| s.into_triangulation(config))
        {
            let next = cache
                .entry(t.clone())
                .or_insert_with(|| build_chamber(config, t.clone()));
            if next.contains_heights(&heights)
                && next.cone.contains(&y0)
                && next.cone.inequalities.contains(&opposite)
            {
                return Ok(t);
            }
        }
        delta /= Rat::from_integer(int(2));
    }
    Err(Error::NonGenericHeights)
}

/// Compares the chamber with the cone of convex functions on `fan`, after
/// identifying heights `ω` with ray values `ω_a - ω_0`. Points of the
/// configuration that are not rays contribute the condition of lying on or
/// above the function.
pub fn cpl_consistency_fan(
    fan: &Fan,
    config: &PointConfiguration,
    chamber: &Chamber,
) -> Result<bool> {
    let origin = config.origin_index().ok_or(Error::OriginMissing)?;
    if chamber.phase != Phase::Geometric {
        return Err(Error::NotApplicable("chamber is not geometric".into()));
    }
    let Some(ray_pos) = fan
        .rays()
        .iter()
        .map(|r| config.points().iter().position(|p| p == r))
        .collect::<Option<Vec<_>>>()
    else {
        return Err(Error::NotApplicable(
            "fan rays are not configuration points".into(),
        ));
    };
    let induced: BTreeSet<Vec<usize>> = chamber
        .triangulation
        .cells
        .iter()
        .map(|c| c.iter().copied().filter(|&v| v != origin).collect())
        .collect();
    let fan_cells: BTreeSet<Vec<usize>> = fan
        .max_cones()
        .iter()
        .map(|c| {
            let mut v: Vec<usize> = c.iter().map(|&r| ray_pos[r]).collect();
            v.sort_unstable();
            v
        })
        .collect();
    if induced != fan_cells {
        return Err(Error::NotApplicable(
            "fan differs from the chamber's boundary fan".into(),
        ));
    }

    let n = config.len();
    let mut fan_side: Vec<Vec<Rat>> = Vec::new();
    let embed = |ell_rays: &[Rat], extra: Option<usize>| {
        let mut w = vec![Rat::zero(); n];
        for (r, v) in ell_rays.iter().enumerate() {
            w[ray_pos[r]] += v;
            w[origin] -= v;
        }
        if let Some(j) = extra {
            w[j] += Rat::one();
            w[origin] -= Rat::one();
        }
        w
    };
    for ell in wall_inequalities(fan)? {
        fan_side.push(embed(&ell, None));
    }
    for (j, p) in config.points().iter().enumerate() {
        if j == origin || ray_pos.contains(&j) {
            continue;
        }
        let cone = *fan
            .containing_cones(p)?
            .first()
            .ok_or_else(|| Error::PointOutsideSupport(p.clone()))?;
        let cone_rays = &fan.max_cones()[cone];
        let rows: Vec<Vec<Rat>> = (0..fan.dim())
            .map(|i| {
                cone_rays
                    .iter()
                    .map(|&r| Rat::from_integer(int(fan.rays()[r][i])))
                    .collect()
            })
            .collect();
        let rhs: Vec<Rat> = p.iter().map(|&x| Rat::from_integer(int(x))).collect();
        let lam = solve(&rows, cone_rays.len(), &rhs)?;
        let mut ell = vec![Rat::zero(); fan.rays().len()];
        for (&r, l) in cone_rays.iter().zip(lam) {
            ell[r] = -l;
        }
        fan_side.push(embed(&ell, Some(j)));
    }
    let fan_cone = cone_from_ambient(config.presentation().clone(), &fan_side);
    let normalize = |c: &CplCone| -> BTreeSet<Vec<Int>> {
        c.ambient_inequalities()
            .iter()
            .map(|l| primitive(&l.iter().map(rat_from_int).collect::<Vec<_>>()))
            .collect()
    };
    Ok(normalize(&fan_cone) == normalize(&chamber.cone))
}

/// [`cpl_consistency_fan`] for the fan of a mirror pair, with the
/// configuration of its rays and the origin.
pub fn cpl_consistency(
    pair: &crate::mirror::MirrorPair,
    config: &PointConfiguration,
    chamber: &Chamber,
) -> Result<bool> {
    cpl_consistency_fan(&pair.fan_x, config, chamber)
}

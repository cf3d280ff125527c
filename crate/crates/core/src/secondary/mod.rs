//! Point configurations at height one, their regular triangulations and
//! the chambers of the secondary fan.

mod chamber;

pub use chamber::{
    chamber_of, classify_phase, cpl_consistency, cpl_consistency_fan, enumerate_chambers,
    enumerate_chambers_with_limit, Chamber, Phase, DEFAULT_MAX_POINTS,
};

use std::collections::BTreeMap;

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::linalg::{cokernel, int, kernel, rank_rat, solve, CokernelPresentation, IntMatrix, Rat};
use crate::polytope::convex_hull;

/// Points `b` of a lattice embedded as `(b, 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointConfiguration {
    points: Vec<Vec<i64>>,
    lifted: Vec<Vec<i64>>,
    /// Rows span the linear relations among the lifted points.
    gale: Vec<Vec<Rat>>,
    /// `Z^points / M⁺`, coordinates of height vectors modulo affine ones.
    presentation: CokernelPresentation,
}

/// Lifts distinct points to height one; with `include_origin` the origin is
/// appended when missing.
pub fn lift(points: &[Vec<i64>], include_origin: bool) -> Result<PointConfiguration> {
    let d = points.first().map(Vec::len).ok_or(Error::RankDeficient)?;
    let mut points = points.to_vec();
    for p in &points {
        if p.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: p.len(),
            });
        }
    }
    for i in 0..points.len() {
        if points[..i].contains(&points[i]) {
            return Err(Error::DuplicatePoints);
        }
    }
    if include_origin && !points.iter().any(|p| p.iter().all(|&x| x == 0)) {
        points.push(vec![0; d]);
    }
    let lifted: Vec<Vec<i64>> = points
        .iter()
        .map(|p| p.iter().copied().chain([1]).collect())
        .collect();
    let rows: Vec<Vec<Rat>> = lifted
        .iter()
        .map(|p| crate::linalg::to_rat_vec(p))
        .collect();
    if rank_rat(&rows) != d + 1 {
        return Err(Error::RankDeficient);
    }
    let columns: Vec<Vec<Rat>> = (0..=d)
        .map(|j| rows.iter().map(|r| r[j].clone()).collect())
        .collect();
    let gale = kernel(&columns, points.len());
    let presentation = cokernel(&IntMatrix::from_i64_rows(&lifted, d + 1));
    Ok(PointConfiguration {
        points,
        lifted,
        gale,
        presentation,
    })
}

impl PointConfiguration {
    pub fn points(&self) -> &[Vec<i64>] {
        &self.points
    }

    pub fn lifted(&self) -> &[Vec<i64>] {
        &self.lifted
    }

    pub fn gale(&self) -> &[Vec<Rat>] {
        &self.gale
    }

    pub fn presentation(&self) -> &CokernelPresentation {
        &self.presentation
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Dimension of the affine span.
    pub fn dim(&self) -> usize {
        self.lifted[0].len() - 1
    }

    pub fn origin_index(&self) -> Option<usize> {
        self.points.iter().position(|p| p.iter().all(|&x| x == 0))
    }

    /// Barycentric coordinates of point `j` with respect to `cell`, when
    /// they are all nonnegative.
    pub(crate) fn coordinates_in(&self, cell: &[usize], j: usize) -> Option<Vec<Rat>> {
        let n = self.dim() + 1;
        let rows: Vec<Vec<Rat>> = (0..n)
            .map(|i| {
                cell.iter()
                    .map(|&c| Rat::from_integer(int(self.lifted[c][i])))
                    .collect()
            })
            .collect();
        let rhs: Vec<Rat> = self.lifted[j]
            .iter()
            .map(|&v| Rat::from_integer(int(v)))
            .collect();
        let lam = solve(&rows, cell.len(), &rhs).ok()?;
        lam.iter().all(|l| !l.is_negative()).then_some(lam)
    }
}

/// Maximal cells of a subdivision, each an ascending list of point indices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Subdivision {
    pub cells: Vec<Vec<usize>>,
}

impl Subdivision {
    pub fn is_triangulation(&self, config: &PointConfiguration) -> bool {
        self.cells.iter().all(|c| c.len() == config.dim() + 1)
    }

    pub fn into_triangulation(self, config: &PointConfiguration) -> Option<Triangulation> {
        if !self.is_triangulation(config) {
            return None;
        }
        let mut used: Vec<usize> = self.cells.iter().flatten().copied().collect();
        used.sort_unstable();
        used.dedup();
        Some(Triangulation {
            cells: self.cells,
            used_points: used,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triangulation {
    pub cells: Vec<Vec<usize>>,
    pub used_points: Vec<usize>,
}

impl Triangulation {
    /// Interior walls: pairs of cells sharing all but one vertex, with the
    /// shared face.
    pub fn walls(&self) -> Vec<(usize, usize, Vec<usize>)> {
        let mut by_face: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for (ci, c) in self.cells.iter().enumerate() {
            for skip in 0..c.len() {
                let f: Vec<usize> = c
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != skip)
                    .map(|(_, &v)| v)
                    .collect();
                by_face.entry(f).or_default().push(ci);
            }
        }
        by_face
            .into_iter()
            .filter(|(_, cs)| cs.len() == 2)
            .map(|(f, cs)| (cs[0], cs[1], f))
            .collect()
    }
}

/// Subdivision induced by the lower faces of the lifted points `(b, h_b)`.
pub fn regular_subdivision(config: &PointConfiguration, heights: &[Rat]) -> Result<Subdivision> {
    let n = config.len();
    if heights.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: heights.len(),
        });
    }
    let d = config.dim();
    let pts: Vec<Vec<Rat>> = config
        .points
        .iter()
        .zip(heights)
        .map(|(p, h)| {
            p.iter()
                .map(|&x| Rat::from_integer(int(x)))
                .chain([h.clone()])
                .collect()
        })
        .collect();
    let rows: Vec<Vec<Rat>> = pts
        .iter()
        .map(|p| {
            p.iter()
                .cloned()
                .chain([Rat::from_integer(int(1))])
                .collect()
        })
        .collect();
    if rank_rat(&rows) <= d + 1 {
        // affine heights: a single cell
        return Ok(Subdivision {
            cells: vec![(0..n).collect()],
        });
    }
    let hull = convex_hull(&pts)?;
    let mut cells: Vec<Vec<usize>> = hull
        .facets
        .iter()
        .filter(|f| f.plane.normal[d].is_positive())
        .map(|f| {
            let mut c = f.points.clone();
            c.sort_unstable();
            c
        })
        .collect();
    cells.sort();
    Ok(Subdivision { cells })
}

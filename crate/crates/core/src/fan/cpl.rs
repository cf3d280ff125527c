//! Cones of convex piecewise-linear functions, taken modulo linear ones.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};

use super::Fan;
use crate::error::{Error, Result};
use crate::linalg::{
    cokernel, int, kernel, lp_feasible_strict, primitive, rat_from_int, CokernelPresentation, Int,
    LinearConstraint, Rat, Relation,
};

/// A polyhedral cone `{y : ⟨λ, y⟩ ≥ 0}` in the free coordinates of a
/// cokernel presentation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CplCone {
    pub presentation: CokernelPresentation,
    /// Irredundant primitive inward normals, sorted.
    pub inequalities: Vec<Vec<Int>>,
    pub full_dimensional: bool,
}

impl CplCone {
    pub fn dim(&self) -> usize {
        self.presentation.free_rank
    }

    pub fn contains(&self, y: &[Rat]) -> bool {
        self.inequalities.iter().all(|l| eval(l, y) >= Rat::zero())
    }

    pub fn interior_contains(&self, y: &[Rat]) -> bool {
        self.inequalities.iter().all(|l| eval(l, y) > Rat::zero())
    }

    /// Simplicial when the facet normals are linearly independent.
    pub fn is_simplicial(&self) -> bool {
        let rows: Vec<Vec<Rat>> = self
            .inequalities
            .iter()
            .map(|l| l.iter().map(rat_from_int).collect())
            .collect();
        crate::linalg::rank_rat(&rows) == rows.len()
    }

    /// Inequalities pulled back to functionals on the ray coordinates.
    pub fn ambient_inequalities(&self) -> Vec<Vec<Int>> {
        self.inequalities
            .iter()
            .map(|l| self.presentation.pullback(l))
            .collect()
    }

    /// A point in the interior, when there is one.
    pub fn interior_point(&self) -> Option<Vec<Rat>> {
        lp_feasible_strict(self.dim(), &constraints(&self.inequalities, Relation::Gt)).ok()
    }
}

fn eval(l: &[Int], y: &[Rat]) -> Rat {
    l.iter()
        .zip(y)
        .fold(Rat::zero(), |acc, (a, b)| acc + rat_from_int(a) * b)
}

fn constraints(ineqs: &[Vec<Int>], rel: Relation) -> Vec<LinearConstraint> {
    ineqs
        .iter()
        .map(|l| LinearConstraint::homogeneous(l.iter().map(rat_from_int).collect(), rel))
        .collect()
}

/// Wall-crossing inequalities on ray values, one per interior ridge of a
/// complete simplicial fan: the linear relation among the rays of two
/// adjacent cones, oriented so the two non-shared rays get positive weight.
pub fn wall_inequalities(fan: &Fan) -> Result<Vec<Vec<Rat>>> {
    if !fan.is_pure_simplicial() {
        return Err(Error::NotSimplicial);
    }
    if !fan.is_complete() {
        return Err(Error::NotComplete);
    }
    let n = fan.dim();
    let mut out = Vec::new();
    for (a, b, ridge) in fan.walls() {
        let ca = &fan.max_cones()[a];
        let cb = &fan.max_cones()[b];
        let x = *ca
            .iter()
            .find(|r| ridge.binary_search(r).is_err())
            .expect("cone has an extra ray");
        let y = *cb
            .iter()
            .find(|r| ridge.binary_search(r).is_err())
            .expect("cone has an extra ray");
        let cols: Vec<usize> = ridge.iter().copied().chain([x, y]).collect();
        let rows: Vec<Vec<Rat>> = (0..n)
            .map(|i| {
                cols.iter()
                    .map(|&c| Rat::from_integer(int(fan.rays()[c][i])))
                    .collect()
            })
            .collect();
        let ker = kernel(&rows, cols.len());
        debug_assert_eq!(ker.len(), 1);
        let mut rel = ker.into_iter().next().expect("one relation");
        if rel[n - 1].is_negative() {
            rel.iter_mut().for_each(|v| *v = -v.clone());
        }
        let mut ell = vec![Rat::zero(); fan.rays().len()];
        for (c, v) in cols.iter().zip(rel) {
            ell[*c] = v;
        }
        out.push(ell);
    }
    Ok(out)
}

/// `cpl(Σ)`: strictly convex functions modulo linear ones live in the
/// interior, which is nonempty exactly when the fan is regular.
pub fn cpl_cone(fan: &Fan) -> Result<CplCone> {
    let walls = wall_inequalities(fan)?;
    let pres = cokernel(&fan.ad_matrix());
    Ok(cone_from_ambient(pres, &walls))
}

/// Rewrites functionals on the ambient space that vanish on the image of
/// the presented map into free cokernel coordinates, then prunes.
pub(crate) fn cone_from_ambient(
    presentation: CokernelPresentation,
    ambient: &[Vec<Rat>],
) -> CplCone {
    let k = presentation.free_rank;
    let mut seen = BTreeSet::new();
    for ell in ambient {
        // ℓ vanishes on the image, so ℓ(x) = ℓ(lift(π(x))).
        let lam: Vec<Rat> = (0..k)
            .map(|i| {
                ell.iter().enumerate().fold(Rat::zero(), |acc, (j, v)| {
                    acc + v * rat_from_int(&presentation.lift[(j, i)])
                })
            })
            .collect();
        if lam.iter().all(Zero::is_zero) {
            continue;
        }
        seen.insert(primitive(&lam));
    }
    let inequalities = prune_redundant(k, seen.into_iter().collect());
    let full_dimensional = lp_feasible_strict(k, &constraints(&inequalities, Relation::Gt)).is_ok();
    CplCone {
        presentation,
        inequalities,
        full_dimensional,
    }
}

/// Drops each inequality implied by the remaining ones.
fn prune_redundant(k: usize, mut ineqs: Vec<Vec<Int>>) -> Vec<Vec<Int>> {
    let mut i = 0;
    while i < ineqs.len() {
        let mut cons = constraints(
            &ineqs
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, l)| l.clone())
                .collect::<Vec<_>>(),
            Relation::Geq,
        );
        let neg: Vec<Rat> = ineqs[i].iter().map(|v| -rat_from_int(v)).collect();
        cons.push(LinearConstraint::homogeneous(neg, Relation::Gt));
        if lp_feasible_strict(k, &cons).is_err() {
            ineqs.remove(i);
        } else {
            i += 1;
        }
    }
    ineqs
}

/// Projects the homogeneous cone `{x : ⟨ℓ, x⟩ ≥ 0}` onto the coordinates
/// not in `drop`, by Fourier-Motzkin elimination.
pub(crate) fn eliminate(ineqs: &[Vec<Rat>], drop: &[usize]) -> Vec<Vec<Rat>> {
    let mut cur: Vec<Vec<Rat>> = ineqs.to_vec();
    for &k in drop {
        let (mut pos, mut neg, mut zero) = (Vec::new(), Vec::new(), Vec::new());
        for l in cur {
            if l[k].is_positive() {
                pos.push(l);
            } else if l[k].is_negative() {
                neg.push(l);
            } else {
                zero.push(l);
            }
        }
        for p in &pos {
            for q in &neg {
                let a = -q[k].clone();
                let b = p[k].clone();
                let comb: Vec<Rat> = p.iter().zip(q).map(|(x, y)| x * &a + y * &b).collect();
                if comb.iter().any(|v| !v.is_zero()) {
                    zero.push(
                        comb.iter()
                            .map(|v| rat_from_int(v.numer()) / rat_from_int(v.denom()))
                            .collect(),
                    );
                }
            }
        }
        // keep the system small by normalizing and deduplicating
        let set: BTreeSet<Vec<Int>> = zero.iter().map(|l| primitive(l)).collect();
        cur = set
            .into_iter()
            .map(|l| l.iter().map(rat_from_int).collect())
            .collect();
    }
    cur.into_iter()
        .map(|l| {
            l.into_iter()
                .enumerate()
                .filter(|(i, _)| !drop.contains(i))
                .map(|(_, v)| v)
                .collect()
        })
        .collect()
}

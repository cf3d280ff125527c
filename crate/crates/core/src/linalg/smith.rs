use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::inverse;
use super::{rat_from_int, IntMatrix, Rat};

/// `u · a · v = s` with `u`, `v` unimodular and `s` diagonal, each nonzero
/// diagonal entry dividing the next.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
    pub rank: usize,
}

impl SmithDecomposition {
    /// Nonzero diagonal entries of `s`.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.s[(i, i)].clone()).collect()
    }
}

/// Smallest absolute nonzero entry in the trailing block, first in row-major
/// order on ties.
fn smallest_pivot(s: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..s.rows() {
        for j in t..s.cols() {
            let v = &s[(i, j)];
            if v.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if s[(bi, bj)].abs() <= v.abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let (m, n) = (a.rows(), a.cols());
    let mut s = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    let mut rank = 0;
    for t in 0..m.min(n) {
        while let Some((pi, pj)) = smallest_pivot(&s, t) {
            s.swap_rows(t, pi);
            u.swap_rows(t, pi);
            s.swap_cols(t, pj);
            v.swap_cols(t, pj);
            let mut clean = true;
            for i in t + 1..m {
                let q = &s[(i, t)] / &s[(t, t)];
                let nq = -q;
                s.add_row_multiple(i, t, &nq);
                u.add_row_multiple(i, t, &nq);
                clean &= s[(i, t)].is_zero();
            }
            for j in t + 1..n {
                let q = &s[(t, j)] / &s[(t, t)];
                let nq = -q;
                s.add_col_multiple(j, t, &nq);
                v.add_col_multiple(j, t, &nq);
                clean &= s[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            let p = s[(t, t)].clone();
            let offender = (t + 1..m).find(|&i| (t + 1..n).any(|j| !s[(i, j)].is_multiple_of(&p)));
            if let Some(i) = offender {
                s.add_row_multiple(t, i, &BigInt::one());
                u.add_row_multiple(t, i, &BigInt::one());
                continue;
            }
            if p.is_negative() {
                s.negate_row(t);
                u.negate_row(t);
            }
            rank = t + 1;
            break;
        }
        if rank != t + 1 {
            break;
        }
    }
    SmithDecomposition { u, s, v, rank }
}

/// Row-style Hermite normal form: returns `(h, u)` with `u` unimodular and
/// `h = u · a` in row echelon form, pivots positive and the entries above
/// each pivot reduced into `[0, pivot)`.
pub fn hermite_normal_form(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let (m, n) = (a.rows(), a.cols());
    let mut h = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut p = 0;
    for c in 0..n {
        if p == m {
            break;
        }
        loop {
            let best = (p..m)
                .filter(|&i| !h[(i, c)].is_zero())
                .min_by(|&x, &y| h[(x, c)].abs().cmp(&h[(y, c)].abs()).then(x.cmp(&y)));
            let Some(b) = best else { break };
            h.swap_rows(p, b);
            u.swap_rows(p, b);
            let mut clean = true;
            for i in p + 1..m {
                let q = -h[(i, c)].div_floor(&h[(p, c)]);
                h.add_row_multiple(i, p, &q);
                u.add_row_multiple(i, p, &q);
                clean &= h[(i, c)].is_zero();
            }
            if clean {
                break;
            }
        }
        if h[(p, c)].is_zero() {
            continue;
        }
        if h[(p, c)].is_negative() {
            h.negate_row(p);
            u.negate_row(p);
        }
        for i in 0..p {
            let q = -h[(i, c)].div_floor(&h[(p, c)]);
            h.add_row_multiple(i, p, &q);
            u.add_row_multiple(i, p, &q);
        }
        p += 1;
    }
    (h, u)
}

/// Presentation of `Z^rows / column-span(A)` as a free part plus torsion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CokernelPresentation {
    pub ambient: usize,
    pub free_rank: usize,
    /// Torsion orders, each > 1 and dividing the next.
    pub torsion: Vec<BigInt>,
    /// `(free_rank + torsion.len()) × ambient`; the first `free_rank` rows give
    /// free coordinates, the remaining rows torsion coordinates (read modulo
    /// the matching order).
    pub projection: IntMatrix,
    /// `ambient × free_rank` integral section of the free projection.
    pub lift: IntMatrix,
}

impl CokernelPresentation {
    pub fn free_rows(&self) -> IntMatrix {
        self.projection
            .select_rows(&(0..self.free_rank).collect::<Vec<_>>())
    }

    /// Class of an ambient vector: `(free coordinates, torsion coordinates)`.
    pub fn apply(&self, x: &[BigInt]) -> (Vec<BigInt>, Vec<BigInt>) {
        let y = self.projection.mul_vec(x);
        let free = y[..self.free_rank].to_vec();
        let tors = y[self.free_rank..]
            .iter()
            .zip(&self.torsion)
            .map(|(v, d)| v.mod_floor(d))
            .collect();
        (free, tors)
    }

    /// Free coordinates of a rational ambient vector.
    pub fn apply_free_rat(&self, x: &[Rat]) -> Vec<Rat> {
        (0..self.free_rank)
            .map(|i| {
                self.projection
                    .row(i)
                    .iter()
                    .zip(x)
                    .fold(Rat::zero(), |acc, (p, v)| acc + v * rat_from_int(p))
            })
            .collect()
    }

    /// An ambient representative of the given free coordinates.
    pub fn lift_rat(&self, y: &[Rat]) -> Vec<Rat> {
        (0..self.ambient)
            .map(|i| {
                self.lift
                    .row(i)
                    .iter()
                    .zip(y)
                    .fold(Rat::zero(), |acc, (l, v)| acc + v * rat_from_int(l))
            })
            .collect()
    }

    /// Pulls a functional on free coordinates back to the ambient lattice.
    pub fn pullback(&self, functional: &[BigInt]) -> Vec<BigInt> {
        (0..self.ambient)
            .map(|j| {
                (0..self.free_rank)
                    .map(|i| &functional[i] * &self.projection[(i, j)])
                    .sum()
            })
            .collect()
    }
}

fn unimodular_inverse(u: &IntMatrix) -> IntMatrix {
    let rows: Vec<Vec<Rat>> = u
        .to_rows()
        .iter()
        .map(|r| r.iter().map(rat_from_int).collect())
        .collect();
    let inv = inverse(&rows).expect("unimodular matrix is invertible");
    let data = inv
        .into_iter()
        .map(|r| {
            r.into_iter()
                .map(|v| {
                    debug_assert!(v.is_integer());
                    v.to_integer()
                })
                .collect()
        })
        .collect();
    IntMatrix::from_rows(data, u.cols())
}

pub fn cokernel(a: &IntMatrix) -> CokernelPresentation {
    let m = a.rows();
    let snf = smith_normal_form(a);
    let r = snf.rank;
    let u_inv = unimodular_inverse(&snf.u);

    let free_idx: Vec<usize> = (r..m).collect();
    let free_block = snf.u.select_rows(&free_idx);
    // Hermite-normalize the free rows so the presentation is canonical.
    let (free_hnf, w) = hermite_normal_form(&free_block);
    let lift = if free_idx.is_empty() {
        IntMatrix::zeros(m, 0)
    } else {
        u_inv.select_cols(&free_idx).mul(&unimodular_inverse(&w))
    };

    let mut rows = free_hnf.to_rows();
    let mut torsion = Vec::new();
    for i in 0..r {
        let d = snf.s[(i, i)].clone();
        if d.is_one() {
            continue;
        }
        rows.push(snf.u.row(i).iter().map(|v| v.mod_floor(&d)).collect());
        torsion.push(d);
    }
    CokernelPresentation {
        ambient: m,
        free_rank: m - r,
        torsion,
        projection: IntMatrix::from_rows(rows, m),
        lift,
    }
}

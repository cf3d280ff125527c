use num_traits::{One, Zero};

use super::{rat_from_int, IntMatrix, Rat};
use crate::error::{Error, Result};

/// Reduced row echelon form. Returns the reduced rows and the pivot column
/// of each nonzero row.
pub fn rref(mut rows: Vec<Vec<Rat>>) -> (Vec<Vec<Rat>>, Vec<usize>) {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = Rat::one() / &rows[r][c];
        for v in rows[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in c..ncols {
                    let d = &rows[r][j] * &f;
                    rows[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

pub fn rank_rat(rows: &[Vec<Rat>]) -> usize {
    rref(rows.to_vec()).1.len()
}

pub fn rank(a: &IntMatrix) -> usize {
    rank_rat(&to_rat_rows(a))
}

fn to_rat_rows(a: &IntMatrix) -> Vec<Vec<Rat>> {
    (0..a.rows())
        .map(|i| a.row(i).iter().map(rat_from_int).collect())
        .collect()
}

/// Solves `a · x = b` over the rationals, returning a particular solution
/// with all free variables set to zero.
pub fn solve(a: &[Vec<Rat>], ncols: usize, b: &[Rat]) -> Result<Vec<Rat>> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    let aug: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (red, pivots) = rref(aug);
    if pivots.last() == Some(&ncols) {
        return Err(Error::Inconsistent);
    }
    let mut x = vec![Rat::zero(); ncols];
    for (row, &p) in red.iter().zip(&pivots) {
        x[p] = row[ncols].clone();
    }
    Ok(x)
}

pub fn solve_rational(a: &IntMatrix, b: &[Rat]) -> Result<Vec<Rat>> {
    solve(&to_rat_rows(a), a.cols(), b)
}

/// Basis of the right null space `{x : a·x = 0}`.
pub fn kernel(a: &[Vec<Rat>], ncols: usize) -> Vec<Vec<Rat>> {
    let (red, pivots) = rref(a.to_vec());
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rat::zero(); ncols];
            v[f] = Rat::one();
            for (row, &p) in red.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// Inverse of a square rational matrix, if it exists.
pub fn inverse(a: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
    let n = a.len();
    let aug: Vec<Vec<Rat>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            r
        })
        .collect();
    let (red, pivots) = rref(aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(red.into_iter().map(|r| r[n..].to_vec()).collect())
}

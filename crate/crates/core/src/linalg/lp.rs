//! Dense exact simplex with Bland's rule.

use num_traits::{One, Signed, Zero};

use super::Rat;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Geq,
    Gt,
    Eq,
}

/// `coeffs · x + constant  (≥ | > | =)  0`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearConstraint {
    pub coeffs: Vec<Rat>,
    pub constant: Rat,
    pub relation: Relation,
}

impl LinearConstraint {
    pub fn new(coeffs: Vec<Rat>, constant: Rat, relation: Relation) -> Self {
        Self {
            coeffs,
            constant,
            relation,
        }
    }

    pub fn homogeneous(coeffs: Vec<Rat>, relation: Relation) -> Self {
        Self {
            coeffs,
            constant: Rat::zero(),
            relation,
        }
    }

    pub fn evaluate(&self, x: &[Rat]) -> Rat {
        self.coeffs
            .iter()
            .zip(x)
            .fold(self.constant.clone(), |acc, (c, v)| acc + c * v)
    }

    pub fn is_satisfied(&self, x: &[Rat]) -> bool {
        let v = self.evaluate(x);
        match self.relation {
            Relation::Geq => !v.is_negative(),
            Relation::Gt => v.is_positive(),
            Relation::Eq => v.is_zero(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { point: Vec<Rat>, value: Rat },
    Infeasible,
    Unbounded,
}

struct Tableau {
    /// constraint rows; the last column holds the right-hand side
    rows: Vec<Vec<Rat>>,
    /// reduced costs (maximization: entering column has a negative entry)
    obj: Vec<Rat>,
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = Rat::one() / &self.rows[r][c];
        for v in self.rows[r].iter_mut() {
            *v *= &inv;
        }
        let prow = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, p) in row.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *v -= p * &f;
                }
            }
        }
        if !self.obj[c].is_zero() {
            let f = self.obj[c].clone();
            for (v, p) in self.obj.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *v -= p * &f;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Runs to optimality over the columns `< allowed`. Returns false when
    /// unbounded.
    fn run(&mut self, allowed: usize) -> bool {
        let rhs = self.ncols;
        loop {
            let Some(c) = (0..allowed).find(|&j| self.obj[j].is_negative()) else {
                return true;
            };
            let mut best: Option<(usize, Rat)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[c].is_positive() {
                    continue;
                }
                let ratio = &row[rhs] / &row[c];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => {
                        ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            let Some((r, _)) = best else { return false };
            self.pivot(r, c);
        }
    }
}

/// Maximizes `c · x` subject to `a · x ≤ b`, `x ≥ 0`.
fn simplex_standard(c: &[Rat], a: &[Vec<Rat>], b: &[Rat]) -> LpOutcome {
    let nx = c.len();
    let m = a.len();
    let negative: Vec<usize> = (0..m).filter(|&i| b[i].is_negative()).collect();
    let nart = negative.len();
    let ncols = nx + m + nart;
    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut art = 0;
    for i in 0..m {
        let mut row = vec![Rat::zero(); ncols + 1];
        let flip = b[i].is_negative();
        for j in 0..nx {
            row[j] = if flip {
                -a[i][j].clone()
            } else {
                a[i][j].clone()
            };
        }
        row[nx + i] = if flip { -Rat::one() } else { Rat::one() };
        row[ncols] = if flip { -b[i].clone() } else { b[i].clone() };
        if flip {
            row[nx + m + art] = Rat::one();
            basis.push(nx + m + art);
            art += 1;
        } else {
            basis.push(nx + i);
        }
        rows.push(row);
    }
    let mut t = Tableau {
        rows,
        obj: vec![Rat::zero(); ncols + 1],
        basis,
        ncols,
    };

    if nart > 0 {
        for j in nx + m..ncols {
            t.obj[j] = Rat::one();
        }
        for &i in &negative {
            for j in 0..=ncols {
                let v = t.rows[i][j].clone();
                t.obj[j] -= v;
            }
        }
        t.run(ncols);
        if t.obj[ncols].is_negative() {
            return LpOutcome::Infeasible;
        }
        // drive remaining artificial variables out of the basis
        let mut i = 0;
        while i < t.rows.len() {
            if t.basis[i] >= nx + m {
                match (0..nx + m).find(|&j| !t.rows[i][j].is_zero()) {
                    Some(j) => t.pivot(i, j),
                    None => {
                        t.rows.remove(i);
                        t.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
    }

    t.obj = vec![Rat::zero(); ncols + 1];
    for (o, cj) in t.obj.iter_mut().zip(c) {
        *o = -cj.clone();
    }
    for i in 0..t.rows.len() {
        let bj = t.basis[i];
        if bj < nx && !c[bj].is_zero() {
            let f = c[bj].clone();
            for j in 0..=ncols {
                let v = &t.rows[i][j] * &f;
                t.obj[j] += v;
            }
        }
    }
    if !t.run(nx + m) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![Rat::zero(); nx];
    for (i, &bj) in t.basis.iter().enumerate() {
        if bj < nx {
            x[bj] = t.rows[i][ncols].clone();
        }
    }
    let value = t.obj[ncols].clone();
    LpOutcome::Optimal { point: x, value }
}

/// Maximizes `objective · x` over free variables `x ∈ Q^num_vars`.
/// Strict constraints are treated as non-strict.
pub fn maximize(num_vars: usize, objective: &[Rat], constraints: &[LinearConstraint]) -> LpOutcome {
    let (c, a, b) = split_free(num_vars, objective, constraints, false);
    match simplex_standard(&c, &a, &b) {
        LpOutcome::Optimal { point, value } => LpOutcome::Optimal {
            point: merge_free(num_vars, &point),
            value,
        },
        other => other,
    }
}

/// Encodes free variables as differences of nonnegative ones and every
/// constraint as `≤` rows. With `margin` set an extra variable `t` is
/// appended and subtracted from every strict row.
fn split_free(
    n: usize,
    objective: &[Rat],
    constraints: &[LinearConstraint],
    margin: bool,
) -> (Vec<Rat>, Vec<Vec<Rat>>, Vec<Rat>) {
    let width = 2 * n + usize::from(margin);
    let mut c = vec![Rat::zero(); width];
    for (j, v) in objective.iter().enumerate() {
        c[j] = v.clone();
        c[n + j] = -v.clone();
    }
    let mut a = Vec::new();
    let mut b = Vec::new();
    let mut push = |coeffs: &[Rat], constant: &Rat, sign: bool, strict: bool| {
        // -sign*(coeffs·x) (+ t) <= sign*constant
        let mut row = vec![Rat::zero(); width];
        for (j, v) in coeffs.iter().enumerate() {
            let v = if sign { v.clone() } else { -v.clone() };
            row[j] = -v.clone();
            row[n + j] = v;
        }
        if strict && margin {
            row[2 * n] = Rat::one();
        }
        a.push(row);
        b.push(if sign {
            constant.clone()
        } else {
            -constant.clone()
        });
    };
    for con in constraints {
        assert_eq!(con.coeffs.len(), n, "constraint width mismatch");
        match con.relation {
            Relation::Geq => push(&con.coeffs, &con.constant, true, false),
            Relation::Gt => push(&con.coeffs, &con.constant, true, true),
            Relation::Eq => {
                push(&con.coeffs, &con.constant, true, false);
                push(&con.coeffs, &con.constant, false, false);
            }
        }
    }
    if margin {
        let mut row = vec![Rat::zero(); width];
        row[2 * n] = Rat::one();
        a.push(row);
        b.push(Rat::one());
    }
    (c, a, b)
}

fn merge_free(n: usize, point: &[Rat]) -> Vec<Rat> {
    (0..n).map(|j| &point[j] - &point[n + j]).collect()
}

/// Finds an exact rational point satisfying every constraint, strict ones
/// included, by maximizing a bounded margin on the strict rows.
pub fn lp_feasible_strict(num_vars: usize, constraints: &[LinearConstraint]) -> Result<Vec<Rat>> {
    let any_strict = constraints.iter().any(|c| c.relation == Relation::Gt);
    if !any_strict {
        return match maximize(num_vars, &vec![Rat::zero(); num_vars], constraints) {
            LpOutcome::Optimal { point, .. } => Ok(point),
            _ => Err(Error::Infeasible),
        };
    }
    let mut objective = vec![Rat::zero(); 2 * num_vars + 1];
    objective[2 * num_vars] = Rat::one();
    let (_, a, b) = split_free(num_vars, &vec![Rat::zero(); num_vars], constraints, true);
    match simplex_standard(&objective, &a, &b) {
        LpOutcome::Optimal { point, value } if value.is_positive() => {
            Ok(merge_free(num_vars, &point))
        }
        _ => Err(Error::Infeasible),
    }
}

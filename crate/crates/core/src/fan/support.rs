//! Piecewise-linear support functions of torus-invariant divisors.

use num_traits::{One, Zero};

use super::Fan;
use crate::error::{Error, Result};
use crate::linalg::{dot_mixed, int, lcm_denominators, solve, Int, Rat};

/// Strictness of convexity of a piecewise-linear function on a fan.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Convexity {
    StrictlyConvex,
    Convex,
    NotConvex,
}

/// The function `ψ` linear on each maximal cone with `ψ(a) = -d_a` on the
/// ray generators of `D = Σ d_a D_a`.
#[derive(Clone, Debug)]
pub struct SupportFunction {
    fan: Fan,
    coefficients: Vec<i64>,
    /// One functional `u_σ` per maximal cone, with `ψ = ⟨·, u_σ⟩` on `σ`.
    functionals: Vec<Vec<Rat>>,
}

pub fn support_function(fan: &Fan, coefficients: &[i64]) -> Result<SupportFunction> {
    if coefficients.len() != fan.rays().len() {
        return Err(Error::DimensionMismatch {
            expected: fan.rays().len(),
            found: coefficients.len(),
        });
    }
    let values: Vec<Rat> = coefficients
        .iter()
        .map(|&d| Rat::from_integer(int(-d)))
        .collect();
    let functionals = cone_functionals(fan, &values)?;
    Ok(SupportFunction {
        fan: fan.clone(),
        coefficients: coefficients.to_vec(),
        functionals,
    })
}

/// Solves `⟨a, u_σ⟩ = values[a]` for the rays of each maximal cone.
pub(crate) fn cone_functionals(fan: &Fan, values: &[Rat]) -> Result<Vec<Vec<Rat>>> {
    let n = fan.dim();
    if !fan.is_pure_simplicial() {
        return Err(Error::NotSimplicial);
    }
    fan.max_cones()
        .iter()
        .map(|c| {
            let rows: Vec<Vec<Rat>> = c
                .iter()
                .map(|&r| {
                    fan.rays()[r]
                        .iter()
                        .map(|&v| Rat::from_integer(int(v)))
                        .collect()
                })
                .collect();
            let rhs: Vec<Rat> = c.iter().map(|&r| values[r].clone()).collect();
            solve(&rows, n, &rhs)
        })
        .collect()
}

/// Convexity of the function with the given ray values, where convex means
/// `η(a) ≥ ⟨a, u_σ⟩` for every ray `a` and cone `σ`; strict when equality
/// holds only for `a ∈ σ`.
pub(crate) fn classify_values(fan: &Fan, values: &[Rat]) -> Result<Convexity> {
    let functionals = cone_functionals(fan, values)?;
    Ok(classify_with(fan, &functionals, values))
}

fn classify_with(fan: &Fan, functionals: &[Vec<Rat>], values: &[Rat]) -> Convexity {
    if fan.is_complete() && fan.is_pure_simplicial() {
        return classify_across_walls(fan, functionals, values);
    }
    let mut strict = true;
    for (c, u) in fan.max_cones().iter().zip(functionals) {
        for (a, ray) in fan.rays().iter().enumerate() {
            if c.binary_search(&a).is_ok() {
                continue;
            }
            let diff = &values[a] - dot_mixed(ray, u);
            if diff < Rat::zero() {
                return Convexity::NotConvex;
            }
            if diff.is_zero() {
                strict = false;
            }
        }
    }
    if strict {
        Convexity::StrictlyConvex
    } else {
        Convexity::Convex
    }
}

/// On a complete simplicial fan local convexity across every wall is
/// global convexity, and strictness is also decided wall by wall.
fn classify_across_walls(fan: &Fan, functionals: &[Vec<Rat>], values: &[Rat]) -> Convexity {
    let mut strict = true;
    for (a, b, ridge) in fan.walls() {
        let y = *fan.max_cones()[b]
            .iter()
            .find(|r| ridge.binary_search(r).is_err())
            .expect("cone has an extra ray");
        let diff = &values[y] - dot_mixed(&fan.rays()[y], &functionals[a]);
        if diff < Rat::zero() {
            return Convexity::NotConvex;
        }
        if diff.is_zero() {
            strict = false;
        }
    }
    if strict {
        Convexity::StrictlyConvex
    } else {
        Convexity::Convex
    }
}

impl SupportFunction {
    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.coefficients
    }

    pub fn functionals(&self) -> &[Vec<Rat>] {
        &self.functionals
    }

    /// Value at `x`, using any maximal cone that contains it.
    pub fn evaluate(&self, x: &[i64]) -> Result<Rat> {
        let cones = self.fan.containing_cones(x)?;
        let c = cones
            .first()
            .ok_or_else(|| Error::PointOutsideSupport(x.to_vec()))?;
        Ok(dot_mixed(x, &self.functionals[*c]))
    }

    /// Cartier exactly when every `u_σ` is integral.
    pub fn is_cartier(&self) -> bool {
        self.functionals.iter().flatten().all(|v| v.is_integer())
    }

    /// Smallest `k ≥ 1` with `kD` Cartier.
    pub fn cartier_index(&self) -> Int {
        self.functionals.iter().fold(Int::one(), |l, u| {
            num_integer::Integer::lcm(&l, &lcm_denominators(u))
        })
    }

    /// Convexity of `ψ`, or of `-ψ` when `negate` is set.
    pub fn convexity(&self, negate: bool) -> Convexity {
        let sign = if negate { -1 } else { 1 };
        let values: Vec<Rat> = self
            .coefficients
            .iter()
            .map(|&d| Rat::from_integer(int(-d * sign)))
            .collect();
        let functionals: Vec<Vec<Rat>> = if negate {
            self.functionals
                .iter()
                .map(|u| u.iter().map(|v| -v).collect())
                .collect()
        } else {
            self.functionals.clone()
        };
        classify_with(&self.fan, &functionals, &values)
    }
}

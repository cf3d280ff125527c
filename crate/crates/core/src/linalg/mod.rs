//! Exact integer and rational linear algebra.
//!
//! Everything here works over [`BigInt`] and [`BigRational`]; there is no
//! floating point anywhere in the crate.

mod lp;
mod matrix;
mod rational;
mod smith;

pub use lp::{lp_feasible_strict, maximize, LinearConstraint, LpOutcome, Relation};
pub use matrix::IntMatrix;
pub use rational::{inverse, kernel, rank, rank_rat, rref, solve, solve_rational};
pub use smith::{
    cokernel, hermite_normal_form, smith_normal_form, CokernelPresentation, SmithDecomposition,
};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn int(v: i64) -> Int {
    BigInt::from(v)
}

pub fn rat(v: i64) -> Rat {
    BigRational::from_integer(BigInt::from(v))
}

pub fn rat_from_int(v: &Int) -> Rat {
    BigRational::from_integer(v.clone())
}

pub fn to_rat_vec(v: &[i64]) -> Vec<Rat> {
    v.iter().map(|&x| rat(x)).collect()
}

pub fn to_int_vec(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| int(x)).collect()
}

pub fn dot_i64(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_rat(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}

/// Pairs an integer vector with a rational one.
pub fn dot_mixed(a: &[i64], b: &[Rat]) -> Rat {
    a.iter()
        .zip(b)
        .fold(Rat::zero(), |acc, (&x, y)| acc + y * int(x))
}

pub fn dot_int(a: &[Int], b: &[Int]) -> Int {
    a.iter().zip(b).fold(Int::zero(), |acc, (x, y)| acc + x * y)
}

pub fn gcd_all<'a>(values: impl IntoIterator<Item = &'a Int>) -> Int {
    values.into_iter().fold(Int::zero(), |g, v| g.gcd(v))
}

pub fn lcm_denominators(values: &[Rat]) -> Int {
    values.iter().fold(Int::one(), |l, v| l.lcm(v.denom()))
}

/// Positive rescaling of a rational vector to a primitive integer vector.
/// The zero vector maps to the zero vector.
pub fn primitive(values: &[Rat]) -> Vec<Int> {
    let l = lcm_denominators(values);
    let scaled: Vec<Int> = values
        .iter()
        .map(|v| (v * rat_from_int(&l)).to_integer())
        .collect();
    primitive_int(&scaled)
}

pub fn primitive_int(values: &[Int]) -> Vec<Int> {
    let g = gcd_all(values.iter());
    if g.is_zero() {
        return values.to_vec();
    }
    values.iter().map(|v| v / &g).collect()
}

pub fn is_primitive_i64(v: &[i64]) -> bool {
    v.iter().fold(0i64, |g, x| g.gcd(x)) == 1
}

/// Lossless conversion for values that fit; `None` otherwise.
pub fn int_to_i64(v: &Int) -> Option<i64> {
    i64::try_from(v).ok()
}

pub fn rat_to_i64(v: &Rat) -> Option<i64> {
    if v.is_integer() {
        int_to_i64(v.numer())
    } else {
        None
    }
}

//! JSON encodings of the main types.
//!
//! Integers that do not fit in 64 bits are written as decimal strings and
//! non-integral rationals as `"p/q"` strings; both forms are accepted back.

use std::collections::BTreeMap;
use std::str::FromStr;

use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::divisor::{DivisorClass, SectionsBasis, ToricDivisor};
use crate::error::{Error, Result};
use crate::fan::{CplCone, Fan};
use crate::linalg::{int_to_i64, CokernelPresentation, Int, Rat};
use crate::mirror::{Correspondence, KaehlerModuliData};
use crate::polytope::{LatticeName, LatticePolytope, LatticeTag, PointClassification};
use crate::secondary::{Chamber, PointConfiguration};

fn invalid(e: impl std::fmt::Display) -> Error {
    Error::InvalidInput(e.to_string())
}

fn decode<T: DeserializeOwned>(v: &Value) -> Result<T> {
    T::deserialize(v).map_err(invalid)
}

pub fn parse(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(invalid)
}

pub fn int_value(v: &Int) -> Value {
    match int_to_i64(v) {
        Some(x) => json!(x),
        None => json!(v.to_string()),
    }
}

pub fn rat_value(v: &Rat) -> Value {
    if v.is_integer() {
        int_value(v.numer())
    } else {
        json!(format!("{}/{}", v.numer(), v.denom()))
    }
}

fn int_list(v: &[Int]) -> Value {
    Value::Array(v.iter().map(int_value).collect())
}

pub fn parse_rat(v: &Value) -> Result<Rat> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(|x| Rat::from_integer(x.into()))
            .ok_or_else(|| {
                invalid(format!(
                    "expected an integer or a \"p/q\" string, found {n}"
                ))
            }),
        Value::String(s) => {
            Rat::from_str(s.trim()).map_err(|_| invalid(format!("bad rational {s:?}")))
        }
        other => Err(invalid(format!("expected a rational, found {other}"))),
    }
}

/// A list of rationals, e.g. heights: `[1, "1/2", "-3"]`.
pub fn parse_rat_list(v: &Value) -> Result<Vec<Rat>> {
    let Value::Array(items) = v else {
        return Err(invalid("expected an array of rationals"));
    };
    items.iter().map(parse_rat).collect()
}

/// Points given either as a bare array or under a `"rays"` or `"points"`
/// key.
pub fn parse_points(v: &Value) -> Result<Vec<Vec<i64>>> {
    let inner = v.get("rays").or_else(|| v.get("points")).unwrap_or(v);
    decode(inner)
}

#[derive(Deserialize)]
struct PolytopeDoc {
    lattice: LatticeName,
    rank: usize,
    vertices: Vec<Vec<i64>>,
}

pub fn polytope_from_json(v: &Value) -> Result<LatticePolytope> {
    let doc: PolytopeDoc = decode(v)?;
    LatticePolytope::hull(
        &doc.vertices,
        LatticeTag {
            name: doc.lattice,
            rank: doc.rank,
        },
    )
}

pub fn polytope_to_json(p: &LatticePolytope) -> Value {
    json!({
        "lattice": p.lattice().name,
        "rank": p.dim(),
        "vertices": p.vertices(),
        "facets": p.facets(),
    })
}

#[derive(Deserialize)]
struct FanDoc {
    lattice: LatticeName,
    rank: usize,
    rays: Vec<Vec<i64>>,
    max_cones: Vec<Vec<usize>>,
}

pub fn fan_from_json(v: &Value) -> Result<Fan> {
    let doc: FanDoc = decode(v)?;
    Fan::new(
        LatticeTag {
            name: doc.lattice,
            rank: doc.rank,
        },
        doc.rays,
        doc.max_cones,
    )
}

pub fn fan_to_json(f: &Fan) -> Value {
    json!({
        "lattice": f.lattice().name,
        "rank": f.dim(),
        "rays": f.rays(),
        "max_cones": f.max_cones(),
    })
}

/// `{"fan": {...}, "coefficients": {"0": 1, ...}}`; rays not listed get
/// coefficient zero. The fan may instead be supplied separately.
pub fn divisor_from_json(v: &Value, fan: Option<&Fan>) -> Result<ToricDivisor> {
    let owned;
    let fan = match (v.get("fan"), fan) {
        (Some(f), _) => {
            owned = fan_from_json(f)?;
            &owned
        }
        (None, Some(f)) => f,
        (None, None) => return Err(invalid("divisor needs a \"fan\"")),
    };
    let map: BTreeMap<String, i64> = decode(
        v.get("coefficients")
            .ok_or_else(|| invalid("missing \"coefficients\""))?,
    )?;
    let mut coeffs = vec![0; fan.rays().len()];
    for (k, d) in map {
        let i: usize = k
            .parse()
            .map_err(|_| invalid(format!("bad ray index {k:?}")))?;
        *coeffs
            .get_mut(i)
            .ok_or_else(|| invalid(format!("ray index {i} out of range")))? = d;
    }
    ToricDivisor::new(fan, coeffs)
}

pub fn divisor_to_json(d: &ToricDivisor) -> Value {
    let coefficients: serde_json::Map<String, Value> = d
        .coefficients()
        .iter()
        .enumerate()
        .map(|(i, &c)| (i.to_string(), json!(c)))
        .collect();
    json!({ "coefficients": coefficients })
}

pub fn class_to_json(c: &DivisorClass) -> Value {
    json!({ "free": int_list(&c.free), "torsion": int_list(&c.torsion) })
}

pub fn presentation_to_json(p: &CokernelPresentation) -> Value {
    json!({ "free_rank": p.free_rank, "torsion": int_list(&p.torsion) })
}

pub fn classification_to_json(c: &PointClassification) -> Value {
    json!({
        "origin_interior": c.origin_interior,
        "vertices": c.vertices,
        "interior_points": c.interior_points,
        "facet_interior_points": c.facet_interior_points,
        "boundary_nonfacet_points": c.boundary_nonfacet_points,
    })
}

pub fn sections_to_json(s: &SectionsBasis) -> Value {
    json!({
        "points": s.points,
        "monomials": s.monomials,
        "polytope": s.polytope.as_ref().map(polytope_to_json),
    })
}

pub fn cpl_to_json(c: &CplCone) -> Value {
    json!({
        "dim": c.dim(),
        "inequalities": c.inequalities.iter().map(|l| int_list(l)).collect::<Vec<_>>(),
        "full_dimensional": c.full_dimensional,
    })
}

pub fn correspondence_to_json(c: &Correspondence) -> Value {
    let coords: Vec<Value> = c
        .classes
        .iter()
        .map(|k| int_list(&k.free.iter().chain(&k.torsion).cloned().collect::<Vec<_>>()))
        .collect();
    json!({
        "points": c.points,
        "class_coords": coords,
        "rank": c.rank,
        "torsion": int_list(&c.torsion),
        "dominance": c.dominance.as_str(),
    })
}

pub fn kaehler_to_json(k: &KaehlerModuliData) -> Value {
    json!({
        "torus_rank": k.torus_rank,
        "rays": k.rays,
        "cpl": cpl_to_json(&k.cpl),
        "large_radius": k.large_radius,
    })
}

#[derive(Deserialize)]
struct ConfigDoc {
    points: Vec<Vec<i64>>,
    #[serde(default)]
    include_origin: bool,
}

/// `{"points": [[...], ...], "include_origin": false}`.
pub fn configuration_from_json(v: &Value) -> Result<PointConfiguration> {
    let doc: ConfigDoc = decode(v)?;
    crate::secondary::lift(&doc.points, doc.include_origin)
}

pub fn configuration_to_json(c: &PointConfiguration) -> Value {
    json!({
        "points": c.points(),
        "lifted": c.lifted(),
        "gale": c.gale().iter().map(|r| r.iter().map(rat_value).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "gale_rank": c.presentation().free_rank,
    })
}

pub fn chamber_to_json(c: &Chamber) -> Value {
    json!({
        "cells": c.triangulation.cells,
        "cone": { "inequalities": c.cone.inequalities.iter().map(|l| int_list(l)).collect::<Vec<_>>() },
        "phase": c.phase.as_str(),
    })
}

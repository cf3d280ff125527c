//! Python module `toric_mirror`.
//!
//! Structured results (classifications, class groups, chambers) come back
//! as plain dicts in the same JSON layout the command-line tool emits.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde_json::Value;

use toric::divisor::{aut_dimension, class_group, class_in, roots, sections, ToricDivisor};
use toric::fan::{cpl_cone, normal_fan, subdivide};
use toric::io;
use toric::linalg::Rat;
use toric::mirror::{
    correspondence, dominance_status, h11_toric, hd11_poly, kaehler_moduli, make_pair,
};
use toric::polytope::{LatticeName, LatticeTag};
use toric::secondary::{chamber_of, enumerate_chambers_with_limit, lift, DEFAULT_MAX_POINTS};

fn err(e: toric::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py(py: Python<'_>, v: &Value) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(v).expect("JSON values serialize");
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

fn lattice(name: &str, rank: usize) -> PyResult<LatticeTag> {
    let name = match name {
        "M" => LatticeName::M,
        "N" => LatticeName::N,
        other => {
            return Err(PyValueError::new_err(format!(
                "lattice must be \"M\" or \"N\", not {other:?}"
            )))
        }
    };
    Ok(LatticeTag { name, rank })
}

/// Accepts ints, `fractions.Fraction` or `"p/q"` strings.
fn rationals(values: &[Bound<'_, PyAny>]) -> PyResult<Vec<Rat>> {
    values
        .iter()
        .map(|v| {
            let s = v.str()?.to_string();
            io::parse_rat(&Value::String(s)).map_err(err)
        })
        .collect()
}

#[pyclass(name = "LatticePolytope", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyPolytope(toric::polytope::LatticePolytope);

#[pymethods]
impl PyPolytope {
    #[new]
    #[pyo3(signature = (points, lattice = "M"))]
    fn new(points: Vec<Vec<i64>>, lattice: &str) -> PyResult<Self> {
        let rank = points.first().map_or(0, Vec::len);
        let tag = self::lattice(lattice, rank)?;
        toric::polytope::LatticePolytope::hull(&points, tag)
            .map(Self)
            .map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        io::polytope_from_json(&io::parse(text).map_err(err)?)
            .map(Self)
            .map_err(err)
    }

    fn to_json(&self) -> String {
        io::polytope_to_json(&self.0).to_string()
    }

    #[getter]
    fn lattice(&self) -> String {
        format!("{:?}", self.0.lattice().name)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    #[getter]
    fn vertices(&self) -> Vec<Vec<i64>> {
        self.0.vertices().to_vec()
    }

    /// `(normal, offset)` pairs meaning `⟨normal, y⟩ ≥ −offset`.
    #[getter]
    fn facets(&self) -> Vec<(Vec<i64>, i64)> {
        self.0
            .facets()
            .iter()
            .map(|f| (f.normal.clone(), f.offset))
            .collect()
    }

    fn is_reflexive(&self) -> bool {
        self.0.is_reflexive()
    }

    fn polar(&self) -> PyResult<Self> {
        self.0.polar().map(Self).map_err(err)
    }

    fn lattice_points(&self) -> Vec<Vec<i64>> {
        self.0.lattice_points()
    }

    fn classify_points(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        let c = self.0.classify_points().map_err(err)?;
        to_py(py, &io::classification_to_json(&c))
    }

    fn normal_fan(&self) -> PyResult<PyFan> {
        normal_fan(&self.0).map(PyFan).map_err(err)
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }

    fn __repr__(&self) -> String {
        format!(
            "LatticePolytope({:?}, lattice={:?})",
            self.0.vertices(),
            self.lattice()
        )
    }
}

#[pyclass(name = "Fan", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyFan(toric::fan::Fan);

#[pymethods]
impl PyFan {
    #[new]
    #[pyo3(signature = (rays, max_cones, lattice = "N"))]
    fn new(rays: Vec<Vec<i64>>, max_cones: Vec<Vec<usize>>, lattice: &str) -> PyResult<Self> {
        let rank = rays.first().map_or(0, Vec::len);
        toric::fan::Fan::new(self::lattice(lattice, rank)?, rays, max_cones)
            .map(Self)
            .map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        io::fan_from_json(&io::parse(text).map_err(err)?)
            .map(Self)
            .map_err(err)
    }

    fn to_json(&self) -> String {
        io::fan_to_json(&self.0).to_string()
    }

    #[getter]
    fn rays(&self) -> Vec<Vec<i64>> {
        self.0.rays().to_vec()
    }

    #[getter]
    fn max_cones(&self) -> Vec<Vec<usize>> {
        self.0.max_cones().to_vec()
    }

    fn is_complete(&self) -> bool {
        self.0.is_complete()
    }

    #[pyo3(signature = (rays, heights = None, seed = 0))]
    fn subdivide(
        &self,
        rays: Vec<Vec<i64>>,
        heights: Option<Vec<Bound<'_, PyAny>>>,
        seed: u64,
    ) -> PyResult<Self> {
        let heights = heights.map(|h| rationals(&h)).transpose()?;
        subdivide(&self.0, &rays, heights.as_deref(), seed)
            .map(Self)
            .map_err(err)
    }

    /// Free rank, torsion and the class of each ray divisor.
    fn class_group(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        let g = class_group(&self.0).map_err(err)?;
        let mut out = io::presentation_to_json(&g);
        out["ray_classes"] = (0..self.0.rays().len())
            .map(|i| {
                let mut e = vec![0; self.0.rays().len()];
                e[i] = 1;
                io::class_to_json(&class_in(&g, &e))
            })
            .collect();
        to_py(py, &out)
    }

    fn divisor_class(&self, py: Python<'_>, coefficients: Vec<i64>) -> PyResult<Py<PyAny>> {
        let d = ToricDivisor::new(&self.0, coefficients).map_err(err)?;
        to_py(
            py,
            &io::class_to_json(&toric::divisor::divisor_class(&d).map_err(err)?),
        )
    }

    fn sections(&self, py: Python<'_>, coefficients: Vec<i64>) -> PyResult<Py<PyAny>> {
        let d = ToricDivisor::new(&self.0, coefficients).map_err(err)?;
        to_py(py, &io::sections_to_json(&sections(&d).map_err(err)?))
    }

    fn roots(&self) -> PyResult<Vec<Vec<i64>>> {
        roots(&self.0).map_err(err)
    }

    fn aut_dimension(&self) -> PyResult<usize> {
        aut_dimension(&self.0).map_err(err)
    }

    fn dominance(&self) -> PyResult<&'static str> {
        dominance_status(&self.0).map(|d| d.as_str()).map_err(err)
    }

    fn cpl_cone(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &io::cpl_to_json(&cpl_cone(&self.0).map_err(err)?))
    }

    fn __repr__(&self) -> String {
        format!(
            "Fan(rays={:?}, max_cones={:?})",
            self.0.rays(),
            self.0.max_cones()
        )
    }
}

#[pyclass(name = "MirrorPair", frozen)]
struct PyMirrorPair(toric::mirror::MirrorPair);

#[pymethods]
impl PyMirrorPair {
    #[new]
    #[pyo3(signature = (polytope, rays = None, heights = None, seed = 0))]
    fn new(
        polytope: &PyPolytope,
        rays: Option<Vec<Vec<i64>>>,
        heights: Option<Vec<Bound<'_, PyAny>>>,
        seed: u64,
    ) -> PyResult<Self> {
        let heights = heights.map(|h| rationals(&h)).transpose()?;
        make_pair(&polytope.0, rays.as_deref(), heights.as_deref(), seed)
            .map(Self)
            .map_err(err)
    }

    #[getter]
    fn polytope(&self) -> PyPolytope {
        PyPolytope(self.0.p.clone())
    }

    #[getter]
    fn polar(&self) -> PyPolytope {
        PyPolytope(self.0.polar.clone())
    }

    #[getter]
    fn fan(&self) -> PyFan {
        PyFan(self.0.fan_x.clone())
    }

    #[pyo3(signature = (seed = 0))]
    fn swapped(&self, seed: u64) -> PyResult<Self> {
        self.0.swapped(seed).map(Self).map_err(err)
    }

    fn h11_toric(&self) -> PyResult<usize> {
        h11_toric(&self.0).map_err(err)
    }

    fn hd11_poly(&self) -> PyResult<usize> {
        hd11_poly(&self.0).map_err(err)
    }

    fn correspondence(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(
            py,
            &io::correspondence_to_json(&correspondence(&self.0).map_err(err)?),
        )
    }

    fn kaehler_moduli(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(
            py,
            &io::kaehler_to_json(&kaehler_moduli(&self.0).map_err(err)?),
        )
    }
}

#[pyclass(name = "PointConfiguration", frozen)]
struct PyConfiguration(toric::secondary::PointConfiguration);

#[pymethods]
impl PyConfiguration {
    #[new]
    #[pyo3(signature = (points, include_origin = false))]
    fn new(points: Vec<Vec<i64>>, include_origin: bool) -> PyResult<Self> {
        lift(&points, include_origin).map(Self).map_err(err)
    }

    #[getter]
    fn points(&self) -> Vec<Vec<i64>> {
        self.0.points().to_vec()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    #[pyo3(signature = (max_points = DEFAULT_MAX_POINTS))]
    fn chambers(&self, py: Python<'_>, max_points: usize) -> PyResult<Py<PyAny>> {
        let all = enumerate_chambers_with_limit(&self.0, max_points).map_err(err)?;
        to_py(py, &all.iter().map(io::chamber_to_json).collect())
    }

    fn chamber_of(&self, py: Python<'_>, heights: Vec<Bound<'_, PyAny>>) -> PyResult<Py<PyAny>> {
        let h = rationals(&heights)?;
        if h.len() != self.0.len() {
            return Err(PyValueError::new_err(format!(
                "expected {} heights, got {}",
                self.0.len(),
                h.len()
            )));
        }
        to_py(
            py,
            &io::chamber_to_json(&chamber_of(&self.0, &h).map_err(err)?),
        )
    }
}

#[pymodule]
fn toric_mirror(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPolytope>()?;
    m.add_class::<PyFan>()?;
    m.add_class::<PyMirrorPair>()?;
    m.add_class::<PyConfiguration>()?;
    Ok(())
}

//! Python bindings: expression functions, smoothing operators, extension
//! operators, and the report entry points.
//!
//! Domains and closed sets are passed as the same JSON the CLI uses:
//! `{"boxes": [[[lo, hi], ...], ...], "open": bool}` (`null` bounds for ±∞),
//! closed sets optionally with `"points": [[...], ...]`.

use std::sync::Arc;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use smoothext_core::calculus::SeminormSpec;
use smoothext_core::domains::{AxisBox, BoxUnion, ClosedSet};
use smoothext_core::dugundji::ShellStructure;
use smoothext_core::expr::ExprFunction;
use smoothext_core::extension::{extend_cube, extend_halfspace, ReflectionExtension};
use smoothext_core::harness::reports::convergence_report;
use smoothext_core::harness::{bound_certificate, corpus_dim, property_suites};
use smoothext_core::provider::JetProvider;
use smoothext_core::smoothing::{
    build_stilde, cube_smoothing, tensor_witness, SmoothedFunction,
};

fn err<T>(r: smoothext_core::Result<T>) -> PyResult<T> {
    r.map_err(|e| PyValueError::new_err(e.to_string()))
}

fn json_err<T>(r: serde_json::Result<T>) -> PyResult<T> {
    r.map_err(|e| PyValueError::new_err(e.to_string()))
}

fn parse_box_union(text: &str) -> PyResult<BoxUnion> {
    json_err(serde_json::from_str(text))
}

/// A vector-valued expression function with exact jets.
#[pyclass(name = "Function")]
struct PyFunction {
    inner: Arc<dyn JetProvider>,
    sources: Vec<String>,
}

#[pymethods]
impl PyFunction {
    /// Function(components, dim, domain_json)
    #[new]
    #[pyo3(signature = (components, dim, domain_json=None))]
    fn new(components: Vec<String>, dim: usize, domain_json: Option<&str>) -> PyResult<Self> {
        let domain = match domain_json {
            Some(text) => parse_box_union(text)?,
            None => BoxUnion::full_space(dim),
        };
        let texts: Vec<&str> = components.iter().map(|s| s.as_str()).collect();
        let f = err(ExprFunction::parse_components(&texts, dim, domain))?;
        Ok(PyFunction {
            inner: Arc::new(f),
            sources: components,
        })
    }

    fn value(&self, x: Vec<f64>) -> PyResult<Vec<f64>> {
        err(self.inner.value(&x))
    }

    /// Partial derivative ∂^alpha at x.
    fn partial(&self, x: Vec<f64>, alpha: Vec<u8>) -> PyResult<Vec<f64>> {
        let a = smoothext_core::calculus::MultiIndex::new(alpha);
        let jet = err(self.inner.jet(&x, a.order()))?;
        Ok(jet.partial(&a))
    }

    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn target_dim(&self) -> usize {
        self.inner.target_dim()
    }

    fn __repr__(&self) -> String {
        format!("Function({:?}, dim={})", self.sources, self.inner.dim())
    }
}

/// The closed-form smoothed function: a finite list of bump terms.
#[pyclass(name = "Smoothed")]
struct PySmoothed {
    inner: SmoothedFunction,
}

#[pymethods]
impl PySmoothed {
    fn value(&self, x: Vec<f64>) -> PyResult<Vec<f64>> {
        err(self.inner.value(&x))
    }

    fn partial(&self, x: Vec<f64>, alpha: Vec<u8>) -> PyResult<Vec<f64>> {
        let a = smoothext_core::calculus::MultiIndex::new(alpha);
        let jet = err(self.inner.jet(&x, a.order()))?;
        Ok(jet.partial(&a))
    }

    fn term_count(&self) -> usize {
        self.inner.terms().len()
    }

    fn ell(&self) -> usize {
        self.inner.ell()
    }

    fn to_json(&self) -> String {
        self.inner.to_json().to_string()
    }

    /// Rank of the tensor witness (dimension of the value span).
    fn tensor_rank(&self) -> usize {
        tensor_witness(&self.inner).rank
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let v = json_err(serde_json::from_str(text))?;
        Ok(PySmoothed {
            inner: err(SmoothedFunction::from_json(&v))?,
        })
    }

    fn __repr__(&self) -> String {
        format!(
            "Smoothed(l={}, m={}, terms={})",
            self.inner.ell(),
            self.inner.target_dim(),
            self.inner.terms().len()
        )
    }
}

/// Axis-reflection extension of a function across its domain faces.
#[pyclass(name = "Extension")]
struct PyExtension {
    inner: ReflectionExtension,
}

#[pymethods]
impl PyExtension {
    fn value(&self, x: Vec<f64>) -> PyResult<Vec<f64>> {
        err(self.inner.value(&x))
    }

    fn partial(&self, x: Vec<f64>, alpha: Vec<u8>) -> PyResult<Vec<f64>> {
        let a = smoothext_core::calculus::MultiIndex::new(alpha);
        let jet = err(self.inner.jet(&x, a.order()))?;
        Ok(jet.partial(&a))
    }
}

/// Dugundji-style extension off a closed set.
#[pyclass(name = "MetricExtension")]
struct PyMetricExtension {
    shells: ShellStructure,
    gamma: Py<PyFunction>,
}

#[pymethods]
impl PyMetricExtension {
    fn value(&self, py: Python<'_>, x: Vec<f64>) -> PyResult<Vec<f64>> {
        let gamma = self.gamma.borrow(py);
        err(self.shells.eval(&gamma.inner, &x))
    }
}

/// Build the lattice smoothing operator over a window.
#[pyfunction]
#[pyo3(signature = (function, order, scale, window_json))]
fn smooth(
    function: &PyFunction,
    order: usize,
    scale: u32,
    window_json: &str,
) -> PyResult<PySmoothed> {
    let window = parse_box_union(window_json)?;
    let omega = function.inner.domain().clone();
    Ok(PySmoothed {
        inner: err(build_stilde(
            &function.inner,
            order,
            scale,
            &omega,
            &window,
        ))?,
    })
}

/// Smooth on the closed unit cube (extend, smooth on R^d, restrict).
#[pyfunction]
fn smooth_cube(function: &PyFunction, order: usize, scale: u32) -> PyResult<PySmoothed> {
    Ok(PySmoothed {
        inner: err(cube_smoothing(&function.inner, order, scale))?,
    })
}

/// Extend across the unit-cube faces by weighted reflections.
#[pyfunction]
fn extend_cube_op(function: &PyFunction, order: usize) -> PyResult<PyExtension> {
    Ok(PyExtension {
        inner: err(extend_cube(&function.inner, order))?,
    })
}

/// Extend across the half-space face `x_axis = 0`.
#[pyfunction]
#[pyo3(signature = (function, axis, order))]
fn extend_halfspace_op(function: &PyFunction, axis: usize, order: usize) -> PyResult<PyExtension> {
    Ok(PyExtension {
        inner: err(extend_halfspace(&function.inner, axis, order))?,
    })
}

/// Dugundji extension of a function off the closed set (JSON with optional
/// `points`).
#[pyfunction]
fn metric_extension(
    py: Python<'_>,
    function: Py<PyFunction>,
    set_json: &str,
) -> PyResult<PyMetricExtension> {
    let set: ClosedSet = json_err(serde_json::from_str(set_json))?;
    let shells = err(ShellStructure::new(set))?;
    let _ = py;
    Ok(PyMetricExtension {
        shells,
        gamma: function,
    })
}

/// Convergence table: rows `(n, [err_C0, ..., err_Cl])` on `K = [-1,1]^d`.
#[pyfunction]
fn convergence(
    function: &PyFunction,
    order: usize,
    scales: Vec<u32>,
) -> PyResult<Vec<(u32, Vec<f64>)>> {
    let d = function.inner.dim();
    let k_box = AxisBox::new(vec![-1.0; d], vec![1.0; d]);
    let omega = function.inner.domain().clone();
    let report = err(convergence_report(
        &function.inner,
        &omega,
        order,
        &k_box,
        &SeminormSpec::CoordinateMax,
        &scales,
    ))?;
    Ok(report.rows.into_iter().map(|r| (r.n, r.errors)).collect())
}

/// The explicit-bound certificate over the built-in corpus:
/// returns `(constant, [(name, gateaux_ratio, partial_ratio)], pass)`.
#[pyfunction]
fn bound_report(dim: usize, order: usize, scale: u32) -> PyResult<(f64, Vec<(String, f64, f64)>, bool)> {
    let entries = corpus_dim(dim);
    if entries.is_empty() {
        return Err(PyValueError::new_err(format!("no corpus for dimension {dim}")));
    }
    let cert = err(bound_certificate(
        &entries,
        order,
        scale,
        &SeminormSpec::CoordinateMax,
    ))?;
    Ok((
        cert.constant,
        cert.rows
            .iter()
            .map(|r| (r.name.clone(), r.gateaux_ratio, r.partial_ratio))
            .collect(),
        cert.pass,
    ))
}

/// Run every property suite; returns `(suite, pass, max_violation)` rows.
#[pyfunction]
#[pyo3(signature = (seed=0xC0FFEE))]
fn selftest(seed: u64) -> Vec<(String, bool, f64)> {
    property_suites(seed)
        .into_iter()
        .map(|r| (r.suite.to_string(), r.pass, r.max_violation))
        .collect()
}

/// Value of the periodic partition member `h_z(x)`.
#[pyfunction]
fn partition_value(z: Vec<i64>, x: Vec<f64>) -> PyResult<f64> {
    err(smoothext_core::bump::partition_value(&z, &x))
}

#[pymodule]
fn smoothext_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyFunction>()?;
    m.add_class::<PySmoothed>()?;
    m.add_class::<PyExtension>()?;
    m.add_class::<PyMetricExtension>()?;
    m.add_function(wrap_pyfunction!(smooth, m)?)?;
    m.add_function(wrap_pyfunction!(smooth_cube, m)?)?;
    m.add_function(wrap_pyfunction!(extend_cube_op, m)?)?;
    m.add_function(wrap_pyfunction!(extend_halfspace_op, m)?)?;
    m.add_function(wrap_pyfunction!(metric_extension, m)?)?;
    m.add_function(wrap_pyfunction!(convergence, m)?)?;
    m.add_function(wrap_pyfunction!(bound_report, m)?)?;
    m.add_function(wrap_pyfunction!(selftest, m)?)?;
    m.add_function(wrap_pyfunction!(partition_value, m)?)?;
    Ok(())
}

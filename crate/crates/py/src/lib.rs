//! Python bindings. Reports and documents cross the boundary as plain
//! dicts and lists, decoded from the same JSON the CLI prints.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde_json::Value;

use cosan::action::{compose_extract, DEFAULT_CAP};
use cosan::coeff::find_isomorphism;
use cosan::cosan::{evaluate as cosan_evaluate, tabulate_cosan};
use cosan::json::{
    cosan_elem_to_json, inj_coeff_from_json, inj_coeff_to_json, inj_nat_to_json,
    sur_coeff_from_json, sur_coeff_to_json, tab_functor_from_json, tab_functor_to_json,
    tab_nat_to_json, NatDoc,
};
use cosan::san::check_strength_semicartesian;
use cosan::verify;

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py(py: Python<'_>, value: &Value) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(value).map_err(value_error)?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

fn from_text(text: &str) -> PyResult<Value> {
    serde_json::from_str(text).map_err(value_error)
}

fn report(py: Python<'_>, r: &cosan::CheckReport) -> PyResult<Py<PyAny>> {
    to_py(py, &serde_json::to_value(r).map_err(value_error)?)
}

/// A function `(m] → (n]`, written `"m>n:v1,…"`.
#[pyclass(name = "FinFun", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyFinFun(cosan::FinFun);

#[pymethods]
impl PyFinFun {
    #[new]
    fn new(literal: &str) -> PyResult<Self> {
        literal.parse().map(Self).map_err(value_error)
    }

    #[getter]
    fn dom(&self) -> usize {
        self.0.dom()
    }

    #[getter]
    fn cod(&self) -> usize {
        self.0.cod()
    }

    fn values(&self) -> Vec<usize> {
        self.0.values().to_vec()
    }

    /// `f(i)` for `i` in `1..=dom`.
    fn apply(&self, i: usize) -> PyResult<usize> {
        if i == 0 || i > self.0.dom() {
            return Err(value_error(format!("{i} is outside 1..={}", self.0.dom())));
        }
        Ok(self.0.apply(i))
    }

    fn is_injective(&self) -> bool {
        self.0.is_injective()
    }

    fn is_surjective(&self) -> bool {
        self.0.is_surjective()
    }

    /// `self ∘ other`.
    fn after(&self, other: &PyFinFun) -> PyResult<Self> {
        self.0.after(&other.0).map(Self).map_err(value_error)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("FinFun('{}')", self.0)
    }
}

/// Coefficients `A: 𝕀^op → Set` on a window.
#[pyclass(name = "InjCoeff", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyInjCoeff(cosan::InjCoeff);

#[pymethods]
impl PyInjCoeff {
    #[staticmethod]
    fn builtin(name: &str, window: usize) -> PyResult<Self> {
        cosan::InjCoeff::builtin(name, window).map(Self).map_err(value_error)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        inj_coeff_from_json(&from_text(text)?).map(Self).map_err(value_error)
    }

    fn to_json(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &inj_coeff_to_json(&self.0))
    }

    #[getter]
    fn window(&self) -> usize {
        self.0.window()
    }

    fn sizes(&self) -> Vec<usize> {
        self.0.sizes()
    }

    fn sets(&self) -> Vec<Vec<String>> {
        self.0.sets().to_vec()
    }

    fn is_valid(&self) -> bool {
        self.0.validate().is_ok()
    }

    fn is_isomorphic(&self, other: &PyInjCoeff) -> bool {
        find_isomorphism(&self.0, &other.0).is_some()
    }

    fn __repr__(&self) -> String {
        format!("InjCoeff(window={}, sizes={:?})", self.0.window(), self.0.sizes())
    }
}

/// Coefficients `B: 𝕊 → Set`, either a rule (`pplus`, `identity`) or tables.
#[pyclass(name = "SurCoeff", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PySurCoeff(cosan::SurCoeff);

#[pymethods]
impl PySurCoeff {
    #[staticmethod]
    fn builtin(name: &str) -> PyResult<Self> {
        cosan::SurCoeff::builtin(name).map(Self).map_err(value_error)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        sur_coeff_from_json(&from_text(text)?).map(Self).map_err(value_error)
    }

    fn to_json(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &sur_coeff_to_json(&self.0))
    }
}

/// A contravariant functor tabulated on `(0], …, (W]`.
#[pyclass(name = "TabFunctor", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyTabFunctor(cosan::TabFunctor);

#[pymethods]
impl PyTabFunctor {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        tab_functor_from_json(&from_text(text)?).map(Self).map_err(value_error)
    }

    fn to_json(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &tab_functor_to_json(&self.0))
    }

    #[getter]
    fn window(&self) -> usize {
        self.0.window()
    }

    fn sizes(&self) -> Vec<usize> {
        self.0.sizes()
    }

    /// Names of the elements of `F((k])`.
    fn elements(&self, k: usize) -> PyResult<Vec<String>> {
        self.0
            .sets()
            .get(k)
            .cloned()
            .ok_or_else(|| value_error(format!("level {k} outside the window")))
    }

    /// `F(f)` applied to the 0-based element `x` of `F(cod f)`.
    fn apply(&self, f: &PyFinFun, x: usize) -> PyResult<usize> {
        let (k, w) = (f.0.dom().max(f.0.cod()), self.0.window());
        if k > w || x >= self.0.size(f.0.cod()) {
            return Err(value_error("function or element outside the window"));
        }
        Ok(self.0.apply(&f.0, x))
    }
}

/// A transformation between tabulated functors.
#[pyclass(name = "TabNat", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyTabNat(cosan::TabNat);

#[pymethods]
impl PyTabNat {
    /// Parses a `tab-nat` document with embedded endpoints.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let doc = NatDoc::parse(&from_text(text)?).map_err(value_error)?;
        doc.build_embedded().map(Self).map_err(value_error)
    }

    fn to_json(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &tab_nat_to_json(&self.0, None))
    }

    fn source(&self) -> PyTabFunctor {
        PyTabFunctor(self.0.source().clone())
    }

    fn target(&self) -> PyTabFunctor {
        PyTabFunctor(self.0.target().clone())
    }
}

/// Elements of `Ǎ((k])` as `{"n", "a", "epi"}` dicts.
#[pyfunction]
fn evaluate(py: Python<'_>, coeff: &PyInjCoeff, k: usize) -> PyResult<Vec<Py<PyAny>>> {
    cosan_evaluate(&coeff.0, k)
        .map_err(value_error)?
        .iter()
        .map(|e| to_py(py, &cosan_elem_to_json(&coeff.0, e)))
        .collect()
}

#[pyfunction]
fn tabulate(coeff: &PyInjCoeff, window: usize) -> PyResult<PyTabFunctor> {
    let table = tabulate_cosan(&coeff.0, window).map_err(value_error)?;
    Ok(PyTabFunctor(table.into_functor()))
}

#[pyfunction]
fn check_functor(py: Python<'_>, f: &PyTabFunctor) -> PyResult<Py<PyAny>> {
    report(py, &verify::validate_tab_functor(&f.0))
}

#[pyfunction]
fn check_pullbacks(py: Python<'_>, f: &PyTabFunctor) -> PyResult<Py<PyAny>> {
    report(py, &verify::check_pullback_preservation(&f.0))
}

#[pyfunction]
fn check_cocone(py: Python<'_>, f: &PyTabFunctor, k: usize) -> PyResult<Py<PyAny>> {
    report(py, &verify::check_cocone_colimit(&f.0, k))
}

#[pyfunction]
fn check_semicartesian(py: Python<'_>, psi: &PyTabNat) -> PyResult<Py<PyAny>> {
    report(py, &verify::check_semicartesian(&psi.0))
}

#[pyfunction]
fn check_strength(py: Python<'_>, b: &PySurCoeff, window: usize) -> PyResult<Py<PyAny>> {
    report(py, &check_strength_semicartesian(&b.0, window))
}

#[pyfunction]
fn boolean_hom_check(py: Python<'_>, window: usize) -> PyResult<Py<PyAny>> {
    report(py, &verify::boolean_hom_check(window))
}

/// Extracted coefficients (or `None`) and the extraction and `φ` reports.
#[pyfunction]
fn extract(py: Python<'_>, f: &PyTabFunctor) -> PyResult<(Option<PyInjCoeff>, Vec<Py<PyAny>>)> {
    let (ext, r) = verify::extract_coefficients(&f.0);
    let mut reports = vec![report(py, &r)?];
    if let Some(ext) = &ext {
        reports.push(report(py, &verify::check_phi_iso(&f.0, ext))?);
    }
    Ok((ext.map(|e| PyInjCoeff(e.coeff)), reports))
}

/// The coefficient transformation behind `psi`, as an `inj-nat` dict.
/// Raises `ValueError` when `psi` is not semi-cartesian.
#[pyfunction]
fn extract_nat(py: Python<'_>, a: &PyInjCoeff, b: &PyInjCoeff, psi: &PyTabNat) -> PyResult<Py<PyAny>> {
    let tau = verify::extract_nat(&a.0, &b.0, &psi.0).map_err(value_error)?;
    to_py(py, &inj_nat_to_json(&tau))
}

/// Tabulates `F_B ∘ Ǎ` and extracts its coefficients.
#[pyfunction]
#[pyo3(signature = (b, a, window, cap = DEFAULT_CAP))]
fn compose(
    py: Python<'_>,
    b: &PySurCoeff,
    a: &PyInjCoeff,
    window: usize,
    cap: usize,
) -> PyResult<(PyTabFunctor, Option<PyInjCoeff>, Vec<Py<PyAny>>)> {
    let c = compose_extract(&b.0, &a.0, window, cap).map_err(value_error)?;
    let reports = c.reports.iter().map(|r| report(py, r)).collect::<PyResult<_>>()?;
    Ok((PyTabFunctor(c.functor), c.extraction.map(|e| PyInjCoeff(e.coeff)), reports))
}

/// The collapse `𝒫 → 1`, a transformation that is not semi-cartesian.
#[pyfunction]
fn collapse(window: usize) -> PyResult<PyTabNat> {
    cosan::fixtures::collapse(window).map(PyTabNat).map_err(value_error)
}

#[pymodule]
fn cosan_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyFinFun>()?;
    m.add_class::<PyInjCoeff>()?;
    m.add_class::<PySurCoeff>()?;
    m.add_class::<PyTabFunctor>()?;
    m.add_class::<PyTabNat>()?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(tabulate, m)?)?;
    m.add_function(wrap_pyfunction!(check_functor, m)?)?;
    m.add_function(wrap_pyfunction!(check_pullbacks, m)?)?;
    m.add_function(wrap_pyfunction!(check_cocone, m)?)?;
    m.add_function(wrap_pyfunction!(check_semicartesian, m)?)?;
    m.add_function(wrap_pyfunction!(check_strength, m)?)?;
    m.add_function(wrap_pyfunction!(boolean_hom_check, m)?)?;
    m.add_function(wrap_pyfunction!(extract, m)?)?;
    m.add_function(wrap_pyfunction!(extract_nat, m)?)?;
    m.add_function(wrap_pyfunction!(compose, m)?)?;
    m.add_function(wrap_pyfunction!(collapse, m)?)?;
    Ok(())
}

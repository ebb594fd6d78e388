//! Python bindings: `import critline_py`.
//!
//! Specs are built with the `Spec.*` constructors; signs are the strings
//! "plus" and "minus". Reports come back as JSON strings.

#![allow(clippy::useless_conversion)]

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use critline::functional::{boundary_value as bv, theta_pairing as pairing};
use critline::hcatalog::{check_hypotheses, EtaSign, HFunctionSpec, Tolerances};
use critline::quadrature::LineQuadrature;
use critline::specfun::QuadraticForm;
use critline::zerofinder::{locate_zeros as locate, online_phase_zeros, Rect};

fn lib_err(e: critline::Error) -> PyErr {
    match e {
        critline::Error::Config(_) | critline::Error::Precondition(_) | critline::Error::Degenerate(_) => {
            PyValueError::new_err(e.to_string())
        }
        e => PyRuntimeError::new_err(e.to_string()),
    }
}

fn eta(name: &str) -> PyResult<EtaSign> {
    match name {
        "plus" | "+" => Ok(EtaSign::Plus),
        "minus" | "-" => Ok(EtaSign::Minus),
        other => Err(PyValueError::new_err(format!("eta must be 'plus' or 'minus', got {other:?}"))),
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> PyResult<String> {
    serde_json::to_string(v).map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

#[pyclass(frozen)]
#[derive(Clone)]
pub struct Spec {
    inner: HFunctionSpec,
}

#[pymethods]
impl Spec {
    #[staticmethod]
    #[pyo3(signature = (zeros, poles, scale, sigmas))]
    fn rational(zeros: Vec<Complex64>, poles: Vec<Complex64>, scale: f64, sigmas: Vec<f64>) -> PyResult<Self> {
        Ok(Spec { inner: HFunctionSpec::rational(&zeros, &poles, scale, &sigmas).map_err(lib_err)? })
    }

    #[staticmethod]
    fn riemann_xi_2s() -> Self {
        Spec { inner: HFunctionSpec::riemann_xi_2s() }
    }

    #[staticmethod]
    fn riemann_xi_2s_y(y: f64) -> PyResult<Self> {
        Ok(Spec { inner: HFunctionSpec::riemann_xi_2s_y(y).map_err(lib_err)? })
    }

    #[staticmethod]
    fn epstein(a: f64, b: f64, c: f64) -> PyResult<Self> {
        let q = QuadraticForm::new(a, b, c).map_err(lib_err)?;
        Ok(Spec { inner: HFunctionSpec::epstein(q).map_err(lib_err)? })
    }

    #[getter]
    fn label(&self) -> String {
        self.inner.label.clone()
    }

    fn h(&self, s: Complex64) -> PyResult<Complex64> {
        self.inner.h_eval(s).map_err(lib_err)
    }

    /// h(1 - s) / h(s)
    fn c_ratio(&self, s: Complex64) -> PyResult<Complex64> {
        self.inner.c_ratio(s).map_err(lib_err)
    }

    fn __repr__(&self) -> String {
        format!("Spec({:?})", self.inner.label)
    }
}

/// Zeros of 1 + eta c on 1/2 + i[t0, t1] from the phase of c.
#[pyfunction]
#[pyo3(signature = (spec, eta_sign, t0, t1, step = 0.05))]
fn online_zeros(spec: &Spec, eta_sign: &str, t0: f64, t1: f64, step: f64) -> PyResult<Vec<Complex64>> {
    let z = online_phase_zeros(&spec.inner, eta(eta_sign)?, t0, t1, step).map_err(lib_err)?;
    Ok(z.iter().map(|r| r.w).collect())
}

/// Zero records in the rectangle [re0, re1] x [im0, im1], as JSON.
#[pyfunction]
#[pyo3(signature = (spec, eta_sign, rect, depth = 40))]
fn locate_zeros(spec: &Spec, eta_sign: &str, rect: (f64, f64, f64, f64), depth: usize) -> PyResult<String> {
    let r = Rect::new(rect.0, rect.1, rect.2, rect.3).map_err(lib_err)?;
    to_json(&locate(&spec.inner, eta(eta_sign)?, &r, depth).map_err(lib_err)?)
}

/// theta(w) / (1 - 2w)
#[pyfunction]
fn boundary_value(spec: &Spec, eta_sign: &str, w: Complex64) -> PyResult<Complex64> {
    bv(&spec.inner, eta(eta_sign)?, w).map_err(lib_err)
}

/// The truncated line pairing at w (Re w > 1/2).
#[pyfunction]
#[pyo3(signature = (spec, eta_sign, w, t_max = 400.0, per_panel = 24))]
fn theta_pairing(spec: &Spec, eta_sign: &str, w: Complex64, t_max: f64, per_panel: usize) -> PyResult<Complex64> {
    let q = LineQuadrature::new(t_max, per_panel).map_err(lib_err)?;
    Ok(pairing(&spec.inner, eta(eta_sign)?, w, &q).map_err(lib_err)?.value)
}

/// Hypothesis checks with default tolerances, as a JSON report.
#[pyfunction]
#[pyo3(signature = (spec, eta_sign, rect = (0.5, 2.0, -30.0, 30.0)))]
fn check(spec: &Spec, eta_sign: &str, rect: (f64, f64, f64, f64)) -> PyResult<String> {
    let r = Rect::new(rect.0, rect.1, rect.2, rect.3).map_err(lib_err)?;
    to_json(&check_hypotheses(&spec.inner, eta(eta_sign)?, &r, &Tolerances::default()))
}

#[pymodule]
fn critline_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Spec>()?;
    m.add_function(wrap_pyfunction!(online_zeros, m)?)?;
    m.add_function(wrap_pyfunction!(locate_zeros, m)?)?;
    m.add_function(wrap_pyfunction!(boundary_value, m)?)?;
    m.add_function(wrap_pyfunction!(theta_pairing, m)?)?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    Ok(())
}

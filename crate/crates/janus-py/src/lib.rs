//! Python bindings for the displaced-Janus-state toolkit.
//!
//! The module mirrors the Rust API at function granularity: a frozen
//! `JanusSpec` class plus free functions for squeezing polynomials, photon
//! moments, Wigner evaluation, and QFI — each backed by the same closed
//! forms and Fock oracle as the `janus` binary.

use janus_core::{fock_oracle, gsp, metrology, moments, params, wigner};
use janus_core::{JanusError, JanusSpec, SqueezeParam};
use num::complex::Complex64;
use num::BigInt;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn to_py(e: JanusError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// State specification χ|ξ, α⟩ + η|ζ, α⟩ with ξ = (r, θ), ζ = (s, φ).
#[pyclass(frozen, skip_from_py_object, name = "JanusSpec")]
struct PySpec {
    inner: JanusSpec,
}

#[pymethods]
impl PySpec {
    #[new]
    fn new(
        chi: Complex64,
        eta: Complex64,
        r: f64,
        theta: f64,
        s: f64,
        phi: f64,
        alpha: Complex64,
    ) -> Self {
        Self {
            inner: JanusSpec::new(
                chi,
                eta,
                SqueezeParam::new(r, theta),
                SqueezeParam::new(s, phi),
                alpha,
            ),
        }
    }

    /// Single squeezed coherent state |r e^{iθ}, α⟩ (η = 0).
    #[staticmethod]
    fn single(r: f64, theta: f64, alpha: Complex64) -> Self {
        Self {
            inner: JanusSpec::single(SqueezeParam::new(r, theta), alpha),
        }
    }

    /// Antipodal pair |r, α⟩ − |−r, α⟩ (unnormalized).
    #[staticmethod]
    fn antisymmetric(r: f64, alpha: Complex64) -> Self {
        Self {
            inner: JanusSpec::antisymmetric(r, alpha),
        }
    }

    /// Parses the flat JSON form (chi_re, …, alpha_im).
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner: JanusSpec =
            serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(Self { inner })
    }

    /// Flat JSON form; `from_json` restores every field bit-exactly.
    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner).map_err(|e| PyValueError::new_err(e.to_string()))
    }

    /// Copy with weights rescaled so ⟨Ψ|Ψ⟩ = 1.
    fn normalized(&self) -> PyResult<Self> {
        Ok(Self {
            inner: self.inner.normalized().map_err(to_py)?,
        })
    }

    /// Copy with the weight ratio |χ/η| set to ρ (phases kept).
    fn with_weight_ratio(&self, rho: f64) -> Self {
        let mut inner = self.inner.clone();
        inner.set_weight_ratio(rho);
        Self { inner }
    }

    #[getter]
    fn chi(&self) -> Complex64 {
        self.inner.chi
    }

    #[getter]
    fn eta(&self) -> Complex64 {
        self.inner.eta
    }

    #[getter]
    fn r(&self) -> f64 {
        self.inner.xi.r()
    }

    #[getter]
    fn theta(&self) -> f64 {
        self.inner.xi.theta()
    }

    #[getter]
    fn s(&self) -> f64 {
        self.inner.zeta.r()
    }

    #[getter]
    fn phi(&self) -> f64 {
        self.inner.zeta.theta()
    }

    #[getter]
    fn alpha(&self) -> Complex64 {
        self.inner.alpha
    }

    /// Squared norm ⟨Ψ|Ψ⟩ of the unnormalized superposition.
    #[getter]
    fn norm_form(&self) -> f64 {
        self.inner.norm_form()
    }

    fn __repr__(&self) -> String {
        let s = &self.inner;
        format!(
            "JanusSpec(chi={}, eta={}, r={}, theta={}, s={}, phi={}, alpha={})",
            s.chi,
            s.eta,
            s.xi.r(),
            s.xi.theta(),
            s.zeta.r(),
            s.zeta.theta(),
            s.alpha
        )
    }
}

/// Composite squeezing argument z(ξ, ζ) = tanh(r e^{iθ}) · tanh(s e^{-iφ})
/// in the convention used throughout: z = tanh r tanh s · e^{i(θ−φ)}.
#[pyfunction]
fn composite_z(r: f64, theta: f64, s: f64, phi: f64) -> Complex64 {
    params::composite_z(&SqueezeParam::new(r, theta), &SqueezeParam::new(s, phi))
}

/// Squeezed-vacuum overlap ⟨ζ|ξ⟩.
#[pyfunction]
fn m0(r: f64, theta: f64, s: f64, phi: f64) -> Complex64 {
    moments::m0(&SqueezeParam::new(r, theta), &SqueezeParam::new(s, phi))
}

/// Cross matrix element ⟨ζ, α| a†ᵏaᵏ |ξ, α⟩.
#[pyfunction]
fn matrix_element(
    k: u32,
    r: f64,
    theta: f64,
    s: f64,
    phi: f64,
    alpha: Complex64,
) -> PyResult<Complex64> {
    moments::matrix_element(
        k,
        &SqueezeParam::new(r, theta),
        &SqueezeParam::new(s, phi),
        alpha,
    )
    .map_err(to_py)
}

/// Integer coefficients of the polynomial core P_{p,q}, constant term first.
#[pyfunction]
fn poly_coeffs(p: u32, q: u32) -> PyResult<Vec<BigInt>> {
    gsp::poly(p, q)
        .coeffs()
        .iter()
        .map(|c| {
            if c.is_integer() {
                Ok(c.numer().clone())
            } else {
                Err(PyValueError::new_err(format!(
                    "non-integer coefficient {c} in P_({p},{q})"
                )))
            }
        })
        .collect()
}

/// Closed form F_{p,q}(z) = P_{p,q}(z) / (1−z)^{(p+q+1)/2}.
#[pyfunction]
fn f_closed(p: u32, q: u32, z: Complex64) -> Complex64 {
    gsp::f_closed(p, q, z)
}

/// Direct series for F_{p,q}(z); converges for |z| < 1.
#[pyfunction]
#[pyo3(signature = (p, q, z, tol = 1e-14))]
fn f_series(p: u32, q: u32, z: Complex64, tol: f64) -> PyResult<Complex64> {
    let ctl = gsp::SeriesControl {
        tol,
        ..Default::default()
    };
    gsp::f_series(p, q, z, &ctl).map_err(to_py)
}

/// Normally ordered moment ⟨a†ᵏaᵏ⟩ of the normalized state.
#[pyfunction]
fn janus_moment(spec: &PySpec, k: u32) -> PyResult<f64> {
    let spec = spec.inner.normalized().map_err(to_py)?;
    Ok(moments::janus_moment(k, &spec).map_err(to_py)?.value)
}

/// Equal-time correlation g^(k)(0) = ⟨a†ᵏaᵏ⟩ / ⟨a†a⟩ᵏ.
#[pyfunction]
#[pyo3(signature = (spec, k = 2))]
fn gk(spec: &PySpec, k: u32) -> PyResult<f64> {
    moments::gk(k, &spec.inner).map_err(to_py)
}

/// g^(k)(0) from the truncated Fock oracle (independent route).
#[pyfunction]
#[pyo3(signature = (spec, k = 2))]
fn gk_fock(spec: &PySpec, k: u32) -> PyResult<f64> {
    let spec = spec.inner.normalized().map_err(to_py)?;
    let (v, _) = fock_oracle::build_janus_fock_auto(&spec).map_err(to_py)?;
    Ok(fock_oracle::moment_fock(&v, k) / fock_oracle::moment_fock(&v, 1).powi(k as i32))
}

/// Wigner function W(q, p) of the normalized state, closed form.
#[pyfunction]
fn wigner_point(spec: &PySpec, q: f64, p: f64) -> PyResult<f64> {
    let spec = spec.inner.normalized().map_err(to_py)?;
    wigner::wigner_janus(&spec, q, p).map_err(to_py)
}

/// Wigner function W(q, p) from the Fock oracle.
#[pyfunction]
fn wigner_point_fock(spec: &PySpec, q: f64, p: f64) -> PyResult<f64> {
    let spec = spec.inner.normalized().map_err(to_py)?;
    let (v, _) = fock_oracle::build_janus_fock_auto(&spec).map_err(to_py)?;
    Ok(fock_oracle::wigner_fock(&v, q, p))
}

/// Grid summary {integral, min_value, min_q, min_p, negativity_volume}
/// over [−extent, extent]²; extent and step default as in the CLI.
#[pyfunction]
#[pyo3(signature = (spec, extent = None, step = None))]
fn wigner_summary<'py>(
    py: Python<'py>,
    spec: &PySpec,
    extent: Option<f64>,
    step: Option<f64>,
) -> PyResult<Bound<'py, PyDict>> {
    let spec = spec.inner.normalized().map_err(to_py)?;
    let extent = extent.unwrap_or_else(|| wigner::default_extent(&spec));
    let step = step.unwrap_or_else(|| wigner::default_step(extent));
    let grid = wigner::wigner_grid(&spec, extent, step).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("integral", grid.integral)?;
    d.set_item("min_value", grid.min_value)?;
    d.set_item("min_q", grid.min_q)?;
    d.set_item("min_p", grid.min_p)?;
    d.set_item("negativity_volume", grid.negativity_volume)?;
    Ok(d)
}

/// Photon-number variance Var n̂ of the normalized state.
#[pyfunction]
fn var_n(spec: &PySpec) -> PyResult<f64> {
    metrology::var_n(&spec.inner).map_err(to_py)
}

/// QFI for the displacement phase: F = 4 Var n̂.
#[pyfunction]
fn qfi_dphase(spec: &PySpec) -> PyResult<f64> {
    Ok(metrology::qfi_displacement_phase(&spec.inner)
        .map_err(to_py)?
        .value)
}

/// Displacement-phase QFI from the fidelity drop along the rotation family.
#[pyfunction]
#[pyo3(signature = (spec, dl = 1e-3))]
fn qfi_dphase_numeric(spec: &PySpec, dl: f64) -> PyResult<f64> {
    Ok(
        metrology::fidelity_qfi(&spec.inner, metrology::FidelityParameter::DisplacementPhase, dl, None)
            .map_err(to_py)?
            .value,
    )
}

/// Leading squeezing-angle QFI of the antipodal pair, 10r⁴.
#[pyfunction]
fn qfi_sangle_leading(r: f64) -> f64 {
    metrology::qfi_squeezing_angle_leading(r)
}

/// QFI for the quadratic generator G = ½(a²e^{−iθ_G} + a†²e^{iθ_G}).
#[pyfunction]
#[pyo3(signature = (spec, theta_g = 0.0))]
fn qfi_gsq(spec: &PySpec, theta_g: f64) -> PyResult<f64> {
    Ok(metrology::qfi_gsq(&spec.inner, theta_g, None)
        .map_err(to_py)?
        .value)
}

/// Small-r expansion of g²(0) for the displaced antipodal pair.
#[pyfunction]
fn antisym_g2_expansion(alpha_mag: f64, r: f64) -> f64 {
    moments::antisym_g2_expansion(alpha_mag, r)
}

/// (formula, best_ratio, family_minimum) of the weight-optimized g²(0)
/// at squeezing r, undisplaced antipodal family.
#[pyfunction]
fn optimized_g2(r: f64) -> (f64, f64, f64) {
    let o = moments::optimized_g2_undisplaced(r);
    (o.formula, o.best_ratio, o.family_minimum)
}

#[pymodule]
fn janus_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySpec>()?;
    m.add_function(wrap_pyfunction!(composite_z, m)?)?;
    m.add_function(wrap_pyfunction!(m0, m)?)?;
    m.add_function(wrap_pyfunction!(matrix_element, m)?)?;
    m.add_function(wrap_pyfunction!(poly_coeffs, m)?)?;
    m.add_function(wrap_pyfunction!(f_closed, m)?)?;
    m.add_function(wrap_pyfunction!(f_series, m)?)?;
    m.add_function(wrap_pyfunction!(janus_moment, m)?)?;
    m.add_function(wrap_pyfunction!(gk, m)?)?;
    m.add_function(wrap_pyfunction!(gk_fock, m)?)?;
    m.add_function(wrap_pyfunction!(wigner_point, m)?)?;
    m.add_function(wrap_pyfunction!(wigner_point_fock, m)?)?;
    m.add_function(wrap_pyfunction!(wigner_summary, m)?)?;
    m.add_function(wrap_pyfunction!(var_n, m)?)?;
    m.add_function(wrap_pyfunction!(qfi_dphase, m)?)?;
    m.add_function(wrap_pyfunction!(qfi_dphase_numeric, m)?)?;
    m.add_function(wrap_pyfunction!(qfi_sangle_leading, m)?)?;
    m.add_function(wrap_pyfunction!(qfi_gsq, m)?)?;
    m.add_function(wrap_pyfunction!(antisym_g2_expansion, m)?)?;
    m.add_function(wrap_pyfunction!(optimized_g2, m)?)?;
    Ok(())
}

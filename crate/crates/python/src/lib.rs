//! Python bindings for the b^k-forms toolkit.

use std::fmt::Display;

use bkforms::bk_forms::{is_bk_symplectic, is_positively_oriented, BkSurfaceForm};
use bkforms::classify::{
    bk_symplectomorphic, ll_decomposition, modular_periods, poisson_isomorphic_bk_type,
    PoissonVerdict, SymplectoVerdict,
};
use bkforms::cli::spec::{torus_two_circles, FormSpec};
use bkforms::cli::report::to_canonical_json;
use bkforms::normalize::{self, ResidueVector};
use bkforms::series::RealPolynomial;
use bkforms::volume;
use pyo3::prelude::*;

pyo3::create_exception!(pybkforms, BkFormsError, pyo3::exceptions::PyValueError);

fn to_py<E: Display>(e: E) -> PyErr {
    BkFormsError::new_err(e.to_string())
}

type Residues = Vec<(String, Vec<f64>)>;

fn residues(values: Vec<f64>) -> PyResult<ResidueVector> {
    ResidueVector::new(values).map_err(to_py)
}

/// A b^k-symplectic form on a closed surface, given by its collar densities
/// and the integral of its smooth part.
#[pyclass(name = "Form", module = "pybkforms", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyForm {
    inner: BkSurfaceForm,
}

impl PyForm {
    pub fn inner(&self) -> &BkSurfaceForm {
        &self.inner
    }
}

impl From<BkSurfaceForm> for PyForm {
    fn from(inner: BkSurfaceForm) -> Self {
        Self { inner }
    }
}

#[pymethods]
impl PyForm {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        FormSpec::load(text).map(Self::from).map_err(to_py)
    }

    #[staticmethod]
    #[pyo3(signature = (k, z1, z2, half_width = 0.25, bulk_integral = 0.0))]
    fn torus(k: u32, z1: Vec<f64>, z2: Vec<f64>, half_width: f64, bulk_integral: f64) -> PyResult<Self> {
        torus_two_circles(k, &z1, &z2, half_width, bulk_integral)
            .to_form()
            .map(Self::from)
            .map_err(to_py)
    }

    fn to_json(&self) -> String {
        to_canonical_json(&FormSpec::from_form(&self.inner))
    }

    #[getter]
    fn k(&self) -> u32 {
        self.inner.pole_order()
    }

    #[getter]
    fn descriptor(&self) -> String {
        self.inner.descriptor().to_string()
    }

    #[getter]
    fn bulk_integral(&self) -> f64 {
        self.inner.bulk_integral()
    }

    #[getter]
    fn circles(&self) -> Vec<String> {
        self.inner.collars().iter().map(|c| c.circle().to_string()).collect()
    }

    /// Coefficients of `P(t)`, constant term first.
    fn volume_polynomial(&self) -> PyResult<Vec<f64>> {
        volume::volume_polynomial(&self.inner)
            .map(|p| p.coefficients())
            .map_err(to_py)
    }

    fn liouville_volume(&self) -> PyResult<f64> {
        volume::liouville_volume(&self.inner).map_err(to_py)
    }

    fn vol_cutoff(&self, eps: f64) -> PyResult<f64> {
        volume::vol_cutoff(&self.inner, eps).map_err(to_py)
    }

    /// `[(eps, |P(1/eps) − vol_eps|), …]`.
    fn asymptotic_gap(&self, grid: Vec<f64>) -> PyResult<Vec<(f64, f64)>> {
        volume::asymptotic_gap(&self.inner, &grid)
            .map(|rows| rows.into_iter().map(|r| (r.eps, r.gap)).collect())
            .map_err(to_py)
    }

    fn is_bk_symplectic(&self) -> bool {
        is_bk_symplectic(&self.inner).symplectic
    }

    fn is_positively_oriented(&self) -> PyResult<bool> {
        is_positively_oriented(&self.inner).map_err(to_py)
    }

    /// `(liouville_volume, {circle: [∫α_{−1}, …, ∫α_{−k}]})`.
    fn ll_decomposition(&self) -> PyResult<(f64, Residues)> {
        let ll = ll_decomposition(&self.inner).map_err(to_py)?;
        Ok((ll.liouville_volume, ll.circles.into_iter().zip(ll.residues).collect()))
    }

    fn modular_periods(&self) -> PyResult<Vec<(String, f64)>> {
        let m = modular_periods(&self.inner).map_err(to_py)?;
        Ok(m.circles.into_iter().zip(m.periods).collect())
    }

    /// The form re-expressed in the coordinate `P(y)` on every collar.
    #[pyo3(signature = (poly, order = 16))]
    fn pullback(&self, poly: Vec<f64>, order: usize) -> PyResult<Self> {
        normalize::pullback_form(&self.inner, &RealPolynomial::new(poly), order)
            .map(Self::from)
            .map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!(
            "Form(k={}, circles={:?}, bulk_integral={})",
            self.inner.pole_order(),
            self.circles(),
            self.inner.bulk_integral()
        )
    }
}

/// Coefficients of a polynomial `P` normalizing `Σ a_{−i} dy/y^i`, lowest
/// degree first. `a = [a_{−1}, …, a_{−k}]`.
#[pyfunction]
#[pyo3(signature = (a, order = 16))]
fn poly_pick(a: Vec<f64>, order: usize) -> PyResult<Vec<f64>> {
    normalize::poly_pick(&residues(a)?, order)
        .map(|p| p.coeffs().to_vec())
        .map_err(to_py)
}

/// `(b_{−k}, …, b_{−1})` of `Σ a_{−i} P'/P^i`.
#[pyfunction]
fn principal_coefficients(a: Vec<f64>, poly: Vec<f64>) -> PyResult<Vec<f64>> {
    normalize::principal_coefficients(&residues(a)?, &RealPolynomial::new(poly)).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (f0, f1, tol = 1e-8))]
fn bk_symplectic_verdict(f0: &PyForm, f1: &PyForm, tol: f64) -> PyResult<&'static str> {
    let verdict = bk_symplectomorphic(&f0.inner, &f1.inner, tol).map_err(to_py)?;
    Ok(match verdict {
        SymplectoVerdict::Equivalent => "Equivalent",
        SymplectoVerdict::NotEquivalent => "NotEquivalent",
        SymplectoVerdict::PathDegenerate => "PathDegenerate",
    })
}

#[pyfunction]
#[pyo3(signature = (f0, f1, tol = 1e-8))]
fn poisson_verdict(f0: &PyForm, f1: &PyForm, tol: f64) -> PyResult<&'static str> {
    let verdict = poisson_isomorphic_bk_type(&f0.inner, &f1.inner, tol).map_err(to_py)?;
    Ok(match verdict {
        PoissonVerdict::Isomorphic => "Isomorphic",
        PoissonVerdict::Unknown => "Unknown",
    })
}

/// Runs the command-line tool in-process: `(exit_code, stdout, stderr)`.
#[pyfunction]
fn run_cli(args: Vec<String>) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("bkforms".to_string()).chain(args);
    let code = bkforms::cli::run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8_lossy(&out).into_owned(),
        String::from_utf8_lossy(&err).into_owned(),
    )
}

#[pymodule]
pub fn pybkforms(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("BkFormsError", m.py().get_type::<BkFormsError>())?;
    m.add_class::<PyForm>()?;
    m.add_function(wrap_pyfunction!(poly_pick, m)?)?;
    m.add_function(wrap_pyfunction!(principal_coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(bk_symplectic_verdict, m)?)?;
    m.add_function(wrap_pyfunction!(poisson_verdict, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}

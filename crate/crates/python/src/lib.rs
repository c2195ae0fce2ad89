//! Python bindings: kernels, fields, the Cesàro operator and the harness.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use dunkl_lab::cesaro::{cesaro_scalar, lp_bound_constant, CesaroWeight};
use dunkl_lab::harness::suites::{run_suite as run, Suite, SuiteConfig};
use dunkl_lab::harness::sweep::{rows_to_csv, run_sweep as sweep, Family, FieldSpec, SweepConfig};
use dunkl_lab::harness::tables::kernel_table as table;
use dunkl_lab::{Complex64, Error, QuadratureSpec, WeightedLine};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::NotConverged { .. } | Error::Divergent(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn line(lambda: f64) -> PyResult<WeightedLine> {
    WeightedLine::new(lambda).map_err(py_err)
}

fn family(name: &str) -> PyResult<Family> {
    serde_json::from_value(serde_json::Value::String(name.into()))
        .map_err(|_| PyValueError::new_err(format!("unknown field family '{name}'")))
}

/// `E_λ(iz)` for real `z`.
#[pyfunction]
fn dunkl_kernel(lam: f64, z: f64) -> PyResult<Complex64> {
    line(lam)?;
    Ok(dunkl_lab::dunkl::dunkl_kernel(lam, z))
}

/// `(c_λ, c'_λ, m_λ)`.
#[pyfunction]
fn constants(lam: f64) -> PyResult<(f64, f64, f64)> {
    let l = line(lam)?;
    Ok((l.c_lambda(), l.c_prime(), l.m_lambda()))
}

/// `(P_y(x, t), Q_y(x, t))`.
#[pyfunction]
#[pyo3(signature = (lam, x, y, t = 0.0))]
fn poisson_kernels(lam: f64, x: f64, y: f64, t: f64) -> PyResult<(f64, f64)> {
    let l = line(lam)?;
    let p = dunkl_lab::poisson::poisson_kernel(&l, x, y, t).map_err(py_err)?;
    let q = dunkl_lab::poisson::conjugate_kernel(&l, x, y, t).map_err(py_err)?;
    Ok((p, q))
}

/// `F(x, y)` for a field family (`kernel_p`, `kernel_q`, `kernel_cauchy`, `cauchy`, `spectral`).
#[pyfunction]
#[pyo3(signature = (lam, family_name, x, y, m = 0, y0 = 1.0))]
fn field(lam: f64, family_name: &str, x: f64, y: f64, m: u32, y0: f64) -> PyResult<Complex64> {
    let spec = FieldSpec { family: family(family_name)?, m, y0 };
    let f = spec.build(&line(lam)?, &QuadratureSpec::default()).map_err(py_err)?;
    Ok(f.eval(x, y))
}

/// `(C_α F)(x, y)`.
#[pyfunction]
#[pyo3(signature = (lam, alpha, family_name, x, y, m = 0, y0 = 1.0))]
fn cesaro(lam: f64, alpha: f64, family_name: &str, x: f64, y: f64, m: u32, y0: f64) -> PyResult<Complex64> {
    let qspec = QuadratureSpec::default();
    let spec = FieldSpec { family: family(family_name)?, m, y0 };
    let f = spec.build(&line(lam)?, &qspec).map_err(py_err)?;
    let w = CesaroWeight::new(alpha, &qspec).map_err(py_err)?;
    cesaro_scalar(&f, &w, x, y).map_err(py_err)
}

/// `(value, kind)` of the bound constant for `(p, α, β)`.
#[pyfunction]
fn bound_constant(p: f64, alpha: f64, beta: f64) -> PyResult<(f64, String)> {
    let b = lp_bound_constant(p, alpha, beta).map_err(py_err)?;
    Ok((b.value, b.kind.as_str().to_string()))
}

/// CSV of `E_λ(iz)` on `n` points of `[lo, hi]`.
#[pyfunction]
fn kernel_table(lam: f64, lo: f64, hi: f64, n: usize) -> PyResult<String> {
    let grid = dunkl_lab::harness::tables::parse_grid(&format!("{lo}:{hi}:{n}")).map_err(py_err)?;
    table(lam, &grid, &QuadratureSpec::default()).map_err(py_err)
}

/// Runs a verification suite and returns the JSON report.
#[pyfunction]
#[pyo3(signature = (name, seed = 42))]
fn run_suite(py: Python<'_>, name: &str, seed: u64) -> PyResult<String> {
    let suite: Suite = name.parse().map_err(py_err)?;
    let cfg = SuiteConfig { seed, ..SuiteConfig::default() };
    let report = py.detach(|| run(suite, &cfg)).map_err(py_err)?;
    Ok(report.to_json())
}

/// Runs a sweep from a JSON config and returns the CSV table.
#[pyfunction]
fn run_sweep(py: Python<'_>, config_json: &str) -> PyResult<String> {
    let cfg = SweepConfig::from_json(config_json).map_err(py_err)?;
    let rows = py.detach(|| sweep(&cfg)).map_err(py_err)?;
    Ok(rows_to_csv(&rows))
}

#[pymodule]
pub fn pydunkl(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(dunkl_kernel, m)?)?;
    m.add_function(wrap_pyfunction!(constants, m)?)?;
    m.add_function(wrap_pyfunction!(poisson_kernels, m)?)?;
    m.add_function(wrap_pyfunction!(field, m)?)?;
    m.add_function(wrap_pyfunction!(cesaro, m)?)?;
    m.add_function(wrap_pyfunction!(bound_constant, m)?)?;
    m.add_function(wrap_pyfunction!(kernel_table, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    m.add_function(wrap_pyfunction!(run_sweep, m)?)?;
    Ok(())
}

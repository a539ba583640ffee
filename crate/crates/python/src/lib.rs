//! Python bindings. Matrices are nested lists of complex numbers, Bloch
//! vectors are lists of floats.

use qfi::channels::{self, ChannelKind, ChannelSpec, Mode, Quantity};
use qfi::{fisher, heom, ramsey, CMatrix, DensityMatrix, Error};
use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::InvalidParameter(_) | Error::Parse { .. } | Error::DimensionMismatch { .. } | Error::NotSquare { .. } => {
            PyValueError::new_err(e.to_string())
        }
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn matrix(rows: Vec<Vec<Complex64>>) -> PyResult<CMatrix> {
    let d = rows.len();
    if d == 0 || rows.iter().any(|r| r.len() != d) {
        return Err(PyValueError::new_err("expected a non-empty square matrix"));
    }
    Ok(CMatrix::from_fn(d, d, |i, j| rows[i][j]))
}

fn state_pair(rho: Vec<Vec<Complex64>>, drho: Vec<Vec<Complex64>>) -> PyResult<(DensityMatrix, CMatrix)> {
    let rho = DensityMatrix::new(matrix(rho)?).map_err(to_py)?;
    Ok((rho, matrix(drho)?))
}

/// SLD quantum Fisher information of `rho` moving along `drho`.
#[pyfunction]
fn qfi_sld(rho: Vec<Vec<Complex64>>, drho: Vec<Vec<Complex64>>) -> PyResult<f64> {
    let (r, d) = state_pair(rho, drho)?;
    Ok(fisher::qfi_sld(&r, &d).map_err(to_py)?.value)
}

/// Skew-information variant of the Fisher information.
#[pyfunction]
fn skew_info(rho: Vec<Vec<Complex64>>, drho: Vec<Vec<Complex64>>) -> PyResult<f64> {
    let (r, d) = state_pair(rho, drho)?;
    Ok(fisher::skew_info(&r, &d).map_err(to_py)?.value)
}

fn qubit_vectors(w: Vec<f64>, dw: &[f64]) -> PyResult<qfi::BlochVector> {
    if dw.len() != 3 {
        return Err(PyValueError::new_err("qubit derivative must have 3 components"));
    }
    qfi::BlochVector::from_slice(2, &w).map_err(to_py)
}

#[pyfunction]
fn qfi_bloch_qubit(w: Vec<f64>, dw: Vec<f64>) -> PyResult<f64> {
    fisher::qfi_bloch_qubit(&qubit_vectors(w, &dw)?, &dw).map_err(to_py)
}

#[pyfunction]
fn skew_bloch_qubit(w: Vec<f64>, dw: Vec<f64>) -> PyResult<f64> {
    fisher::skew_bloch_qubit(&qubit_vectors(w, &dw)?, &dw).map_err(to_py)
}

fn quantity(name: &str) -> PyResult<Quantity> {
    Quantity::ALL
        .iter()
        .copied()
        .find(|q| q.column() == name)
        .ok_or_else(|| PyValueError::new_err(format!("unknown quantity `{name}`")))
}

fn kind(name: &str) -> PyResult<ChannelKind> {
    name.parse().map_err(to_py)
}

/// Closed-form channel value; `quantity` is one of F_theta, F_phi,
/// I_theta, I_phi.
#[pyfunction]
#[pyo3(signature = (channel, quantity_name, theta, s, nbar = 0.0))]
fn table1_analytic(channel: &str, quantity_name: &str, theta: f64, s: f64, nbar: f64) -> PyResult<f64> {
    channels::table1_analytic(kind(channel)?, quantity(quantity_name)?, theta, s, nbar).map_err(to_py)
}

/// CSV text of the channel dynamics, as written by the command line tool.
#[pyfunction]
#[pyo3(signature = (channel, theta, phi, gamma, t_max, t_steps, nbar = 0.0, mode = "both"))]
#[allow(clippy::too_many_arguments)]
fn channel_dynamics_csv(
    channel: &str,
    theta: f64,
    phi: f64,
    gamma: f64,
    t_max: f64,
    t_steps: usize,
    nbar: f64,
    mode: &str,
) -> PyResult<String> {
    let spec = ChannelSpec::new(kind(channel)?, gamma, nbar).map_err(to_py)?;
    let mode: Mode = mode.parse().map_err(to_py)?;
    let grid = qfi::output::time_grid(t_max, t_steps);
    Ok(channels::channel_dynamics(&spec, theta, phi, &grid, mode).map_err(to_py)?.to_csv())
}

#[pyfunction]
fn rwa_h(t: f64, gamma: f64, lambda_: f64) -> f64 {
    heom::rwa_h(t, gamma, lambda_)
}

#[pyfunction]
fn ramsey_qfi_closed(n: usize, gamma: f64, t: f64) -> f64 {
    ramsey::ramsey_qfi_closed(n, gamma, t)
}

/// Spectral-route QFI of the dephased GHZ probe.
#[pyfunction]
fn ramsey_qfi_numeric(n: usize, gamma: f64, t: f64) -> PyResult<f64> {
    ramsey::ramsey_qfi_spectral(n, gamma, t).map_err(to_py)
}

#[pyfunction]
fn characteristic_time(n: usize, gamma: f64) -> PyResult<f64> {
    ramsey::characteristic_time(n, gamma).map_err(to_py)
}

#[pymodule]
fn bloch_qfi(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(qfi_sld, m)?)?;
    m.add_function(wrap_pyfunction!(skew_info, m)?)?;
    m.add_function(wrap_pyfunction!(qfi_bloch_qubit, m)?)?;
    m.add_function(wrap_pyfunction!(skew_bloch_qubit, m)?)?;
    m.add_function(wrap_pyfunction!(table1_analytic, m)?)?;
    m.add_function(wrap_pyfunction!(channel_dynamics_csv, m)?)?;
    m.add_function(wrap_pyfunction!(rwa_h, m)?)?;
    m.add_function(wrap_pyfunction!(ramsey_qfi_closed, m)?)?;
    m.add_function(wrap_pyfunction!(ramsey_qfi_numeric, m)?)?;
    m.add_function(wrap_pyfunction!(characteristic_time, m)?)?;
    Ok(())
}

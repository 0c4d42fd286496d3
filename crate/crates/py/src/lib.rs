//! Python bindings for `qexp`.
//!
//! Spectra and distributions cross the boundary as plain sequences of floats;
//! solver results come back as small read-only classes.

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use qexp::{Distribution, EscortOptions, Mode, QParam, ShiftOptions, Spectrum};

create_exception!(pyqexp, QexpError, PyValueError);
create_exception!(pyqexp, InfeasibleError, QexpError);
create_exception!(pyqexp, ConvergenceError, QexpError);

fn err(e: qexp::Error) -> PyErr {
    let msg = e.to_string();
    match e {
        qexp::Error::Infeasible { .. } => InfeasibleError::new_err(msg),
        qexp::Error::Convergence { .. } | qexp::Error::NonConvergence { .. } => {
            ConvergenceError::new_err(msg)
        }
        _ => QexpError::new_err(msg),
    }
}

fn qp(q: f64) -> PyResult<QParam> {
    QParam::new(q).map_err(err)
}

fn spectrum(values: Vec<f64>) -> PyResult<Spectrum> {
    Spectrum::new(values).map_err(err)
}

fn distribution(p: Vec<f64>) -> PyResult<Distribution> {
    Distribution::new(p).map_err(err)
}

#[pyclass(frozen, get_all, skip_from_py_object, module = "pyqexp")]
#[derive(Clone)]
pub struct ShiftSolution {
    pub a0: f64,
    pub residual: f64,
    pub bracket: (f64, f64),
    pub iterations: usize,
    pub method: String,
}

impl From<qexp::ShiftSolution> for ShiftSolution {
    fn from(s: qexp::ShiftSolution) -> Self {
        ShiftSolution {
            a0: s.a0,
            residual: s.residual,
            bracket: s.bracket,
            iterations: s.iterations,
            method: s.method.as_str().to_string(),
        }
    }
}

#[pymethods]
impl ShiftSolution {
    fn __repr__(&self) -> String {
        format!(
            "ShiftSolution(a0={:?}, residual={:?}, iterations={}, method='{}')",
            self.a0, self.residual, self.iterations, self.method
        )
    }
}

#[pyclass(frozen, get_all, module = "pyqexp")]
pub struct FeasibilityReport {
    pub endpoint_value: f64,
    pub sufficient_bound: f64,
    pub feasible: bool,
}

#[pyclass(frozen, get_all, module = "pyqexp")]
pub struct CompositionResult {
    pub i_a: f64,
    pub i_b: f64,
    pub formula_value: f64,
    pub direct_value: f64,
    pub nonextensive_term: f64,
}

#[pymethods]
impl CompositionResult {
    fn discrepancy(&self) -> f64 {
        (self.formula_value - self.direct_value).abs()
    }
}

#[pyclass(frozen, get_all, module = "pyqexp")]
pub struct BetaSolution {
    pub beta: f64,
    pub p: Vec<f64>,
    pub shift: ShiftSolution,
    pub achieved_u: f64,
    pub iterations: usize,
}

#[pyclass(frozen, get_all, module = "pyqexp")]
pub struct EscortSolution {
    pub p: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// The q-exponential factor `[1 - (q-1) x]^(1/(q-1))`.
///
/// With `cutoff=True` points outside the support give 0 instead of raising.
#[pyfunction]
#[pyo3(signature = (x, q, cutoff = false))]
fn q_factor(x: f64, q: f64, cutoff: bool) -> PyResult<f64> {
    let mode = if cutoff { Mode::Cutoff } else { Mode::Strict };
    qexp::q_factor(x, qp(q)?, mode).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (p, q, a = 0.0))]
fn inverse_q_factor(p: f64, q: f64, a: f64) -> PyResult<f64> {
    qexp::inverse_q_factor(p, qp(q)?, a).map_err(err)
}

#[pyfunction]
fn domain_endpoint(values: Vec<f64>, q: f64) -> PyResult<Option<f64>> {
    Ok(qexp::domain_endpoint(&spectrum(values)?, qp(q)?))
}

#[pyfunction]
fn partition_value(a: f64, values: Vec<f64>, q: f64) -> PyResult<f64> {
    qexp::partition_value(a, &spectrum(values)?, qp(q)?).map_err(err)
}

#[pyfunction]
fn feasibility(values: Vec<f64>, q: f64) -> PyResult<FeasibilityReport> {
    let r = qexp::feasibility(&spectrum(values)?, qp(q)?);
    Ok(FeasibilityReport {
        endpoint_value: r.endpoint_value,
        sufficient_bound: r.paper_bound,
        feasible: r.feasible,
    })
}

/// Solves `sum_i e_q(x_i - a) = 1` for the shift `a`.
#[pyfunction]
#[pyo3(signature = (values, q, tol = 1e-12, max_iter = 200, closed_forms = true))]
fn solve_shift(
    values: Vec<f64>,
    q: f64,
    tol: f64,
    max_iter: usize,
    closed_forms: bool,
) -> PyResult<ShiftSolution> {
    let opts = ShiftOptions {
        tol,
        max_iter,
        closed_forms,
    };
    qexp::solve_shift_with(&spectrum(values)?, qp(q)?, &opts)
        .map(Into::into)
        .map_err(err)
}

#[pyfunction]
fn shifted_distribution(values: Vec<f64>, q: f64) -> PyResult<(Vec<f64>, ShiftSolution)> {
    let (p, s) = qexp::shifted_distribution(&spectrum(values)?, qp(q)?).map_err(err)?;
    Ok((p.into_inner(), s.into()))
}

#[pyfunction]
fn uncertainty(p: Vec<f64>, q: f64) -> PyResult<f64> {
    Ok(qexp::uncertainty(&distribution(p)?, qp(q)?))
}

#[pyfunction]
fn bg_entropy(p: Vec<f64>) -> PyResult<f64> {
    Ok(qexp::bg_entropy(&distribution(p)?))
}

#[pyfunction]
fn tsallis_entropy(p: Vec<f64>, q_tilde: f64) -> PyResult<f64> {
    qexp::tsallis_entropy(&distribution(p)?, q_tilde).map_err(err)
}

#[pyfunction]
fn max_uncertainty(w: usize, q: f64) -> PyResult<f64> {
    qexp::max_uncertainty(w, qp(q)?).map_err(err)
}

#[pyfunction]
fn compose(p_a: Vec<f64>, p_b: Vec<f64>, q: f64) -> PyResult<CompositionResult> {
    let c = qexp::compose(&distribution(p_a)?, &distribution(p_b)?, qp(q)?).map_err(err)?;
    Ok(CompositionResult {
        i_a: c.i_a,
        i_b: c.i_b,
        formula_value: c.formula_value,
        direct_value: c.direct_value,
        nonextensive_term: c.nonextensive_term,
    })
}

/// Returns `(headers, rows)` for the two-state sweep over `p1` in `[0, 1]`.
#[pyfunction]
#[pyo3(signature = (q_list, n_points = 201))]
fn two_state_sweep(q_list: Vec<f64>, n_points: usize) -> PyResult<(Vec<String>, Vec<Vec<f64>>)> {
    let qs = q_list.into_iter().map(qp).collect::<PyResult<Vec<_>>>()?;
    let t = qexp::two_state_sweep(&qs, n_points).map_err(err)?;
    Ok((t.headers, t.rows))
}

#[pyfunction]
fn varentropy_residual(values: Vec<f64>, q: f64, dp: Vec<f64>, step: f64) -> PyResult<f64> {
    qexp::varentropy_residual(&spectrum(values)?, qp(q)?, &dp, step).map_err(err)
}

#[pyfunction]
fn maxent_distribution(
    energies: Vec<f64>,
    q: f64,
    beta: f64,
) -> PyResult<(Vec<f64>, ShiftSolution)> {
    let (p, s) = qexp::maxent_distribution(qp(q)?, &spectrum(energies)?, beta).map_err(err)?;
    Ok((p.into_inner(), s.into()))
}

#[pyfunction]
#[pyo3(signature = (energies, q, target_u, tol = 1e-10))]
fn solve_beta(energies: Vec<f64>, q: f64, target_u: f64, tol: f64) -> PyResult<BetaSolution> {
    let s = qexp::solve_beta(qp(q)?, &spectrum(energies)?, target_u, tol).map_err(err)?;
    Ok(BetaSolution {
        beta: s.beta,
        p: s.distribution.into_inner(),
        shift: s.shift.into(),
        achieved_u: s.achieved_u,
        iterations: s.iterations,
    })
}

#[pyfunction]
fn stationarity_residual(energies: Vec<f64>, q: f64, beta: f64) -> PyResult<f64> {
    qexp::stationarity_residual(qp(q)?, &spectrum(energies)?, beta).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (energies, q_tilde, beta, damping = 0.5, tol = 1e-10, max_iter = 10000))]
fn escort_distribution(
    energies: Vec<f64>,
    q_tilde: f64,
    beta: f64,
    damping: f64,
    tol: f64,
    max_iter: usize,
) -> PyResult<EscortSolution> {
    let opts = EscortOptions {
        damping,
        tol,
        max_iter,
    };
    let s = qexp::escort_distribution(q_tilde, &spectrum(energies)?, beta, &opts).map_err(err)?;
    Ok(EscortSolution {
        p: s.p.into_inner(),
        residual: s.residual,
        iterations: s.iterations,
        converged: s.converged,
    })
}

#[pymodule]
fn pyqexp(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("QexpError", py.get_type::<QexpError>())?;
    m.add("InfeasibleError", py.get_type::<InfeasibleError>())?;
    m.add("ConvergenceError", py.get_type::<ConvergenceError>())?;
    m.add("RESIDUAL_CONTRACT", qexp::RESIDUAL_CONTRACT)?;
    m.add_class::<ShiftSolution>()?;
    m.add_class::<FeasibilityReport>()?;
    m.add_class::<CompositionResult>()?;
    m.add_class::<BetaSolution>()?;
    m.add_class::<EscortSolution>()?;
    m.add_function(wrap_pyfunction!(q_factor, m)?)?;
    m.add_function(wrap_pyfunction!(inverse_q_factor, m)?)?;
    m.add_function(wrap_pyfunction!(domain_endpoint, m)?)?;
    m.add_function(wrap_pyfunction!(partition_value, m)?)?;
    m.add_function(wrap_pyfunction!(feasibility, m)?)?;
    m.add_function(wrap_pyfunction!(solve_shift, m)?)?;
    m.add_function(wrap_pyfunction!(shifted_distribution, m)?)?;
    m.add_function(wrap_pyfunction!(uncertainty, m)?)?;
    m.add_function(wrap_pyfunction!(bg_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(tsallis_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(max_uncertainty, m)?)?;
    m.add_function(wrap_pyfunction!(compose, m)?)?;
    m.add_function(wrap_pyfunction!(two_state_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(varentropy_residual, m)?)?;
    m.add_function(wrap_pyfunction!(maxent_distribution, m)?)?;
    m.add_function(wrap_pyfunction!(solve_beta, m)?)?;
    m.add_function(wrap_pyfunction!(stationarity_residual, m)?)?;
    m.add_function(wrap_pyfunction!(escort_distribution, m)?)?;
    Ok(())
}

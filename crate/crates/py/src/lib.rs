//! Python bindings: the counting, intersection-theoretic, spectral, and
//! matrix-model entry points, with rationals crossing the boundary as exact
//! `"num/den"` strings and domain violations raised as `ValueError` instead
//! of aborting the interpreter.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyTuple};

use rspin_core::cohft;
use rspin_core::exact::rat::rat_display;
use rspin_core::hurwitz;
use rspin_core::matrix_model;
use rspin_core::partitions;
use rspin_core::spectral;

fn err(msg: impl Into<String>) -> PyErr {
    PyValueError::new_err(msg.into())
}

fn check_rank(r: u32) -> PyResult<()> {
    if r == 0 {
        return Err(err("spin parameter r must be at least 1"));
    }
    Ok(())
}

fn check_stable(g: u32, n: usize) -> PyResult<()> {
    if 2 * g as i64 - 2 + n as i64 <= 0 {
        return Err(err(format!("unstable cell: g={g}, n={n}")));
    }
    Ok(())
}

fn check_twists(r: u32, twists: impl IntoIterator<Item = u32>) -> PyResult<()> {
    for a in twists {
        if a >= r {
            return Err(err(format!("twist {a} is outside 0..{r}")));
        }
    }
    Ok(())
}

/// A branching profile: genus, spin parameter, and ramification orders.
#[pyclass(frozen)]
struct Profile {
    inner: hurwitz::Profile,
}

#[pymethods]
impl Profile {
    #[new]
    fn new(g: u32, r: u32, k: Vec<u32>) -> PyResult<Self> {
        check_rank(r)?;
        if k.is_empty() {
            return Err(err("profile needs at least one ramification order"));
        }
        if k.contains(&0) {
            return Err(err("ramification orders must be at least 1"));
        }
        Ok(Profile { inner: hurwitz::Profile::new(g, r, k) })
    }

    #[getter]
    fn g(&self) -> u32 {
        self.inner.g
    }

    #[getter]
    fn r(&self) -> u32 {
        self.inner.r
    }

    #[getter]
    fn k(&self) -> Vec<u32> {
        self.inner.k.clone()
    }

    /// Number of extra branch points forced by the genus, if integral.
    #[getter]
    fn branch_count(&self) -> Option<u32> {
        self.inner.branch_count()
    }

    /// Connected count through the character sum; exactly 0 when no integer
    /// branch count exists.
    fn count(&self) -> String {
        rat_display(&hurwitz::connected_hurwitz(&self.inner))
    }

    /// Connected count by explicit enumeration in the symmetric group.
    /// Raises when the profile is outside the enumeration resource guard.
    fn oracle_count(&self) -> PyResult<String> {
        hurwitz::brute_force_hurwitz(&self.inner)
            .map(|v| rat_display(&v))
            .map_err(|e| err(e.to_string()))
    }

    /// The intersection-number expression the count is compared against.
    fn intersection_number(&self) -> PyResult<String> {
        let g = self.inner.g;
        let n = self.inner.k.len();
        check_stable(g, n)?;
        if 3 * g as i64 - 3 + n as i64 > 4 {
            return Err(err("cell dimension 3g-3+n exceeds the supported bound 4"));
        }
        if self.inner.branch_count().is_none() {
            return Err(err("profile admits no integer branch count"));
        }
        Ok(rat_display(&cohft::f_number(&self.inner)))
    }

    fn __repr__(&self) -> String {
        format!(
            "Profile(g={}, r={}, k={:?})",
            self.inner.g, self.inner.r, self.inner.k
        )
    }
}

/// Expansion of the degree-k completed cycle over ordinary cycle classes,
/// as a dict mapping partition tuples to rational strings.
#[pyfunction]
fn completed_cycle(py: Python<'_>, k: u32) -> PyResult<Py<PyDict>> {
    if k == 0 {
        return Err(err("cycle degree must be at least 1"));
    }
    let cc = partitions::completed_cycle(k);
    let out = PyDict::new(py);
    for (lam, c) in &cc.coeffs {
        out.set_item(PyTuple::new(py, lam)?, rat_display(c))?;
    }
    Ok(out.into())
}

/// Σ over boxes of ((contents shifted by -1/2)^s)/s, the eigenvalue the
/// completed cycles are solved against.
#[pyfunction]
fn shifted_power_sum(s: u32, mu: Vec<u32>) -> PyResult<String> {
    if s == 0 {
        return Err(err("power must be at least 1"));
    }
    Ok(rat_display(&partitions::shifted_power_sum(s, &mu)))
}

/// ⟨τ_{d₁} ⋯ τ_{d_n}⟩_g over the moduli of stable curves.
#[pyfunction]
fn psi_intersection(g: u32, ds: Vec<u32>) -> PyResult<String> {
    check_stable(g, ds.len())?;
    Ok(rat_display(&rspin_core::psi::psi_intersection(g, &ds)))
}

/// Correlator of the reconstructed field theory: legs are (twist, psi-power).
#[pyfunction]
fn correlator(r: u32, g: u32, legs: Vec<(u32, u32)>) -> PyResult<String> {
    check_rank(r)?;
    check_stable(g, legs.len())?;
    check_twists(r, legs.iter().map(|&(a, _)| a))?;
    Ok(rat_display(&cohft::givental_correlator(r, g, &legs)))
}

/// Degree-zero part of the theory: the underlying two-dimensional field
/// theory evaluated on twists alone.
#[pyfunction]
fn tqft_value(r: u32, g: u32, twists: Vec<u32>) -> PyResult<String> {
    check_rank(r)?;
    check_stable(g, twists.len())?;
    check_twists(r, twists.iter().copied())?;
    Ok(rat_display(&cohft::tqft_value(r, g, &twists)))
}

/// One verdict dict per dual-route series identity, up to the given rank.
#[pyfunction]
fn lemma_report(py: Python<'_>, r_max: u32, order: u32) -> PyResult<Vec<Py<PyDict>>> {
    check_rank(r_max)?;
    let mut out = Vec::new();
    for c in spectral::lemma_report(r_max, order as usize) {
        let d = PyDict::new(py);
        d.set_item("lemma", &c.lemma)?;
        d.set_item("r", c.r)?;
        d.set_item("order", c.order)?;
        d.set_item("pass", c.pass)?;
        d.set_item("first_mismatch", &c.first_mismatch)?;
        out.push(d.into());
    }
    Ok(out)
}

/// Correlation-coefficient table assembled from the closed-form expansion,
/// as (ramification orders, rational string) rows.
#[pyfunction]
fn assembled_coefficients(g: u32, r: u32, n: u32, k_bound: u32) -> PyResult<Vec<(Vec<u32>, String)>> {
    check_rank(r)?;
    check_stable(g, n as usize)?;
    Ok(spectral::doss_assemble(g, r, n, k_bound).rows)
}

/// The same table computed by residues on the curve; only the base
/// topologies are implemented, others raise.
#[pyfunction]
fn residue_coefficients(g: u32, r: u32, n: u32, k_bound: u32) -> PyResult<Vec<(Vec<u32>, String)>> {
    check_rank(r)?;
    spectral::recursion::eo_direct(g, n, r, k_bound)
        .map(|t| t.rows)
        .map_err(|e| err(e.to_string()))
}

/// Fourier-sum identity between sheet-basis and flat-basis correlators.
#[pyfunction]
fn scaling_identity_check(g: u32, r: u32, legs: Vec<(u32, u32)>) -> PyResult<bool> {
    check_rank(r)?;
    check_stable(g, legs.len())?;
    check_twists(r, legs.iter().map(|&(a, _)| a))?;
    Ok(spectral::scaling::scaling_identity_check(g, r, &legs).pass)
}

/// Row-sum identity for the shifted symbol of the finite matrix model.
#[pyfunction]
fn a_identity_check(r: u32, n: u32, lam: Vec<u32>) -> PyResult<bool> {
    check_rank(r)?;
    if n == 0 {
        return Err(err("matrix size must be at least 1"));
    }
    if lam.len() > n as usize {
        return Err(err("partition has more rows than the matrix size"));
    }
    if lam.windows(2).any(|w| w[0] < w[1]) || lam.contains(&0) {
        return Err(err("partition rows must be positive and weakly decreasing"));
    }
    Ok(matrix_model::a_identity_check(r, n, &lam))
}

/// Smallest cutoff at which the finite sum reproduces the degree-k
/// coefficient of the character expansion.
#[pyfunction]
fn minimal_admissible_d(k: u32, n: u32) -> u32 {
    matrix_model::minimal_admissible_d(k, n)
}

/// Compare the finite-sum and character expansions of one coefficient.
#[pyfunction]
fn coefficient_check(k: u32, n: u32, d: u32, r: u32, gs_order: u32) -> PyResult<bool> {
    check_rank(r)?;
    if n <= k {
        return Err(err("need more variables than the degree: n > k"));
    }
    if 2 * d <= 2 * k + n - 1 {
        return Err(err("cutoff below the convergence bound 2d > 2k + n - 1"));
    }
    Ok(matrix_model::coefficient_check(k, n, d, r, gs_order).pass)
}

/// Residual of the first bilinear-hierarchy equation on the cut-off free
/// energy; `all_zero` is the verdict.
#[pyfunction]
fn kp_residual(py: Python<'_>, r: u32, degree_bound: u32) -> PyResult<Py<PyDict>> {
    check_rank(r)?;
    let rep = hurwitz::kp_residual(r, degree_bound);
    let d = PyDict::new(py);
    d.set_item("r", rep.r)?;
    d.set_item("degree_bound", rep.degree_bound)?;
    d.set_item("checked_weight", rep.checked_weight)?;
    d.set_item("equation", rep.equation)?;
    d.set_item("all_zero", rep.all_zero)?;
    Ok(d.into())
}

#[pymodule]
fn rspin(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<Profile>()?;
    m.add_function(wrap_pyfunction!(completed_cycle, m)?)?;
    m.add_function(wrap_pyfunction!(shifted_power_sum, m)?)?;
    m.add_function(wrap_pyfunction!(psi_intersection, m)?)?;
    m.add_function(wrap_pyfunction!(correlator, m)?)?;
    m.add_function(wrap_pyfunction!(tqft_value, m)?)?;
    m.add_function(wrap_pyfunction!(lemma_report, m)?)?;
    m.add_function(wrap_pyfunction!(assembled_coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(residue_coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(scaling_identity_check, m)?)?;
    m.add_function(wrap_pyfunction!(a_identity_check, m)?)?;
    m.add_function(wrap_pyfunction!(minimal_admissible_d, m)?)?;
    m.add_function(wrap_pyfunction!(coefficient_check, m)?)?;
    m.add_function(wrap_pyfunction!(kp_residual, m)?)?;
    Ok(())
}

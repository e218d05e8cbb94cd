//! Python bindings for `schubert_core`.

use num_bigint::BigUint;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyComplex;

use schubert_core::cli::{resolve, space_from_flags, ProblemArgs, Resolved};
use schubert_core::covers::{lr_coefficient as lr, monk_covers as monk, Partition};
use schubert_core::geometry::{self, build_system};
use schubert_core::indexing::{self, FlagPermutation, FlagShape, Space};
use schubert_core::multposet::{self, build_poset, label, MultiplicityPoset};
use schubert_core::poly::parse_rational;
use schubert_core::solver::{self, TrackerConfig};
use schubert_core::Error;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Solver(_) | Error::Degenerate(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

#[allow(clippy::too_many_arguments)]
fn problem(
    space: Option<String>,
    k: Option<usize>,
    n: Option<usize>,
    d: Option<Vec<usize>>,
    mu: Option<String>,
    copies: Option<usize>,
    conditions: Option<String>,
    target: Option<String>,
    config: Option<String>,
) -> ProblemArgs {
    ProblemArgs {
        space,
        k,
        n,
        d: d.map(|d| d.iter().map(usize::to_string).collect::<Vec<_>>().join(",")),
        mu,
        copies,
        conditions,
        target,
        config: config.map(Into::into),
    }
}

fn make_space(kind: &str, k: Option<usize>, n: Option<usize>, d: Option<Vec<usize>>) -> PyResult<Space> {
    let args = problem(Some(kind.to_string()), k, n, d, None, None, None, None, None);
    space_from_flags(kind, &args).map_err(py_err)
}

/// Number of chains to the target, counted with multiplicity.
#[pyfunction]
#[pyo3(signature = (space=None, *, k=None, n=None, d=None, mu=None, copies=None, conditions=None, target=None, config=None))]
#[allow(clippy::too_many_arguments)]
fn deg(
    space: Option<String>,
    k: Option<usize>,
    n: Option<usize>,
    d: Option<Vec<usize>>,
    mu: Option<String>,
    copies: Option<usize>,
    conditions: Option<String>,
    target: Option<String>,
    config: Option<String>,
) -> PyResult<BigUint> {
    let args = problem(space, k, n, d, mu, copies, conditions, target, config);
    let r = resolve(&args, None, None, false, None).map_err(py_err)?;
    Ok(build_poset(&r.spec).map_err(py_err)?.deg_target())
}

/// Number of chains to the target with odd multiplicity.
#[pyfunction]
#[pyo3(signature = (space=None, *, k=None, n=None, d=None, mu=None, copies=None, conditions=None, target=None, config=None))]
#[allow(clippy::too_many_arguments)]
fn odd(
    space: Option<String>,
    k: Option<usize>,
    n: Option<usize>,
    d: Option<Vec<usize>>,
    mu: Option<String>,
    copies: Option<usize>,
    conditions: Option<String>,
    target: Option<String>,
    config: Option<String>,
) -> PyResult<BigUint> {
    let args = problem(space, k, n, d, mu, copies, conditions, target, config);
    let r = resolve(&args, None, None, false, None).map_err(py_err)?;
    Ok(build_poset(&r.spec).map_err(py_err)?.odd_target())
}

/// Rows `(r, deg, odd)` for `Gr(3, r+3)` with `r` conditions `(2,1)`.
#[pyfunction]
#[pyo3(signature = (rmax=11))]
fn table1(rmax: usize) -> PyResult<Vec<(usize, BigUint, BigUint)>> {
    let rows = multposet::table1(rmax).map_err(py_err)?;
    Ok(rows.into_iter().map(|r| (r.r, r.deg, r.odd)).collect())
}

/// A multiplicity poset with its chain counts.
#[pyclass(frozen)]
struct Poset {
    inner: MultiplicityPoset,
}

#[pymethods]
impl Poset {
    #[new]
    #[pyo3(signature = (space=None, *, k=None, n=None, d=None, mu=None, copies=None, conditions=None, target=None, config=None))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        space: Option<String>,
        k: Option<usize>,
        n: Option<usize>,
        d: Option<Vec<usize>>,
        mu: Option<String>,
        copies: Option<usize>,
        conditions: Option<String>,
        target: Option<String>,
        config: Option<String>,
    ) -> PyResult<Self> {
        let args = problem(space, k, n, d, mu, copies, conditions, target, config);
        let r = resolve(&args, None, None, false, None).map_err(py_err)?;
        Ok(Poset { inner: build_poset(&r.spec).map_err(py_err)? })
    }

    #[getter]
    fn deg(&self) -> BigUint {
        self.inner.deg_target()
    }

    #[getter]
    fn odd(&self) -> BigUint {
        self.inner.odd_target()
    }

    #[getter]
    fn target(&self) -> Option<String> {
        self.inner.target().map(label)
    }

    /// Node labels by rank.
    #[getter]
    fn ranks(&self) -> Vec<Vec<String>> {
        self.inner.ranks().iter().map(|r| r.iter().map(label).collect()).collect()
    }

    /// `(from, to, stage, multiplicity)` for every edge.
    #[getter]
    fn edges(&self) -> Vec<(String, String, usize, u64)> {
        self.inner.edges().iter().map(|e| (label(&e.from), label(&e.to), e.stage, e.multiplicity)).collect()
    }

    fn __len__(&self) -> usize {
        self.inner.node_count()
    }

    fn node_deg(&self, node: &str) -> PyResult<BigUint> {
        let w = self.inner.space().parse_index(node).map_err(py_err)?;
        Ok(self.inner.deg(&w))
    }

    fn node_odd(&self, node: &str) -> PyResult<BigUint> {
        let w = self.inner.space().parse_index(node).map_err(py_err)?;
        Ok(self.inner.odd(&w))
    }

    /// Sorted products of edge multiplicities along the chains to the target.
    #[pyo3(signature = (limit=100_000))]
    fn chain_multiplicities(&self, limit: usize) -> PyResult<Vec<BigUint>> {
        match self.inner.target() {
            Some(t) => self.inner.chain_multiplicities(t, limit).map_err(py_err),
            None => Ok(Vec::new()),
        }
    }

    fn to_dot(&self) -> String {
        self.inner.to_dot()
    }

    fn to_json(&self) -> String {
        self.inner.to_json().to_string()
    }

    fn __repr__(&self) -> String {
        format!("Poset({}, nodes={}, deg={})", self.inner.space(), self.inner.node_count(), self.inner.deg_target())
    }
}

fn resolve_solve(
    space: Option<String>,
    params: Option<String>,
    anchor: Option<String>,
    seed: Option<u64>,
    general: bool,
    config: Option<String>,
) -> PyResult<Resolved> {
    let args = ProblemArgs { space, config: config.map(Into::into), ..ProblemArgs::default() };
    resolve(&args, params.as_deref(), anchor.as_deref(), general, seed).map_err(py_err)
}

fn json_to_py(py: Python<'_>, value: &serde_json::Value) -> PyResult<Py<PyAny>> {
    Ok(py.import("json")?.call_method1("loads", (value.to_string(),))?.unbind())
}

/// Solves one instance; returns the report as a dict.
#[pyfunction]
#[pyo3(signature = (space=None, *, params=None, anchor=None, seed=None, general=false, config=None, tol_real=None, tol_newton=None))]
#[allow(clippy::too_many_arguments)]
fn solve(
    py: Python<'_>,
    space: Option<String>,
    params: Option<String>,
    anchor: Option<String>,
    seed: Option<u64>,
    general: bool,
    config: Option<String>,
    tol_real: Option<f64>,
    tol_newton: Option<f64>,
) -> PyResult<Py<PyAny>> {
    let mut r = resolve_solve(space, params, anchor, seed, general, config)?;
    if let Some(t) = tol_real {
        r.tracker.reality_tol = t;
    }
    if let Some(t) = tol_newton {
        r.tracker.newton_tol = t;
    }
    let set = py.detach(|| -> schubert_core::Result<_> {
        let sys = build_system(&r.spec, &r.params, &r.options)?;
        let set = solver::solve(&sys, &r.tracker)?;
        let expected = build_poset(&r.spec)?.deg_target().to_string();
        Ok(serde_json::json!({
            "variables": sys.names,
            "params": r.params.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "expected": expected,
            "result": set.to_json(),
        }))
    });
    json_to_py(py, &set.map_err(py_err)?)
}

/// The polynomial system as text.
#[pyfunction]
#[pyo3(signature = (space=None, *, params=None, anchor=None, general=false, config=None))]
fn system(space: Option<String>, params: Option<String>, anchor: Option<String>, general: bool, config: Option<String>) -> PyResult<String> {
    let r = resolve_solve(space, params, anchor, None, general, config)?;
    Ok(build_system(&r.spec, &r.params, &r.options).map_err(py_err)?.render())
}

/// Solves for each parameter list; returns the CSV report.
#[pyfunction]
#[pyo3(signature = (space, param_sets, *, anchor=None, seed=None))]
fn sweep(py: Python<'_>, space: String, param_sets: Vec<String>, anchor: Option<String>, seed: Option<u64>) -> PyResult<String> {
    let r = resolve_solve(Some(space), None, anchor, seed, false, None)?;
    let sets = param_sets.iter().map(|s| geometry::parse_params(s)).collect::<schubert_core::Result<Vec<_>>>().map_err(py_err)?;
    let cfg: TrackerConfig = r.tracker.clone();
    let report = py.detach(|| solver::sweep(&r.spec, &sets, &r.options, &cfg)).map_err(py_err)?;
    Ok(report.to_csv())
}

/// The two points of the `LG(2)` problem on the cell `(2)` at osculation points `s` and `t`.
#[pyfunction]
fn lg2_closed_form(py: Python<'_>, s: f64, t: f64) -> PyResult<Vec<(Py<PyComplex>, Py<PyComplex>)>> {
    let pts = geometry::lg2_closed_form(s, t).map_err(py_err)?;
    Ok(pts
        .iter()
        .map(|(x, y)| (PyComplex::from_doubles(py, x.re, x.im).unbind(), PyComplex::from_doubles(py, y.re, y.im).unbind()))
        .collect())
}

/// Discriminant of the OG(3) problem; accepts numbers or exact strings such as "1/3".
#[pyfunction]
fn og3_discriminant(params: Vec<String>) -> PyResult<String> {
    let qs = params.iter().map(|p| parse_rational(p)).collect::<schubert_core::Result<Vec<_>>>().map_err(py_err)?;
    let arr: [_; 6] = qs.try_into().map_err(|_| PyValueError::new_err("expected six parameters"))?;
    Ok(geometry::og3_discriminant_exact(&arr).to_string())
}

/// Bruhat comparison `u <= w`.
#[pyfunction]
#[pyo3(signature = (u, w, space, *, k=None, n=None, d=None))]
fn bruhat_leq(u: &str, w: &str, space: &str, k: Option<usize>, n: Option<usize>, d: Option<Vec<usize>>) -> PyResult<bool> {
    let space = make_space(space, k, n, d)?;
    let (u, w) = (space.parse_index(u).map_err(py_err)?, space.parse_index(w).map_err(py_err)?);
    indexing::bruhat_leq(&u, &w, &space).map_err(py_err)
}

/// Monk covers of a permutation word at a 1-based stage of the flag shape `d`.
#[pyfunction]
fn monk_covers(word: Vec<usize>, d: Vec<usize>, stage: usize) -> PyResult<Vec<Vec<usize>>> {
    let shape = FlagShape::new(word.len(), d).map_err(py_err)?;
    let w = FlagPermutation::new(word, shape).map_err(py_err)?;
    let list = monk(&w, stage).map_err(py_err)?;
    Ok(list.covers.iter().filter_map(|(v, _)| v.as_perm().map(|p| p.word().to_vec())).collect())
}

/// Littlewood-Richardson coefficient `c^nu_{lam, mu}`.
#[pyfunction]
fn lr_coefficient(nu: Vec<usize>, lam: Vec<usize>, mu: Vec<usize>) -> PyResult<u64> {
    let p = |v: Vec<usize>| Partition::new(v).map_err(py_err);
    Ok(lr(&p(nu)?, &p(lam)?, &p(mu)?))
}

/// `(name, description)` for each named problem.
#[pyfunction]
fn presets() -> Vec<(String, String)> {
    schubert_core::presets::PRESET_NAMES
        .iter()
        .filter_map(|n| schubert_core::presets::preset(n).ok())
        .map(|p| (p.name.to_string(), p.description.to_string()))
        .collect()
}

#[pymodule]
fn schubert(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Poset>()?;
    m.add_function(wrap_pyfunction!(deg, m)?)?;
    m.add_function(wrap_pyfunction!(odd, m)?)?;
    m.add_function(wrap_pyfunction!(table1, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(system, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    m.add_function(wrap_pyfunction!(lg2_closed_form, m)?)?;
    m.add_function(wrap_pyfunction!(og3_discriminant, m)?)?;
    m.add_function(wrap_pyfunction!(bruhat_leq, m)?)?;
    m.add_function(wrap_pyfunction!(monk_covers, m)?)?;
    m.add_function(wrap_pyfunction!(lr_coefficient, m)?)?;
    m.add_function(wrap_pyfunction!(presets, m)?)?;
    Ok(())
}

//! Python bindings: formulas, weighted instances, counting, Max-SAT,
//! elimination orders and the seeded generators.

use num_bigint::BigUint;
use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use nestcount::formula::parse_dimacs;
use nestcount::gen::{BaseGraph, HardPsSpec, IntervalSpec, WeightSpec};
use nestcount::hypergraph::beta_elimination_order;
use nestcount::wcspd::{parse_wcspd, serialize_wcspd};
use nestcount::{CnfFormula, Error, EvalMode, Hypergraph, WcspInstance};

create_exception!(nestcount_py, NotBetaAcyclicError, PyValueError);

fn to_py(e: Error) -> PyErr {
    match e {
        Error::NotBetaAcyclic { witness } => {
            let w: Vec<u32> = witness.iter().map(|v| v.index()).collect();
            NotBetaAcyclicError::new_err(("not beta-acyclic", w))
        }
        Error::Parse { .. }
        | Error::InvalidSpec(_)
        | Error::Precondition(_)
        | Error::UnknownVertex(_) => PyValueError::new_err(e.to_string()),
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

fn parse_mode(mode: &str) -> PyResult<EvalMode> {
    match mode {
        "sum" => Ok(EvalMode::Sum),
        "max" => Ok(EvalMode::Max),
        other => Err(PyValueError::new_err(format!(
            "mode must be 'sum' or 'max', got {other:?}"
        ))),
    }
}

fn order_of(h: &Hypergraph) -> PyResult<Vec<u32>> {
    beta_elimination_order(h)
        .map(|o| o.iter().map(|v| v.index()).collect())
        .map_err(to_py)
}

/// A CNF formula. Tautologies and empty clauses are tracked, not stored.
#[pyclass(frozen, skip_from_py_object, module = "nestcount_py")]
#[derive(Clone)]
pub struct Formula {
    inner: CnfFormula,
}

#[pymethods]
impl Formula {
    #[new]
    fn new(num_vars: u32, clauses: Vec<Vec<i64>>) -> PyResult<Self> {
        CnfFormula::from_clauses(num_vars, &clauses)
            .map(|inner| Formula { inner })
            .map_err(to_py)
    }

    #[staticmethod]
    fn from_dimacs(text: &str) -> PyResult<Self> {
        parse_dimacs(text)
            .map(|inner| Formula { inner })
            .map_err(to_py)
    }

    fn to_dimacs(&self) -> String {
        self.inner.to_dimacs()
    }

    #[getter]
    fn num_vars(&self) -> u32 {
        self.inner.declared_var_count()
    }

    /// Stored clauses as DIMACS literal lists.
    #[getter]
    fn clauses(&self) -> Vec<Vec<i64>> {
        self.inner
            .clauses()
            .iter()
            .map(|c| c.literals().iter().map(|l| l.to_dimacs()).collect())
            .collect()
    }

    #[getter]
    fn tautology_count(&self) -> usize {
        self.inner.tautology_count()
    }

    #[getter]
    fn empty_clause_count(&self) -> usize {
        self.inner.empty_clause_count()
    }

    fn is_monotone(&self) -> bool {
        self.inner.is_monotone()
    }

    fn is_beta_acyclic(&self) -> bool {
        nestcount::hypergraph::is_beta_acyclic(&self.inner.hypergraph())
    }

    fn elimination_order(&self) -> PyResult<Vec<u32>> {
        order_of(&self.inner.hypergraph())
    }

    fn count_models(&self) -> PyResult<BigUint> {
        nestcount::count_models(&self.inner).map_err(to_py)
    }

    fn max_sat(&self) -> PyResult<u64> {
        nestcount::max_sat(&self.inner).map_err(to_py)
    }

    /// Model count by enumeration; for cross-checking small formulas.
    fn brute_count(&self) -> PyResult<BigUint> {
        nestcount::oracle::brute_count(&self.inner).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!(
            "Formula(num_vars={}, clauses={})",
            self.inner.declared_var_count(),
            self.inner.clauses().len()
        )
    }
}

/// A weighted constraint instance with default values.
#[pyclass(frozen, skip_from_py_object, module = "nestcount_py")]
#[derive(Clone)]
pub struct Instance {
    inner: WcspInstance,
}

fn fraction<'py>(py: Python<'py>, r: &nestcount::Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?
        .getattr("Fraction")?
        .call1((r.numer().clone(), r.denom().clone()))
}

#[pymethods]
impl Instance {
    #[staticmethod]
    fn from_wcspd(text: &str) -> PyResult<Self> {
        parse_wcspd(text)
            .map(|inner| Instance { inner })
            .map_err(to_py)
    }

    /// The count encoding of a formula (default 1, falsifier 0).
    #[staticmethod]
    fn count_encoding(formula: &Formula) -> PyResult<Self> {
        nestcount::wcsp::cnf_to_count_instance(&formula.inner)
            .map(|inner| Instance { inner })
            .map_err(to_py)
    }

    /// The Max-SAT encoding of a formula (default 2, falsifier 1).
    #[staticmethod]
    fn max_encoding(formula: &Formula) -> Self {
        Instance {
            inner: nestcount::wcsp::cnf_to_max_instance(&formula.inner),
        }
    }

    fn to_wcspd(&self) -> String {
        serialize_wcspd(&self.inner)
    }

    #[getter]
    fn num_vars(&self) -> u32 {
        self.inner.num_vars()
    }

    #[getter]
    fn domain_size(&self) -> u32 {
        self.inner.domain_size()
    }

    #[getter]
    fn num_constraints(&self) -> usize {
        self.inner.constraints().len()
    }

    fn elimination_order(&self) -> PyResult<Vec<u32>> {
        order_of(&self.inner.hypergraph())
    }

    /// Exact value as a `fractions.Fraction`; `mode` is "sum" or "max".
    #[pyo3(signature = (mode = "sum"))]
    fn solve<'py>(&self, py: Python<'py>, mode: &str) -> PyResult<Bound<'py, PyAny>> {
        let r = nestcount::solve(&self.inner, parse_mode(mode)?).map_err(to_py)?;
        fraction(py, &r)
    }

    #[pyo3(signature = (mode = "sum"))]
    fn brute_force<'py>(&self, py: Python<'py>, mode: &str) -> PyResult<Bound<'py, PyAny>> {
        let r = nestcount::oracle::brute_instance(&self.inner, parse_mode(mode)?).map_err(to_py)?;
        fraction(py, &r)
    }

    fn __repr__(&self) -> String {
        format!(
            "Instance(num_vars={}, domain_size={}, constraints={})",
            self.inner.num_vars(),
            self.inner.domain_size(),
            self.inner.constraints().len()
        )
    }
}

#[pyfunction]
fn count_models(dimacs: &str) -> PyResult<BigUint> {
    Formula::from_dimacs(dimacs)?.count_models()
}

#[pyfunction]
fn max_sat(dimacs: &str) -> PyResult<u64> {
    Formula::from_dimacs(dimacs)?.max_sat()
}

#[pyfunction]
#[pyo3(signature = (wcspd, mode = "sum"))]
fn solve_wcspd<'py>(py: Python<'py>, wcspd: &str, mode: &str) -> PyResult<Bound<'py, PyAny>> {
    Instance::from_wcspd(wcspd)?.solve(py, mode)
}

/// Elimination order of a DIMACS or `.wcspd` text.
#[pyfunction]
fn elimination_order(text: &str) -> PyResult<Vec<u32>> {
    let wcspd = text
        .lines()
        .map(str::trim)
        .find(|l| l.starts_with('p'))
        .is_some_and(|l| l.split_whitespace().nth(1) == Some("wcspd"));
    if wcspd {
        Instance::from_wcspd(text)?.elimination_order()
    } else {
        Formula::from_dimacs(text)?.elimination_order()
    }
}

fn interval_spec(
    seed: u64,
    num_vars: u32,
    num_scopes: usize,
    min_arity: usize,
    max_arity: Option<usize>,
    laminar: bool,
) -> IntervalSpec {
    IntervalSpec {
        seed,
        num_vars,
        num_scopes,
        min_arity,
        max_arity: max_arity.unwrap_or_else(|| (num_vars as usize).min(3).max(min_arity)),
        laminar,
    }
}

#[pyfunction]
#[pyo3(signature = (num_vars, num_clauses, seed = 0, min_arity = 1, max_arity = None, laminar = true))]
fn gen_interval(
    num_vars: u32,
    num_clauses: usize,
    seed: u64,
    min_arity: usize,
    max_arity: Option<usize>,
    laminar: bool,
) -> PyResult<Formula> {
    let spec = interval_spec(seed, num_vars, num_clauses, min_arity, max_arity, laminar);
    nestcount::gen::gen_interval_cnf(&spec)
        .map(|inner| Formula { inner })
        .map_err(to_py)
}

#[allow(clippy::too_many_arguments)]
#[pyfunction]
#[pyo3(signature = (num_vars, num_constraints, seed = 0, domain_size = 2, min_arity = 1, max_arity = None, laminar = true, max_numer = 20, max_denom = 20, max_support = 4))]
fn gen_interval_wcsp(
    num_vars: u32,
    num_constraints: usize,
    seed: u64,
    domain_size: u32,
    min_arity: usize,
    max_arity: Option<usize>,
    laminar: bool,
    max_numer: u64,
    max_denom: u64,
    max_support: usize,
) -> PyResult<Instance> {
    let spec = interval_spec(
        seed,
        num_vars,
        num_constraints,
        min_arity,
        max_arity,
        laminar,
    );
    let w = WeightSpec {
        domain_size,
        max_numer,
        max_denom,
        max_support,
    };
    nestcount::gen::gen_interval_wcsp(&spec, &w)
        .map(|inner| Instance { inner })
        .map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (base_vertices, seed = 0, edge_prob = 0.5, degree = None, subdivide = true))]
fn gen_hardps(
    base_vertices: usize,
    seed: u64,
    edge_prob: f64,
    degree: Option<usize>,
    subdivide: bool,
) -> PyResult<Formula> {
    let base = match degree {
        Some(degree) => BaseGraph::Regular {
            vertices: base_vertices,
            degree,
        },
        None => BaseGraph::ErdosRenyi {
            vertices: base_vertices,
            edge_prob,
        },
    };
    nestcount::gen::gen_hardps(&HardPsSpec {
        seed,
        base,
        subdivide,
    })
    .map(|inner| Formula { inner })
    .map_err(to_py)
}

#[pymodule]
fn nestcount_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Formula>()?;
    m.add_class::<Instance>()?;
    m.add(
        "NotBetaAcyclicError",
        m.py().get_type::<NotBetaAcyclicError>(),
    )?;
    m.add_function(wrap_pyfunction!(count_models, m)?)?;
    m.add_function(wrap_pyfunction!(max_sat, m)?)?;
    m.add_function(wrap_pyfunction!(solve_wcspd, m)?)?;
    m.add_function(wrap_pyfunction!(elimination_order, m)?)?;
    m.add_function(wrap_pyfunction!(gen_interval, m)?)?;
    m.add_function(wrap_pyfunction!(gen_interval_wcsp, m)?)?;
    m.add_function(wrap_pyfunction!(gen_hardps, m)?)?;
    Ok(())
}

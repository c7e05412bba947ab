//! Python bindings. Rationals cross the boundary as anything whose `str()`
//! reads `"p/q"` or an integer (so `int`, `str` and `fractions.Fraction`
//! all work) and come back as `"p/q"` strings.

use bssbp_core::bss_machine::{self, BssProgram, RunOutcome};
use bssbp_core::exact_arith::{format_rational, parse_rational, ArithError};
use bssbp_core::io;
use bssbp_core::linalg::Matrix;
use bssbp_core::optimizer::{self, FeasibilityStatus, OracleError, SolveError, SolveOptions};
use bssbp_core::turing_gap;
use bssbp_core::{QuadraticNumber, Rational};
use pyo3::basic::CompareOp;
use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError, PyZeroDivisionError};
use pyo3::prelude::*;

create_exception!(bssbp, InfeasibleError, PyValueError, "The feasible set is empty.");
create_exception!(bssbp, BudgetExceededError, PyRuntimeError, "A step or enumeration budget ran out.");

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn solve_error(e: SolveError) -> PyErr {
    match e {
        SolveError::Infeasible { .. } => InfeasibleError::new_err(e.to_string()),
        SolveError::BudgetExceeded { .. } => BudgetExceededError::new_err(e.to_string()),
        SolveError::NoKktPoint => PyRuntimeError::new_err(e.to_string()),
    }
}

fn arith_error(e: ArithError) -> PyErr {
    match e {
        ArithError::DivisionByZero => PyZeroDivisionError::new_err(e.to_string()),
        other => value_error(other),
    }
}

fn rational(obj: &Bound<'_, PyAny>) -> PyResult<Rational> {
    parse_rational(obj.str()?.to_str()?.trim()).map_err(value_error)
}

fn rationals(items: &[Bound<'_, PyAny>]) -> PyResult<Vec<Rational>> {
    items.iter().map(rational).collect()
}

fn matrix(rows: &[Vec<Bound<'_, PyAny>>]) -> PyResult<Matrix> {
    rows.iter().map(|r| rationals(r)).collect()
}

fn strings(values: &[Rational]) -> Vec<String> {
    values.iter().map(format_rational).collect()
}

/// `a + b·√d` with rational `a`, `b` and `d ≥ 0`.
#[pyclass(name = "QuadraticNumber", module = "bssbp", frozen, from_py_object)]
#[derive(Clone)]
struct PyQuadratic(QuadraticNumber);

#[pymethods]
impl PyQuadratic {
    #[new]
    #[pyo3(signature = (a, b = None, d = None))]
    fn new(a: &Bound<'_, PyAny>, b: Option<&Bound<'_, PyAny>>, d: Option<&Bound<'_, PyAny>>) -> PyResult<Self> {
        let a = rational(a)?;
        let b = b.map(rational).transpose()?.unwrap_or_default();
        let d = d.map(rational).transpose()?.unwrap_or_default();
        QuadraticNumber::new(a, b, d).map(Self).map_err(arith_error)
    }

    #[staticmethod]
    fn sqrt(r: &Bound<'_, PyAny>) -> PyResult<Self> {
        QuadraticNumber::sqrt(&rational(r)?).map(Self).map_err(arith_error)
    }

    #[getter]
    fn a(&self) -> String {
        format_rational(self.0.a())
    }

    #[getter]
    fn b(&self) -> String {
        format_rational(self.0.b())
    }

    #[getter]
    fn d(&self) -> String {
        format_rational(self.0.d())
    }

    fn is_rational(&self) -> bool {
        self.0.is_rational()
    }

    fn sign(&self) -> i8 {
        self.0.sign()
    }

    fn to_decimal(&self, digits: usize) -> String {
        self.0.to_decimal(digits)
    }

    fn __float__(&self) -> f64 {
        self.0.to_f64()
    }

    fn __add__(&self, other: &Self) -> PyResult<Self> {
        self.0.try_add(&other.0).map(Self).map_err(arith_error)
    }

    fn __sub__(&self, other: &Self) -> PyResult<Self> {
        self.0.try_sub(&other.0).map(Self).map_err(arith_error)
    }

    fn __mul__(&self, other: &Self) -> PyResult<Self> {
        self.0.try_mul(&other.0).map(Self).map_err(arith_error)
    }

    fn __truediv__(&self, other: &Self) -> PyResult<Self> {
        self.0.try_div(&other.0).map(Self).map_err(arith_error)
    }

    fn __neg__(&self) -> Self {
        Self(-&self.0)
    }

    fn __abs__(&self) -> Self {
        Self(self.0.abs())
    }

    fn __richcmp__(&self, other: &Self, op: CompareOp) -> bool {
        op.matches(self.0.cmp_exact(&other.0))
    }

    fn __hash__(&self) -> u64 {
        use std::hash::{DefaultHasher, Hash, Hasher};
        // equal values share a representation except for unreduced radicands
        let mut h = DefaultHasher::new();
        self.0.to_decimal(30).hash(&mut h);
        h.finish()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("QuadraticNumber({})", self.0)
    }
}

/// `min ‖x‖₁ s.t. ‖Ax − y‖₂ ≤ ε` with exact rational data.
#[pyclass(name = "RealInstance", module = "bssbp", frozen, from_py_object)]
#[derive(Clone)]
struct PyRealInstance(bssbp_core::RealInstance);

#[pymethods]
impl PyRealInstance {
    #[new]
    fn new(a: Vec<Vec<Bound<'_, PyAny>>>, y: Vec<Bound<'_, PyAny>>, epsilon: &Bound<'_, PyAny>) -> PyResult<Self> {
        bssbp_core::RealInstance::new(matrix(&a)?, rationals(&y)?, rational(epsilon)?).map(Self).map_err(value_error)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        io::parse_real_instance(text).map(Self).map_err(value_error)
    }

    fn to_json(&self) -> String {
        io::real_instance_to_json(&self.0)
    }

    #[getter]
    fn shape(&self) -> (usize, usize) {
        (self.0.rows(), self.0.cols())
    }

    #[getter]
    fn epsilon(&self) -> String {
        format_rational(self.0.epsilon())
    }

    fn __repr__(&self) -> String {
        format!("RealInstance(m={}, N={}, epsilon={})", self.0.rows(), self.0.cols(), self.0.epsilon())
    }
}

/// Complex instance given by real and imaginary parts; minimises `‖x‖*`.
#[pyclass(name = "ComplexInstance", module = "bssbp", frozen, from_py_object)]
#[derive(Clone)]
struct PyComplexInstance(bssbp_core::ComplexInstance);

#[pymethods]
impl PyComplexInstance {
    #[new]
    fn new(
        a_re: Vec<Vec<Bound<'_, PyAny>>>,
        a_im: Vec<Vec<Bound<'_, PyAny>>>,
        y_re: Vec<Bound<'_, PyAny>>,
        y_im: Vec<Bound<'_, PyAny>>,
        epsilon: &Bound<'_, PyAny>,
    ) -> PyResult<Self> {
        bssbp_core::ComplexInstance::new(
            matrix(&a_re)?,
            matrix(&a_im)?,
            rationals(&y_re)?,
            rationals(&y_im)?,
            rational(epsilon)?,
        )
        .map(Self)
        .map_err(value_error)
    }

    #[staticmethod]
    fn from_real(inst: &PyRealInstance) -> Self {
        Self(bssbp_core::ComplexInstance::from_real(&inst.0))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        io::parse_complex_instance(text).map(Self).map_err(value_error)
    }

    fn to_json(&self) -> String {
        io::complex_instance_to_json(&self.0)
    }

    #[getter]
    fn shape(&self) -> (usize, usize) {
        (self.0.rows(), self.0.cols())
    }
}

/// Exact minimiser with its KKT multipliers.
#[pyclass(name = "Solution", module = "bssbp", frozen, from_py_object)]
#[derive(Clone)]
struct PySolution(optimizer::Solution);

#[pymethods]
impl PySolution {
    /// Coordinates; complex solutions list all real parts, then all
    /// imaginary parts.
    #[getter]
    fn point(&self) -> Vec<PyQuadratic> {
        self.0.point.iter().cloned().map(PyQuadratic).collect()
    }

    #[getter]
    fn objective_value(&self) -> PyQuadratic {
        PyQuadratic(self.0.objective_value.clone())
    }

    #[getter]
    fn active_set(&self) -> Vec<usize> {
        self.0.active_set.clone()
    }

    fn complex_coordinates(&self) -> Vec<(PyQuadratic, PyQuadratic)> {
        self.0.complex_coordinates().into_iter().map(|(re, im)| (PyQuadratic(re), PyQuadratic(im))).collect()
    }

    fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.0).expect("plain data")
    }

    fn __repr__(&self) -> String {
        format!("Solution(objective_value={})", self.0.objective_value)
    }
}

/// A BSS machine as a validated node graph.
#[pyclass(name = "BssProgram", module = "bssbp", frozen, from_py_object)]
#[derive(Clone)]
struct PyBssProgram(BssProgram);

#[pymethods]
impl PyBssProgram {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        BssProgram::from_json(text).map(Self).map_err(value_error)
    }

    #[staticmethod]
    fn library(name: &str) -> PyResult<Self> {
        bss_machine::library::by_name(name)
            .map(|p| Self(p.program))
            .ok_or_else(|| PyValueError::new_err(format!("no library program {name:?}")))
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }

    fn __len__(&self) -> usize {
        self.0.nodes().len()
    }

    /// Runs on rational input; returns `(output, steps)`.
    #[pyo3(signature = (input, budget = 100_000))]
    fn run(&self, input: Vec<Bound<'_, PyAny>>, budget: u64) -> PyResult<(Vec<String>, u64)> {
        match bss_machine::run(&self.0, &rationals(&input)?, budget).map_err(value_error)? {
            RunOutcome::Halted { output, counters } => Ok((strings(&output), counters.steps)),
            RunOutcome::BudgetExceeded(_) => Err(BudgetExceededError::new_err(format!("step budget {budget} exhausted"))),
        }
    }
}

fn options(budget: Option<u128>) -> SolveOptions {
    let mut o = SolveOptions::default();
    if let Some(b) = budget {
        o.max_candidates = b;
    }
    o
}

#[pyfunction]
#[pyo3(signature = (inst, budget = None))]
fn solve(py: Python<'_>, inst: &PyRealInstance, budget: Option<u128>) -> PyResult<PySolution> {
    let inst = inst.0.clone();
    py.detach(|| optimizer::solve_with(&inst, &options(budget))).map(PySolution).map_err(solve_error)
}

#[pyfunction]
#[pyo3(signature = (inst, budget = None))]
fn solve_complex(py: Python<'_>, inst: &PyComplexInstance, budget: Option<u128>) -> PyResult<PySolution> {
    let inst = inst.0.clone();
    py.detach(|| optimizer::solve_complex_with(&inst, &options(budget))).map(PySolution).map_err(solve_error)
}

#[pyfunction]
fn certify(inst: &PyRealInstance, sol: &PySolution) -> bool {
    optimizer::certify(&inst.0, &sol.0)
}

#[pyfunction]
fn certify_complex(inst: &PyComplexInstance, sol: &PySolution) -> bool {
    optimizer::certify_complex(&inst.0, &sol.0)
}

/// `(is_empty, min ‖Ax − y‖²)`.
#[pyfunction]
fn check_feasible(inst: &PyRealInstance) -> (bool, String) {
    let r = optimizer::check_feasible(&inst.0);
    (r.status == FeasibilityStatus::Empty, format_rational(&r.min_residual_sq))
}

/// Branch-and-bound bracket `(lower, upper)` on the optimal value.
#[pyfunction]
#[pyo3(signature = (inst, tol = None, max_cells = 200_000))]
fn oracle_solve(
    py: Python<'_>,
    inst: &PyRealInstance,
    tol: Option<&Bound<'_, PyAny>>,
    max_cells: usize,
) -> PyResult<(String, String)> {
    let tol = match tol {
        Some(t) => rational(t)?,
        None => parse_rational("1/1000000").expect("literal"),
    };
    let inst = inst.0.clone();
    let bracket = py.detach(|| optimizer::oracle_solve(&inst, &tol, max_cells)).map_err(|e| match e {
        OracleError::Infeasible(_) => InfeasibleError::new_err(e.to_string()),
        OracleError::BudgetExceeded(_) => BudgetExceededError::new_err(e.to_string()),
        _ => value_error(e),
    })?;
    Ok((format_rational(&bracket.lower), format_rational(&bracket.upper)))
}

#[pyfunction]
fn compile_relu_network(
    weights: Vec<Vec<Vec<Bound<'_, PyAny>>>>,
    biases: Vec<Vec<Bound<'_, PyAny>>>,
) -> PyResult<PyBssProgram> {
    let w = weights.iter().map(|m| matrix(m)).collect::<PyResult<Vec<_>>>()?;
    let b = biases.iter().map(|v| rationals(v)).collect::<PyResult<Vec<_>>>()?;
    bss_machine::compile_relu_network(&w, &b).map(PyBssProgram).map_err(value_error)
}

#[pyfunction]
fn evaluate_relu_network(
    weights: Vec<Vec<Vec<Bound<'_, PyAny>>>>,
    biases: Vec<Vec<Bound<'_, PyAny>>>,
    input: Vec<Bound<'_, PyAny>>,
) -> PyResult<Vec<String>> {
    let w = weights.iter().map(|m| matrix(m)).collect::<PyResult<Vec<_>>>()?;
    let b = biases.iter().map(|v| rationals(v)).collect::<PyResult<Vec<_>>>()?;
    bss_machine::evaluate_relu_network(&w, &b, &rationals(&input)?).map(|v| strings(&v)).map_err(value_error)
}

/// Builds and checks the discontinuity witness; returns the report as JSON.
#[pyfunction]
#[pyo3(signature = (epsilon = None, n = 20))]
fn demo_gap(epsilon: Option<&Bound<'_, PyAny>>, n: usize) -> PyResult<String> {
    let eps = match epsilon {
        Some(e) => rational(e)?,
        None => parse_rational("1/2").expect("literal"),
    };
    let seq = turing_gap::build_sequences(&eps, n).map_err(value_error)?;
    let report = turing_gap::verify_gap(&seq).map_err(value_error)?;
    Ok(serde_json::to_string_pretty(&report).expect("plain data"))
}

#[pymodule]
fn bssbp(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyQuadratic>()?;
    m.add_class::<PyRealInstance>()?;
    m.add_class::<PyComplexInstance>()?;
    m.add_class::<PySolution>()?;
    m.add_class::<PyBssProgram>()?;
    m.add("InfeasibleError", m.py().get_type::<InfeasibleError>())?;
    m.add("BudgetExceededError", m.py().get_type::<BudgetExceededError>())?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(solve_complex, m)?)?;
    m.add_function(wrap_pyfunction!(certify, m)?)?;
    m.add_function(wrap_pyfunction!(certify_complex, m)?)?;
    m.add_function(wrap_pyfunction!(check_feasible, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_solve, m)?)?;
    m.add_function(wrap_pyfunction!(compile_relu_network, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate_relu_network, m)?)?;
    m.add_function(wrap_pyfunction!(demo_gap, m)?)?;
    Ok(())
}
